#ifndef GAMELAB_EMBEDDING_HPP
#define GAMELAB_EMBEDDING_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace gamelab {

/// Named RNG substreams: all randomness flows from one root seed so adding
/// paths never reshuffles existing ones.
enum class Stream : std::uint64_t {
    PathIncrements = 1,
    BridgeCrossings = 2,
    Corpus = 3,
};

/// splitmix64-derived seed for (root, stream, index).
std::uint64_t substream_seed(std::uint64_t root, Stream stream, std::uint64_t index);
std::mt19937_64 make_rng(std::uint64_t root, Stream stream, std::uint64_t index);

/// Brownian path sampled on a uniform grid t_i = i * dt. The same seed with a
/// longer cap reproduces the shorter path as a prefix.
struct BrownianPath {
    double dt = 0.0;
    double horizon_cap = 0.0;
    std::uint64_t seed = 0;  // substream seed the increments were drawn from
    std::vector<double> w;   // w[i] = W(i * dt), w[0] = 0

    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    std::size_t size() const { return w.size(); }
    /// Linear interpolation of W at t; t must lie within the grid.
    double value_at(double t) const;
};

/// Symmetric Skorokhod embedding of a +-sqrt(T/n) walk: theta_k is the k-th
/// exit of W from the interval of half-width sqrt(T/n) around W(theta_{k-1}),
/// xi_k the exit sign.
struct EmbeddedPath {
    std::vector<double> thetas;  // theta_0 = 0 < theta_1 < ... < theta_n
    std::vector<int> xi;         // n signs in {-1, +1}
    std::vector<double> walk;    // W(theta_k), walk[0] = 0

    int n() const { return static_cast<int>(xi.size()); }
};

/// Draws a path with Gaussian increments of variance dt_max per step.
BrownianPath sample_brownian_path(std::uint64_t seed, double dt_max, double horizon_cap);

/// Detects the n exit times. Crossings are found per grid segment: straddling
/// segments get a linear-interpolated crossing time; segments whose endpoints
/// stay inside the corridor are tested with the exact Brownian-bridge crossing
/// probability (seeded from the path's bridge substream) and, on a hit, dated
/// at the segment midpoint. Throws path_exhausted when the cap is too short.
EmbeddedPath embed_walk(const BrownianPath& path, int n, double T);

/// nu_tau = min{k : theta_k >= tau}; returns n + 1 when no exit reaches tau.
int nu_map(const EmbeddedPath& embedded, double tau);

/// (n ^ nu_sigma) 1{sigma < T} + n 1{sigma == T}.
int continuous_to_discrete(const EmbeddedPath& embedded, double sigma, double T);

/// T if zeta == n, else theta_zeta ^ T.
double discrete_to_continuous(const EmbeddedPath& embedded, int zeta, double T);

} // namespace gamelab

#endif
