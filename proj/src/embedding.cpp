#include "gamelab/embedding.hpp"
#include "gamelab/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gamelab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t substream_seed(std::uint64_t root, Stream stream, std::uint64_t index) {
    std::uint64_t s = splitmix64(root);
    s = splitmix64(s ^ static_cast<std::uint64_t>(stream));
    s = splitmix64(s ^ index);
    return s;
}

std::mt19937_64 make_rng(std::uint64_t root, Stream stream, std::uint64_t index) {
    return std::mt19937_64(substream_seed(root, stream, index));
}

double BrownianPath::value_at(double t) const {
    if (t < 0.0 || t > horizon_cap)
        throw std::domain_error("BrownianPath::value_at: t outside [0, horizon_cap]");
    const double pos = t / dt;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= w.size()) return w.back();
    const double frac = pos - static_cast<double>(i);
    return w[i] + frac * (w[i + 1] - w[i]);
}

BrownianPath sample_brownian_path(std::uint64_t seed, double dt_max, double horizon_cap) {
    if (!(dt_max > 0.0)) throw std::domain_error("sample_brownian_path: dt_max must be > 0");
    if (!(horizon_cap > 0.0)) throw std::domain_error("sample_brownian_path: cap must be > 0");

    BrownianPath path;
    path.dt = dt_max;
    path.horizon_cap = horizon_cap;
    path.seed = seed;

    const auto steps = static_cast<std::size_t>(std::ceil(horizon_cap / dt_max - 1e-12));
    path.w.resize(steps + 1);
    path.w[0] = 0.0;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, std::sqrt(dt_max));
    for (std::size_t i = 1; i <= steps; ++i) path.w[i] = path.w[i - 1] + gauss(rng);
    return path;
}

EmbeddedPath embed_walk(const BrownianPath& path, int n, double T) {
    if (n < 1) throw std::domain_error("embed_walk: n must be >= 1");
    if (!(T > 0.0)) throw std::domain_error("embed_walk: T must be > 0");

    const double a = std::sqrt(T / n);
    EmbeddedPath emb;
    emb.thetas.reserve(n + 1);
    emb.walk.reserve(n + 1);
    emb.xi.reserve(n);
    emb.thetas.push_back(0.0);
    emb.walk.push_back(0.0);

    // Bridge-crossing decisions come from their own substream so the number of
    // Gaussian increments consumed stays independent of them.
    std::mt19937_64 bridge_rng(substream_seed(path.seed, Stream::BridgeCrossings, 0));
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    double center = 0.0;   // W at the last exit
    double t_pos = 0.0;    // time of the last exit
    std::size_t i = 1;     // next grid index to inspect

    while (emb.xi.size() < static_cast<std::size_t>(n)) {
        if (i >= path.size())
            throw path_exhausted("embed_walk: only " + std::to_string(emb.xi.size()) +
                                 " of " + std::to_string(n) +
                                 " exits before the horizon cap; retry with a longer cap");

        const double t_r = path.time(i);
        const double w_r = path.w[i];
        const bool partial = t_pos > path.time(i - 1);
        const double t_l = partial ? t_pos : path.time(i - 1);
        const double w_l = partial ? center : path.w[i - 1];
        const double h = t_r - t_l;
        const double up = center + a;
        const double dn = center - a;

        if (w_r >= up || w_r <= dn) {
            // Straddling segment: linear-interpolated crossing time.
            const double level = w_r >= up ? up : dn;
            const double tc = t_l + (level - w_l) / (w_r - w_l) * h;
            emb.thetas.push_back(tc);
            emb.walk.push_back(level);
            emb.xi.push_back(w_r >= up ? 1 : -1);
            center = level;
            t_pos = tc;
            continue;  // re-inspect the remainder of this segment
        }

        // Both endpoints inside the corridor: exact bridge crossing probability
        // exp(-2 d_l d_r / h) per side. Skip the draw when it is below ~5e-12.
        const double du = (up - w_l) * (up - w_r);
        const double dd = (w_l - dn) * (w_r - dn);
        const double pu = du < 13.0 * h ? std::exp(-2.0 * du / h) : 0.0;
        const double pd = dd < 13.0 * h ? std::exp(-2.0 * dd / h) : 0.0;
        if (pu > 0.0 || pd > 0.0) {
            const double u01 = unif(bridge_rng);
            if (u01 < pu || u01 < pu + pd) {
                const double tc = t_l + 0.5 * h;
                const bool went_up = u01 < pu;
                emb.thetas.push_back(tc);
                emb.walk.push_back(went_up ? up : dn);
                emb.xi.push_back(went_up ? 1 : -1);
                center = went_up ? up : dn;
                t_pos = tc;
                continue;
            }
        }
        ++i;
    }
    return emb;
}

int nu_map(const EmbeddedPath& embedded, double tau) {
    if (!(tau >= 0.0)) throw std::domain_error("nu_map: tau must be >= 0");
    const int n = embedded.n();
    for (int k = 0; k <= n; ++k)
        if (embedded.thetas[k] >= tau) return k;
    return n + 1;
}

int continuous_to_discrete(const EmbeddedPath& embedded, double sigma, double T) {
    if (!(sigma >= 0.0) || sigma > T)
        throw std::domain_error("continuous_to_discrete: sigma must lie in [0, T]");
    const int n = embedded.n();
    if (sigma == T) return n;
    return std::min(n, nu_map(embedded, sigma));
}

double discrete_to_continuous(const EmbeddedPath& embedded, int zeta, double T) {
    const int n = embedded.n();
    if (zeta < 0 || zeta > n)
        throw std::domain_error("discrete_to_continuous: zeta must lie in [0, n]");
    if (zeta == n) return T;
    return std::min(embedded.thetas[zeta], T);
}

} // namespace gamelab
