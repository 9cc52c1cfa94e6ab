#ifndef GAMELAB_HEDGE_SIM_HPP
#define GAMELAB_HEDGE_SIM_HPP

#include "gamelab/dynkin_tree.hpp"
#include "gamelab/embedding.hpp"
#include "gamelab/option_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gamelab {

/// Geometric Brownian motion under the risk-neutral measure:
/// S_t = z exp(kappa W_t + (r - kappa^2/2) t), W interpolated on the grid.
double stock_at(const MarketParams& market, const BrownianPath& path, double t);

/// Discounted trajectory of the binomial hedge carried into the Black-Scholes
/// market along an embedded path. The portfolio holds delta(k, j_k) shares on
/// [theta_k, theta_{k+1}), trades at the embedded exit prices, liquidates into
/// bonds at theta_n ^ T, and keeps its discounted value constant afterward.
struct PortfolioTrajectory {
    std::vector<double> times;             // grid times in [0, T], last one exactly T
    std::vector<double> discounted_value;  // Z~ at those times
    std::vector<double> holdings;          // shares held on [times[i], times[i+1])
    double cancel_time = 0.0;              // sigma, the seller's mapped cancel time
    double frozen_from = 0.0;              // theta_n ^ T
    double initial_capital = 0.0;          // Z~(0) = V(0, 0)

    // Rebalance breakpoints, for exact off-grid evaluation.
    std::vector<double> seg_times;   // theta_k < T (k = 0..n), in order
    std::vector<double> seg_value;   // Z~ at each breakpoint
    std::vector<double> seg_delta;   // shares held after the breakpoint
    std::vector<double> seg_dstock;  // discounted stock at the breakpoint (exit level)
};

PortfolioTrajectory run_hedge(const MarketParams& market, const DynkinSolution& solution,
                              const EmbeddedPath& embedded, const BrownianPath& path);

/// Z~ at an arbitrary t in [0, T]; exact at rebalance times and after the freeze.
double portfolio_value_at(const PortfolioTrajectory& traj, const MarketParams& market,
                          const BrownianPath& path, double t);

/// Per-path sup-norm gap between the continuous discounted payoff at
/// (sigma, t) and the binomial discounted payoff at (phi, n ^ nu_t), the
/// quantity driving both shortfall bounds.
double psi_estimate(const MarketParams& market, const GameOptionSpec& spec,
                    const DynkinSolution& solution, const EmbeddedPath& embedded,
                    const BrownianPath& path);

struct RuleEstimate {
    std::string name;
    double estimate = 0.0;
    double se = 0.0;
};

struct ShortfallReport {
    int n = 0;
    int num_paths = 0;
    std::uint64_t seed = 0;
    double estimate_eq23 = 0.0;  // family max of the buyer-rule shortfalls
    double se_eq23 = 0.0;
    double estimate_eq24 = 0.0;  // mean of the per-path sup shortfall
    double se_eq24 = 0.0;
    double estimate_eq24_half_grid = 0.0;  // same sup on every other grid point
    double psi_mean = 0.0;
    double psi_se = 0.0;
    std::vector<RuleEstimate> family;

    /// Max over the deterministic-grid rules only (their times lie on the
    /// simulation grid, so the per-path sup dominates them pointwise).
    double grid_family_max() const;
};

struct StudyConfig {
    int n = 64;
    int num_paths = 10000;
    std::uint64_t seed = 1;
    int tau_family_size = 16;  // deterministic grid times; rational + 8 barrier rules are always added
    double dt_max = 1e-4;
};

/// One pass over num_paths seeded paths computing the eq23 family, the eq24
/// per-path sup, and the psi diagnostic on shared trajectories.
ShortfallReport run_shortfall_study(const MarketParams& market, const GameOptionSpec& spec,
                                    const StudyConfig& config);

ShortfallReport shortfall_eq23(const MarketParams& market, const GameOptionSpec& spec,
                               int n, int num_paths, std::uint64_t seed,
                               int tau_family_size, double dt_max = 1e-4);

ShortfallReport shortfall_eq24(const MarketParams& market, const GameOptionSpec& spec,
                               int n, int num_paths, std::uint64_t seed,
                               double dt_max = 1e-4);

/// Embeds a walk against a freshly sampled path for the given path index,
/// doubling the horizon cap (same substream, so the prefix is unchanged)
/// until n exits fit. Shared by the study, the diagnostics command and tests.
struct SampledEmbedding {
    BrownianPath path;
    EmbeddedPath embedded;
};
SampledEmbedding sample_embedded_path(std::uint64_t root_seed, std::uint64_t path_index,
                                      int n, double T, double dt_max);

} // namespace gamelab

#endif
