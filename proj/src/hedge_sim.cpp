#include "gamelab/hedge_sim.hpp"
#include "gamelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gamelab {

namespace {

constexpr int kMaxCapDoublings = 8;

/// Grid index whose time is pinned to T (the path grids are built with
/// dt = T / round(T / dt), so this lands on the horizon).
std::size_t horizon_index(const BrownianPath& path, double T) {
    const auto m = static_cast<std::size_t>(std::llround(T / path.dt));
    if (m >= path.size())
        throw config_error("path grid does not cover the horizon");
    if (std::abs(static_cast<double>(m) * path.dt - T) > 1e-9 * T)
        throw config_error("path grid spacing must divide the horizon");
    return m;
}

double discounted_stock_level(const MarketParams& market, double walk, double theta) {
    return market.spot * std::exp(market.kappa * walk - 0.5 * market.kappa * market.kappa * theta);
}

double stock_level(const MarketParams& market, double walk, double theta) {
    return market.spot * std::exp(market.kappa * walk +
                                  (market.rate - 0.5 * market.kappa * market.kappa) * theta);
}

double sample_se(double sum, double sumsq, int count) {
    if (count < 2) return 0.0;
    const double mean = sum / count;
    const double var = std::max(0.0, (sumsq - count * mean * mean) / (count - 1));
    return std::sqrt(var / count);
}

} // namespace

double stock_at(const MarketParams& market, const BrownianPath& path, double t) {
    if (t < 0.0 || t > path.horizon_cap)
        throw std::domain_error("stock_at: t outside [0, horizon_cap]");
    return stock_level(market, path.value_at(t), t);
}

SampledEmbedding sample_embedded_path(std::uint64_t root_seed, std::uint64_t path_index,
                                      int n, double T, double dt_max) {
    const auto m_t = static_cast<std::size_t>(std::ceil(T / dt_max - 1e-12));
    const double dt = T / static_cast<double>(m_t);
    const std::uint64_t seed = substream_seed(root_seed, Stream::PathIncrements, path_index);

    double cap = 2.0 * T;
    for (int attempt = 0; attempt < kMaxCapDoublings; ++attempt, cap *= 2.0) {
        BrownianPath path = sample_brownian_path(seed, dt, cap);
        try {
            EmbeddedPath emb = embed_walk(path, n, T);
            return SampledEmbedding{std::move(path), std::move(emb)};
        } catch (const path_exhausted&) {
            // extend the cap; the prefix of the path is reproduced exactly
        }
    }
    throw path_exhausted("sample_embedded_path: no " + std::to_string(n) +
                         "-exit embedding within " + std::to_string(cap / T) + "x horizon");
}

PortfolioTrajectory run_hedge(const MarketParams& market, const DynkinSolution& solution,
                              const EmbeddedPath& embedded, const BrownianPath& path) {
    if (!solution.has_deltas())
        throw config_error("run_hedge: solution deltas not populated; call hedge_deltas first");
    if (solution.n != embedded.n())
        throw config_error("run_hedge: solution n=" + std::to_string(solution.n) +
                           " does not match embedding n=" + std::to_string(embedded.n()));
    const double T = market.horizon;
    const int n = solution.n;

    PortfolioTrajectory traj;
    traj.initial_capital = solution.initial_capital;

    traj.seg_times.push_back(0.0);
    traj.seg_value.push_back(solution.initial_capital);
    traj.seg_delta.push_back(solution.delta(0, 0));
    traj.seg_dstock.push_back(market.spot);

    int jk = 0;
    for (int k = 1; k <= n; ++k) {
        const double th = embedded.thetas[k];
        if (!(th < T)) break;
        if (embedded.xi[k - 1] == 1) ++jk;
        const double ds = discounted_stock_level(market, embedded.walk[k], th);
        const double value =
            traj.seg_value.back() + traj.seg_delta.back() * (ds - traj.seg_dstock.back());
        traj.seg_times.push_back(th);
        traj.seg_value.push_back(value);
        // sell everything at theta_n; otherwise rebalance to the next node's delta
        traj.seg_delta.push_back(k < n ? solution.delta(k, jk) : 0.0);
        traj.seg_dstock.push_back(ds);
    }

    traj.frozen_from = std::min(embedded.thetas[n], T);
    traj.cancel_time =
        discrete_to_continuous(embedded, rational_cancellation(solution, embedded.xi), T);

    const std::size_t m_t = horizon_index(path, T);
    const bool frozen = embedded.thetas[n] < T;
    traj.times.resize(m_t + 1);
    traj.discounted_value.resize(m_t + 1);
    traj.holdings.resize(m_t + 1);

    std::size_t s = 0;
    for (std::size_t i = 0; i <= m_t; ++i) {
        const double t = (i == m_t) ? T : path.time(i);
        traj.times[i] = t;
        while (s + 1 < traj.seg_times.size() && traj.seg_times[s + 1] <= t) ++s;
        if (frozen && t >= traj.frozen_from) {
            traj.discounted_value[i] = traj.seg_value.back();
            traj.holdings[i] = 0.0;
        } else {
            const double ds = discounted_stock_level(market, path.w[i], t);
            traj.discounted_value[i] =
                traj.seg_value[s] + traj.seg_delta[s] * (ds - traj.seg_dstock[s]);
            traj.holdings[i] = traj.seg_delta[s];
        }
    }
    return traj;
}

double portfolio_value_at(const PortfolioTrajectory& traj, const MarketParams& market,
                          const BrownianPath& path, double t) {
    const double T = traj.times.back();
    if (t < 0.0 || t > T)
        throw std::domain_error("portfolio_value_at: t outside [0, T]");
    if (traj.frozen_from < T && t >= traj.frozen_from) return traj.seg_value.back();

    const auto it = std::upper_bound(traj.seg_times.begin(), traj.seg_times.end(), t);
    const auto s = static_cast<std::size_t>(it - traj.seg_times.begin()) - 1;
    if (traj.seg_times[s] == t) return traj.seg_value[s];
    const double ds = discounted_stock_level(market, path.value_at(t), t);
    return traj.seg_value[s] + traj.seg_delta[s] * (ds - traj.seg_dstock[s]);
}

namespace {

/// Discounted binomial payoffs along the embedded walk at times k T / n,
/// with the terminal time pinned to T so the penalty lapses there.
struct WalkPayoffs {
    std::vector<double> f_tilde;
    std::vector<double> g_tilde;
};

WalkPayoffs walk_payoffs(const MarketParams& market, const GameOptionSpec& spec,
                         const EmbeddedPath& embedded) {
    const int n = embedded.n();
    const double T = market.horizon;
    const double dtb = T / n;
    WalkPayoffs wp;
    wp.f_tilde.resize(n + 1);
    wp.g_tilde.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
        const double tb = (k == n) ? T : k * dtb;
        const double sb = market.spot * std::exp(market.kappa * embedded.walk[k]);
        const double disc = std::exp(-market.rate * tb);
        wp.f_tilde[k] = disc * exercise_payoff(spec, tb, sb);
        wp.g_tilde[k] = disc * cancellation_payoff(spec, tb, sb, T);
    }
    return wp;
}

/// Stock at the mapped cancel time sigma: the embedded exit level when sigma
/// is an exit before T, the grid value at the horizon otherwise.
double stock_at_sigma(const MarketParams& market, const EmbeddedPath& embedded,
                      const BrownianPath& path, int phi) {
    const double T = market.horizon;
    if (phi < embedded.n() && embedded.thetas[phi] < T)
        return stock_level(market, embedded.walk[phi], embedded.thetas[phi]);
    return stock_level(market, path.w[horizon_index(path, T)], T);
}

} // namespace

double psi_estimate(const MarketParams& market, const GameOptionSpec& spec,
                    const DynkinSolution& solution, const EmbeddedPath& embedded,
                    const BrownianPath& path) {
    if (solution.n != embedded.n())
        throw config_error("psi_estimate: solution and embedding built for different n");
    const double T = market.horizon;
    const double r = market.rate;
    const int n = solution.n;

    const int phi = rational_cancellation(solution, embedded.xi);
    const double sigma = discrete_to_continuous(embedded, phi, T);
    const WalkPayoffs wp = walk_payoffs(market, spec, embedded);

    const double s_sigma = stock_at_sigma(market, embedded, path, phi);
    const double q_cancel = std::exp(-r * sigma) * cancellation_payoff(spec, sigma, s_sigma, T);

    const std::size_t m_t = horizon_index(path, T);
    double psi = 0.0;
    int nu = 0;
    for (std::size_t i = 0; i <= m_t; ++i) {
        const double t = (i == m_t) ? T : path.time(i);
        while (nu <= n && embedded.thetas[nu] < t) ++nu;
        const int l = std::min(nu, n);

        double q_cont;
        if (sigma < t) {
            q_cont = q_cancel;
        } else {
            const double st = stock_level(market, path.w[i], t);
            q_cont = std::exp(-r * t) * exercise_payoff(spec, t, st);
        }
        const double q_bin = (phi < l) ? wp.g_tilde[phi] : wp.f_tilde[l];
        psi = std::max(psi, std::abs(q_cont - q_bin));
    }
    return psi;
}

double ShortfallReport::grid_family_max() const {
    double best = 0.0;
    for (const auto& rule : family)
        if (rule.name.rfind("grid_", 0) == 0) best = std::max(best, rule.estimate);
    return best;
}

ShortfallReport run_shortfall_study(const MarketParams& market, const GameOptionSpec& spec,
                                    const StudyConfig& config) {
    market.validate();
    spec.validate();
    if (config.n < 1) throw config_error("n: must be >= 1");
    if (config.num_paths < 1) throw config_error("paths: must be >= 1");
    if (config.tau_family_size < 2) throw config_error("tau_family: must be >= 2");
    if (!(config.dt_max > 0.0)) throw config_error("dt_max: must be > 0");

    const double T = market.horizon;
    const double r = market.rate;
    const double z = market.spot;
    const int n = config.n;

    const Lattice lattice = build_lattice(market, n);
    DynkinSolution solution = solve_dynkin(lattice, spec);
    hedge_deltas(solution, lattice);

    const double barrier_down[] = {0.975, 0.95, 0.9, 0.8};   // scanned outward
    const double barrier_up[] = {1.025, 1.05, 1.1, 1.2};

    std::vector<std::string> names;
    const int mg = config.tau_family_size;
    for (int i = 1; i <= mg; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "grid_%02d", i);
        names.emplace_back(buf);
    }
    names.emplace_back("rational");
    for (double b : barrier_down) names.emplace_back("barrier_dn_" + std::to_string(b));
    for (double b : barrier_up) names.emplace_back("barrier_up_" + std::to_string(b));
    const std::size_t n_rules = names.size();

    std::vector<double> rule_sum(n_rules, 0.0), rule_sumsq(n_rules, 0.0);
    double eq24_sum = 0.0, eq24_sumsq = 0.0, eq24_coarse_sum = 0.0;
    double psi_sum = 0.0, psi_sumsq = 0.0;

    std::vector<double> stock, disc, disc_inv;
    std::vector<double> taus(n_rules), stock_at_tau(n_rules);
    std::vector<std::size_t> tau_idx(n_rules);  // grid index, or npos for off-grid taus
    constexpr std::size_t npos = static_cast<std::size_t>(-1);

    for (int p = 0; p < config.num_paths; ++p) {
        const SampledEmbedding se =
            sample_embedded_path(config.seed, static_cast<std::uint64_t>(p), n, T, config.dt_max);
        const BrownianPath& path = se.path;
        const EmbeddedPath& emb = se.embedded;

        const PortfolioTrajectory traj = run_hedge(market, solution, emb, path);
        const std::size_t m_t = horizon_index(path, T);

        stock.resize(m_t + 1);
        disc.resize(m_t + 1);
        disc_inv.resize(m_t + 1);
        const double step_disc = std::exp(-r * path.dt);
        const double step_grow = std::exp(r * path.dt);
        disc[0] = 1.0;
        disc_inv[0] = 1.0;
        for (std::size_t i = 1; i <= m_t; ++i) {
            disc[i] = disc[i - 1] * step_disc;
            disc_inv[i] = disc_inv[i - 1] * step_grow;
        }
        disc[m_t] = std::exp(-r * T);
        disc_inv[m_t] = std::exp(r * T);
        for (std::size_t i = 0; i <= m_t; ++i) {
            const double t = (i == m_t) ? T : path.time(i);
            stock[i] = stock_level(market, path.w[i], t);
        }

        const int phi = rational_cancellation(solution, emb.xi);
        const double sigma = traj.cancel_time;
        const double s_sigma = stock_at_sigma(market, emb, path, phi);
        const double r_cancel = cancellation_payoff(spec, sigma, s_sigma, T);
        const double disc_sigma = std::exp(-r * sigma);
        const double grow_sigma = std::exp(r * sigma);
        const double q_cancel = disc_sigma * r_cancel;
        const double z_tilde_sigma = portfolio_value_at(traj, market, path, sigma);
        const double z_sigma = grow_sigma * z_tilde_sigma;

        const WalkPayoffs wp = walk_payoffs(market, spec, emb);

        // eq24 sup and psi in one grid sweep
        double sup_full = 0.0, sup_coarse = 0.0, psi = 0.0;
        int nu = 0;
        for (std::size_t i = 0; i <= m_t; ++i) {
            const double t = traj.times[i];
            while (nu <= n && emb.thetas[nu] < t) ++nu;
            const int l = std::min(nu, n);

            double payoff_r, payoff_q;
            if (sigma < t) {
                payoff_r = r_cancel;
                payoff_q = q_cancel;
            } else {
                const double f = exercise_payoff(spec, t, stock[i]);
                payoff_r = f;
                payoff_q = disc[i] * f;
            }
            const double z_undisc =
                (t <= sigma) ? disc_inv[i] * traj.discounted_value[i] : z_sigma;
            const double shortfall = std::max(0.0, payoff_r - z_undisc);
            sup_full = std::max(sup_full, shortfall);
            if (i % 2 == 0 || i == m_t) sup_coarse = std::max(sup_coarse, shortfall);

            const double q_bin = (phi < l) ? wp.g_tilde[phi] : wp.f_tilde[l];
            psi = std::max(psi, std::abs(payoff_q - q_bin));
        }
        eq24_sum += sup_full;
        eq24_sumsq += sup_full * sup_full;
        eq24_coarse_sum += sup_coarse;
        psi_sum += psi;
        psi_sumsq += psi * psi;

        // buyer-rule family
        std::size_t ri = 0;
        for (int i = 1; i <= mg; ++i, ++ri) {
            const auto idx = static_cast<std::size_t>(
                std::llround(static_cast<double>(i) * static_cast<double>(m_t) / mg));
            tau_idx[ri] = std::max<std::size_t>(idx, 1);
        }
        {
            const int kstar = rational_exercise(solution, emb.xi);
            const double tau = discrete_to_continuous(emb, kstar, T);
            taus[ri] = tau;
            tau_idx[ri] = npos;
            stock_at_tau[ri] = (kstar < n && emb.thetas[kstar] < T)
                                   ? stock_level(market, emb.walk[kstar], emb.thetas[kstar])
                                   : stock[m_t];
            ++ri;
        }
        {
            // first-hitting barrier rules, resolved in one sweep via running extremes
            std::size_t dn_hit[4], up_hit[4];
            for (int b = 0; b < 4; ++b) dn_hit[b] = up_hit[b] = m_t;
            int dn_next = 0, up_next = 0;
            double run_min = stock[0], run_max = stock[0];
            for (std::size_t i = 0; i <= m_t && (dn_next < 4 || up_next < 4); ++i) {
                if (stock[i] < run_min) run_min = stock[i];
                if (stock[i] > run_max) run_max = stock[i];
                while (dn_next < 4 && run_min <= barrier_down[dn_next] * z)
                    dn_hit[dn_next++] = i;
                while (up_next < 4 && run_max >= barrier_up[up_next] * z)
                    up_hit[up_next++] = i;
            }
            for (int b = 0; b < 4; ++b, ++ri) tau_idx[ri] = dn_hit[b];
            for (int b = 0; b < 4; ++b, ++ri) tau_idx[ri] = up_hit[b];
        }
        for (std::size_t q = 0; q < n_rules; ++q) {
            if (tau_idx[q] != npos) {
                taus[q] = traj.times[tau_idx[q]];
                stock_at_tau[q] = stock[tau_idx[q]];
            }
        }

        for (std::size_t q = 0; q < n_rules; ++q) {
            const double tau = taus[q];
            const double payoff_r =
                (sigma < tau) ? r_cancel : exercise_payoff(spec, tau, stock_at_tau[q]);
            double z_undisc;
            if (tau <= sigma) {
                if (tau_idx[q] != npos)
                    z_undisc = disc_inv[tau_idx[q]] * traj.discounted_value[tau_idx[q]];
                else
                    z_undisc = std::exp(r * tau) * portfolio_value_at(traj, market, path, tau);
            } else {
                z_undisc = z_sigma;
            }
            const double val = std::max(0.0, payoff_r - z_undisc);
            rule_sum[q] += val;
            rule_sumsq[q] += val * val;
        }
    }

    ShortfallReport report;
    report.n = n;
    report.num_paths = config.num_paths;
    report.seed = config.seed;
    report.family.resize(n_rules);
    std::size_t best = 0;
    for (std::size_t q = 0; q < n_rules; ++q) {
        report.family[q].name = names[q];
        report.family[q].estimate = rule_sum[q] / config.num_paths;
        report.family[q].se = sample_se(rule_sum[q], rule_sumsq[q], config.num_paths);
        if (report.family[q].estimate > report.family[best].estimate) best = q;
    }
    report.estimate_eq23 = report.family[best].estimate;
    report.se_eq23 = report.family[best].se;
    report.estimate_eq24 = eq24_sum / config.num_paths;
    report.se_eq24 = sample_se(eq24_sum, eq24_sumsq, config.num_paths);
    report.estimate_eq24_half_grid = eq24_coarse_sum / config.num_paths;
    report.psi_mean = psi_sum / config.num_paths;
    report.psi_se = sample_se(psi_sum, psi_sumsq, config.num_paths);
    return report;
}

ShortfallReport shortfall_eq23(const MarketParams& market, const GameOptionSpec& spec,
                               int n, int num_paths, std::uint64_t seed,
                               int tau_family_size, double dt_max) {
    StudyConfig cfg;
    cfg.n = n;
    cfg.num_paths = num_paths;
    cfg.seed = seed;
    cfg.tau_family_size = tau_family_size;
    cfg.dt_max = dt_max;
    return run_shortfall_study(market, spec, cfg);
}

ShortfallReport shortfall_eq24(const MarketParams& market, const GameOptionSpec& spec,
                               int n, int num_paths, std::uint64_t seed, double dt_max) {
    StudyConfig cfg;
    cfg.n = n;
    cfg.num_paths = num_paths;
    cfg.seed = seed;
    cfg.dt_max = dt_max;
    return run_shortfall_study(market, spec, cfg);
}

} // namespace gamelab
