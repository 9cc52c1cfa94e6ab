#ifndef GAMELAB_TESTS_ORACLES_HPP
#define GAMELAB_TESTS_ORACLES_HPP

// Test-side reference implementations, kept independent of the library's
// solver internals on purpose.

#include "gamelab/dynkin_tree.hpp"
#include "gamelab/option_model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gamelab::testing {

/// Plain American backward induction on the same lattice: the buyer-only
/// envelope max(F~, continuation), no cancellation side.
inline double american_value(const Lattice& lattice, const GameOptionSpec& spec) {
    const int n = lattice.n;
    const double p = lattice.p_star;
    std::vector<double> layer(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) layer[j] = lattice.f_tilde(spec, n, j);
    for (int k = n - 1; k >= 0; --k)
        for (int j = 0; j <= k; ++j)
            layer[j] = std::max(lattice.f_tilde(spec, k, j),
                                p * layer[j + 1] + (1.0 - p) * layer[j]);
    return layer[0];
}

/// Deliberately wrong solver: keeps the cancellation penalty alive at the
/// horizon by starting the induction from F~ + Delta~ instead of F~.
inline double dynkin_value_penalty_kept_at_horizon(const Lattice& lattice,
                                                   const GameOptionSpec& spec) {
    const int n = lattice.n;
    const double p = lattice.p_star;
    std::vector<double> layer(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        layer[j] = lattice.f_tilde(spec, n, j) +
                   lattice.discount(n) * spec.penalty(lattice.stock(n, j));
    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j <= k; ++j) {
            const double cont = p * layer[j + 1] + (1.0 - p) * layer[j];
            layer[j] = std::min(lattice.g_tilde(spec, k, j),
                                std::max(lattice.f_tilde(spec, k, j), cont));
        }
    }
    return layer[0];
}

/// Literal min-max over every pair of adapted stopping rules: a rule is a
/// stop/continue label per lattice node below the horizon (stopping is forced
/// at step n), realized on a path as its first entrance. Expectations run over
/// all 2^n paths. Exponential in the node count; n <= 4 only.
inline double enumerated_dynkin_value(const Lattice& lattice, const GameOptionSpec& spec) {
    const int n = lattice.n;
    if (n > 4) throw std::domain_error("enumerated_dynkin_value: n must be <= 4");

    int bit_of[4][4];
    int m = 0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j <= k; ++j) bit_of[k][j] = m++;

    const int num_paths = 1 << n;
    std::vector<double> prob(num_paths);
    // node sequence of each path: (k, j_k) for k = 0..n
    std::vector<std::vector<int>> upcount(num_paths, std::vector<int>(n + 1, 0));
    for (int path = 0; path < num_paths; ++path) {
        double pr = 1.0;
        int j = 0;
        for (int k = 0; k < n; ++k) {
            const bool up = (path >> k) & 1;
            pr *= up ? lattice.p_star : 1.0 - lattice.p_star;
            if (up) ++j;
            upcount[path][k + 1] = j;
        }
        prob[path] = pr;
    }

    std::vector<double> f_at(lattice.node_count()), g_at(lattice.node_count());
    for (int k = 0; k <= n; ++k)
        for (int j = 0; j <= k; ++j) {
            f_at[Lattice::node_index(k, j)] = lattice.f_tilde(spec, k, j);
            g_at[Lattice::node_index(k, j)] = lattice.g_tilde(spec, k, j);
        }

    const std::uint32_t num_rules = 1u << m;
    // realized stopping step of every (rule, path) pair
    std::vector<std::uint8_t> realized(static_cast<std::size_t>(num_rules) * num_paths);
    for (std::uint32_t rule = 0; rule < num_rules; ++rule) {
        for (int path = 0; path < num_paths; ++path) {
            int stop = n;
            for (int k = 0; k < n; ++k) {
                if ((rule >> bit_of[k][upcount[path][k]]) & 1u) {
                    stop = k;
                    break;
                }
            }
            realized[static_cast<std::size_t>(rule) * num_paths + path] =
                static_cast<std::uint8_t>(stop);
        }
    }

    double best_seller = 1e300;
    for (std::uint32_t ms = 0; ms < num_rules; ++ms) {
        double worst_buyer = -1e300;
        const std::uint8_t* rs = &realized[static_cast<std::size_t>(ms) * num_paths];
        for (std::uint32_t mt = 0; mt < num_rules; ++mt) {
            const std::uint8_t* rt = &realized[static_cast<std::size_t>(mt) * num_paths];
            double e = 0.0;
            for (int path = 0; path < num_paths; ++path) {
                const int ks = rs[path], kt = rt[path];
                const double q = ks < kt
                    ? g_at[Lattice::node_index(ks, upcount[path][ks])]
                    : f_at[Lattice::node_index(kt, upcount[path][kt])];
                e += prob[path] * q;
            }
            if (e > worst_buyer) worst_buyer = e;
        }
        if (worst_buyer < best_seller) best_seller = worst_buyer;
    }
    return best_seller;
}

/// Discounted hedge value along one binomial path, straight from the deltas.
inline std::vector<double> lattice_hedge_values(const Lattice& lattice,
                                                const DynkinSolution& solution,
                                                const std::vector<int>& xi) {
    const int n = lattice.n;
    std::vector<double> z(static_cast<std::size_t>(n) + 1);
    z[0] = solution.initial_capital;
    int j = 0;
    for (int k = 0; k < n; ++k) {
        const int jn = j + (xi[k] == 1 ? 1 : 0);
        z[k + 1] = z[k] + solution.delta(k, j) * (lattice.discounted_stock(k + 1, jn) -
                                                  lattice.discounted_stock(k, j));
        j = jn;
    }
    return z;
}

/// Every +-1 path of length n, as sign vectors.
inline std::vector<std::vector<int>> all_sign_paths(int n) {
    std::vector<std::vector<int>> out;
    out.reserve(1u << n);
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> xi(n);
        for (int k = 0; k < n; ++k) xi[k] = (mask >> k) & 1 ? 1 : -1;
        out.push_back(std::move(xi));
    }
    return out;
}

inline double path_probability(const Lattice& lattice, const std::vector<int>& xi) {
    double pr = 1.0;
    for (int s : xi) pr *= s == 1 ? lattice.p_star : 1.0 - lattice.p_star;
    return pr;
}

} // namespace gamelab::testing

#endif
