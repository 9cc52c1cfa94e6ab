#ifndef GAMELAB_DYNKIN_TREE_HPP
#define GAMELAB_DYNKIN_TREE_HPP

#include "gamelab/option_model.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace gamelab {

/// Recombining CRR lattice: u = e^{kappa sqrt(dt)}, d = 1/u,
/// p_star = (e^{r dt} - d) / (u - d). Node (k, j) holds S(k,j) = z u^j d^{k-j}.
struct Lattice {
    int n = 1;
    double dt = 0.0;
    double up = 1.0;
    double down = 1.0;
    double p_star = 0.5;
    double spot = 0.0;
    double rate = 0.0;
    double horizon = 0.0;

    /// Node time; the terminal layer is pinned to the horizon exactly so the
    /// zero-penalty rule triggers on t == T without rounding doubt.
    double time(int k) const { return k == n ? horizon : k * dt; }
    double stock(int k, int j) const;
    double discount(int k) const;
    /// Discounted stock e^{-r t_k} S(k, j).
    double discounted_stock(int k, int j) const;
    /// Discounted exercise payoff F~(k, j).
    double f_tilde(const GameOptionSpec& spec, int k, int j) const;
    /// Discounted cancellation payoff G~(k, j); equals F~ on the terminal layer.
    double g_tilde(const GameOptionSpec& spec, int k, int j) const;

    static std::size_t node_index(int k, int j) {
        return static_cast<std::size_t>(k) * (k + 1) / 2 + static_cast<std::size_t>(j);
    }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n + 1) * (n + 2) / 2;
    }
};

/// Backward-induction solution of the discrete Dynkin game, in discounted units.
struct DynkinSolution {
    int n = 0;
    std::vector<double> values;        // V(k, j), triangular layout
    std::vector<std::uint8_t> in_exercise;  // V == F~
    std::vector<std::uint8_t> in_cancel;    // V == G~
    std::vector<double> deltas;        // hedge shares, k in [0, n); empty until hedge_deltas
    double initial_capital = 0.0;      // V(0, 0)

    double value(int k, int j) const { return values[Lattice::node_index(k, j)]; }
    bool exercise_at(int k, int j) const { return in_exercise[Lattice::node_index(k, j)] != 0; }
    bool cancel_at(int k, int j) const { return in_cancel[Lattice::node_index(k, j)] != 0; }
    double delta(int k, int j) const { return deltas[Lattice::node_index(k, j)]; }
    bool has_deltas() const { return !deltas.empty(); }
};

/// Builds the n-step lattice; throws config_error naming the minimal valid n
/// when p_star falls outside (0, 1).
Lattice build_lattice(const MarketParams& market, int n);

/// Full backward induction with per-node regions. Ties in the min/max resolve
/// toward stopping, so region flags are first-entrance sets.
DynkinSolution solve_dynkin(const Lattice& lattice, const GameOptionSpec& spec);

/// Value-only variant with O(n) memory, for fine reference lattices.
double dynkin_value(const Lattice& lattice, const GameOptionSpec& spec);

/// Independent check of solve_dynkin: evaluates the game on the full
/// non-recombining binary tree, solving the 2x2 stop/continue matrix game
/// at every history (and asserting its minimax equals its maximin) instead
/// of assuming node-measurability or the recombining recursion. O(2^n);
/// refuses n > 12.
double brute_force_value(const Lattice& lattice, const GameOptionSpec& spec);

/// Populates solution.deltas with the martingale hedge ratios
/// (V(k+1,j+1) - V(k+1,j)) / (S~(k+1,j+1) - S~(k+1,j)).
void hedge_deltas(DynkinSolution& solution, const Lattice& lattice);

/// First entrance of the path into the cancellation region, else n. The n-entry
/// is an exercise-value hit (terminal payoffs coincide), never a penalty event.
/// xi holds the +-1 step signs.
int rational_cancellation(const DynkinSolution& solution, std::span<const int> xi);

/// First entrance into the exercise region, else n.
int rational_exercise(const DynkinSolution& solution, std::span<const int> xi);

/// CSV export: step,up_count,stock,V,F_tilde,G_tilde,delta,in_exercise,in_cancel.
void write_solution_csv(std::ostream& os, const Lattice& lattice,
                        const GameOptionSpec& spec, const DynkinSolution& solution);

} // namespace gamelab

#endif
