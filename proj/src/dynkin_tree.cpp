#include "gamelab/dynkin_tree.hpp"
#include "gamelab/errors.hpp"
#include "gamelab/detail/io_util.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gamelab {

double Lattice::stock(int k, int j) const {
    // z u^j d^{k-j} with u = e^x, d = e^-x
    const double x = std::log(up);
    return spot * std::exp((2.0 * j - k) * x);
}

double Lattice::discount(int k) const {
    return std::exp(-rate * time(k));
}

double Lattice::discounted_stock(int k, int j) const {
    return discount(k) * stock(k, j);
}

double Lattice::f_tilde(const GameOptionSpec& spec, int k, int j) const {
    return discount(k) * exercise_payoff(spec, time(k), stock(k, j));
}

double Lattice::g_tilde(const GameOptionSpec& spec, int k, int j) const {
    return discount(k) * cancellation_payoff(spec, time(k), stock(k, j), horizon);
}

Lattice build_lattice(const MarketParams& market, int n) {
    market.validate();
    if (n < 1) throw config_error("n: must be >= 1");

    const auto p_of = [&](int steps) {
        const double dt = market.horizon / steps;
        const double u = std::exp(market.kappa * std::sqrt(dt));
        const double d = 1.0 / u;
        return (std::exp(market.rate * dt) - d) / (u - d);
    };

    const double p = p_of(n);
    if (!(p > 0.0 && p < 1.0)) {
        // p < 1 requires sqrt(dt) < kappa / r; find the smallest workable n.
        int min_n = static_cast<int>(std::floor(
            market.horizon * market.rate * market.rate / (market.kappa * market.kappa)));
        min_n = std::max(min_n, 1);
        while (!(p_of(min_n) > 0.0 && p_of(min_n) < 1.0)) ++min_n;
        throw config_error("n: risk-neutral probability outside (0,1) at n=" +
                           std::to_string(n) + "; smallest valid n is " +
                           std::to_string(min_n));
    }

    Lattice lat;
    lat.n = n;
    lat.dt = market.horizon / n;
    lat.up = std::exp(market.kappa * std::sqrt(lat.dt));
    lat.down = 1.0 / lat.up;
    lat.p_star = p;
    lat.spot = market.spot;
    lat.rate = market.rate;
    lat.horizon = market.horizon;
    return lat;
}

DynkinSolution solve_dynkin(const Lattice& lattice, const GameOptionSpec& spec) {
    spec.validate();
    const int n = lattice.n;
    const double p = lattice.p_star;

    DynkinSolution sol;
    sol.n = n;
    sol.values.resize(lattice.node_count());
    sol.in_exercise.resize(lattice.node_count());
    sol.in_cancel.resize(lattice.node_count());

    for (int j = 0; j <= n; ++j) {
        const std::size_t idx = Lattice::node_index(n, j);
        const double f = lattice.f_tilde(spec, n, j);
        sol.values[idx] = f;
        sol.in_exercise[idx] = 1;
        sol.in_cancel[idx] = 1;  // G~ == F~ on the terminal layer
    }

    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j <= k; ++j) {
            const double cont = p * sol.value(k + 1, j + 1) + (1.0 - p) * sol.value(k + 1, j);
            const double f = lattice.f_tilde(spec, k, j);
            const double g = lattice.g_tilde(spec, k, j);
            // std::max/min tie toward the first argument: ties stop.
            const double v = std::min(g, std::max(f, cont));
            const std::size_t idx = Lattice::node_index(k, j);
            sol.values[idx] = v;
            sol.in_exercise[idx] = (v == f) ? 1 : 0;
            sol.in_cancel[idx] = (v == g) ? 1 : 0;
        }
    }
    sol.initial_capital = sol.values[0];
    return sol;
}

double dynkin_value(const Lattice& lattice, const GameOptionSpec& spec) {
    spec.validate();
    const int n = lattice.n;
    const double p = lattice.p_star;

    std::vector<double> layer(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) layer[j] = lattice.f_tilde(spec, n, j);

    for (int k = n - 1; k >= 0; --k) {
        for (int j = 0; j <= k; ++j) {
            const double cont = p * layer[j + 1] + (1.0 - p) * layer[j];
            const double f = lattice.f_tilde(spec, k, j);
            const double g = lattice.g_tilde(spec, k, j);
            layer[j] = std::min(g, std::max(f, cont));
        }
    }
    return layer[0];
}

namespace {

double saddle_value(const Lattice& lattice, const GameOptionSpec& spec, int k, int j) {
    if (k == lattice.n) return lattice.f_tilde(spec, lattice.n, j);
    const double vu = saddle_value(lattice, spec, k + 1, j + 1);
    const double vd = saddle_value(lattice, spec, k + 1, j);
    const double cont = lattice.p_star * vu + (1.0 - lattice.p_star) * vd;
    const double f = lattice.f_tilde(spec, k, j);
    const double g = lattice.g_tilde(spec, k, j);
    // 2x2 simultaneous stop/continue game, seller = rows (minimizes):
    //   [ F  G ]
    //   [ F  E ]
    const double minimax = std::min(std::max(f, g), std::max(f, cont));
    const double maximin = std::max(std::min(f, f), std::min(g, cont));
    if (minimax != maximin)
        throw std::logic_error("brute_force_value: matrix game has no pure saddle");
    return minimax;
}

} // namespace

double brute_force_value(const Lattice& lattice, const GameOptionSpec& spec) {
    spec.validate();
    if (lattice.n > 12)
        throw std::domain_error(
            "brute_force_value: refusing n > 12; the full-history evaluation "
            "walks all 2^n paths and is meant as a small-n oracle");
    return saddle_value(lattice, spec, 0, 0);
}

void hedge_deltas(DynkinSolution& solution, const Lattice& lattice) {
    if (solution.values.empty() || solution.n != lattice.n)
        throw config_error("hedge_deltas: solution does not match lattice");
    const int n = lattice.n;
    solution.deltas.assign(Lattice::node_index(n, 0), 0.0);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j <= k; ++j) {
            const double dv = solution.value(k + 1, j + 1) - solution.value(k + 1, j);
            const double ds = lattice.discounted_stock(k + 1, j + 1) -
                              lattice.discounted_stock(k + 1, j);
            solution.deltas[Lattice::node_index(k, j)] = dv / ds;
        }
    }
}

namespace {

int first_entrance(const DynkinSolution& solution, std::span<const int> xi,
                   const std::vector<std::uint8_t>& region) {
    const int n = solution.n;
    if (static_cast<int>(xi.size()) != n)
        throw std::domain_error("rational stopping index: path length must equal n");
    int j = 0;
    for (int k = 0; k < n; ++k) {
        if (region[Lattice::node_index(k, j)] != 0) return k;
        if (xi[k] != 1 && xi[k] != -1)
            throw std::domain_error("rational stopping index: signs must be +-1");
        if (xi[k] == 1) ++j;
    }
    return n;
}

} // namespace

int rational_cancellation(const DynkinSolution& solution, std::span<const int> xi) {
    return first_entrance(solution, xi, solution.in_cancel);
}

int rational_exercise(const DynkinSolution& solution, std::span<const int> xi) {
    return first_entrance(solution, xi, solution.in_exercise);
}

void write_solution_csv(std::ostream& os, const Lattice& lattice,
                        const GameOptionSpec& spec, const DynkinSolution& solution) {
    os << "step,up_count,stock,V,F_tilde,G_tilde,delta,in_exercise,in_cancel\n";
    for (int k = 0; k <= lattice.n; ++k) {
        for (int j = 0; j <= k; ++j) {
            os << k << ',' << j << ',' << detail::fmt(lattice.stock(k, j)) << ','
               << detail::fmt(solution.value(k, j)) << ','
               << detail::fmt(lattice.f_tilde(spec, k, j)) << ','
               << detail::fmt(lattice.g_tilde(spec, k, j)) << ',';
            if (k < lattice.n && solution.has_deltas()) os << detail::fmt(solution.delta(k, j));
            os << ',' << (solution.exercise_at(k, j) ? 1 : 0) << ','
               << (solution.cancel_at(k, j) ? 1 : 0) << '\n';
        }
    }
}

} // namespace gamelab
