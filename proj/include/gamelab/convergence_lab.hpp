#ifndef GAMELAB_CONVERGENCE_LAB_HPP
#define GAMELAB_CONVERGENCE_LAB_HPP

#include "gamelab/option_model.hpp"

#include <iosfwd>
#include <vector>

namespace gamelab {

struct ErrorRow {
    int n = 0;
    double v_n = 0.0;
    double v_ref = 0.0;
    double abs_error = 0.0;
};

/// Error-versus-n table for the lattice value against a fine-lattice reference,
/// with the sup-style constant and a log-log rate fit.
struct ErrorTable {
    std::vector<ErrorRow> rows;  // sorted by n
    int ref_n = 0;
    double payoff_scale = 0.0;   // F_0(z) + Delta_0(z) + z + 1
    double c_hat = 0.0;          // max_n abs_error * n^{1/4} / payoff_scale
    double rate_hat = 0.0;       // fit excluding the two smallest n
    double rate_hat_all = 0.0;   // unfiltered fit
    bool fit_valid = false;      // false when too few nonzero errors to fit

    double bound_rhs(int n) const;
};

/// Parity-averaged fine-lattice value (ref_n and ref_n + 1), damping the
/// odd/even oscillation of CRR prices. Requires ref_n >= 4096.
double reference_value(const GameOptionSpec& spec, const MarketParams& market, int ref_n);

/// Solves at every n in ns and tabulates |V_n - V_ref|. Requires
/// max(ns) <= ref_n / 8 so the reference error stays subdominant.
ErrorTable error_curve(const GameOptionSpec& spec, const MarketParams& market,
                       std::vector<int> ns, int ref_n);

/// CSV: n,V_n,V_ref,abs_error,bound_rhs.
void write_error_table_csv(std::ostream& os, const ErrorTable& table);

} // namespace gamelab

#endif
