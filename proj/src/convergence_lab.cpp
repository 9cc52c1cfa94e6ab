#include "gamelab/convergence_lab.hpp"
#include "gamelab/dynkin_tree.hpp"
#include "gamelab/errors.hpp"
#include "gamelab/detail/io_util.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gamelab {

namespace {

constexpr int kRefFloor = 4096;

/// Least-squares slope of log(err) on log(n); returns the decay rate (-slope).
bool fit_rate(const std::vector<ErrorRow>& rows, std::size_t skip, double& rate) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = skip; i < rows.size(); ++i) {
        if (!(rows[i].abs_error > 0.0)) continue;
        const double x = std::log(static_cast<double>(rows[i].n));
        const double y = std::log(rows[i].abs_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return false;
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return false;
    rate = -(m * sxy - sx * sy) / denom;
    return true;
}

} // namespace

double ErrorTable::bound_rhs(int n) const {
    return c_hat * payoff_scale * std::pow(static_cast<double>(n), -0.25);
}

double reference_value(const GameOptionSpec& spec, const MarketParams& market, int ref_n) {
    spec.validate();
    market.validate();
    if (ref_n < kRefFloor)
        throw config_error("ref_n: must be >= 4096 for the parity-averaged reference");
    const double a = dynkin_value(build_lattice(market, ref_n), spec);
    const double b = dynkin_value(build_lattice(market, ref_n + 1), spec);
    return 0.5 * (a + b);
}

ErrorTable error_curve(const GameOptionSpec& spec, const MarketParams& market,
                       std::vector<int> ns, int ref_n) {
    if (ns.empty()) throw std::domain_error("error_curve: ns must be non-empty");
    std::sort(ns.begin(), ns.end());
    if (ns.front() < 1) throw config_error("ns: entries must be >= 1");
    if (ns.back() > ref_n / 8)
        throw config_error("ns: max(ns) must be <= ref_n / 8 to keep the reference "
                           "error subdominant");

    ErrorTable table;
    table.ref_n = ref_n;
    table.payoff_scale = exercise_payoff(spec, 0.0, market.spot) +
                         spec.penalty(market.spot) + market.spot + 1.0;

    const double v_ref = reference_value(spec, market, ref_n);
    for (int n : ns) {
        const double v_n = dynkin_value(build_lattice(market, n), spec);
        table.rows.push_back(ErrorRow{n, v_n, v_ref, std::abs(v_n - v_ref)});
    }

    table.c_hat = 0.0;
    for (const auto& row : table.rows)
        table.c_hat = std::max(table.c_hat,
                               row.abs_error * std::pow(static_cast<double>(row.n), 0.25) /
                                   table.payoff_scale);

    const std::size_t skip = table.rows.size() > 2 ? 2 : 0;
    table.fit_valid = fit_rate(table.rows, skip, table.rate_hat);
    if (!fit_rate(table.rows, 0, table.rate_hat_all)) table.rate_hat_all = 0.0;
    if (!table.fit_valid) table.rate_hat = 0.0;
    return table;
}

void write_error_table_csv(std::ostream& os, const ErrorTable& table) {
    os << "n,V_n,V_ref,abs_error,bound_rhs\n";
    for (const auto& row : table.rows) {
        os << row.n << ',' << detail::fmt(row.v_n) << ',' << detail::fmt(row.v_ref) << ','
           << detail::fmt(row.abs_error) << ',' << detail::fmt(table.bound_rhs(row.n)) << '\n';
    }
}

} // namespace gamelab
