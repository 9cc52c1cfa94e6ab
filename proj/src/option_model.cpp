#include "gamelab/option_model.hpp"
#include "gamelab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gamelab {

void MarketParams::validate() const {
    if (!(spot > 0.0)) throw config_error("market.z: must be > 0");
    if (!(rate >= 0.0)) throw config_error("market.r: must be >= 0");
    if (!(kappa > 0.0)) throw config_error("market.kappa: must be > 0");
    if (!(horizon > 0.0)) throw config_error("market.T: must be > 0");
}

double PiecewiseLinear::operator()(double x) const {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

void PiecewiseLinear::validate(const std::string& field_prefix) const {
    if (xs.size() < 2 || xs.size() != ys.size())
        throw config_error(field_prefix + ": needs matching stock/value arrays of size >= 2");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw config_error(field_prefix + ".stock: knots must be strictly increasing");
    for (double y : ys)
        if (!(y >= 0.0))
            throw config_error(field_prefix + ".value: values must be >= 0");
}

double ExercisePayoff::operator()(double stock) const {
    switch (kind) {
        case PayoffKind::Put: return std::max(strike - stock, 0.0);
        case PayoffKind::Call: return std::max(stock - strike, 0.0);
        case PayoffKind::Table: return table(stock);
    }
    throw std::logic_error("unreachable payoff kind");
}

void ExercisePayoff::validate() const {
    if (kind == PayoffKind::Table) {
        table.validate("payoff.table");
    } else if (!(strike >= 0.0)) {
        throw config_error("payoff.strike: must be >= 0");
    }
}

ExercisePayoff ExercisePayoff::put(double strike) {
    ExercisePayoff p;
    p.kind = PayoffKind::Put;
    p.strike = strike;
    p.validate();
    return p;
}

ExercisePayoff ExercisePayoff::call(double strike) {
    ExercisePayoff p;
    p.kind = PayoffKind::Call;
    p.strike = strike;
    p.validate();
    return p;
}

ExercisePayoff ExercisePayoff::from_table(std::vector<double> xs, std::vector<double> ys) {
    ExercisePayoff p;
    p.kind = PayoffKind::Table;
    p.table = PiecewiseLinear{std::move(xs), std::move(ys)};
    p.validate();
    return p;
}

double PenaltyTerm::operator()(double stock) const {
    switch (kind) {
        case PenaltyKind::Const: return a;
        case PenaltyKind::Affine: return a + b * stock;
        case PenaltyKind::Table: return table(stock);
    }
    throw std::logic_error("unreachable penalty kind");
}

void PenaltyTerm::validate() const {
    if (kind == PenaltyKind::Table) {
        table.validate("penalty.table");
        return;
    }
    if (!(a >= 0.0)) throw config_error("penalty.a: must be >= 0");
    if (kind == PenaltyKind::Affine && !(b >= 0.0))
        throw config_error("penalty.b: must be >= 0");
}

PenaltyTerm PenaltyTerm::constant(double value) {
    PenaltyTerm p;
    p.kind = PenaltyKind::Const;
    p.a = value;
    p.validate();
    return p;
}

PenaltyTerm PenaltyTerm::affine(double a, double b) {
    PenaltyTerm p;
    p.kind = PenaltyKind::Affine;
    p.a = a;
    p.b = b;
    p.validate();
    return p;
}

PenaltyTerm PenaltyTerm::from_table(std::vector<double> xs, std::vector<double> ys) {
    PenaltyTerm p;
    p.kind = PenaltyKind::Table;
    p.table = PiecewiseLinear{std::move(xs), std::move(ys)};
    p.validate();
    return p;
}

void GameOptionSpec::validate() const {
    exercise.validate();
    penalty.validate();
}

double exercise_payoff(const GameOptionSpec& spec, double t, double stock) {
    if (!(t >= 0.0)) throw std::domain_error("exercise_payoff: t must be >= 0");
    if (!(stock >= 0.0)) throw std::domain_error("exercise_payoff: stock must be >= 0");
    return spec.exercise(stock);
}

double cancellation_payoff(const GameOptionSpec& spec, double t, double stock,
                           double horizon) {
    if (!(t >= 0.0) || t > horizon)
        throw std::domain_error("cancellation_payoff: t must lie in [0, horizon]");
    const double f = exercise_payoff(spec, t, stock);
    if (t == horizon) return f;  // no penalty at expiration
    return f + spec.penalty(stock);
}

double discounted_payoff(const GameOptionSpec& spec, const MarketParams& market,
                         const PayoffQuery& q) {
    const double T = market.horizon;
    if (!(q.cancel_time >= 0.0) || q.cancel_time > T)
        throw std::domain_error("discounted_payoff: s must lie in [0, T]");
    if (!(q.exercise_time >= 0.0) || q.exercise_time > T)
        throw std::domain_error("discounted_payoff: t must lie in [0, T]");
    const double s = q.cancel_time;
    const double t = q.exercise_time;
    const double payoff = s < t ? cancellation_payoff(spec, s, q.stock_at_min, T)
                                : exercise_payoff(spec, t, q.stock_at_min);
    return std::exp(-market.rate * std::min(s, t)) * payoff;
}

double discounted_payoff(const GameOptionSpec& spec, const MarketParams& market,
                         double s, double t, double stock_at_min) {
    return discounted_payoff(spec, market, PayoffQuery{s, t, stock_at_min});
}

} // namespace gamelab
