#ifndef GAMELAB_OPTION_MODEL_HPP
#define GAMELAB_OPTION_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

namespace gamelab {

/// Black-Scholes market parameters: spot z, risk-free rate r, volatility kappa,
/// horizon T. Validated on construction via validate().
struct MarketParams {
    double spot = 100.0;   // z > 0
    double rate = 0.0;     // r >= 0
    double kappa = 0.2;    // volatility > 0
    double horizon = 1.0;  // T > 0

    void validate() const;
    bool operator==(const MarketParams&) const = default;
};

/// Piecewise-linear function of the stock value. Knots strictly increasing;
/// evaluation clamps to the end values outside [xs.front(), xs.back()].
struct PiecewiseLinear {
    std::vector<double> xs;
    std::vector<double> ys;

    double operator()(double x) const;
    void validate(const std::string& field_prefix) const;
    bool operator==(const PiecewiseLinear&) const = default;
};

enum class PayoffKind { Put, Call, Table };

/// Exercise payoff F applied to a stock value. The configured family is
/// state-and-time separable; all members here are functions of the stock only.
struct ExercisePayoff {
    PayoffKind kind = PayoffKind::Put;
    double strike = 100.0;      // put/call
    PiecewiseLinear table;      // table

    double operator()(double stock) const;
    void validate() const;
    bool operator==(const ExercisePayoff&) const = default;

    static ExercisePayoff put(double strike);
    static ExercisePayoff call(double strike);
    static ExercisePayoff from_table(std::vector<double> xs, std::vector<double> ys);
};

enum class PenaltyKind { Const, Affine, Table };

/// Cancellation penalty Delta >= 0. Affine form is a + b*stock with a, b >= 0.
struct PenaltyTerm {
    PenaltyKind kind = PenaltyKind::Const;
    double a = 0.0;
    double b = 0.0;
    PiecewiseLinear table;

    double operator()(double stock) const;
    void validate() const;
    bool operator==(const PenaltyTerm&) const = default;

    static PenaltyTerm constant(double value);
    static PenaltyTerm affine(double a, double b);
    static PenaltyTerm from_table(std::vector<double> xs, std::vector<double> ys);
};

/// A game option: the buyer may exercise for F, the seller may cancel for
/// G = F + Delta before the horizon; at the horizon the penalty lapses and
/// only F is paid. The optional Lipschitz constant is a recorded hint, never
/// verified.
struct GameOptionSpec {
    ExercisePayoff exercise;
    PenaltyTerm penalty;
    std::optional<double> lipschitz_hint;

    void validate() const;
    bool operator==(const GameOptionSpec&) const = default;
};

/// Arguments of the discounted payoff Q(s, t): the seller's cancel time s,
/// the buyer's exercise time t, and the stock value at s ^ t.
struct PayoffQuery {
    double cancel_time = 0.0;
    double exercise_time = 0.0;
    double stock_at_min = 0.0;
};

/// F_t(stock). Requires t >= 0 and stock >= 0.
double exercise_payoff(const GameOptionSpec& spec, double t, double stock);

/// Cancellation payoff: F_t + Delta_t for t < horizon, exactly F_t at t == horizon.
double cancellation_payoff(const GameOptionSpec& spec, double t, double stock,
                           double horizon);

/// Q(s, t) = e^{-r (s^t)} * (G_s if s < t, else F_t), with the horizon rule
/// applied on the cancellation branch.
double discounted_payoff(const GameOptionSpec& spec, const MarketParams& market,
                         const PayoffQuery& q);
double discounted_payoff(const GameOptionSpec& spec, const MarketParams& market,
                         double s, double t, double stock_at_min);

} // namespace gamelab

#endif
