#include "gamelab/json_io.hpp"
#include "gamelab/errors.hpp"

namespace gamelab {

namespace {

double require_number(const json& j, const std::string& path) {
    if (!j.contains(path.substr(path.rfind('.') + 1)))
        throw config_error(path + ": missing");
    const json& v = j.at(path.substr(path.rfind('.') + 1));
    if (!v.is_number()) throw config_error(path + ": must be a number");
    return v.get<double>();
}

std::vector<double> require_array(const json& j, const std::string& key,
                                  const std::string& path) {
    if (!j.contains(key)) throw config_error(path + ": missing");
    const json& v = j.at(key);
    if (!v.is_array()) throw config_error(path + ": must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw config_error(path + ": must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

json table_to_json(const PiecewiseLinear& t) {
    return json{{"kind", "table"}, {"stock", t.xs}, {"value", t.ys}};
}

} // namespace

json spec_to_json(const GameOptionSpec& spec) {
    json payoff;
    switch (spec.exercise.kind) {
        case PayoffKind::Put:
            payoff = json{{"kind", "put"}, {"strike", spec.exercise.strike}};
            break;
        case PayoffKind::Call:
            payoff = json{{"kind", "call"}, {"strike", spec.exercise.strike}};
            break;
        case PayoffKind::Table:
            payoff = table_to_json(spec.exercise.table);
            break;
    }
    json penalty;
    switch (spec.penalty.kind) {
        case PenaltyKind::Const:
            penalty = json{{"kind", "const"}, {"value", spec.penalty.a}};
            break;
        case PenaltyKind::Affine:
            penalty = json{{"kind", "affine"}, {"a", spec.penalty.a}, {"b", spec.penalty.b}};
            break;
        case PenaltyKind::Table:
            penalty = table_to_json(spec.penalty.table);
            break;
    }
    json j{{"payoff", payoff}, {"penalty", penalty}};
    if (spec.lipschitz_hint)
        j["lipschitz_hint"] = *spec.lipschitz_hint;
    else
        j["lipschitz_hint"] = nullptr;
    return j;
}

GameOptionSpec spec_from_json(const json& j) {
    if (!j.contains("payoff")) throw config_error("payoff: missing");
    if (!j.contains("penalty")) throw config_error("penalty: missing");
    const json& pj = j.at("payoff");
    const json& qj = j.at("penalty");
    if (!pj.contains("kind")) throw config_error("payoff.kind: missing");
    if (!qj.contains("kind")) throw config_error("penalty.kind: missing");

    GameOptionSpec spec;
    const std::string pkind = pj.at("kind").get<std::string>();
    if (pkind == "put") {
        spec.exercise = ExercisePayoff::put(require_number(pj, "payoff.strike"));
    } else if (pkind == "call") {
        spec.exercise = ExercisePayoff::call(require_number(pj, "payoff.strike"));
    } else if (pkind == "table") {
        spec.exercise = ExercisePayoff::from_table(
            require_array(pj, "stock", "payoff.stock"),
            require_array(pj, "value", "payoff.value"));
    } else {
        throw config_error("payoff.kind: must be put, call or table");
    }

    const std::string qkind = qj.at("kind").get<std::string>();
    if (qkind == "const") {
        spec.penalty = PenaltyTerm::constant(require_number(qj, "penalty.value"));
    } else if (qkind == "affine") {
        spec.penalty = PenaltyTerm::affine(require_number(qj, "penalty.a"),
                                           require_number(qj, "penalty.b"));
    } else if (qkind == "table") {
        spec.penalty = PenaltyTerm::from_table(
            require_array(qj, "stock", "penalty.stock"),
            require_array(qj, "value", "penalty.value"));
    } else {
        throw config_error("penalty.kind: must be const, affine or table");
    }

    if (j.contains("lipschitz_hint") && !j.at("lipschitz_hint").is_null()) {
        if (!j.at("lipschitz_hint").is_number())
            throw config_error("lipschitz_hint: must be a number or null");
        spec.lipschitz_hint = j.at("lipschitz_hint").get<double>();
    }
    spec.validate();
    return spec;
}

json market_to_json(const MarketParams& market) {
    return json{{"z", market.spot}, {"r", market.rate}, {"kappa", market.kappa},
                {"T", market.horizon}};
}

MarketParams market_from_json(const json& j) {
    MarketParams m;
    m.spot = require_number(j, "market.z");
    m.rate = require_number(j, "market.r");
    m.kappa = require_number(j, "market.kappa");
    m.horizon = require_number(j, "market.T");
    m.validate();
    return m;
}

json shortfall_report_to_json(const ShortfallReport& report) {
    json family = json::array();
    for (const auto& rule : report.family)
        family.push_back(json{{"rule", rule.name}, {"estimate", rule.estimate}, {"se", rule.se}});
    return json{
        {"n", report.n},
        {"paths", report.num_paths},
        {"eq23", json{{"estimate", report.estimate_eq23},
                      {"se", report.se_eq23},
                      {"grid_family_max", report.grid_family_max()},
                      {"family", family}}},
        {"eq24", json{{"estimate", report.estimate_eq24},
                      {"se", report.se_eq24},
                      {"estimate_half_grid", report.estimate_eq24_half_grid}}},
        {"psi", json{{"mean", report.psi_mean}, {"se", report.psi_se}}},
        {"seed", report.seed},
    };
}

json error_table_summary(const ErrorTable& table) {
    return json{{"C_hat", table.c_hat},
                {"rate_hat", table.rate_hat},
                {"rate_hat_all", table.rate_hat_all},
                {"fit_valid", table.fit_valid},
                {"payoff_scale", table.payoff_scale},
                {"ref_n", table.ref_n}};
}

} // namespace gamelab
