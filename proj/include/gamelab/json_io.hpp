#ifndef GAMELAB_JSON_IO_HPP
#define GAMELAB_JSON_IO_HPP

#include "gamelab/convergence_lab.hpp"
#include "gamelab/hedge_sim.hpp"
#include "gamelab/option_model.hpp"

#include <json.hpp>

namespace gamelab {

using json = nlohmann::json;

/// { "payoff": {"kind": "put"|"call"|"table", ...},
///   "penalty": {"kind": "const"|"affine"|"table", ...},
///   "lipschitz_hint": number|null }
json spec_to_json(const GameOptionSpec& spec);
GameOptionSpec spec_from_json(const json& j);

/// { "z": ..., "r": ..., "kappa": ..., "T": ... }
json market_to_json(const MarketParams& market);
MarketParams market_from_json(const json& j);

json shortfall_report_to_json(const ShortfallReport& report);

json error_table_summary(const ErrorTable& table);

} // namespace gamelab

#endif
