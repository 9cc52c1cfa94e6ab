#include "gamelab/run_config.hpp"
#include "gamelab/errors.hpp"

#include <fstream>

namespace gamelab {

json emit_config(const RunConfig& config) {
    return json{
        {"command", config.command},
        {"market", market_to_json(config.market)},
        {"spec", spec_to_json(config.spec)},
        {"n", config.n},
        {"ns", config.ns},
        {"ref_n", config.ref_n},
        {"paths", config.paths},
        {"seed", config.seed},
        {"out", config.out_dir},
        {"dt_max", config.dt_max},
        {"tau_family", config.tau_family},
    };
}

RunConfig parse_config(const json& j) {
    RunConfig config;
    if (j.contains("command")) config.command = j.at("command").get<std::string>();
    if (j.contains("market")) config.market = market_from_json(j.at("market"));
    if (j.contains("spec")) config.spec = spec_from_json(j.at("spec"));
    if (j.contains("n")) config.n = j.at("n").get<int>();
    if (j.contains("ns")) config.ns = j.at("ns").get<std::vector<int>>();
    if (j.contains("ref_n")) config.ref_n = j.at("ref_n").get<int>();
    if (j.contains("paths")) config.paths = j.at("paths").get<int>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
    if (j.contains("dt_max")) config.dt_max = j.at("dt_max").get<double>();
    if (j.contains("tau_family")) config.tau_family = j.at("tau_family").get<int>();
    return config;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error("config: " + std::string(e.what()));
    }
    return parse_config(j);
}

} // namespace gamelab
