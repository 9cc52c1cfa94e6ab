#ifndef GAMELAB_RUN_CONFIG_HPP
#define GAMELAB_RUN_CONFIG_HPP

#include "gamelab/json_io.hpp"
#include "gamelab/option_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gamelab {

/// A run is fully determined by (config, seed): identical inputs produce
/// byte-identical artifacts.
struct RunConfig {
    std::string command;  // price | converge | hedge | embed-diag
    MarketParams market;
    GameOptionSpec spec;
    int n = 256;
    std::vector<int> ns = {16, 32, 64, 128, 256, 512, 1024};
    int ref_n = 8192;
    int paths = 10000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    double dt_max = 1e-4;
    int tau_family = 16;

    bool operator==(const RunConfig&) const = default;
};

json emit_config(const RunConfig& config);
RunConfig parse_config(const json& j);
RunConfig load_config_file(const std::string& path);

} // namespace gamelab

#endif
