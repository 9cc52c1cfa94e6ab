#include "gamelab/cli_driver.hpp"
#include "gamelab/errors.hpp"
#include "gamelab/run_config.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gamelab;
namespace fs = std::filesystem;

namespace {

RunConfig small_price_config() {
    RunConfig config;
    config.command = "price";
    config.market.spot = 100.0;
    config.market.rate = 0.02;
    config.market.kappa = 0.2;
    config.market.horizon = 1.0;
    config.spec.exercise = ExercisePayoff::put(110.0);
    config.spec.penalty = PenaltyTerm::constant(0.0);
    config.n = 16;
    return config;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("gamelab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_cli(std::vector<std::string> args) {
    std::vector<char*> argv;
    args.insert(args.begin(), "gamelab");
    argv.reserve(args.size());
    for (auto& a : args) argv.push_back(a.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("config round trip") {
    RunConfig config = small_price_config();
    config.spec.exercise = ExercisePayoff::from_table({0.0, 80.0, 240.0}, {40.0, 0.0, 12.0});
    config.spec.penalty = PenaltyTerm::affine(0.5, 0.01);
    config.spec.lipschitz_hint = 1.25;
    config.ns = {16, 48};
    config.seed = 987654321;
    config.dt_max = 5e-4;
    config.tau_family = 12;
    CHECK(parse_config(emit_config(config)) == config);
}

TEST_CASE("price command writes a solution and its summary") {
    RunConfig config = small_price_config();
    const auto dir = fresh_dir("price");
    config.out_dir = dir.string();
    REQUIRE(run_command(config) == 0);

    REQUIRE(fs::exists(dir / "solution.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));

    std::ifstream in(dir / "summary.json");
    json summary;
    in >> summary;
    // zero penalty collapses the price to the immediate exercise payoff
    CHECK(summary.at("V0").get<double>() == 10.0);
    CHECK(summary.at("command").get<std::string>() == "price");
}

TEST_CASE("reruns with identical config and seed are byte-identical") {
    SECTION("price") {
        RunConfig config = small_price_config();
        config.spec.penalty = PenaltyTerm::constant(2.0);
        const auto dir1 = fresh_dir("det_price_1");
        const auto dir2 = fresh_dir("det_price_2");
        config.out_dir = dir1.string();
        REQUIRE(run_command(config) == 0);
        config.out_dir = dir2.string();
        REQUIRE(run_command(config) == 0);
        CHECK(slurp(dir1 / "solution.csv") == slurp(dir2 / "solution.csv"));
        CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
    }
    SECTION("embed-diag") {
        RunConfig config = small_price_config();
        config.command = "embed-diag";
        config.n = 8;
        config.paths = 40;
        config.dt_max = 1e-3;
        config.seed = 5;
        const auto dir1 = fresh_dir("det_embed_1");
        const auto dir2 = fresh_dir("det_embed_2");
        config.out_dir = dir1.string();
        REQUIRE(run_command(config) == 0);
        config.out_dir = dir2.string();
        REQUIRE(run_command(config) == 0);
        CHECK(slurp(dir1 / "embed.csv") == slurp(dir2 / "embed.csv"));
        CHECK(slurp(dir1 / "summary.json") == slurp(dir2 / "summary.json"));
    }
}

TEST_CASE("missing strike exits with a config error naming the field") {
    const auto dir = fresh_dir("badcfg");
    const fs::path cfg_path = dir / "config.json";
    {
        std::ofstream out(cfg_path);
        out << R"({
            "command": "price",
            "market": {"z": 100.0, "r": 0.0, "kappa": 0.2, "T": 1.0},
            "spec": {"payoff": {"kind": "put"},
                     "penalty": {"kind": "const", "value": 1.0},
                     "lipschitz_hint": null},
            "n": 8
        })";
    }
    CHECK(run_cli({"--config", cfg_path.string()}) == 2);

    try {
        load_config_file(cfg_path.string());
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("payoff.strike") != std::string::npos);
    }
}

TEST_CASE("exit codes") {
    RunConfig config = small_price_config();

    SECTION("unknown command is a config error") {
        const auto dir = fresh_dir("badcmd");
        config.command = "priceee";
        config.out_dir = dir.string();
        CHECK_THROWS_AS(run_command(config), config_error);
    }
    SECTION("unreadable config file is a config error") {
        CHECK(run_cli({"--config", "/nonexistent/config.json"}) == 2);
    }
    SECTION("empty ns for converge is a runtime domain error") {
        const auto dir = fresh_dir("badns");
        const fs::path cfg_path = dir / "config.json";
        config.command = "converge";
        config.ns = {};
        config.out_dir = dir.string();
        {
            std::ofstream out(cfg_path);
            out << emit_config(config).dump(2);
        }
        CHECK(run_cli({"--config", cfg_path.string()}) == 3);
    }
}

TEST_CASE("embed-diag artifacts carry the exit-time diagnostics") {
    RunConfig config = small_price_config();
    config.command = "embed-diag";
    config.n = 16;
    config.paths = 400;
    config.dt_max = 1e-3;
    config.seed = 11;
    const auto dir = fresh_dir("embed_stats");
    config.out_dir = dir.string();
    REQUIRE(run_command(config) == 0);

    std::ifstream in(dir / "summary.json");
    json summary;
    in >> summary;
    const double mean = summary.at("mean_theta_n").get<double>();
    const double se = summary.at("se_theta_n").get<double>();
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
    CHECK(summary.at("max_step_dev").get<double>() <= config.dt_max);

    // theta strictly increases within each path block (k resets to 0)
    std::ifstream csv(dir / "embed.csv");
    std::string line;
    REQUIRE(std::getline(csv, line));
    REQUIRE(line == "k,theta_k,xi_k,walk_k");
    double prev_theta = -1.0;
    int rows = 0;
    while (std::getline(csv, line) && line.rfind("summary,", 0) != 0) {
        const auto comma = line.find(',');
        const int k = std::stoi(line.substr(0, comma));
        const double theta = std::stod(line.substr(comma + 1));
        if (k == 0) {
            CHECK(theta == 0.0);
        } else {
            CHECK(theta > prev_theta);
        }
        prev_theta = theta;
        ++rows;
    }
    CHECK(rows == 400 * 17);
    CHECK(line.rfind("summary,", 0) == 0);
}

TEST_CASE("market validation names the offending field") {
    MarketParams bad;
    bad.spot = -1.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = MarketParams{};
    bad.kappa = 0.0;
    CHECK_THROWS_AS(bad.validate(), config_error);
    bad = MarketParams{};
    bad.rate = -0.01;
    CHECK_THROWS_AS(bad.validate(), config_error);
}

TEST_CASE("flags override the config file") {
    const auto dir = fresh_dir("override");
    const fs::path cfg_path = dir / "config.json";
    RunConfig config = small_price_config();  // command: price
    config.out_dir = (dir / "ignored").string();
    {
        std::ofstream out(cfg_path);
        out << emit_config(config).dump(2);
    }
    const auto out_dir = dir / "flagged";
    REQUIRE(run_cli({"--config", cfg_path.string(), "--command", "embed-diag", "--n", "4",
                     "--paths", "3", "--dt-max", "0.01", "--seed", "9", "--out",
                     out_dir.string()}) == 0);
    CHECK(fs::exists(out_dir / "embed.csv"));
    CHECK_FALSE(fs::exists(dir / "ignored" / "solution.csv"));
}
