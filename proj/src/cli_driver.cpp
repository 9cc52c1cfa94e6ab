#include "gamelab/cli_driver.hpp"
#include "gamelab/convergence_lab.hpp"
#include "gamelab/dynkin_tree.hpp"
#include "gamelab/errors.hpp"
#include "gamelab/hedge_sim.hpp"
#include "gamelab/detail/io_util.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace gamelab {

namespace {

namespace fs = std::filesystem;

std::ofstream open_artifact(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    const fs::path path = fs::path(config.out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

void write_summary(const RunConfig& config, const json& summary) {
    auto out = open_artifact(config, "summary.json");
    out << summary.dump(2) << '\n';
}

int cmd_price(const RunConfig& config) {
    const Lattice lattice = build_lattice(config.market, config.n);
    DynkinSolution solution = solve_dynkin(lattice, config.spec);
    hedge_deltas(solution, lattice);

    {
        auto out = open_artifact(config, "solution.csv");
        write_solution_csv(out, lattice, config.spec, solution);
    }

    std::size_t cancel_nodes = 0, exercise_nodes = 0;
    for (std::size_t i = 0; i < solution.values.size(); ++i) {
        cancel_nodes += solution.in_cancel[i];
        exercise_nodes += solution.in_exercise[i];
    }

    write_summary(config, json{{"command", "price"},
                               {"n", config.n},
                               {"V0", solution.initial_capital},
                               {"cancel_nodes", cancel_nodes},
                               {"exercise_nodes", exercise_nodes},
                               {"seed", config.seed}});
    std::cout << "V0=" << detail::fmt(solution.initial_capital)
              << " cancel_nodes=" << cancel_nodes
              << " exercise_nodes=" << exercise_nodes << '\n';
    return 0;
}

int cmd_converge(const RunConfig& config) {
    const ErrorTable table =
        error_curve(config.spec, config.market, config.ns, config.ref_n);
    {
        auto out = open_artifact(config, "errors.csv");
        write_error_table_csv(out, table);
    }
    json summary = error_table_summary(table);
    summary["command"] = "converge";
    write_summary(config, summary);
    std::cout << "C_hat=" << detail::fmt(table.c_hat)
              << " rate_hat=" << detail::fmt(table.rate_hat)
              << " fit_valid=" << (table.fit_valid ? "true" : "false") << '\n';
    return 0;
}

int cmd_hedge(const RunConfig& config) {
    StudyConfig study;
    study.n = config.n;
    study.num_paths = config.paths;
    study.seed = config.seed;
    study.tau_family_size = config.tau_family;
    study.dt_max = config.dt_max;
    const ShortfallReport report = run_shortfall_study(config.market, config.spec, study);

    {
        auto out = open_artifact(config, "shortfall.json");
        out << shortfall_report_to_json(report).dump(2) << '\n';
    }
    write_summary(config, json{{"command", "hedge"},
                               {"n", report.n},
                               {"paths", report.num_paths},
                               {"seed", report.seed},
                               {"eq23_estimate", report.estimate_eq23},
                               {"eq24_estimate", report.estimate_eq24},
                               {"psi_mean", report.psi_mean}});
    std::cout << "eq23=" << detail::fmt(report.estimate_eq23)
              << " eq24=" << detail::fmt(report.estimate_eq24)
              << " psi=" << detail::fmt(report.psi_mean) << '\n';
    return 0;
}

int cmd_embed_diag(const RunConfig& config) {
    const double T = config.market.horizon;
    const int n = config.n;
    const double step = std::sqrt(T / n);

    auto out = open_artifact(config, "embed.csv");
    out << "k,theta_k,xi_k,walk_k\n";

    double sum_dev = 0.0, max_dev = 0.0, max_step_dev = 0.0;
    double sum_tn = 0.0, sumsq_tn = 0.0;
    std::size_t dev_count = 0;
    for (int p = 0; p < config.paths; ++p) {
        const SampledEmbedding se = sample_embedded_path(
            config.seed, static_cast<std::uint64_t>(p), n, T, config.dt_max);
        const EmbeddedPath& emb = se.embedded;
        for (int k = 0; k <= n; ++k) {  // k restarts at 0 on each new path
            out << k << ',' << detail::fmt(emb.thetas[k]) << ',';
            if (k > 0) out << emb.xi[k - 1];
            out << ',' << detail::fmt(emb.walk[k]) << '\n';
            if (k > 0) {
                const double dev = std::abs(emb.thetas[k] - k * T / n);
                sum_dev += dev;
                max_dev = std::max(max_dev, dev);
                ++dev_count;
                max_step_dev = std::max(
                    max_step_dev, std::abs(std::abs(emb.walk[k] - emb.walk[k - 1]) - step));
            }
        }
        sum_tn += emb.thetas[n];
        sumsq_tn += emb.thetas[n] * emb.thetas[n];
    }
    const double mean_dev = dev_count > 0 ? sum_dev / dev_count : 0.0;
    out << "summary," << detail::fmt(mean_dev) << ',' << detail::fmt(max_dev) << ",\n";
    out.close();

    const double mean_tn = sum_tn / config.paths;
    const double var_tn = config.paths > 1
        ? std::max(0.0, (sumsq_tn - config.paths * mean_tn * mean_tn) / (config.paths - 1))
        : 0.0;
    const double se_tn = config.paths > 1 ? std::sqrt(var_tn / config.paths) : 0.0;

    write_summary(config, json{{"command", "embed-diag"},
                               {"n", n},
                               {"paths", config.paths},
                               {"seed", config.seed},
                               {"T", T},
                               {"mean_theta_n", mean_tn},
                               {"se_theta_n", se_tn},
                               {"mean_abs_dev", mean_dev},
                               {"max_abs_dev", max_dev},
                               {"max_step_dev", max_step_dev}});
    std::cout << "mean_theta_n=" << detail::fmt(mean_tn)
              << " se=" << detail::fmt(se_tn)
              << " mean|theta_k - kT/n|=" << detail::fmt(mean_dev) << '\n';
    return 0;
}

} // namespace

int run_command(const RunConfig& config) {
    if (config.command == "price") return cmd_price(config);
    if (config.command == "converge") return cmd_converge(config);
    if (config.command == "hedge") return cmd_hedge(config);
    if (config.command == "embed-diag") return cmd_embed_diag(config);
    throw config_error("command: must be one of price, converge, hedge, embed-diag");
}

int cli_main(int argc, char** argv) {
    CLI::App app{"binomial game-option pricing, embedded-walk hedging and convergence runs"};
    std::string config_path, command, out_dir;
    int n = 0, paths = 0, tau_family = 0;
    std::vector<int> ns;
    std::uint64_t seed = 0;
    double dt_max = 0.0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--command", command, "price | converge | hedge | embed-diag");
    app.add_option("--n", n, "lattice / embedding step count");
    app.add_option("--ns", ns, "step counts for converge")->delimiter(',');
    app.add_option("--paths", paths, "Monte Carlo path count");
    app.add_option("--seed", seed, "root RNG seed");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--dt-max", dt_max, "simulation grid spacing bound");
    app.add_option("--tau-family", tau_family, "deterministic buyer rules in the eq23 family");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig config;
        if (!config_path.empty()) config = load_config_file(config_path);
        if (app.count("--command")) config.command = command;
        if (app.count("--n")) config.n = n;
        if (app.count("--ns")) config.ns = ns;
        if (app.count("--paths")) config.paths = paths;
        if (app.count("--seed")) config.seed = seed;
        if (app.count("--out")) config.out_dir = out_dir;
        if (app.count("--dt-max")) config.dt_max = dt_max;
        if (app.count("--tau-family")) config.tau_family = tau_family;
        return run_command(config);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace gamelab
