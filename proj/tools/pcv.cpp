#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pcv/cli/config.hpp"
#include "pcv/cli/experiments.hpp"
#include "pcv/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Perturbative control variates for ergodic averages of diffusions"};
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out;
    int replicas = 0;
    bool quiet = false;
    bool check_only = false;
    app.add_option("--config", config_path, "INI configuration file")->required()->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides the file)");
    auto* out_opt = app.add_option("--out", out, "output directory (overrides the file)");
    auto* rep_opt = app.add_option("--replicas", replicas, "independent replicas per sweep point")
                        ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", quiet, "suppress the summary table");
    app.add_flag("--validate", check_only, "only validate the configuration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : pcv::cli::exit_config;
    }

    pcv::cli::ExperimentConfig cfg;
    try {
        cfg = pcv::cli::load_config(config_path);
    } catch (const pcv::Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return pcv::cli::exit_config;
    }
    if (*seed_opt) cfg.seed = seed;
    if (*out_opt) cfg.output = out;
    if (*rep_opt) cfg.replicas = replicas;

    if (check_only) {
        const auto diagnostics = pcv::cli::validate(cfg);
        for (const auto& d : diagnostics) std::cerr << "config error: " << d << '\n';
        return diagnostics.empty() ? pcv::cli::exit_ok : pcv::cli::exit_config;
    }

    const auto result = pcv::cli::run(cfg);
    if (result.exit_code == pcv::cli::exit_ok || result.exit_code == pcv::cli::exit_selftest) {
        if (!quiet) std::cout << result.summary;
    } else {
        std::cerr << result.summary;
    }
    return result.exit_code;
}
