#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pcv::cli {

struct RunSection {
    double dt = 0.02;
    std::uint64_t n_steps = 1'000'000;
    std::int64_t burn_in = -1;  // steps; negative means 10% of n_steps
    bool acf = true;
    std::uint64_t acf_stride = 1;

    std::uint64_t burn_in_steps() const noexcept {
        return burn_in < 0 ? n_steps / 10 : static_cast<std::uint64_t>(burn_in);
    }
    bool operator==(const RunSection&) const = default;
};

struct MobilitySection {
    double m = 1.0;
    double gamma = 1.0;
    double beta = 1.0;
    double amplitude = 1.0;  // v(q) = amplitude·(1 − cos q)
    std::vector<std::string> bases{"15x10"};
    std::vector<double> eta{0.01, 0.02, 0.04, 0.08, 0.16, 0.32, 0.64, 1.28, 2.56};
    double t_deco = 6.0;
    bool operator==(const MobilitySection&) const = default;
};

struct ChainSection {
    std::vector<int> n{32};
    std::vector<double> b{0.08};
    double a = 1.0;
    double m = 1.0;
    double gamma = 1.0;
    double t_left = 2.0;
    double t_right = 2.0;
    double t_deco_standard = -1.0;  // negative means 3N
    double t_deco_modified = 32.0;
    bool conductivity = false;
    bool operator==(const ChainSection&) const = default;
};

struct DimerSection {
    int n = 64;
    double box = 8.0;
    double beta = 1.0;
    double h = 1.0;
    double r0 = 3.0;
    double dr = 1.0;
    std::vector<std::string> solvent{"none", "soft", "coulomb"};
    double eps = 1.0;
    double sigma = 1.0;
    double r_cut = 2.5;
    std::vector<double> nu{0.0, 0.25, 0.5, 1.0};
    double t_deco = 50.0;
    double grid_h = 1e-3;
    double r_max = 10.0;
    bool operator==(const DimerSection&) const = default;
};

struct SelftestSection {
    double t_deco = 10.0;
    double time_factor = 1e4;  // T = time_factor·t_deco
    int repetitions = 100;
    int required = 95;
    bool operator==(const SelftestSection&) const = default;
};

struct ExperimentConfig {
    std::string experiment = "mobility";  // mobility | chain | dimer | selftest-ou
    std::uint64_t seed = 1;
    int replicas = 1;
    std::string output = "out";
    RunSection run;
    MobilitySection mobility;
    ChainSection chain;
    DimerSection dimer;
    SelftestSection selftest;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses INI text (`key = value`, `[section]`, `;` or `#` comments, comma-separated lists).
// Throws ConfigError naming the line or field.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

// Empty iff the configuration would be accepted by run().
std::vector<std::string> validate(const ExperimentConfig& cfg);

// "15x10" → (15, 10)
std::pair<int, int> parse_basis(const std::string& s);

}  // namespace pcv::cli
