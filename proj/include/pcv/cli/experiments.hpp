#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "pcv/cli/config.hpp"
#include "pcv/errors.hpp"
#include "pcv/estimators/variance.hpp"

namespace pcv::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 1, exit_runtime = 2, exit_selftest = 3 };

struct RunResult {
    int exit_code = exit_ok;
    std::vector<std::string> files;
    std::string summary;
};

struct MobilityPoint {
    std::string basis;
    double eta = 0.0;
    double mobility = 0.0;
    double alpha = 0.0;
    estimators::VarianceReport plain;
    estimators::VarianceReport modified;
};

struct ChainObservable {
    std::string name;
    estimators::VarianceReport report;
};

struct ChainPoint {
    int n = 0;
    double b = 0.0;
    double t_left = 0.0;
    double t_right = 0.0;
    std::vector<ChainObservable> observables;

    const estimators::VarianceReport& at(const std::string& name) const;
};

struct DimerPoint {
    double nu = 0.0;
    std::string solvent;
    estimators::VarianceReport plain;
    estimators::VarianceReport modified;
    std::uint64_t clamped = 0;
};

struct SelftestResult {
    std::vector<estimators::VarianceReport> reports;
    int hits = 0;
};

// Chain observables, in output order: R̃, R + LΦ₀, R, j₁, j_{N/2}, j₀.
inline const char* const chain_observable_names[] = {"standard", "modified", "boundary", "j1", "jmid", "j0"};

std::vector<MobilityPoint> run_mobility(const ExperimentConfig& cfg);
std::vector<ChainPoint> run_chain(const ExperimentConfig& cfg);
std::vector<DimerPoint> run_dimer(const ExperimentConfig& cfg);
SelftestResult run_selftest(const ExperimentConfig& cfg);

// Validates, runs the configured experiment and writes its CSV files under cfg.output.
// Errors are reported through the exit code and RunResult::summary.
RunResult run(const ExperimentConfig& cfg);

std::size_t window_steps(double t_deco, double dt);

// Runs fn(0..k−1) on up to k worker threads; results are returned in replica order.
template <class T>
std::vector<T> run_replicas(int k, const std::function<T(int)>& fn, const std::string& label) {
    std::vector<T> out(static_cast<std::size_t>(k));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(k));
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int workers = std::min<int>(k, static_cast<int>(hw));
    if (workers <= 1) {
        for (int i = 0; i < k; ++i) {
            try {
                out[static_cast<std::size_t>(i)] = fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int i = w; i < k; i += workers) {
                    try {
                        out[static_cast<std::size_t>(i)] = fn(i);
                    } catch (...) {
                        errors[static_cast<std::size_t>(i)] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (int i = 0; i < k; ++i) {
        if (!errors[static_cast<std::size_t>(i)]) continue;
        try {
            std::rethrow_exception(errors[static_cast<std::size_t>(i)]);
        } catch (const std::exception& e) {
            throw Error(label + ", replica " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace pcv::cli
