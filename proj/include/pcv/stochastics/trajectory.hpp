#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "pcv/errors.hpp"
#include "pcv/estimators/variance.hpp"

namespace pcv::stochastics {

template <class State>
struct TrajectoryReport {
    State final_state;
    std::uint64_t steps = 0;
    std::uint64_t samples = 0;
    double wall_seconds = 0.0;
};

// step(state, k) advances the state by one step; observe(state, out) writes one value per sink.
// Observables are sampled after every step with index ≥ burn_in.
template <class State, class Step, class Observe>
TrajectoryReport<State> run_trajectory(State& state, Step&& step, Observe&& observe,
                                       std::span<estimators::VarianceAccumulator> sinks,
                                       std::uint64_t n_steps, std::uint64_t burn_in) {
    if (burn_in > n_steps) throw InvalidArgument("run_trajectory: burn-in exceeds step count");
    const auto start = std::chrono::steady_clock::now();
    std::vector<double> values(sinks.size());
    TrajectoryReport<State> report;
    for (std::uint64_t k = 0; k < n_steps; ++k) {
        step(state, k);
        if (k >= burn_in) {
            observe(state, std::span<double>(values));
            for (std::size_t i = 0; i < sinks.size(); ++i) sinks[i].push(values[i]);
            ++report.samples;
        }
    }
    report.steps = n_steps;
    report.final_state = state;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace pcv::stochastics
