#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace pcv::estimators {

// Neumaier compensated sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }
    long double extended() const noexcept { return static_cast<long double>(sum_) + comp_; }
    void reset() noexcept { sum_ = comp_ = 0.0; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct AcfOptions {
    bool enabled = true;
    std::size_t stride = 1;  // record lags 0, stride, 2·stride, … ≤ N_deco
};

struct AcfPoint {
    double t;
    double value;
};

struct VarianceReport {
    double dt = 0.0;
    std::size_t n_deco = 0;
    std::size_t n_samples = 0;
    std::size_t n_replicas = 1;
    double mean = 0.0;
    double asym_variance = 0.0;
    double mean_error_bar = 0.0;
    double variance_error_bar = 0.0;
    std::vector<AcfPoint> acf_profile;
    std::vector<AcfPoint> cumulated_acf;

    double total_time() const noexcept { return static_cast<double>(n_samples) * dt; }
    double t_deco() const noexcept { return static_cast<double>(n_deco) * dt; }
};

// Streaming estimator of the mean, the autocorrelation profile and the asymptotic variance
//   σ̂² = Δt/n · Σ_i Σ_{|j| ≤ N_deco, 1 ≤ i+j ≤ n} (φ_i − μ)(φ_{i+j} − μ)
// with O(1) work per push for the mean and σ̂² (plus O(N_deco/stride) for the ACF).
class VarianceAccumulator {
public:
    VarianceAccumulator(double dt, std::size_t n_deco, AcfOptions acf = {});

    void push(double value);
    VarianceReport finalize() const;

    std::size_t count() const noexcept { return n_; }
    std::size_t n_deco() const noexcept { return n_deco_; }
    double dt() const noexcept { return dt_; }
    double mean() const noexcept;
    // Sum of the values currently held in the window ring buffer (the last min(n, N_deco) values).
    double window_sum() const noexcept { return window_.value(); }
    double window_sum_exact() const noexcept;
    std::size_t min_samples() const noexcept { return 2 * n_deco_ + 1; }

    static constexpr std::uint64_t refresh_period = std::uint64_t{1} << 20;

private:
    double at_lag(std::size_t j) const noexcept;  // x_{n-j}, 0 ≤ j < min(n, N_deco)
    void refresh_window();

    double dt_;
    std::size_t n_deco_;
    AcfOptions acf_;
    std::size_t n_ = 0;
    double shift_ = 0.0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
    CompensatedSum cross_;
    CompensatedSum window_;
    std::vector<double> head_;
    std::vector<double> ring_;
    std::size_t ring_pos_ = 0;
    std::vector<std::size_t> lags_;
    std::vector<CompensatedSum> lag_sums_;
};

// Pools independent replicas of equal (Δt, N_deco, n): means, σ̂² and ACF are averaged and
// the error bars are recomputed over the total time K·T.
VarianceReport merge(std::span<const VarianceReport> reports);

// (block_length·Δt) times the sample variance of the block means; needs ≥ 10 full blocks.
double block_average_variance(std::span<const double> values, std::size_t block_length, double dt = 1.0);

void write_acf_csv(std::ostream& os, const VarianceReport& report);
void write_cumulated_acf_csv(std::ostream& os, const VarianceReport& report);

}  // namespace pcv::estimators
