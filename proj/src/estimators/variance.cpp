#include "pcv/estimators/variance.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pcv/csv.hpp"
#include "pcv/errors.hpp"

namespace pcv::estimators {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

VarianceAccumulator::VarianceAccumulator(double dt, std::size_t n_deco, AcfOptions acf)
    : dt_(dt), n_deco_(n_deco), acf_(acf) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("VarianceAccumulator: dt must be positive");
    if (acf_.stride == 0) throw InvalidArgument("VarianceAccumulator: ACF stride must be positive");
    head_.reserve(n_deco_);
    ring_.assign(n_deco_, 0.0);
    if (acf_.enabled) {
        for (std::size_t j = 0; j <= n_deco_; j += acf_.stride) lags_.push_back(j);
        lag_sums_.resize(lags_.size());
    }
}

double VarianceAccumulator::at_lag(std::size_t j) const noexcept {
    return ring_[(ring_pos_ + n_deco_ - 1 - j) % n_deco_];
}

double VarianceAccumulator::window_sum_exact() const noexcept {
    CompensatedSum s;
    const std::size_t filled = std::min(n_, n_deco_);
    for (std::size_t j = 0; j < filled; ++j) s.add(at_lag(j));
    return s.value();
}

void VarianceAccumulator::refresh_window() {
    const double exact = window_sum_exact();
    window_.reset();
    window_.add(exact);
}

void VarianceAccumulator::push(double value) {
    if (!std::isfinite(value)) throw NonFiniteValue("VarianceAccumulator::push: non-finite value");
    if (n_ == 0) shift_ = value;
    const double x = value - shift_;

    cross_.add(x * window_.value());
    if (acf_.enabled) {
        const std::size_t available = std::min(n_, n_deco_);
        for (std::size_t k = 0; k < lags_.size(); ++k) {
            const std::size_t j = lags_[k];
            if (j == 0) {
                lag_sums_[k].add(x * x);
            } else if (j <= available) {
                lag_sums_[k].add(x * at_lag(j - 1));
            } else {
                break;
            }
        }
    }
    sum_.add(x);
    sum_sq_.add(x * x);
    if (head_.size() < n_deco_) head_.push_back(x);
    if (n_deco_ > 0) {
        if (n_ >= n_deco_) window_.add(-ring_[ring_pos_]);
        ring_[ring_pos_] = x;
        window_.add(x);
        ring_pos_ = (ring_pos_ + 1) % n_deco_;
    }
    ++n_;
    if (n_deco_ > 0 && n_ % refresh_period == 0) refresh_window();
}

double VarianceAccumulator::mean() const noexcept {
    if (n_ == 0) return 0.0;
    return shift_ + sum_.value() / static_cast<double>(n_);
}

VarianceReport VarianceAccumulator::finalize() const {
    if (n_ < min_samples()) throw InsufficientData(n_, min_samples());
    const double n = static_cast<double>(n_);
    const double nd = static_cast<double>(n_deco_);
    const double s1 = sum_.value();
    const double mu = s1 / n;

    // The terms below cancel to within a few parts in n·N_deco when the shift is far from the mean;
    // they are combined in extended precision.
    using ld = long double;
    const ld s1x = sum_.extended();
    const ld mux = s1x / static_cast<ld>(n_);

    // Σ_m x_m·(number of window partners of m): 2N_deco for interior indices, fewer near both ends.
    CompensatedSum deficit;
    for (std::size_t m = 0; m < n_deco_; ++m) {
        deficit.add(head_[m] * static_cast<double>(n_deco_ - m));
        deficit.add(at_lag(m) * static_cast<double>(n_deco_ - m));
    }
    const ld weighted = 2.0L * nd * s1x - deficit.extended();
    const ld pairs = static_cast<ld>(n) * nd - static_cast<ld>(nd) * (nd + 1.0L) / 2.0L;

    const ld total = sum_sq_.extended() - s1x * mux + 2.0L * cross_.extended() - 2.0L * mux * weighted +
                     2.0L * mux * mux * pairs;

    VarianceReport r;
    r.dt = dt_;
    r.n_deco = n_deco_;
    r.n_samples = n_;
    r.mean = mean();
    r.asym_variance = static_cast<double>(static_cast<ld>(dt_) / static_cast<ld>(n) * total);
    const double t = r.total_time();
    r.mean_error_bar = std::sqrt(std::max(r.asym_variance, 0.0) / t);
    r.variance_error_bar = 2.0 * std::abs(r.asym_variance) * std::sqrt(r.t_deco() / t);

    if (acf_.enabled) {
        std::vector<double> head_prefix(n_deco_ + 1, 0.0);
        std::vector<double> tail_prefix(n_deco_ + 1, 0.0);
        for (std::size_t j = 0; j < n_deco_; ++j) {
            head_prefix[j + 1] = head_prefix[j] + head_[j];
            tail_prefix[j + 1] = tail_prefix[j] + at_lag(j);
        }
        r.acf_profile.reserve(lags_.size());
        for (std::size_t k = 0; k < lags_.size(); ++k) {
            const std::size_t j = lags_[k];
            const double count = n - static_cast<double>(j);
            const double front = s1 - tail_prefix[j];
            const double back = s1 - head_prefix[j];
            const double c = (lag_sums_[k].value() - mu * (front + back) + count * mu * mu) / count;
            r.acf_profile.push_back({static_cast<double>(j) * dt_, c});
        }
        r.cumulated_acf.reserve(lags_.size());
        double integral = 0.0;
        for (std::size_t k = 0; k < r.acf_profile.size(); ++k) {
            if (k > 0) {
                const auto& a = r.acf_profile[k - 1];
                const auto& b = r.acf_profile[k];
                integral += 0.5 * (b.t - a.t) * (a.value + b.value);
            }
            r.cumulated_acf.push_back({r.acf_profile[k].t, integral});
        }
    }
    return r;
}

VarianceReport merge(std::span<const VarianceReport> reports) {
    if (reports.empty()) throw InvalidArgument("merge: no reports");
    const auto& first = reports.front();
    VarianceReport out;
    out.dt = first.dt;
    out.n_deco = first.n_deco;
    out.n_samples = first.n_samples;
    out.n_replicas = 0;
    out.acf_profile.assign(first.acf_profile.size(), {0.0, 0.0});
    out.cumulated_acf.assign(first.cumulated_acf.size(), {0.0, 0.0});
    CompensatedSum mean;
    CompensatedSum var;
    for (const auto& r : reports) {
        if (r.dt != first.dt || r.n_deco != first.n_deco || r.n_samples != first.n_samples ||
            r.acf_profile.size() != first.acf_profile.size() ||
            r.cumulated_acf.size() != first.cumulated_acf.size()) {
            throw InvalidArgument("merge: reports have mismatched parameters");
        }
        mean.add(r.mean);
        var.add(r.asym_variance);
        out.n_replicas += r.n_replicas;
        for (std::size_t k = 0; k < r.acf_profile.size(); ++k) {
            out.acf_profile[k].t = r.acf_profile[k].t;
            out.acf_profile[k].value += r.acf_profile[k].value;
        }
        for (std::size_t k = 0; k < r.cumulated_acf.size(); ++k) {
            out.cumulated_acf[k].t = r.cumulated_acf[k].t;
            out.cumulated_acf[k].value += r.cumulated_acf[k].value;
        }
    }
    const double k = static_cast<double>(reports.size());
    out.mean = mean.value() / k;
    out.asym_variance = var.value() / k;
    for (auto& p : out.acf_profile) p.value /= k;
    for (auto& p : out.cumulated_acf) p.value /= k;
    const double t = out.total_time() * k;
    out.mean_error_bar = std::sqrt(std::max(out.asym_variance, 0.0) / t);
    out.variance_error_bar = 2.0 * std::abs(out.asym_variance) * std::sqrt(out.t_deco() / t);
    return out;
}

double block_average_variance(std::span<const double> values, std::size_t block_length, double dt) {
    if (block_length == 0) throw InvalidArgument("block_average_variance: zero block length");
    const std::size_t n_blocks = values.size() / block_length;
    if (n_blocks < 10) throw InsufficientData(values.size(), 10 * block_length);
    std::vector<double> means(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        CompensatedSum s;
        for (std::size_t i = 0; i < block_length; ++i) s.add(values[b * block_length + i]);
        means[b] = s.value() / static_cast<double>(block_length);
    }
    CompensatedSum s;
    for (double m : means) s.add(m);
    const double mu = s.value() / static_cast<double>(n_blocks);
    CompensatedSum sq;
    for (double m : means) sq.add((m - mu) * (m - mu));
    const double var = sq.value() / static_cast<double>(n_blocks - 1);
    return static_cast<double>(block_length) * dt * var;
}

void write_acf_csv(std::ostream& os, const VarianceReport& report) {
    os << "lag_time,acf\n";
    for (const auto& p : report.acf_profile) os << fmt17(p.t) << ',' << fmt17(p.value) << '\n';
}

void write_cumulated_acf_csv(std::ostream& os, const VarianceReport& report) {
    os << "t,cumulated_acf\n";
    for (const auto& p : report.cumulated_acf) os << fmt17(p.t) << ',' << fmt17(p.value) << '\n';
}

}  // namespace pcv::estimators
