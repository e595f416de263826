#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace pcv::stochastics {

// Gaussian source keyed by (seed, stream-id). Identical keys give bit-identical draws.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    // Every draw returns exactly 0; used to isolate the deterministic part of an integrator.
    static RngStream silent();

    double normal() {
        if (silent_) return 0.0;
        return normal_(engine_);
    }
    double uniform();

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream_id() const noexcept { return stream_id_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    bool silent_ = false;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
};

}  // namespace pcv::stochastics
