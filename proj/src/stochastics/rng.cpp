#include "pcv/stochastics/rng.hpp"

#include <boost/random/uniform_01.hpp>

namespace pcv::stochastics {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

RngStream RngStream::silent() {
    RngStream r(0, 0);
    r.silent_ = true;
    return r;
}

double RngStream::uniform() {
    boost::random::uniform_01<double> u;
    return u(engine_);
}

}  // namespace pcv::stochastics
