#include "pcv/stochastics/integrators.hpp"

namespace pcv::stochastics {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void LangevinParams::validate() const {
    if (!positive(m) || !positive(gamma) || !positive(beta) || !positive(dt)) {
        throw InvalidArgument("LangevinParams: m, gamma, beta and dt must be positive");
    }
    if (!(period >= 0.0)) throw InvalidArgument("LangevinParams: negative period");
}

void ChainDynamics::validate() const {
    if (!positive(m) || !positive(gamma) || !positive(t_left) || !positive(t_right) || !positive(dt)) {
        throw InvalidArgument("ChainDynamics: m, gamma, temperatures and dt must be positive");
    }
}

void em_update(std::vector<double>& q, const std::vector<double>& force, double beta, double dt,
               std::optional<double> box, RngStream& rng, std::uint64_t step) {
    if (force.size() != q.size()) throw InvalidArgument("em_update: force size mismatch");
    const double amp = std::sqrt(2.0 * dt / beta);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (!std::isfinite(force[i])) throw IntegrationDiverged(step, "non-finite force");
        q[i] += force[i] * dt + amp * rng.normal();
        if (box) q[i] = wrap(q[i], *box);
    }
}

}  // namespace pcv::stochastics
