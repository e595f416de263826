#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "pcv/errors.hpp"
#include "pcv/stochastics/rng.hpp"

namespace pcv::stochastics {

// Reduces q to [0, L).
inline double wrap(double q, double length) noexcept {
    double r = q - length * std::floor(q / length);
    if (r >= length || r < 0.0) r = 0.0;
    return r;
}

inline double minimum_image(double d, double length) noexcept {
    return d - length * std::round(d / length);
}

struct LangevinParams {
    double m = 1.0;
    double gamma = 1.0;
    double beta = 1.0;
    double dt = 0.02;
    double period = 2.0 * std::numbers::pi;  // 0 disables wrapping

    void validate() const;
};

struct LangevinState {
    double q = 0.0;
    double p = 0.0;
};

// One step of the Geometric Langevin Algorithm: half kick with force(q) + η, drift,
// half kick, then the exact Ornstein–Uhlenbeck update of p. force(q) returns −v′(q).
template <class Force>
void gla_step(LangevinState& s, Force&& force, const LangevinParams& prm, double eta, RngStream& rng,
              std::uint64_t step = 0) {
    const double half = 0.5 * prm.dt;
    const double alpha = std::exp(-prm.gamma * prm.dt / prm.m);
    const double noise = std::sqrt(prm.m / prm.beta * (1.0 - alpha * alpha));
    s.p += (force(s.q) + eta) * half;
    s.q += s.p * prm.dt / prm.m;
    if (prm.period > 0.0) s.q = wrap(s.q, prm.period);
    s.p += (force(s.q) + eta) * half;
    s.p = alpha * s.p + noise * rng.normal();
    if (!std::isfinite(s.q) || !std::isfinite(s.p)) throw IntegrationDiverged(step, "non-finite Langevin state");
}

struct ChainDynamics {
    double m = 1.0;
    double gamma = 1.0;
    double t_left = 2.0;
    double t_right = 2.0;
    double dt = 1e-2;

    void validate() const;
};

// Distances r_1..r_{N−1} and momenta p_1..p_N, stored zero-based.
struct ChainState {
    std::vector<double> r;
    std::vector<double> p;

    std::size_t particles() const noexcept { return p.size(); }
};

namespace detail {

template <class VPrime>
void chain_kick(ChainState& s, VPrime& vprime, double h, std::vector<double>& vp) {
    const std::size_t nb = s.r.size();
    vp.resize(nb);
    for (std::size_t i = 0; i < nb; ++i) vp[i] = vprime(s.r[i]);
    double left = 0.0;
    for (std::size_t i = 0; i < nb; ++i) {
        s.p[i] += (vp[i] - left) * h;
        left = vp[i];
    }
    s.p[nb] -= left * h;
}

}  // namespace detail

// Verlet on the whole chain, then Ornstein–Uhlenbeck updates of p_1 (T_L) and p_N (T_R), in that order.
template <class VPrime>
void chain_gla_step(ChainState& s, VPrime&& vprime, const ChainDynamics& prm, RngStream& rng,
                    std::uint64_t step = 0) {
    thread_local std::vector<double> vp;
    const double half = 0.5 * prm.dt;
    const std::size_t n = s.p.size();
    detail::chain_kick(s, vprime, half, vp);
    const double c = prm.dt / prm.m;
    for (std::size_t i = 0; i + 1 < n; ++i) s.r[i] += c * (s.p[i + 1] - s.p[i]);
    detail::chain_kick(s, vprime, half, vp);

    const double alpha = std::exp(-prm.gamma * prm.dt / prm.m);
    const double spread = 1.0 - alpha * alpha;
    s.p[0] = alpha * s.p[0] + std::sqrt(prm.m * prm.t_left * spread) * rng.normal();
    s.p[n - 1] = alpha * s.p[n - 1] + std::sqrt(prm.m * prm.t_right * spread) * rng.normal();

    for (double x : s.p) {
        if (!std::isfinite(x)) throw IntegrationDiverged(step, "non-finite chain momentum");
    }
    for (double x : s.r) {
        if (!std::isfinite(x)) throw IntegrationDiverged(step, "non-finite chain distance");
    }
}

// Exact transition of dx = −x dt + sqrt(2) dW over Δt.
inline double ou_exact_step(double x, double dt, RngStream& rng) {
    const double a = std::exp(-dt);
    return a * x + std::sqrt(1.0 - a * a) * rng.normal();
}

// q ← wrap(q + FΔt + sqrt(2Δt/β)·G) with F already evaluated at q; one Gaussian per coordinate.
void em_update(std::vector<double>& q, const std::vector<double>& force, double beta, double dt,
               std::optional<double> box, RngStream& rng, std::uint64_t step = 0);

// force(q, F) fills F with the total drift at q.
template <class Force>
void em_step(std::vector<double>& q, Force&& force, double beta, double dt, std::optional<double> box,
             RngStream& rng, std::uint64_t step = 0) {
    thread_local std::vector<double> f;
    f.assign(q.size(), 0.0);
    force(q, f);
    em_update(q, f, beta, dt, box, rng, step);
}

}  // namespace pcv::stochastics
