#include "pcv/chain/chain.hpp"

#include <cmath>

#include "pcv/errors.hpp"
#include "pcv/numerics/quadrature.hpp"

namespace pcv::chain {

FpuPotential FpuPotential::make(double a, double b) {
    if (!(a > 0.0)) throw InvalidArgument("FPU potential needs a > 0");
    return {a, b, b * b / (3.0 * a)};
}

HarmonicFit harmonic_fit(double a, double b, double beta) {
    const auto pot = FpuPotential::make(a, b);
    if (!(beta > 0.0)) throw InvalidArgument("harmonic_fit: beta must be positive");
    // v′(r) = r(a + b r + c r²) and the quadratic factor has negative discriminant: r = 0 is the minimiser.
    const auto m = numerics::boltzmann_moments([&pot](double r) { return pot.v(r); }, beta, 0.0, 2);
    const double r_hat = m[1] / m[0];
    const double central = m[2] / m[0] - r_hat * r_hat;
    if (!(central > 0.0)) throw Error("harmonic_fit: non-positive second central moment");
    return {r_hat, 1.0 / (beta * central)};
}

ChainParams ChainParams::make(int n, double m, double gamma, double t_left, double t_right, double a, double b) {
    ChainParams p;
    p.n = n;
    p.m = m;
    p.gamma = gamma;
    p.t_left = t_left;
    p.t_right = t_right;
    p.potential = FpuPotential::make(a, b);
    p.validate();
    p.fit = harmonic_fit(a, b, 2.0 / (t_left + t_right));
    return p;
}

void ChainParams::validate() const {
    if (n < 2) throw InvalidArgument("ChainParams: need at least two particles");
    if (!(m > 0.0) || !(gamma > 0.0) || !(t_left > 0.0) || !(t_right > 0.0)) {
        throw InvalidArgument("ChainParams: m, gamma and temperatures must be positive");
    }
    if (!(potential.a > 0.0)) throw InvalidArgument("ChainParams: a must be positive");
}

double ChainParams::omega_hat() const noexcept { return std::sqrt(fit.omega_big / m); }

double ChainParams::nu() const noexcept { return m * omega_hat() / gamma; }

stochastics::ChainDynamics ChainParams::dynamics(double dt) const {
    stochastics::ChainDynamics d;
    d.m = m;
    d.gamma = gamma;
    d.t_left = t_left;
    d.t_right = t_right;
    d.dt = dt;
    return d;
}

double fpu_v(const ChainParams& prm, double r) { return prm.potential.v(r); }

double fpu_vprime(const ChainParams& prm, double r) { return prm.potential.vprime(r); }

double anharmonic_wprime(const ChainParams& prm, double r) {
    return prm.potential.vprime(r) - prm.fit.omega_big * (r - prm.fit.r_hat);
}

double elementary_flux(int n, const ChainState& s, const ChainParams& prm) {
    if (n < 1 || n > prm.n - 1) throw InvalidArgument("elementary_flux: index out of range");
    const auto i = static_cast<std::size_t>(n);
    return -0.5 * (s.p[i - 1] + s.p[i]) * prm.potential.vprime(s.r[i - 1]);
}

double boundary_flux_0(const ChainState& s, const ChainParams& prm) {
    return prm.gamma / prm.m * (prm.t_left - s.p.front() * s.p.front() / prm.m);
}

double boundary_flux_n(const ChainState& s, const ChainParams& prm) {
    return prm.gamma / prm.m * (s.p.back() * s.p.back() / prm.m - prm.t_right);
}

double standard_flux(const ChainState& s, const ChainParams& prm) {
    double sum = 0.0;
    for (std::size_t i = 0; i < s.r.size(); ++i) sum -= 0.5 * (s.p[i] + s.p[i + 1]) * prm.potential.vprime(s.r[i]);
    return sum / static_cast<double>(s.r.size());
}

double boundary_observable(const ChainState& s, const ChainParams& prm) {
    return 0.5 * (boundary_flux_0(s, prm) + boundary_flux_n(s, prm));
}

double harmonic_mean_flux(const ChainParams& prm) {
    const double nu = prm.nu();
    return nu * nu / (1.0 + nu * nu) * prm.gamma * (prm.t_left - prm.t_right) / (2.0 * prm.m);
}

double harmonic_phi0(const ChainState& s, const ChainParams& prm) {
    const double nu = prm.nu();
    const double w2 = prm.fit.omega_big / prm.m;
    double sum = 0.0;
    for (std::size_t i = 0; i < s.r.size(); ++i) sum += (s.r[i] - prm.fit.r_hat) * (s.p[i] + s.p[i + 1]);
    const double edge = prm.gamma / (2.0 * prm.m * prm.m) * (s.p.back() * s.p.back() - s.p.front() * s.p.front());
    return prm.m / (2.0 * prm.gamma * (1.0 + nu * nu)) * (-w2 * sum + edge);
}

double modified_flux(const ChainState& s, const ChainParams& prm) {
    const double nu = prm.nu();
    const double nw = nu * prm.omega_hat();
    const std::size_t nb = s.r.size();
    // ṽ_0 = −p₁/m, ṽ_n = −νω̂(r_n − r̂), ṽ_N = p_N/m.
    auto vt = [&](std::size_t n) {
        if (n == 0) return -s.p.front() / prm.m;
        if (n == nb + 1) return s.p.back() / prm.m;
        return -nw * (s.r[n - 1] - prm.fit.r_hat);
    };
    double sum = 0.0;
    for (std::size_t n = 1; n <= nb; ++n) sum += (vt(n + 1) - vt(n - 1)) * anharmonic_wprime(prm, s.r[n - 1]);
    return (nw * (prm.t_left - prm.t_right) - sum) / (2.0 * (1.0 + nu * nu));
}

double modified_flux_expanded(const ChainState& s, const ChainParams& prm) {
    const double nu = prm.nu();
    const double nw = nu * prm.omega_hat();
    const std::size_t nb = s.r.size();
    auto wp = [&](std::size_t n) {
        if (n == 0 || n == nb + 1) return 0.0;
        return anharmonic_wprime(prm, s.r[n - 1]);
    };
    double sum = 0.0;
    for (std::size_t n = 1; n <= nb; ++n) sum += (s.r[n - 1] - prm.fit.r_hat) * (wp(n + 1) - wp(n - 1));
    const double edge = (s.p.front() * wp(1) + s.p.back() * wp(nb)) / prm.m;
    return (nw * (prm.t_left - prm.t_right) - nw * sum - edge) / (2.0 * (1.0 + nu * nu));
}

double conductivity(double mean_flux, const ChainParams& prm) {
    if (prm.t_left == prm.t_right) throw InvalidArgument("conductivity: T_L equals T_R");
    return static_cast<double>(prm.n - 1) / (prm.t_left - prm.t_right) * mean_flux;
}

ChainState initial_state(const ChainParams& prm, stochastics::RngStream& rng) {
    ChainState s;
    s.r.assign(static_cast<std::size_t>(prm.n - 1), prm.fit.r_hat);
    s.p.resize(static_cast<std::size_t>(prm.n));
    const double sd = std::sqrt(prm.m * 0.5 * (prm.t_left + prm.t_right));
    for (auto& p : s.p) p = sd * rng.normal();
    return s;
}

}  // namespace pcv::chain
