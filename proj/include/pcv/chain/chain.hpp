#pragma once

#include <cstddef>

#include "pcv/stochastics/integrators.hpp"

namespace pcv::chain {

using stochastics::ChainState;

// v(r) = a r²/2 + b r³/3 + c r⁴/4 with c = b²/(3a), so that v″ = (a + b r)²/a ≥ 0.
struct FpuPotential {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;

    static FpuPotential make(double a, double b);
    double v(double r) const noexcept { return r * r * (a / 2.0 + r * (b / 3.0 + r * c / 4.0)); }
    double vprime(double r) const noexcept { return r * (a + r * (b + r * c)); }
};

struct HarmonicFit {
    double r_hat = 0.0;
    double omega_big = 1.0;  // Ω̂ = m ω̂²
};

// Least-squares harmonic approximation of v′ under e^{−βv}: r̂ = M₁/M₀, Ω̂ = β⁻¹M₀²/(M₀M₂ − M₁²).
HarmonicFit harmonic_fit(double a, double b, double beta);

struct ChainParams {
    int n = 32;
    double m = 1.0;
    double gamma = 1.0;
    double t_left = 2.0;
    double t_right = 2.0;
    FpuPotential potential;
    HarmonicFit fit;

    // Fits the harmonic reference at the mean temperature (T_L + T_R)/2.
    static ChainParams make(int n, double m, double gamma, double t_left, double t_right, double a, double b);

    void validate() const;
    double omega_hat() const noexcept;
    double nu() const noexcept;
    stochastics::ChainDynamics dynamics(double dt) const;
};

double fpu_v(const ChainParams& prm, double r);
double fpu_vprime(const ChainParams& prm, double r);
// w′(r) = v′(r) − Ω̂(r − r̂)
double anharmonic_wprime(const ChainParams& prm, double r);

// j_n = −(p_n + p_{n+1})/2·v′(r_n), 1 ≤ n ≤ N−1.
double elementary_flux(int n, const ChainState& s, const ChainParams& prm);
double boundary_flux_0(const ChainState& s, const ChainParams& prm);
double boundary_flux_n(const ChainState& s, const ChainParams& prm);
// R̃ = mean of the bulk fluxes.
double standard_flux(const ChainState& s, const ChainParams& prm);
// R = (j₀ + j_N)/2.
double boundary_observable(const ChainState& s, const ChainParams& prm);

// E₀[R] = ν²/(1 + ν²)·γ(T_L − T_R)/(2m).
double harmonic_mean_flux(const ChainParams& prm);

// Harmonic Poisson solution Φ₀ (up to its additive constant).
double harmonic_phi0(const ChainState& s, const ChainParams& prm);

// R + LΦ₀ = (1/(2(1+ν²)))·[νω̂(T_L − T_R) − Σ (ṽ_{n+1} − ṽ_{n−1}) w′(r_n)].
double modified_flux(const ChainState& s, const ChainParams& prm);
// Same quantity written as νω̂ΔT − νω̂Σ(r_n − r̂)(w′(r_{n+1}) − w′(r_{n−1})) − (p₁w′(r₁) + p_N w′(r_{N−1}))/m.
double modified_flux_expanded(const ChainState& s, const ChainParams& prm);

// κ = (N − 1)/(T_L − T_R)·mean_flux.
double conductivity(double mean_flux, const ChainParams& prm);

// r_n = r̂, p_n drawn from N(0, m(T_L + T_R)/2).
ChainState initial_state(const ChainParams& prm, stochastics::RngStream& rng);

inline void step(ChainState& s, const ChainParams& prm, const stochastics::ChainDynamics& dyn,
                 stochastics::RngStream& rng, std::uint64_t k = 0) {
    const FpuPotential pot = prm.potential;
    stochastics::chain_gla_step(s, [pot](double r) { return pot.vprime(r); }, dyn, rng, k);
}

}  // namespace pcv::chain
