#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pcv/dimer/radial.hpp"
#include "pcv/stochastics/rng.hpp"

namespace pcv::dimer {

enum class Solvent { none, soft, coulomb };

std::string to_string(Solvent s);
Solvent solvent_from_string(const std::string& s);

struct DimerParams {
    int n = 64;  // particles including the dimer; forced to 2 without solvent
    double box = 8.0;
    double beta = 1.0;
    DoubleWell well;
    Solvent solvent = Solvent::soft;
    double eps = 1.0;
    double sigma = 1.0;
    double r_cut = 2.5;
    double nu = 0.0;
    int dim = 2;

    void validate() const;
    int particles() const noexcept { return solvent == Solvent::none ? 2 : n; }
};

enum class PairKind { dimer, soft, coulomb };

double pair_potential(const DimerParams& prm, PairKind kind, double r);
double pair_potential_derivative(const DimerParams& prm, PairKind kind, double r);
// −∇_d v(|d|): force on the particle at the head of the displacement d.
std::array<double, 2> pair_force(const DimerParams& prm, PairKind kind, std::array<double, 2> d);

// y-component ν·sin(2π q_x/L) of the shear on a particle at abscissa q_x.
double shear_force(double qx, double nu, double box) noexcept;

// Particles 0 and 1 form the dimer. Positions are kept in [0, L)²; the bond vector q₂ − q₁ is tracked
// continuously (without minimum image) since the stretched well sits at L/2.
class DimerSystem {
public:
    DimerSystem(const DimerParams& prm);

    const DimerParams& params() const noexcept { return prm_; }
    const std::vector<double>& positions() const noexcept { return q_; }
    const std::vector<double>& internal_forces() const noexcept { return f_; }
    std::array<double, 2> bond() const noexcept { return bond_; }
    double length() const noexcept;

    void set_positions(std::vector<double> q);
    // Euler–Maruyama step with drift −∇V + shear.
    void step(double dt, stochastics::RngStream& rng, std::uint64_t k = 0);
    // −∇V at the current positions (shear excluded).
    void compute_forces();

private:
    void resync_bond();

    DimerParams prm_;
    std::vector<double> q_;
    std::vector<double> f_;
    std::vector<double> drift_;
    std::vector<double> xs_, ys_, fx_, fy_;
    std::array<double, 2> bond_{};
};

// |r₁₂| + β⁻¹ψ″ + [½(∇_{q₁}V − ∇_{q₂}V − ν(f(q₁ₓ) − f(q₂ₓ))e_y)·r₁₂/|r₁₂| + (d−1)/(β|r₁₂|)]·ψ′,
// r₁₂ = q₂ − q₁. Beyond r_max, ψ′ = ψ″ = 0 and *clamped is incremented when given.
double eval_modified_length(const DimerSystem& sys, const RadialProfile& profile, std::uint64_t* clamped = nullptr);

}  // namespace pcv::dimer
