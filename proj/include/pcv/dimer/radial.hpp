#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace pcv::dimer {

// v(r) = h·[1 − ((r − r₀)/Δr)²]²
struct DoubleWell {
    double h = 1.0;
    double r0 = 3.0;
    double dr = 1.0;

    double v(double r) const noexcept {
        const double x = (r - r0) / dr;
        const double y = 1.0 - x * x;
        return h * y * y;
    }
    double vprime(double r) const noexcept {
        const double x = (r - r0) / dr;
        return -4.0 * h * x * (1.0 - x * x) / dr;
    }
};

// Solution φ = ψ′ of β⁻¹φ′ = r★ − r + v★′φ with v★ = v − ((d−1)/β)·ln r, on a uniform grid of [0, r_max].
// φ is interpolated piecewise-affinely; ψ″ = φ′ is the slope of the cell.
struct RadialProfile {
    DoubleWell well;
    double beta = 1.0;
    int dim = 2;
    double h = 1e-3;
    double r_star = 0.0;
    std::size_t argmin = 0;  // node index of the minimum of v★
    std::vector<double> phi;

    double r_max() const noexcept { return h * static_cast<double>(phi.size() - 1); }
    double node(std::size_t k) const noexcept { return h * static_cast<double>(k); }
    double vstar_prime(double r) const noexcept;
    // Interpolated ψ′ and ψ″; both vanish beyond r_max.
    double psi1(double r) const noexcept;
    double psi2(double r) const noexcept;
    // Cell slope to the left of node k (the first cell for k = 0).
    double node_slope(std::size_t k) const noexcept;
};

RadialProfile solve_radial_poisson(const DoubleWell& well, double beta, int dim = 2, double h = 1e-3,
                                   double r_max = 10.0);

void write_profile_csv(std::ostream& os, const RadialProfile& profile);

}  // namespace pcv::dimer
