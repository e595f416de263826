#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "pcv/numerics/linalg.hpp"

namespace pcv::galerkin {

// 2π-periodic potential v and its derivative v′.
struct PeriodicPotential {
    std::function<double(double)> v;
    std::function<double(double)> dv;

    static PeriodicPotential cosine(double amplitude = 1.0);  // amplitude·(1 − cos q)
    static PeriodicPotential flat();
};

// Tensor basis Q_k(q)·φ_l(p·sqrt(β/m)) for the Langevin generator
//   L₀ = (p/m)∂_q − v′(q)∂_p − (γ/m)p∂_p + (γ/β)∂_p².
// Q_k = sqrt(Z)·e^{βv/2}·c_k·t_k with t_k ∈ {1, cos q, sin q, cos 2q, …} and c_k the L²(dq) normalisation,
// φ_l = He_l/sqrt(l!). The pair (0,0) is excluded; Hermite-degree-0 functions are centred under π₀.
struct TensorBasis {
    int kq = 15;
    int kp = 10;
    double m = 1.0;
    double gamma = 1.0;
    double beta = 1.0;
    PeriodicPotential potential = PeriodicPotential::cosine();
    std::size_t quadrature_nodes = 1024;

    void validate() const;
    std::size_t size() const noexcept { return static_cast<std::size_t>(kq * kp - 1); }
    std::size_t index(int k, int l) const noexcept { return static_cast<std::size_t>(k * kp + l - 1); }
};

struct Assembly {
    numerics::DenseMatrix stiffness;  // ⟨e_i, −L₀ e_j⟩
    numerics::Vector rhs;             // ⟨e_i, p/m⟩
    numerics::Vector position_means;  // ⟨Q_k⟩ under π₀
    double partition = 0.0;           // Z = ∫ e^{−βv} dq
};

Assembly assemble(const TensorBasis& basis);

// Gram matrix of the position factors Q_k under Z⁻¹e^{−βv}dq, by periodic trapezoid.
numerics::DenseMatrix position_gram(const TensorBasis& basis);

struct GalerkinSolution {
    TensorBasis basis;
    numerics::Vector a;
    numerics::Vector g;
    numerics::DenseMatrix stiffness;
    numerics::Vector position_means;
    double partition = 0.0;
    double residual = 0.0;  // ‖stiffness·a − g‖∞ / ‖g‖∞

    double coefficient(int k, int l) const { return a[static_cast<Eigen::Index>(basis.index(k, l))]; }
};

GalerkinSolution solve(const TensorBasis& basis);

// D = β⟨R, Φ₀⟩.
double mobility(const GalerkinSolution& sol);

// α = ⟨Π₀AR, −L₀⁻¹Π₀AR⟩ with AR = −∂_pΦ₀ (second Galerkin solve on the same basis).
double cv_prefactor(const GalerkinSolution& sol);

// Φ₀ approximation at (q, p).
double eval_phi(const GalerkinSolution& sol, double q, double p);

// p/m + (L₀ + η∂_p)Φ₀(q, p).
double eval_modified(const GalerkinSolution& sol, double q, double p, double eta);

void write_solution_csv(std::ostream& os, const GalerkinSolution& sol);

}  // namespace pcv::galerkin
