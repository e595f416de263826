#pragma once

#include <Eigen/Dense>

namespace pcv::numerics {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct DenseSolve {
    Vector x;
    double residual = 0.0;        // ‖Ax − b‖∞
    double residual_bound = 0.0;  // 1e-10·(‖A‖∞‖x‖∞ + ‖b‖∞)
    bool ill_conditioned = false;
};

// LU with partial pivoting. Throws SingularMatrix on an exactly zero pivot.
DenseSolve solve_dense(const DenseMatrix& a, const Vector& b);

double inf_norm(const DenseMatrix& a);

struct ChainMatrices {
    DenseMatrix j, s, r, a, k;
};

// Harmonic-chain matrices in dimension 2N−1: J superdiagonal ones, S = diag(1,0,…,0,1),
// R = diag(1,0,…,0,−1), A = ν(J − Jᵀ) − S, K = −(ν(J + Jᵀ) + R)/(2(1 + ν²)).
ChainMatrices chain_matrices(int n_particles, double nu);

// ‖AᵀK + KA − R‖∞
double lyapunov_residual(int n_particles, double nu);

}  // namespace pcv::numerics
