#include "pcv/numerics/linalg.hpp"

#include <cmath>

#include "pcv/errors.hpp"

namespace pcv::numerics {

double inf_norm(const DenseMatrix& a) {
    if (a.size() == 0) return 0.0;
    return a.cwiseAbs().rowwise().sum().maxCoeff();
}

DenseSolve solve_dense(const DenseMatrix& a, const Vector& b) {
    if (a.rows() != a.cols()) throw InvalidArgument("solve_dense: matrix is not square");
    if (a.rows() != b.size()) throw InvalidArgument("solve_dense: dimension mismatch");
    if (!a.allFinite() || !b.allFinite()) throw NonFiniteValue("solve_dense: non-finite input");

    Eigen::PartialPivLU<DenseMatrix> lu(a);
    const auto& packed = lu.matrixLU();
    for (Eigen::Index i = 0; i < packed.rows(); ++i) {
        if (packed(i, i) == 0.0) throw SingularMatrix("solve_dense: exactly singular matrix");
    }

    DenseSolve out;
    out.x = lu.solve(b);
    if (!out.x.allFinite()) throw SingularMatrix("solve_dense: non-finite solution");
    const double bnorm = b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
    const double xnorm = out.x.size() ? out.x.cwiseAbs().maxCoeff() : 0.0;
    out.residual = b.size() ? (a * out.x - b).cwiseAbs().maxCoeff() : 0.0;
    out.residual_bound = 1e-10 * (inf_norm(a) * xnorm + bnorm);
    out.ill_conditioned = out.residual > out.residual_bound;
    return out;
}

ChainMatrices chain_matrices(int n_particles, double nu) {
    if (n_particles < 2) throw InvalidArgument("chain_matrices: need at least two particles");
    const Eigen::Index n = 2 * n_particles - 1;
    ChainMatrices m;
    m.j = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m.j(i, i + 1) = 1.0;
    m.s = DenseMatrix::Zero(n, n);
    m.s(0, 0) = 1.0;
    m.s(n - 1, n - 1) = 1.0;
    m.r = DenseMatrix::Zero(n, n);
    m.r(0, 0) = 1.0;
    m.r(n - 1, n - 1) = -1.0;
    m.a = nu * (m.j - m.j.transpose()) - m.s;
    m.k = -(nu * (m.j + m.j.transpose()) + m.r) / (2.0 * (1.0 + nu * nu));
    return m;
}

double lyapunov_residual(int n_particles, double nu) {
    const auto m = chain_matrices(n_particles, nu);
    const DenseMatrix lhs = m.a.transpose() * m.k + m.k * m.a;
    return (lhs - m.r).cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace pcv::numerics
