#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pcv/errors.hpp"
#include "pcv/galerkin/galerkin.hpp"

using namespace pcv::galerkin;

namespace {

TensorBasis paper_basis(int kq = 15, int kp = 10) {
    TensorBasis b;
    b.kq = kq;
    b.kp = kp;
    return b;
}

TensorBasis free_basis(double gamma, int kq = 5, int kp = 4) {
    TensorBasis b;
    b.kq = kq;
    b.kp = kp;
    b.gamma = gamma;
    b.potential = PeriodicPotential::flat();
    return b;
}

}  // namespace

TEST(TensorBasis, Validation) {
    auto b = paper_basis();
    EXPECT_EQ(b.size(), 149u);
    EXPECT_EQ(b.index(0, 1), 0u);
    EXPECT_EQ(b.index(1, 0), 9u);
    b.kq = 4;
    EXPECT_THROW(b.validate(), pcv::InvalidArgument);
    b.kq = 5;
    b.kp = 1;
    EXPECT_THROW(b.validate(), pcv::InvalidArgument);
}

TEST(Galerkin, PositionFactorsOrthonormal) {
    const auto g = position_gram(paper_basis());
    EXPECT_LT((g - pcv::numerics::DenseMatrix::Identity(g.rows(), g.cols())).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(Galerkin, FreeParticleSolutionIsMomentumOverGamma) {
    for (double gamma : {0.5, 1.0, 4.0}) {
        const auto sol = solve(free_basis(gamma));
        EXPECT_NEAR(mobility(sol), 1.0 / gamma, 1e-10);
        for (int k = 0; k < sol.basis.kq; ++k) {
            for (int l = 0; l < sol.basis.kp; ++l) {
                if (k == 0 && l == 0) continue;
                if (k == 0 && l == 1) continue;
                EXPECT_LT(std::abs(sol.coefficient(k, l)), 1e-10);
            }
        }
        std::mt19937_64 gen(1);
        std::normal_distribution<double> g;
        for (int i = 0; i < 20; ++i) {
            const double q = std::abs(g(gen)) * 2.0;
            const double p = 2.0 * g(gen);
            EXPECT_NEAR(eval_phi(sol, q, p), p / gamma, 1e-10);
            EXPECT_NEAR(eval_modified(sol, q, p, 0.0), 0.0, 1e-10);
        }
        EXPECT_NEAR(cv_prefactor(sol), 0.0, 1e-12);
    }
}

TEST(Galerkin, FreeMobilityDecreasesWithFriction) {
    double last = INFINITY;
    for (double gamma : {0.5, 1.0, 2.0, 8.0, 32.0}) {
        const double d = mobility(solve(free_basis(gamma)));
        EXPECT_LT(d, last);
        last = d;
    }
}

TEST(Galerkin, SymmetricPartIsTheFrictionBlock) {
    const auto basis = paper_basis(7, 5);
    const auto as = assemble(basis);
    const pcv::numerics::DenseMatrix sym = 0.5 * (as.stiffness + as.stiffness.transpose());
    for (int k = 0; k < basis.kq; ++k) {
        for (int l = 0; l < basis.kp; ++l) {
            if (k == 0 && l == 0) continue;
            const auto i = static_cast<Eigen::Index>(basis.index(k, l));
            for (Eigen::Index j = 0; j < sym.cols(); ++j) {
                const double expected = (j == i) ? basis.gamma * l / basis.m : 0.0;
                EXPECT_NEAR(sym(i, j), expected, 1e-10) << "k=" << k << " l=" << l << " j=" << j;
            }
        }
    }
    // B = −stiffness has a negative semidefinite symmetric part.
    Eigen::SelfAdjointEigenSolver<pcv::numerics::DenseMatrix> eig(-sym);
    EXPECT_LE(eig.eigenvalues().maxCoeff(), 1e-10);
}

TEST(Galerkin, LinearSystemResidual) {
    const auto sol = solve(paper_basis());
    EXPECT_LT(sol.residual, 1e-10);
    const pcv::numerics::Vector r = sol.stiffness * sol.a - sol.g;
    EXPECT_LT(r.lpNorm<Eigen::Infinity>(), 1e-10 * sol.g.lpNorm<Eigen::Infinity>());
}

TEST(Galerkin, RightHandSideOnlyOnHermiteOne) {
    const auto sol = solve(paper_basis());
    for (int k = 0; k < sol.basis.kq; ++k) {
        for (int l = 0; l < sol.basis.kp; ++l) {
            if ((k == 0 && l == 0) || l == 1) continue;
            EXPECT_EQ(sol.g[static_cast<Eigen::Index>(sol.basis.index(k, l))], 0.0);
        }
    }
}

TEST(Galerkin, PaperMobility) {
    const auto t0 = std::chrono::steady_clock::now();
    const double d = mobility(solve(paper_basis()));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_NEAR(d, 0.48, 0.03);
    EXPECT_LT(secs, 5.0);
    const double small = mobility(solve(paper_basis(5, 3)));
    EXPECT_GT(std::abs(small - d), 1e-2);
    const double mid = mobility(solve(paper_basis(9, 6)));
    EXPECT_LT(std::abs(mid - d), std::abs(small - d));
}

TEST(Galerkin, PrefactorNonNegative) {
    std::mt19937_64 gen(13);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        const double a1 = u(gen), b1 = u(gen), a2 = u(gen), b2 = u(gen);
        PeriodicPotential pot{
            [=](double q) { return a1 * std::cos(q) + b1 * std::sin(q) + a2 * std::cos(2 * q) + b2 * std::sin(2 * q); },
            [=](double q) {
                return -a1 * std::sin(q) + b1 * std::cos(q) - 2 * a2 * std::sin(2 * q) + 2 * b2 * std::cos(2 * q);
            }};
        auto basis = paper_basis(9, 6);
        basis.potential = pot;
        EXPECT_GE(cv_prefactor(solve(basis)), 0.0) << "trial " << trial;
    }
}

TEST(Galerkin, ModifiedObservableIsMomentumPlusGeneratorOfPhi) {
    // Finite-difference check of p/m + (L₀ + η∂_p)Φ₀ at a few points.
    const auto sol = solve(paper_basis(7, 5));
    const double eta = 0.3, h = 1e-5;
    for (double q : {0.2, 1.7, 4.0}) {
        for (double p : {-1.3, 0.1, 2.2}) {
            const double dq = (eval_phi(sol, q + h, p) - eval_phi(sol, q - h, p)) / (2 * h);
            const double dp = (eval_phi(sol, q, p + h) - eval_phi(sol, q, p - h)) / (2 * h);
            const double dpp =
                (eval_phi(sol, q, p + h) - 2 * eval_phi(sol, q, p) + eval_phi(sol, q, p - h)) / (h * h);
            const double lphi = p * dq - std::sin(q) * dp - p * dp + dpp + eta * dp;
            EXPECT_NEAR(eval_modified(sol, q, p, eta), p + lphi, 2e-4);
        }
    }
}

TEST(Galerkin, SolutionCsv) {
    const auto sol = solve(paper_basis(3, 2));
    std::ostringstream os;
    write_solution_csv(os, sol);
    const auto s = os.str();
    EXPECT_EQ(s.rfind("k,l,a\n", 0), 0u);
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 5);
}
