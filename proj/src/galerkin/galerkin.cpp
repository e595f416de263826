#include "pcv/galerkin/galerkin.hpp"

#include <cmath>
#include <numbers>
#include <ostream>

#include "pcv/csv.hpp"
#include "pcv/errors.hpp"

namespace pcv::galerkin {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Normalised trigonometric family c_k·t_k and derivatives at q.
void trig_family(int kq, double q, std::vector<double>& t, std::vector<double>& dt) {
    t.assign(static_cast<std::size_t>(kq), 0.0);
    dt.assign(static_cast<std::size_t>(kq), 0.0);
    const double c0 = 1.0 / std::sqrt(two_pi);
    const double cj = 1.0 / std::sqrt(std::numbers::pi);
    t[0] = c0;
    const double c1 = std::cos(q);
    const double s1 = std::sin(q);
    double c = c1;
    double s = s1;
    for (int j = 1; 2 * j - 1 < kq; ++j) {
        const auto ic = static_cast<std::size_t>(2 * j - 1);
        const auto is = static_cast<std::size_t>(2 * j);
        t[ic] = cj * c;
        dt[ic] = -cj * j * s;
        if (2 * j < kq) {
            t[is] = cj * s;
            dt[is] = cj * j * c;
        }
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
}

// Orthonormal probabilists' Hermite functions φ_0..φ_{kp−1} at u.
void hermite(int kp, double u, std::vector<double>& h) {
    h.assign(static_cast<std::size_t>(kp), 0.0);
    h[0] = 1.0;
    if (kp > 1) h[1] = u;
    for (int l = 1; l + 1 < kp; ++l) {
        const auto i = static_cast<std::size_t>(l);
        h[i + 1] = (u * h[i] - std::sqrt(static_cast<double>(l)) * h[i - 1]) / std::sqrt(static_cast<double>(l + 1));
    }
}

struct QuadratureTables {
    std::vector<std::vector<double>> t;   // [k][node]
    std::vector<std::vector<double>> dt;  // [k][node]
    std::vector<double> v;
    std::vector<double> dv;
    double weight = 0.0;
    double partition = 0.0;
};

QuadratureTables tabulate(const TensorBasis& basis) {
    QuadratureTables tab;
    const std::size_t nq = basis.quadrature_nodes;
    tab.weight = two_pi / static_cast<double>(nq);
    tab.t.assign(static_cast<std::size_t>(basis.kq), std::vector<double>(nq));
    tab.dt = tab.t;
    tab.v.resize(nq);
    tab.dv.resize(nq);
    std::vector<double> t;
    std::vector<double> dt;
    double z = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        const double q = tab.weight * static_cast<double>(i);
        trig_family(basis.kq, q, t, dt);
        for (int k = 0; k < basis.kq; ++k) {
            tab.t[static_cast<std::size_t>(k)][i] = t[static_cast<std::size_t>(k)];
            tab.dt[static_cast<std::size_t>(k)][i] = dt[static_cast<std::size_t>(k)];
        }
        tab.v[i] = basis.potential.v(q);
        tab.dv[i] = basis.potential.dv(q);
        if (!std::isfinite(tab.v[i]) || !std::isfinite(tab.dv[i])) throw NonFiniteValue("potential is not finite");
        z += std::exp(-basis.beta * tab.v[i]);
    }
    tab.partition = z * tab.weight;
    return tab;
}

}  // namespace

PeriodicPotential PeriodicPotential::cosine(double amplitude) {
    return {[amplitude](double q) { return amplitude * (1.0 - std::cos(q)); },
            [amplitude](double q) { return amplitude * std::sin(q); }};
}

PeriodicPotential PeriodicPotential::flat() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

void TensorBasis::validate() const {
    if (kq < 1 || kq % 2 == 0) throw InvalidArgument("TensorBasis: K_q must be odd and positive");
    if (kp < 2) throw InvalidArgument("TensorBasis: K_p must be at least 2");
    if (!(m > 0.0) || !(gamma > 0.0) || !(beta > 0.0)) throw InvalidArgument("TensorBasis: m, gamma, beta must be positive");
    if (!potential.v || !potential.dv) throw InvalidArgument("TensorBasis: potential not set");
    if (quadrature_nodes < 16) throw InvalidArgument("TensorBasis: too few quadrature nodes");
}

numerics::DenseMatrix position_gram(const TensorBasis& basis) {
    basis.validate();
    const auto tab = tabulate(basis);
    const auto kq = static_cast<Eigen::Index>(basis.kq);
    numerics::DenseMatrix gram = numerics::DenseMatrix::Zero(kq, kq);
    // Q_k Q_l Z⁻¹e^{−βv} = c_k t_k c_l t_l: the Gibbs weight cancels.
    for (Eigen::Index a = 0; a < kq; ++a) {
        for (Eigen::Index b = 0; b < kq; ++b) {
            double s = 0.0;
            const auto& ta = tab.t[static_cast<std::size_t>(a)];
            const auto& tb = tab.t[static_cast<std::size_t>(b)];
            for (std::size_t i = 0; i < ta.size(); ++i) s += ta[i] * tb[i];
            gram(a, b) = s * tab.weight;
        }
    }
    return gram;
}

Assembly assemble(const TensorBasis& basis) {
    basis.validate();
    const auto tab = tabulate(basis);
    const int kq = basis.kq;
    const int kp = basis.kp;
    const std::size_t nq = basis.quadrature_nodes;
    const double half_beta = 0.5 * basis.beta;

    numerics::DenseMatrix up(kq, kq);
    numerics::DenseMatrix down(kq, kq);
    for (int a = 0; a < kq; ++a) {
        for (int b = 0; b < kq; ++b) {
            const auto& ta = tab.t[static_cast<std::size_t>(a)];
            const auto& tb = tab.t[static_cast<std::size_t>(b)];
            const auto& db = tab.dt[static_cast<std::size_t>(b)];
            double su = 0.0;
            double sd = 0.0;
            for (std::size_t i = 0; i < nq; ++i) {
                su += ta[i] * (db[i] + half_beta * tab.dv[i] * tb[i]);
                sd += ta[i] * (db[i] - half_beta * tab.dv[i] * tb[i]);
            }
            up(a, b) = su * tab.weight;
            down(a, b) = sd * tab.weight;
        }
    }

    Assembly out;
    out.partition = tab.partition;
    out.position_means.resize(kq);
    for (int k = 0; k < kq; ++k) {
        double s = 0.0;
        const auto& t = tab.t[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < nq; ++i) s += t[i] * std::exp(-half_beta * tab.v[i]);
        out.position_means[k] = s * tab.weight / std::sqrt(tab.partition);
    }

    const auto n = static_cast<Eigen::Index>(basis.size());
    numerics::DenseMatrix gen = numerics::DenseMatrix::Zero(n, n);  // ⟨e_i, L₀ e_j⟩
    const double scale = 1.0 / std::sqrt(basis.m * basis.beta);
    for (int k = 0; k < kq; ++k) {
        for (int l = 0; l < kp; ++l) {
            if (k == 0 && l == 0) continue;
            const auto col = static_cast<Eigen::Index>(basis.index(k, l));
            gen(col, col) -= basis.gamma * l / basis.m;
            for (int kk = 0; kk < kq; ++kk) {
                if (l + 1 < kp) {
                    const auto row = static_cast<Eigen::Index>(basis.index(kk, l + 1));
                    gen(row, col) += std::sqrt(static_cast<double>(l + 1)) * scale * up(kk, k);
                }
                if (l >= 1 && !(kk == 0 && l == 1)) {
                    const auto row = static_cast<Eigen::Index>(basis.index(kk, l - 1));
                    gen(row, col) += std::sqrt(static_cast<double>(l)) * scale * down(kk, k);
                }
            }
        }
    }
    out.stiffness = -gen;
    out.rhs = numerics::Vector::Zero(n);
    for (int k = 0; k < kq; ++k) {
        out.rhs[static_cast<Eigen::Index>(basis.index(k, 1))] = scale * out.position_means[k];
    }
    return out;
}

GalerkinSolution solve(const TensorBasis& basis) {
    auto asmb = assemble(basis);
    const auto lin = numerics::solve_dense(asmb.stiffness, asmb.rhs);
    GalerkinSolution sol;
    sol.basis = basis;
    sol.a = lin.x;
    sol.g = asmb.rhs;
    sol.stiffness = std::move(asmb.stiffness);
    sol.position_means = std::move(asmb.position_means);
    sol.partition = asmb.partition;
    const double gnorm = sol.g.cwiseAbs().maxCoeff();
    sol.residual = lin.residual / (gnorm > 0.0 ? gnorm : 1.0);
    return sol;
}

double mobility(const GalerkinSolution& sol) { return sol.basis.beta * sol.a.dot(sol.g); }

double cv_prefactor(const GalerkinSolution& sol) {
    const auto& b = sol.basis;
    // ∂_pΦ₀ in the raw tensor basis: ∂_p φ_l = sqrt(β/m)·sqrt(l)·φ_{l−1}.
    numerics::DenseMatrix dp = numerics::DenseMatrix::Zero(b.kq, b.kp);
    const double sp = std::sqrt(b.beta / b.m);
    for (int k = 0; k < b.kq; ++k) {
        for (int l = 1; l < b.kp; ++l) dp(k, l - 1) = sol.coefficient(k, l) * sp * std::sqrt(static_cast<double>(l));
    }
    double mean = 0.0;
    for (int k = 0; k < b.kq; ++k) mean += dp(k, 0) * sol.position_means[k];

    numerics::Vector g2 = numerics::Vector::Zero(static_cast<Eigen::Index>(b.size()));
    for (int k = 0; k < b.kq; ++k) {
        for (int l = 0; l < b.kp; ++l) {
            if (k == 0 && l == 0) continue;
            double v = dp(k, l);
            if (l == 0) v -= sol.position_means[k] * mean;
            g2[static_cast<Eigen::Index>(b.index(k, l))] = v;
        }
    }
    const auto lin = numerics::solve_dense(sol.stiffness, g2);
    return lin.x.dot(g2);
}

namespace {

struct PointValues {
    std::vector<double> q;   // Q_k
    std::vector<double> dq;  // Q_k′
    std::vector<double> h;   // φ_l(u)
    double dv = 0.0;
};

void point_values(const GalerkinSolution& sol, double q, double p, PointValues& pv) {
    const auto& b = sol.basis;
    std::vector<double> t;
    std::vector<double> dt;
    trig_family(b.kq, q, t, dt);
    const double v = b.potential.v(q);
    pv.dv = b.potential.dv(q);
    const double pre = std::sqrt(sol.partition) * std::exp(0.5 * b.beta * v);
    pv.q.resize(t.size());
    pv.dq.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        pv.q[k] = pre * t[k];
        pv.dq[k] = pre * (0.5 * b.beta * pv.dv * t[k] + dt[k]);
    }
    hermite(b.kp, p * std::sqrt(b.beta / b.m), pv.h);
}

}  // namespace

double eval_phi(const GalerkinSolution& sol, double q, double p) {
    thread_local PointValues pv;
    point_values(sol, q, p, pv);
    const auto& b = sol.basis;
    double s = 0.0;
    for (int k = 0; k < b.kq; ++k) {
        for (int l = 0; l < b.kp; ++l) {
            if (k == 0 && l == 0) continue;
            double e = pv.q[static_cast<std::size_t>(k)] * pv.h[static_cast<std::size_t>(l)];
            if (l == 0) e -= sol.position_means[k];
            s += sol.coefficient(k, l) * e;
        }
    }
    return s;
}

double eval_modified(const GalerkinSolution& sol, double q, double p, double eta) {
    thread_local PointValues pv;
    point_values(sol, q, p, pv);
    const auto& b = sol.basis;
    const double sp = std::sqrt(b.beta / b.m);
    const double vel = p / b.m;
    const double drift = eta - pv.dv;
    double s = vel;
    for (int k = 0; k < b.kq; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        for (int l = 0; l < b.kp; ++l) {
            if (k == 0 && l == 0) continue;
            const auto lu = static_cast<std::size_t>(l);
            double e = vel * pv.dq[ku] * pv.h[lu] - b.gamma * l / b.m * pv.q[ku] * pv.h[lu];
            if (l > 0) e += drift * pv.q[ku] * sp * std::sqrt(static_cast<double>(l)) * pv.h[lu - 1];
            s += sol.coefficient(k, l) * e;
        }
    }
    return s;
}

void write_solution_csv(std::ostream& os, const GalerkinSolution& sol) {
    os << "k,l,a\n";
    for (int k = 0; k < sol.basis.kq; ++k) {
        for (int l = 0; l < sol.basis.kp; ++l) {
            if (k == 0 && l == 0) continue;
            os << k << ',' << l << ',' << fmt17(sol.coefficient(k, l)) << '\n';
        }
    }
}

}  // namespace pcv::galerkin
