#include "pcv/dimer/dimer.hpp"

#include <cmath>
#include <numbers>
#include <type_traits>

#include "pcv/errors.hpp"
#include "pcv/stochastics/integrators.hpp"

namespace pcv::dimer {

using stochastics::minimum_image;
using stochastics::wrap;

std::string to_string(Solvent s) {
    switch (s) {
        case Solvent::none: return "none";
        case Solvent::soft: return "soft";
        case Solvent::coulomb: return "coulomb";
    }
    return "unknown";
}

Solvent solvent_from_string(const std::string& s) {
    if (s == "none") return Solvent::none;
    if (s == "soft") return Solvent::soft;
    if (s == "coulomb") return Solvent::coulomb;
    throw InvalidArgument("unknown solvent '" + s + "' (expected none, soft or coulomb)");
}

void DimerParams::validate() const {
    if (dim != 2) throw InvalidArgument("DimerParams: only d = 2 is supported");
    if (solvent != Solvent::none && n < 3) throw InvalidArgument("DimerParams: a solvated dimer needs n >= 3");
    if (!(box > 0.0) || !(beta > 0.0) || !(well.dr > 0.0) || !(well.h > 0.0)) {
        throw InvalidArgument("DimerParams: box, beta, h and dr must be positive");
    }
    if (solvent != Solvent::none) {
        if (!(eps > 0.0) || !(r_cut > 0.0)) throw InvalidArgument("DimerParams: eps and r_cut must be positive");
        if (!(r_cut < box / 2.0)) throw InvalidArgument("DimerParams: r_cut must be below L/2");
        if (solvent == Solvent::coulomb && !(sigma > 0.0 && sigma < r_cut)) {
            throw InvalidArgument("DimerParams: sigma must lie in (0, r_cut)");
        }
    }
    if (!std::isfinite(nu)) throw InvalidArgument("DimerParams: nu must be finite");
}

double pair_potential(const DimerParams& prm, PairKind kind, double r) {
    switch (kind) {
        case PairKind::dimer: return prm.well.v(r);
        case PairKind::soft: {
            if (r >= prm.r_cut) return 0.0;
            const double x = 1.0 - r / prm.r_cut;
            return prm.eps * x * x;
        }
        case PairKind::coulomb: {
            if (r >= prm.r_cut) return 0.0;
            if (!(r > 0.0)) throw NonFiniteValue("coulomb-like potential at zero separation");
            const double ic = 1.0 / std::sqrt(prm.r_cut);
            const double scale = 1.0 / std::sqrt(prm.sigma) - ic;
            const double x = (1.0 / std::sqrt(r) - ic) / scale;
            return prm.eps * x * x;
        }
    }
    return 0.0;
}

double pair_potential_derivative(const DimerParams& prm, PairKind kind, double r) {
    switch (kind) {
        case PairKind::dimer: return prm.well.vprime(r);
        case PairKind::soft:
            if (r >= prm.r_cut) return 0.0;
            return -2.0 * prm.eps / prm.r_cut * (1.0 - r / prm.r_cut);
        case PairKind::coulomb: {
            if (r >= prm.r_cut) return 0.0;
            if (!(r > 0.0)) throw NonFiniteValue("coulomb-like potential at zero separation");
            const double ic = 1.0 / std::sqrt(prm.r_cut);
            const double scale = 1.0 / std::sqrt(prm.sigma) - ic;
            const double isr = 1.0 / std::sqrt(r);
            return -prm.eps / (scale * scale) * (isr - ic) * isr / r;
        }
    }
    return 0.0;
}

std::array<double, 2> pair_force(const DimerParams& prm, PairKind kind, std::array<double, 2> d) {
    const double r = std::hypot(d[0], d[1]);
    if (!(r > 0.0)) {
        if (kind == PairKind::coulomb) throw NonFiniteValue("pair_force: zero separation");
        return {0.0, 0.0};
    }
    const double c = -pair_potential_derivative(prm, kind, r) / r;
    return {c * d[0], c * d[1]};
}

double shear_force(double qx, double nu, double box) noexcept {
    return nu * std::sin(2.0 * std::numbers::pi * qx / box);
}

DimerSystem::DimerSystem(const DimerParams& prm) : prm_(prm) {
    prm_.validate();
    const int n = prm_.particles();
    q_.assign(static_cast<std::size_t>(2 * n), 0.0);
    const double l = prm_.box;
    if (n == 2) {
        const double len = prm_.well.r0 - prm_.well.dr;
        q_ = {0.5 * (l - len), 0.5 * l, 0.5 * (l + len), 0.5 * l};
    } else {
        // Square lattice; the dimer takes sites 0 and 2 of the first row.
        int side = 1;
        while (side * side < n) ++side;
        const double a = l / side;
        std::vector<std::array<double, 2>> sites;
        for (int iy = 0; iy < side; ++iy) {
            for (int ix = 0; ix < side; ++ix) sites.push_back({(ix + 0.5) * a, (iy + 0.5) * a});
        }
        q_[0] = sites[0][0];
        q_[1] = sites[0][1];
        q_[2] = sites[2][0];
        q_[3] = sites[2][1];
        std::size_t next = 1;
        for (int i = 2; i < n; ++i) {
            if (next == 2) ++next;
            q_[static_cast<std::size_t>(2 * i)] = sites[next][0];
            q_[static_cast<std::size_t>(2 * i + 1)] = sites[next][1];
            ++next;
        }
    }
    bond_ = {minimum_image(q_[2] - q_[0], l), minimum_image(q_[3] - q_[1], l)};
    compute_forces();
}

void DimerSystem::set_positions(std::vector<double> q) {
    if (q.size() != q_.size()) throw InvalidArgument("DimerSystem::set_positions: size mismatch");
    for (auto& x : q) x = wrap(x, prm_.box);
    q_ = std::move(q);
    bond_ = {minimum_image(q_[2] - q_[0], prm_.box), minimum_image(q_[3] - q_[1], prm_.box)};
    compute_forces();
}

double DimerSystem::length() const noexcept { return std::hypot(bond_[0], bond_[1]); }

void DimerSystem::compute_forces() {
    const std::size_t n = q_.size() / 2;
    const double l = prm_.box;
    f_.assign(q_.size(), 0.0);

    const double r12 = length();
    if (!(r12 > 0.0)) throw NonFiniteValue("dimer particles coincide");
    const double cd = -prm_.well.vprime(r12) / r12;
    f_[2] += cd * bond_[0];
    f_[3] += cd * bond_[1];
    f_[0] -= cd * bond_[0];
    f_[1] -= cd * bond_[1];

    if (prm_.solvent == Solvent::none) return;
    const double rc2 = prm_.r_cut * prm_.r_cut;
    const double half = 0.5 * l;
    const double rc = prm_.r_cut;
    const double ic = 1.0 / std::sqrt(rc);
    const double scale = 1.0 / std::sqrt(prm_.sigma) - ic;
    const double soft_c = 2.0 * prm_.eps / rc;
    const double coul_c = prm_.eps / (scale * scale);

    xs_.resize(n);
    ys_.resize(n);
    fx_.assign(n, 0.0);
    fy_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        xs_[i] = q_[2 * i];
        ys_[i] = q_[2 * i + 1];
    }
    double* __restrict fx = fx_.data();
    double* __restrict fy = fy_.data();
    const double* __restrict xs = xs_.data();
    const double* __restrict ys = ys_.data();
    auto sweep = [&](auto coulomb) {
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = xs[i];
            const double yi = ys[i];
            double fxi = 0.0;
            double fyi = 0.0;
            for (std::size_t j = std::max<std::size_t>(i + 1, 2); j < n; ++j) {
                double dx = xs[j] - xi;
                double dy = ys[j] - yi;
                dx += l * (static_cast<double>(dx < -half) - static_cast<double>(dx > half));
                dy += l * (static_cast<double>(dy < -half) - static_cast<double>(dy > half));
                const double r2 = dx * dx + dy * dy;
                const double ir = 1.0 / std::sqrt(r2);
                double c;
                if constexpr (decltype(coulomb)::value) {
                    const double isr = std::sqrt(ir);
                    c = coul_c * (isr - ic) * isr * ir * ir;
                } else {
                    c = soft_c * (ir - 1.0 / rc);
                }
                c *= static_cast<double>(r2 < rc2);
                fx[j] += c * dx;
                fy[j] += c * dy;
                fxi -= c * dx;
                fyi -= c * dy;
            }
            fx[i] += fxi;
            fy[i] += fyi;
        }
    };
    if (prm_.solvent == Solvent::coulomb) {
        sweep(std::true_type{});
    } else {
        sweep(std::false_type{});
    }
    for (std::size_t i = 0; i < n; ++i) {
        f_[2 * i] += fx[i];
        f_[2 * i + 1] += fy[i];
    }
}

void DimerSystem::resync_bond() {
    const double l = prm_.box;
    const double dx = q_[2] - q_[0];
    const double dy = q_[3] - q_[1];
    bond_[0] = dx - l * std::round((dx - bond_[0]) / l);
    bond_[1] = dy - l * std::round((dy - bond_[1]) / l);
}

void DimerSystem::step(double dt, stochastics::RngStream& rng, std::uint64_t k) {
    drift_ = f_;
    if (prm_.nu != 0.0) {
        for (std::size_t i = 0; i < q_.size() / 2; ++i) drift_[2 * i + 1] += shear_force(q_[2 * i], prm_.nu, prm_.box);
    }
    stochastics::em_update(q_, drift_, prm_.beta, dt, prm_.box, rng, k);
    resync_bond();
    compute_forces();
    for (double x : f_) {
        if (!std::isfinite(x)) throw IntegrationDiverged(k, "non-finite dimer force");
    }
}

double eval_modified_length(const DimerSystem& sys, const RadialProfile& profile, std::uint64_t* clamped) {
    const auto& prm = sys.params();
    const auto& q = sys.positions();
    const auto& f = sys.internal_forces();
    const auto b = sys.bond();
    const double r = std::hypot(b[0], b[1]);
    if (r >= profile.r_max()) {
        if (clamped) ++*clamped;
        return r;
    }
    const double ux = b[0] / r;
    const double uy = b[1] / r;
    // ∇_{q_i}V = −f_i.
    const double shear = shear_force(q[0], prm.nu, prm.box) - shear_force(q[2], prm.nu, prm.box);
    const double proj = 0.5 * ((f[2] - f[0]) * ux + (f[3] - f[1]) * uy - shear * uy);
    const double radial = proj + static_cast<double>(prm.dim - 1) / (prm.beta * r);
    return r + profile.psi2(r) / prm.beta + radial * profile.psi1(r);
}

}  // namespace pcv::dimer
