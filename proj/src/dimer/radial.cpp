#include "pcv/dimer/radial.hpp"

#include <cmath>
#include <ostream>

#include <boost/math/quadrature/gauss.hpp>

#include "pcv/csv.hpp"
#include "pcv/errors.hpp"
#include "pcv/numerics/quadrature.hpp"

namespace pcv::dimer {

namespace {

using Gauss = boost::math::quadrature::gauss<double, 8>;

// ∫_a^b β(r★ − s)·exp(ℓ(s) − anchor) ds with ℓ(s) = (d−1) ln s − βv(s).
template <class LogWeight>
double cell_integral(double a, double b, double anchor, double beta, double r_star, LogWeight&& log_weight) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    auto f = [&](double s) { return beta * (r_star - s) * std::exp(log_weight(s) - anchor); };
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            sum += w[i] * f(mid);
        } else {
            sum += w[i] * (f(mid - half * x[i]) + f(mid + half * x[i]));
        }
    }
    return half * sum;
}

}  // namespace

double RadialProfile::vstar_prime(double r) const noexcept {
    return well.vprime(r) - static_cast<double>(dim - 1) / (beta * r);
}

double RadialProfile::node_slope(std::size_t k) const noexcept {
    if (k == 0) k = 1;
    return (phi[k] - phi[k - 1]) / h;
}

double RadialProfile::psi1(double r) const noexcept {
    if (!(r >= 0.0) || r >= r_max()) return 0.0;
    const auto k = static_cast<std::size_t>(r / h);
    if (k + 1 >= phi.size()) return 0.0;
    const double t = r - node(k);
    return phi[k] + t * (phi[k + 1] - phi[k]) / h;
}

double RadialProfile::psi2(double r) const noexcept {
    if (!(r >= 0.0) || r >= r_max()) return 0.0;
    const auto k = static_cast<std::size_t>(r / h);
    if (k + 1 >= phi.size()) return 0.0;
    return (phi[k + 1] - phi[k]) / h;
}

RadialProfile solve_radial_poisson(const DoubleWell& well, double beta, int dim, double h, double r_max) {
    if (!(beta > 0.0) || !(h > 0.0) || !(r_max > h) || dim < 1 || !(well.dr > 0.0)) {
        throw InvalidArgument("solve_radial_poisson: invalid parameters");
    }
    const auto n = static_cast<std::size_t>(std::llround(r_max / h)) + 1;
    const auto grid = numerics::Grid1D::uniform(0.0, h * static_cast<double>(n - 1), n);
    const double dm1 = static_cast<double>(dim - 1);

    auto log_weight = [&](double s) { return dm1 * std::log(s) - beta * well.v(s); };

    std::vector<double> ell(n);
    ell[0] = dim > 1 ? -INFINITY : -beta * well.v(0.0);
    std::size_t im = 1;
    for (std::size_t k = 1; k < n; ++k) {
        ell[k] = log_weight(grid[k]);
        if (ell[k] > ell[im]) im = k;
    }
    if (im + 1 >= n) throw DomainTooSmall("solve_radial_poisson: v★ has no minimum inside [0, r_max]; increase r_max");
    if (ell[n - 1] - ell[im] > std::log(1e-12)) {
        throw DomainTooSmall("solve_radial_poisson: Gibbs weight has not decayed at r_max; increase r_max");
    }

    std::vector<double> weight(n);
    std::vector<double> moment(n);
    for (std::size_t k = 0; k < n; ++k) {
        weight[k] = std::exp(ell[k] - ell[im]);
        moment[k] = grid[k] * weight[k];
    }
    const double r_star = numerics::simpson(grid, moment) / numerics::simpson(grid, weight);

    RadialProfile prof;
    prof.well = well;
    prof.beta = beta;
    prof.dim = dim;
    prof.h = grid.spacing();
    prof.r_star = r_star;
    prof.argmin = im;
    prof.phi.assign(n, 0.0);

    // Left form φ(r) = e^{βv★(r)}∫₀ʳ β(r★ − s)e^{−βv★(s)}ds, accumulated cell by cell in scaled form.
    double acc = 0.0;
    for (std::size_t k = 1; k <= im; ++k) {
        const double carry = k > 1 ? std::exp(ell[k - 1] - ell[k]) * acc : 0.0;
        acc = cell_integral(grid[k - 1], grid[k], ell[k], beta, r_star, log_weight) + carry;
        prof.phi[k] = acc;
    }
    // Tail form φ(r) = −e^{βv★(r)}∫_r^{r_max} β(r★ − s)e^{−βv★(s)}ds.
    acc = 0.0;
    for (std::size_t k = n - 1; k-- > im + 1;) {
        acc = cell_integral(grid[k], grid[k + 1], ell[k], beta, r_star, log_weight) +
              std::exp(ell[k + 1] - ell[k]) * acc;
        prof.phi[k] = -acc;
    }
    prof.phi[0] = 0.0;

    double peak = 0.0;
    for (double v : prof.phi) {
        if (!std::isfinite(v)) throw NonFiniteValue("solve_radial_poisson: non-finite profile");
        peak = std::max(peak, std::abs(v));
    }
    if (std::abs(prof.phi.back()) >= 1e-3 * peak) {
        throw DomainTooSmall("solve_radial_poisson: profile does not decay at r_max; increase r_max");
    }
    return prof;
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile) {
    os << "r,phi,psi2\n";
    for (std::size_t k = 0; k < profile.phi.size(); ++k) {
        os << fmt17(profile.node(k)) << ',' << fmt17(profile.phi[k]) << ',' << fmt17(profile.node_slope(k)) << '\n';
    }
}

}  // namespace pcv::dimer
