#include "pcv/numerics/quadrature.hpp"

#include <cmath>

#include "pcv/errors.hpp"

namespace pcv::numerics {

namespace {

void require_finite(std::span<const double> values) {
    for (double v : values) {
        if (!std::isfinite(v)) throw NonFiniteValue("quadrature: non-finite sample");
    }
}

void require_matching(const Grid1D& grid, std::span<const double> values) {
    if (values.size() != grid.size()) throw InvalidArgument("quadrature: sample count does not match grid");
}

}  // namespace

Grid1D::Grid1D(std::vector<double> nodes) : nodes_(std::move(nodes)), uniform_(false) {
    if (nodes_.size() < 2) throw InvalidArgument("Grid1D needs at least two nodes");
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        if (!(nodes_[i] > nodes_[i - 1])) throw InvalidArgument("Grid1D nodes must be strictly increasing");
    }
}

Grid1D::Grid1D(std::vector<double> nodes, bool uniform) : nodes_(std::move(nodes)), uniform_(uniform) {}

Grid1D Grid1D::uniform(double a, double b, std::size_t n_nodes) {
    if (n_nodes < 2 || !(b > a)) throw InvalidArgument("Grid1D::uniform needs b > a and n >= 2");
    std::vector<double> nodes(n_nodes);
    const double h = (b - a) / static_cast<double>(n_nodes - 1);
    for (std::size_t i = 0; i < n_nodes; ++i) nodes[i] = a + h * static_cast<double>(i);
    nodes.back() = b;
    return Grid1D(std::move(nodes), true);
}

double trapezoid(const Grid1D& grid, std::span<const double> values) {
    require_matching(grid, values);
    require_finite(values);
    double sum = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        sum += 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
    }
    return sum;
}

double simpson(const Grid1D& grid, std::span<const double> values) {
    require_matching(grid, values);
    if (!grid.is_uniform()) throw InvalidArgument("simpson requires a uniform grid");
    if (grid.size() % 2 == 0) throw InvalidArgument("simpson requires an odd number of nodes");
    require_finite(values);
    const std::size_t n = grid.size();
    double odd = 0.0;
    double even = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (i % 2 == 1) {
            odd += values[i];
        } else {
            even += values[i];
        }
    }
    const double h = (grid.back() - grid.front()) / static_cast<double>(n - 1);
    return h / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even);
}

std::vector<double> cumulative_trapezoid(const Grid1D& grid, std::span<const double> values) {
    require_matching(grid, values);
    require_finite(values);
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        out[i] = out[i - 1] + 0.5 * (grid[i] - grid[i - 1]) * (values[i] + values[i - 1]);
    }
    return out;
}

std::vector<double> boltzmann_moments(const std::function<double(double)>& v, double beta,
                                      double center, int max_order, std::size_t n_nodes) {
    if (max_order < 0) throw InvalidArgument("boltzmann_moments: negative order");
    if (n_nodes % 2 == 0) ++n_nodes;
    const double v0 = v(center);
    auto weight = [&](double r) { return std::exp(-beta * (v(r) - v0)); };

    double w = 1.0;
    while (weight(center - w) >= 1e-16 || weight(center + w) >= 1e-16) {
        w *= 2.0;
        if (w > 1e8) throw DomainTooSmall("boltzmann_moments: weight does not decay");
    }

    const auto grid = Grid1D::uniform(center - w, center + w, n_nodes);
    std::vector<double> moments(static_cast<std::size_t>(max_order) + 1);
    std::vector<double> values(grid.size());
    const auto base = sample(weight, grid);
    for (int k = 0; k <= max_order; ++k) {
        for (std::size_t i = 0; i < grid.size(); ++i) values[i] = base[i] * std::pow(grid[i], k);
        moments[static_cast<std::size_t>(k)] = simpson(grid, values);
    }
    return moments;
}

}  // namespace pcv::numerics
