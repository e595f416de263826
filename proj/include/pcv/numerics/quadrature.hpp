#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace pcv::numerics {

// Strictly increasing set of nodes, at least two of them.
class Grid1D {
public:
    explicit Grid1D(std::vector<double> nodes);
    static Grid1D uniform(double a, double b, std::size_t n_nodes);

    std::size_t size() const noexcept { return nodes_.size(); }
    bool is_uniform() const noexcept { return uniform_; }
    double front() const noexcept { return nodes_.front(); }
    double back() const noexcept { return nodes_.back(); }
    double spacing() const noexcept { return nodes_[1] - nodes_[0]; }
    double operator[](std::size_t i) const noexcept { return nodes_[i]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

private:
    Grid1D(std::vector<double> nodes, bool uniform);
    std::vector<double> nodes_;
    bool uniform_;
};

double trapezoid(const Grid1D& grid, std::span<const double> values);
// Composite Simpson; requires a uniform grid with an odd number of nodes.
double simpson(const Grid1D& grid, std::span<const double> values);
std::vector<double> cumulative_trapezoid(const Grid1D& grid, std::span<const double> values);

template <class F>
std::vector<double> sample(F&& f, const Grid1D& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = f(grid[i]);
    return out;
}

template <class F>
double quad_trapezoid(F&& f, const Grid1D& grid) {
    const auto values = sample(f, grid);
    return trapezoid(grid, values);
}

template <class F>
double quad_simpson(F&& f, const Grid1D& grid) {
    const auto values = sample(f, grid);
    return simpson(grid, values);
}

// Moments M_k = ∫ r^k exp(-β (v(r) - v(center))) dr for k = 0..max_order.
// The window [center - w, center + w] doubles until the weight at both ends drops
// below 1e-16 of the peak; center must minimise v.
std::vector<double> boltzmann_moments(const std::function<double(double)>& v, double beta,
                                      double center, int max_order,
                                      std::size_t n_nodes = 40001);

}  // namespace pcv::numerics
