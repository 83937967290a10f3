#include "abprop/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abprop {

TimeGrid::TimeGrid(double t0_, double t_, int n_cells_)
    : t0(t0_), t(t_), n_cells(n_cells_) {
    if (!(t > t0) || t0 < 0.0)
        throw std::invalid_argument("TimeGrid: need t > t0 >= 0, got t0=" +
                                    std::to_string(t0_) + " t=" + std::to_string(t_));
    if (n_cells < 1)
        throw std::invalid_argument("TimeGrid: n_cells must be >= 1");
}

int TimeGrid::cell_of(double s) const {
    if (s < t0 || s > t)
        throw std::domain_error("TimeGrid: time " + std::to_string(s) +
                                " outside [" + std::to_string(t0) + ", " +
                                std::to_string(t) + "]");
    int cell = static_cast<int>(std::floor((s - t0) / dt()));
    if (cell >= n_cells) cell = n_cells - 1;  // s == t lands in the last cell
    if (cell < 0) cell = 0;
    return cell;
}

GridFunction::GridFunction(const TimeGrid& grid, int components)
    : grid_(grid), components_(components),
      values_(static_cast<std::size_t>(components) * grid.n_cells, complex(0.0)) {
    if (components < 1)
        throw std::invalid_argument("GridFunction: components must be >= 1");
}

complex& GridFunction::at(int component, int cell) {
    return values_[static_cast<std::size_t>(component) * grid_.n_cells + cell];
}

complex GridFunction::at(int component, int cell) const {
    return values_[static_cast<std::size_t>(component) * grid_.n_cells + cell];
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
    if (!(grid_ == o.grid_) || components_ != o.components_)
        throw std::invalid_argument("GridFunction: mismatched grid or components");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

GridFunction& GridFunction::operator*=(complex scale) {
    for (auto& v : values_) v *= scale;
    return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }

GridFunction operator*(complex scale, GridFunction f) { return f *= scale; }

complex inner_product(const GridFunction& f, const GridFunction& g) {
    if (!(f.grid() == g.grid()) || f.components() != g.components())
        throw std::invalid_argument("inner_product: mismatched grid or components");
    complex acc(0.0);
    const int n = f.grid().n_cells;
    for (int j = 0; j < f.components(); ++j)
        for (int i = 0; i < n; ++i)
            acc += f.at(j, i) * g.at(j, i);
    return acc * f.grid().dt();
}

GridFunction indicator(const TimeGrid& grid, double a, double b, int component,
                       int components) {
    if (a < grid.t0 || b > grid.t || a > b)
        throw std::domain_error("indicator: need t0 <= a <= b <= t");
    if (component < 0 || component >= components)
        throw std::invalid_argument("indicator: component out of range");
    GridFunction f(grid, components);
    for (int i = 0; i < grid.n_cells; ++i) {
        const double m = grid.midpoint(i);
        if (m >= a && m < b) f.at(component, i) = 1.0;
    }
    return f;
}

GridFunction point_mass(const TimeGrid& grid, double s, int component,
                        int components) {
    if (component < 0 || component >= components)
        throw std::invalid_argument("point_mass: component out of range");
    GridFunction f(grid, components);
    f.at(component, grid.cell_of(s)) = 1.0 / grid.dt();
    return f;
}

double NormalRng::uniform01() {
    // 53 significant bits, strictly inside (0, 1).
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalRng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

NoiseSample sample_noise(const TimeGrid& grid, std::uint64_t seed) {
    NormalRng rng(seed);
    GridFunction f(grid, 2);
    const double scale = 1.0 / std::sqrt(grid.dt());  // per-cell variance 1/dt
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < grid.n_cells; ++i)
            f.at(j, i) = scale * rng.normal();
    return NoiseSample{f, seed};
}

GridFunction refine(const GridFunction& f, int factor) {
    if (factor < 1) throw std::invalid_argument("refine: factor must be >= 1");
    const TimeGrid& g = f.grid();
    TimeGrid fine(g.t0, g.t, g.n_cells * factor);
    GridFunction out(fine, f.components());
    for (int j = 0; j < f.components(); ++j)
        for (int i = 0; i < fine.n_cells; ++i)
            out.at(j, i) = f.at(j, i / factor);
    return out;
}

}  // namespace abprop
