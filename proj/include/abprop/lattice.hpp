#ifndef ABPROP_LATTICE_HPP
#define ABPROP_LATTICE_HPP

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace abprop {

using complex = std::complex<double>;

/// Uniform lattice on [t0, t].  Cell i covers [t0 + i*dt, t0 + (i+1)*dt);
/// interval membership is decided by the cell midpoint.
struct TimeGrid {
    double t0 = 0.0;
    double t = 1.0;
    int n_cells = 1;

    TimeGrid(double t0_, double t_, int n_cells_);

    double dt() const { return (t - t0) / n_cells; }
    double delta() const { return t - t0; }
    double midpoint(int cell) const { return t0 + (cell + 0.5) * dt(); }

    /// Cell containing s; s == t maps to the last cell (half-open convention).
    int cell_of(double s) const;

    bool operator==(const TimeGrid& o) const {
        return t0 == o.t0 && t == o.t && n_cells == o.n_cells;
    }
};

/// d-component complex step function on a TimeGrid, one value per cell.
class GridFunction {
public:
    GridFunction(const TimeGrid& grid, int components);

    const TimeGrid& grid() const { return grid_; }
    int components() const { return components_; }

    complex& at(int component, int cell);
    complex at(int component, int cell) const;

    GridFunction& operator+=(const GridFunction& o);
    GridFunction& operator*=(complex scale);

    const std::vector<complex>& raw() const { return values_; }

private:
    TimeGrid grid_;
    int components_;
    std::vector<complex> values_;  // component-major
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator*(complex scale, GridFunction f);

/// Bilinear pairing sum_{j,i} f_{j,i} g_{j,i} dt.  No conjugation: this is the
/// dual pairing, not the Hermitian scalar product.
complex inner_product(const GridFunction& f, const GridFunction& g);

/// 1 on cells whose midpoint lies in [a, b), on the given component.
GridFunction indicator(const TimeGrid& grid, double a, double b, int component,
                       int components = 2);

/// One-cell box of height 1/dt at s: the lattice delta.  Pairs with any step
/// function to give its value on the cell containing s, exactly.
GridFunction point_mass(const TimeGrid& grid, double s, int component,
                        int components = 2);

/// Two-component white-noise sample: i.i.d. N(0, 1/dt) per cell, reproducible
/// from the seed on any platform (Box-Muller over raw mt19937_64 bits).
struct NoiseSample {
    GridFunction values;
    std::uint64_t seed;
};

NoiseSample sample_noise(const TimeGrid& grid, std::uint64_t seed);

/// Same step function on a grid with `factor` times as many cells.
GridFunction refine(const GridFunction& f, int factor);

/// Platform-stable standard-normal generator.  The mt19937_64 bit stream is
/// fully specified by the standard; the uniform and Box-Muller transforms are
/// spelled out here so samples are bit-identical across platforms.
class NormalRng {
public:
    explicit NormalRng(std::uint64_t seed) : gen_(seed) {}
    double uniform01();   // (0, 1)
    double normal();      // N(0, 1)
private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace abprop

#endif
