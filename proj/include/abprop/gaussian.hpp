#ifndef ABPROP_GAUSSIAN_HPP
#define ABPROP_GAUSSIAN_HPP

#include <functional>
#include <string>
#include <vector>

#include "abprop/lattice.hpp"

namespace abprop {

/// Thrown when a cell block or pin matrix cannot be inverted; the message
/// names the offending cell or matrix.
struct SingularityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// d x d array of cell-wise multiplication operators: each block is a complex
/// step function on the grid.  All compositions and inverses act per cell.
class BlockOperator {
public:
    BlockOperator(const TimeGrid& grid, int d);
    static BlockOperator identity(const TimeGrid& grid, int d);

    const TimeGrid& grid() const { return grid_; }
    int dim() const { return d_; }

    complex& block(int row, int col, int cell);
    complex block(int row, int col, int cell) const;

    /// Set one d x d block on every cell whose midpoint lies in [a, b).
    void fill_window(double a, double b, const std::vector<complex>& block_row_major);

    GridFunction apply(const GridFunction& f) const;
    BlockOperator compose(const BlockOperator& rhs) const;  // this * rhs, cell-wise
    BlockOperator inverse() const;                          // cell-wise Gauss-Jordan

    BlockOperator& operator+=(const BlockOperator& o);

    /// Max over cells of the Frobenius distance of (this * rhs) from Id.
    /// Diagnostic for externally supplied inverses.
    double composition_defect_from_identity(const BlockOperator& rhs) const;

private:
    TimeGrid grid_;
    int d_;
    std::vector<complex> blocks_;  // (row*d + col) major, then cell
};

/// Product over cells of the block determinant.  Multiplication-operator
/// convention: no dt weights, so Id has determinant 1 on any grid.
complex fredholm_det(const BlockOperator& op);

/// Same product accumulated as an unwrapped log: sum of principal logs of the
/// per-cell determinants.  Keeps the branch of det^(-1/2) stable when the
/// accumulated phase leaves (-pi, pi].
complex fredholm_log_det(const BlockOperator& op);

enum class NormalizationMode {
    explicit_constant,                  // multiply by a given constant
    eliminate_determinant,              // constant sqrt(det(Id+K)): drops the det factor
    eliminate_determinant_and_prefactor // same, times a caller-supplied prefactor
};

struct Normalization {
    NormalizationMode mode = NormalizationMode::explicit_constant;
    complex factor = 1.0;  // the constant, or the extra prefactor

    static Normalization constant(complex c) { return {NormalizationMode::explicit_constant, c}; }
    static Normalization eliminate_det() { return {NormalizationMode::eliminate_determinant, 1.0}; }
    static Normalization eliminate_det_with(complex prefactor) {
        return {NormalizationMode::eliminate_determinant_and_prefactor, prefactor};
    }
};

struct Pin {
    GridFunction eta;  // nonzero pairing direction
    double y;          // pinned value of <., eta>
};

/// Normalized Gaussian kernel functional with linear phase and delta pins.
struct GaussianFunctional {
    BlockOperator K;
    GridFunction g;
    std::vector<Pin> pins;
    Normalization normalization;
};

/// J x J bilinear pin matrix M_ij = (eta_i, Ninv eta_j) and the shifted vector
/// u_k = i y_k + (eta_k, Ninv (f+g)).
struct PinMatrix {
    int J = 0;
    std::vector<complex> M;  // row-major J x J
    std::vector<complex> u;

    complex det() const;
    std::vector<complex> solve(const std::vector<complex>& rhs) const;
};

PinMatrix pin_matrix(const GaussianFunctional& phi, const GridFunction& f,
                     const BlockOperator& n_inv);

/// True iff Re(M) is positive definite, or Re(M) = 0 and Im(M) is definite.
bool check_condition(const PinMatrix& pm);

/// Closed-form evaluation of the pinned Gaussian pairing:
///   (2 pi)^(-J/2) det(M)^(-1/2) det(Id+K)^(-1/2)
///     * exp(-1/2 <f+g, (Id+K)^(-1) (f+g)>) * exp(1/2 u^T M^(-1) u),
/// with the determinant factor resolved by the normalization mode.  Square
/// roots take the principal branch.
complex t_transform_lemma(const GaussianFunctional& phi, const GridFunction& f);

/// Same, but with an externally supplied inverse of Id+K (used when the
/// regularized inverse is given as a definition rather than computed).
complex t_transform_lemma(const GaussianFunctional& phi, const GridFunction& f,
                          const BlockOperator& n_inv);

/// Independent dense evaluation: assembles the full lattice quadratic form
/// (measure weight dt, kernel as written, Gaussian pins of width delta_width,
/// linear term i<.,f+g>) and evaluates it by LU determinant and quadratic
/// completion in extended precision.  Converges to t_transform_lemma at
/// O(delta_width^2).
complex t_transform_oracle(const GaussianFunctional& phi, const GridFunction& f,
                           double delta_width);

/// sqrt(z) on the branch nearest to a known reference value.
complex continuous_sqrt(complex z, complex reference);

/// Principal sqrt at path_start, then continued along a geometric parameter
/// path to path_end.  Tracks the branch of sqrt(values(p)) without sign jumps.
complex branch_tracked_sqrt(const std::function<complex(double)>& value,
                            double path_start, double path_end, int steps = 32);

}  // namespace abprop

#endif
