#include "abprop/gaussian.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace abprop {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

BlockOperator::BlockOperator(const TimeGrid& grid, int d)
    : grid_(grid), d_(d),
      blocks_(static_cast<std::size_t>(d) * d * grid.n_cells, complex(0.0)) {
    if (d < 1) throw std::invalid_argument("BlockOperator: d must be >= 1");
}

BlockOperator BlockOperator::identity(const TimeGrid& grid, int d) {
    BlockOperator op(grid, d);
    for (int j = 0; j < d; ++j)
        for (int i = 0; i < grid.n_cells; ++i)
            op.block(j, j, i) = 1.0;
    return op;
}

complex& BlockOperator::block(int row, int col, int cell) {
    return blocks_[(static_cast<std::size_t>(row) * d_ + col) * grid_.n_cells + cell];
}

complex BlockOperator::block(int row, int col, int cell) const {
    return blocks_[(static_cast<std::size_t>(row) * d_ + col) * grid_.n_cells + cell];
}

void BlockOperator::fill_window(double a, double b,
                                const std::vector<complex>& block_row_major) {
    if (static_cast<int>(block_row_major.size()) != d_ * d_)
        throw std::invalid_argument("fill_window: block size mismatch");
    for (int i = 0; i < grid_.n_cells; ++i) {
        const double m = grid_.midpoint(i);
        if (m < a || m >= b) continue;
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c)
                block(r, c, i) = block_row_major[static_cast<std::size_t>(r) * d_ + c];
    }
}

GridFunction BlockOperator::apply(const GridFunction& f) const {
    if (!(f.grid() == grid_) || f.components() != d_)
        throw std::invalid_argument("BlockOperator::apply: mismatched grid or components");
    GridFunction out(grid_, d_);
    for (int i = 0; i < grid_.n_cells; ++i)
        for (int r = 0; r < d_; ++r) {
            complex acc(0.0);
            for (int c = 0; c < d_; ++c) acc += block(r, c, i) * f.at(c, i);
            out.at(r, i) = acc;
        }
    return out;
}

BlockOperator BlockOperator::compose(const BlockOperator& rhs) const {
    if (!(rhs.grid_ == grid_) || rhs.d_ != d_)
        throw std::invalid_argument("BlockOperator::compose: mismatched operators");
    BlockOperator out(grid_, d_);
    for (int i = 0; i < grid_.n_cells; ++i)
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) {
                complex acc(0.0);
                for (int k = 0; k < d_; ++k) acc += block(r, k, i) * rhs.block(k, c, i);
                out.block(r, c, i) = acc;
            }
    return out;
}

BlockOperator BlockOperator::inverse() const {
    BlockOperator out(grid_, d_);
    std::vector<complex> a(static_cast<std::size_t>(d_) * d_);
    std::vector<complex> inv(static_cast<std::size_t>(d_) * d_);
    for (int cell = 0; cell < grid_.n_cells; ++cell) {
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) {
                a[static_cast<std::size_t>(r) * d_ + c] = block(r, c, cell);
                inv[static_cast<std::size_t>(r) * d_ + c] = (r == c) ? 1.0 : 0.0;
            }
        // Gauss-Jordan with partial pivoting on the d x d cell block.
        for (int col = 0; col < d_; ++col) {
            int piv = col;
            for (int r = col + 1; r < d_; ++r)
                if (std::abs(a[static_cast<std::size_t>(r) * d_ + col]) >
                    std::abs(a[static_cast<std::size_t>(piv) * d_ + col]))
                    piv = r;
            if (std::abs(a[static_cast<std::size_t>(piv) * d_ + col]) < 1e-300)
                throw SingularityError("BlockOperator::inverse: singular block at cell " +
                                       std::to_string(cell));
            if (piv != col)
                for (int c = 0; c < d_; ++c) {
                    std::swap(a[static_cast<std::size_t>(piv) * d_ + c],
                              a[static_cast<std::size_t>(col) * d_ + c]);
                    std::swap(inv[static_cast<std::size_t>(piv) * d_ + c],
                              inv[static_cast<std::size_t>(col) * d_ + c]);
                }
            const complex p = a[static_cast<std::size_t>(col) * d_ + col];
            for (int c = 0; c < d_; ++c) {
                a[static_cast<std::size_t>(col) * d_ + c] /= p;
                inv[static_cast<std::size_t>(col) * d_ + c] /= p;
            }
            for (int r = 0; r < d_; ++r) {
                if (r == col) continue;
                const complex factor = a[static_cast<std::size_t>(r) * d_ + col];
                if (factor == complex(0.0)) continue;
                for (int c = 0; c < d_; ++c) {
                    a[static_cast<std::size_t>(r) * d_ + c] -=
                        factor * a[static_cast<std::size_t>(col) * d_ + c];
                    inv[static_cast<std::size_t>(r) * d_ + c] -=
                        factor * inv[static_cast<std::size_t>(col) * d_ + c];
                }
            }
        }
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c)
                out.block(r, c, cell) = inv[static_cast<std::size_t>(r) * d_ + c];
    }
    return out;
}

BlockOperator& BlockOperator::operator+=(const BlockOperator& o) {
    if (!(o.grid_ == grid_) || o.d_ != d_)
        throw std::invalid_argument("BlockOperator::operator+=: mismatched operators");
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += o.blocks_[i];
    return *this;
}

double BlockOperator::composition_defect_from_identity(const BlockOperator& rhs) const {
    const BlockOperator prod = compose(rhs);
    double worst = 0.0;
    for (int cell = 0; cell < grid_.n_cells; ++cell) {
        double acc = 0.0;
        for (int r = 0; r < d_; ++r)
            for (int c = 0; c < d_; ++c) {
                const complex want = (r == c) ? complex(1.0) : complex(0.0);
                acc += std::norm(prod.block(r, c, cell) - want);
            }
        worst = std::max(worst, std::sqrt(acc));
    }
    return worst;
}

namespace {

complex cell_det(const BlockOperator& op, int cell) {
    const int d = op.dim();
    if (d == 1) return op.block(0, 0, cell);
    if (d == 2)
        return op.block(0, 0, cell) * op.block(1, 1, cell) -
               op.block(0, 1, cell) * op.block(1, 0, cell);
    // General small d: elimination with partial pivoting.
    std::vector<complex> a(static_cast<std::size_t>(d) * d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a[static_cast<std::size_t>(r) * d + c] = op.block(r, c, cell);
    complex det(1.0);
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * d + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * d + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < d; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * d + c],
                          a[static_cast<std::size_t>(col) * d + c]);
            det = -det;
        }
        const complex p = a[static_cast<std::size_t>(col) * d + col];
        if (p == complex(0.0)) return complex(0.0);
        det *= p;
        for (int r = col + 1; r < d; ++r) {
            const complex factor = a[static_cast<std::size_t>(r) * d + col] / p;
            for (int c = col; c < d; ++c)
                a[static_cast<std::size_t>(r) * d + c] -=
                    factor * a[static_cast<std::size_t>(col) * d + c];
        }
    }
    return det;
}

}  // namespace

complex fredholm_det(const BlockOperator& op) {
    complex det(1.0);
    for (int cell = 0; cell < op.grid().n_cells; ++cell) det *= cell_det(op, cell);
    return det;
}

complex fredholm_log_det(const BlockOperator& op) {
    complex acc(0.0);
    for (int cell = 0; cell < op.grid().n_cells; ++cell) {
        const complex d = cell_det(op, cell);
        if (d == complex(0.0))
            throw SingularityError("fredholm_log_det: zero block determinant at cell " +
                                   std::to_string(cell));
        acc += std::log(d);
    }
    return acc;
}

complex PinMatrix::det() const {
    std::vector<complex> a = M;
    complex det(1.0);
    for (int col = 0; col < J; ++col) {
        int piv = col;
        for (int r = col + 1; r < J; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * J + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * J + col]))
                piv = r;
        if (piv != col) {
            for (int c = 0; c < J; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * J + c],
                          a[static_cast<std::size_t>(col) * J + c]);
            det = -det;
        }
        const complex p = a[static_cast<std::size_t>(col) * J + col];
        if (std::abs(p) < 1e-300) return complex(0.0);
        det *= p;
        for (int r = col + 1; r < J; ++r) {
            const complex factor = a[static_cast<std::size_t>(r) * J + col] / p;
            for (int c = col; c < J; ++c)
                a[static_cast<std::size_t>(r) * J + c] -=
                    factor * a[static_cast<std::size_t>(col) * J + c];
        }
    }
    return det;
}

std::vector<complex> PinMatrix::solve(const std::vector<complex>& rhs) const {
    if (static_cast<int>(rhs.size()) != J)
        throw std::invalid_argument("PinMatrix::solve: dimension mismatch");
    std::vector<complex> a = M;
    std::vector<complex> b = rhs;
    for (int col = 0; col < J; ++col) {
        int piv = col;
        for (int r = col + 1; r < J; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * J + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * J + col]))
                piv = r;
        if (std::abs(a[static_cast<std::size_t>(piv) * J + col]) < 1e-300)
            throw SingularityError("pin matrix M is singular");
        if (piv != col) {
            for (int c = 0; c < J; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * J + c],
                          a[static_cast<std::size_t>(col) * J + c]);
            std::swap(b[piv], b[col]);
        }
        const complex p = a[static_cast<std::size_t>(col) * J + col];
        for (int r = col + 1; r < J; ++r) {
            const complex factor = a[static_cast<std::size_t>(r) * J + col] / p;
            b[r] -= factor * b[col];
            for (int c = col; c < J; ++c)
                a[static_cast<std::size_t>(r) * J + c] -=
                    factor * a[static_cast<std::size_t>(col) * J + c];
        }
    }
    for (int r = J - 1; r >= 0; --r) {
        complex acc = b[r];
        for (int c = r + 1; c < J; ++c) acc -= a[static_cast<std::size_t>(r) * J + c] * b[c];
        b[r] = acc / a[static_cast<std::size_t>(r) * J + r];
    }
    return b;
}

PinMatrix pin_matrix(const GaussianFunctional& phi, const GridFunction& f,
                     const BlockOperator& n_inv) {
    const int J = static_cast<int>(phi.pins.size());
    PinMatrix pm;
    pm.J = J;
    pm.M.assign(static_cast<std::size_t>(J) * J, complex(0.0));
    pm.u.assign(J, complex(0.0));
    const GridFunction h = f + phi.g;
    const GridFunction ninv_h = n_inv.apply(h);
    std::vector<GridFunction> ninv_eta;
    ninv_eta.reserve(J);
    for (const Pin& pin : phi.pins) ninv_eta.push_back(n_inv.apply(pin.eta));
    for (int i = 0; i < J; ++i) {
        for (int j = 0; j < J; ++j)
            pm.M[static_cast<std::size_t>(i) * J + j] =
                inner_product(phi.pins[i].eta, ninv_eta[j]);
        pm.u[i] = complex(0.0, phi.pins[i].y) + inner_product(phi.pins[i].eta, ninv_h);
    }
    return pm;
}

namespace {

// Strict positive definiteness of a small real symmetric matrix via leading
// principal minors.
bool positive_definite(const std::vector<double>& m, int J) {
    for (int k = 1; k <= J; ++k) {
        Eigen::MatrixXd sub(k, k);
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c) sub(r, c) = m[static_cast<std::size_t>(r) * J + c];
        if (!(sub.determinant() > 0.0)) return false;
    }
    return true;
}

}  // namespace

bool check_condition(const PinMatrix& pm) {
    const int J = pm.J;
    if (J == 0) return true;
    std::vector<double> re(static_cast<std::size_t>(J) * J), im(re.size());
    bool re_zero = true;
    // The quadratic form only sees the symmetric part.
    for (int r = 0; r < J; ++r)
        for (int c = 0; c < J; ++c) {
            const complex sym = 0.5 * (pm.M[static_cast<std::size_t>(r) * J + c] +
                                       pm.M[static_cast<std::size_t>(c) * J + r]);
            re[static_cast<std::size_t>(r) * J + c] = sym.real();
            im[static_cast<std::size_t>(r) * J + c] = sym.imag();
            if (sym.real() != 0.0) re_zero = false;
        }
    if (!re_zero) return positive_definite(re, J);
    std::vector<double> neg_im(im.size());
    for (std::size_t i = 0; i < im.size(); ++i) neg_im[i] = -im[i];
    return positive_definite(im, J) || positive_definite(neg_im, J);
}

namespace {

complex lemma_value(const GaussianFunctional& phi, const GridFunction& f,
                    const BlockOperator& n_inv, const BlockOperator& n_forward) {
    const GridFunction h = f + phi.g;
    const complex quad = inner_product(h, n_inv.apply(h));

    complex pin_factor(1.0);
    const int J = static_cast<int>(phi.pins.size());
    if (J > 0) {
        const PinMatrix pm = pin_matrix(phi, f, n_inv);
        const complex det_m = pm.det();
        if (det_m == complex(0.0)) throw SingularityError("pin matrix M is singular");
        const std::vector<complex> minv_u = pm.solve(pm.u);
        complex u_minv_u(0.0);
        for (int k = 0; k < J; ++k) u_minv_u += pm.u[k] * minv_u[k];
        pin_factor = std::pow(2.0 * kPi, -0.5 * J) / std::sqrt(det_m) *
                     std::exp(0.5 * u_minv_u);
    }

    complex det_factor(1.0);
    switch (phi.normalization.mode) {
        case NormalizationMode::explicit_constant:
            det_factor = phi.normalization.factor *
                         std::exp(-0.5 * fredholm_log_det(n_forward));
            break;
        case NormalizationMode::eliminate_determinant:
            det_factor = 1.0;
            break;
        case NormalizationMode::eliminate_determinant_and_prefactor:
            det_factor = phi.normalization.factor;
            break;
    }
    return det_factor * pin_factor * std::exp(-0.5 * quad);
}

BlockOperator id_plus_k(const GaussianFunctional& phi) {
    BlockOperator n = BlockOperator::identity(phi.K.grid(), phi.K.dim());
    n += phi.K;
    return n;
}

}  // namespace

complex t_transform_lemma(const GaussianFunctional& phi, const GridFunction& f) {
    const BlockOperator n = id_plus_k(phi);
    return lemma_value(phi, f, n.inverse(), n);
}

complex t_transform_lemma(const GaussianFunctional& phi, const GridFunction& f,
                          const BlockOperator& n_inv) {
    return lemma_value(phi, f, n_inv, id_plus_k(phi));
}

namespace {

using cld = std::complex<long double>;
using MatrixXcld = Eigen::Matrix<cld, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXcld = Eigen::Matrix<cld, Eigen::Dynamic, 1>;

// Unwrapped log-determinant: sum of principal logs of the LU pivots, plus the
// permutation parity.  Returned on whichever branch the pivot sum lands.
cld lu_log_det(const MatrixXcld& a, VectorXcld* solve_rhs) {
    Eigen::PartialPivLU<MatrixXcld> lu(a);
    cld acc(0.0L);
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const cld piv = lu.matrixLU()(i, i);
        if (std::abs(piv) < 1e-290L)
            throw SingularityError("t_transform_oracle: assembled quadratic form is singular");
        acc += std::log(piv);
    }
    if (lu.permutationP().determinant() < 0)
        acc += cld(0.0L, static_cast<long double>(kPi));
    if (solve_rhs) *solve_rhs = lu.solve(*solve_rhs);
    return acc;
}

}  // namespace

complex t_transform_oracle(const GaussianFunctional& phi, const GridFunction& f,
                           double delta_width) {
    if (!(delta_width > 0.0))
        throw std::invalid_argument("t_transform_oracle: delta_width must be > 0");
    const TimeGrid& grid = phi.K.grid();
    const int d = phi.K.dim();
    const int n = grid.n_cells;
    const int m = d * n;
    const long double dt = static_cast<long double>(grid.dt());
    const GridFunction h = f + phi.g;
    const int J = static_cast<int>(phi.pins.size());

    // Kernel and measure, assembled as written (the bilinear convention: the
    // kernel matrix is not symmetrized).  Index = component * n + cell.
    MatrixXcld a0 = MatrixXcld::Zero(m, m);
    for (int cell = 0; cell < n; ++cell)
        for (int r = 0; r < d; ++r) {
            a0(r * n + cell, r * n + cell) += dt;
            for (int c = 0; c < d; ++c) {
                const complex k = phi.K.block(r, c, cell);
                if (k != complex(0.0))
                    a0(r * n + cell, c * n + cell) += dt * cld(k.real(), k.imag());
            }
        }

    std::vector<VectorXcld> eta_w(J, VectorXcld::Zero(m));
    long double eta_norm_sq_max = 0.0L;
    for (int k = 0; k < J; ++k) {
        long double nrm = 0.0L;
        for (int r = 0; r < d; ++r)
            for (int cell = 0; cell < n; ++cell) {
                const complex v = phi.pins[k].eta.at(r, cell);
                eta_w[k](r * n + cell) = dt * cld(v.real(), v.imag());
                nrm += static_cast<long double>(std::norm(v)) * dt;
            }
        eta_norm_sq_max = std::max(eta_norm_sq_max, nrm);
    }

    const long double target = static_cast<long double>(delta_width);
    const auto assemble = [&](long double sigma) {
        MatrixXcld a = a0;
        for (int k = 0; k < J; ++k)
            a += (eta_w[k] * eta_w[k].transpose()) / (sigma * sigma);
        return a;
    };

    // Linear term i<., f+g> plus the pin means y_k/sigma^2.
    VectorXcld rhs = VectorXcld::Zero(m);
    for (int r = 0; r < d; ++r)
        for (int cell = 0; cell < n; ++cell) {
            const complex v = h.at(r, cell);
            rhs(r * n + cell) = cld(0.0L, 1.0L) * dt * cld(v.real(), v.imag());
        }
    long double pin_const = 0.0L;
    for (int k = 0; k < J; ++k) {
        const long double y = static_cast<long double>(phi.pins[k].y);
        rhs += (y / (target * target)) * eta_w[k];
        pin_const -= y * y / (2.0L * target * target);
    }

    // Branch of det^(-1/2): anchor at a width where the pins are a small
    // perturbation, then continue the log-determinant down to the target,
    // unwrapping the imaginary part step by step.
    cld log_det(0.0L);
    VectorXcld solution = rhs;
    if (J == 0) {
        log_det = lu_log_det(a0, &solution);
    } else {
        long double sigma_start = std::max(1.0L, 10.0L * std::sqrt(eta_norm_sq_max));
        sigma_start = std::max(sigma_start, target);
        int steps = 1;
        while (sigma_start / std::pow(2.0L, steps) > target && steps < 200) ++steps;
        cld prev(0.0L);
        for (int s = 0; s <= steps; ++s) {
            const long double sigma =
                (s == steps) ? target : std::max(sigma_start * std::pow(2.0L, -s), target);
            VectorXcld* rhs_ptr = (s == steps) ? &solution : nullptr;
            cld ld = lu_log_det(assemble(sigma), rhs_ptr);
            if (s > 0) {
                const long double two_pi = 2.0L * static_cast<long double>(kPi);
                const long double k = std::floor((prev.imag() - ld.imag()) / two_pi + 0.5L);
                ld += cld(0.0L, k * two_pi);
            }
            prev = ld;
        }
        log_det = prev;
    }

    const cld quad = 0.5L * (rhs.transpose() * solution)(0, 0);
    cld exponent = quad + pin_const;
    exponent += 0.5L * static_cast<long double>(m) * std::log(dt);
    exponent -= 0.5L * log_det;
    exponent -= 0.5L * static_cast<long double>(J) *
                std::log(2.0L * static_cast<long double>(kPi) * target * target);

    cld value = std::exp(exponent);

    switch (phi.normalization.mode) {
        case NormalizationMode::explicit_constant: {
            const complex c = phi.normalization.factor;
            value *= cld(c.real(), c.imag());
            break;
        }
        case NormalizationMode::eliminate_determinant:
        case NormalizationMode::eliminate_determinant_and_prefactor: {
            const complex ld = fredholm_log_det(id_plus_k(phi));
            value *= std::exp(0.5L * cld(ld.real(), ld.imag()));
            if (phi.normalization.mode ==
                NormalizationMode::eliminate_determinant_and_prefactor) {
                const complex c = phi.normalization.factor;
                value *= cld(c.real(), c.imag());
            }
            break;
        }
    }
    return complex(static_cast<double>(value.real()), static_cast<double>(value.imag()));
}

complex continuous_sqrt(complex z, complex reference) {
    const complex s = std::sqrt(z);
    return (std::abs(s - reference) <= std::abs(-s - reference)) ? s : -s;
}

complex branch_tracked_sqrt(const std::function<complex(double)>& value,
                            double path_start, double path_end, int steps) {
    if (steps < 1) throw std::invalid_argument("branch_tracked_sqrt: steps must be >= 1");
    complex ref = std::sqrt(value(path_start));
    const bool geometric = path_start > 0.0 && path_end > 0.0;
    for (int s = 1; s <= steps; ++s) {
        const double frac = static_cast<double>(s) / steps;
        const double p = geometric
                             ? path_start * std::pow(path_end / path_start, frac)
                             : path_start + frac * (path_end - path_start);
        ref = continuous_sqrt(value(p), ref);
    }
    return ref;
}

}  // namespace abprop
