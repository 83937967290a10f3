#ifndef ABPROP_AB_MODEL_HPP
#define ABPROP_AB_MODEL_HPP

#include <limits>

#include "abprop/gaussian.hpp"
#include "abprop/lattice.hpp"
#include "abprop/propagator_value.hpp"

namespace abprop {

/// Physical configuration of the charged particle on a circle of radius R
/// around an excluded magnetic flux, propagating over [t0, t].  Natural units
/// by default; all fields overridable.
struct PhysParams {
    double m0 = 1.0;    // mass
    double R = 1.0;     // circle radius
    double hbar = 1.0;  // action quantum
    double c = 1.0;     // light speed
    double e = 1.0;     // elementary charge
    double phi = 0.0;   // magnetic flux
    double p0 = 1.0;    // initial conjugate momentum
    double p1 = 1.0;    // pinned final conjugate momentum
    double t0 = 0.0;
    double t = 1.0;
    // Entry-time offset; NaN means the default (t - t0) / 2.
    double a = std::numeric_limits<double>::quiet_NaN();

    double delta() const { return t - t0; }
    double a_value() const;

    double alpha() const;  // -e phi / (2 pi hbar c)
    void set_alpha(double alpha_target);

    double C1() const { return 1.0 / (2.0 * m0); }
    double C2() const { return -alpha() / (m0 * R); }
    double D() const;  // sqrt(hbar m0)
    double E() const;  // sqrt(hbar / (m0 R^2))

    void validate() const;  // throws std::domain_error naming the bad field
};

/// Angle and conjugate-momentum paths realized from a noise sample on the
/// lattice.  theta is continuous piecewise linear (cumulative pairing);
/// ptheta is the step path p0 + D * noise, with ptheta(t0) = p0 by the
/// zero-noise-at-start convention.
struct PathPair {
    TimeGrid grid;
    PhysParams params;
    std::vector<double> noise_theta;  // sampled theta-component noise per cell
    std::vector<double> theta_node;   // n_cells + 1 edge values
    std::vector<double> p_node;       // n_cells + 1 edge values, p_node[0] = p0
    std::vector<double> p_cell;       // step values per cell

    double theta(double s) const;
    double ptheta(double s) const;
};

PathPair build_paths(const PhysParams& params, const NoiseSample& noise);

/// Boundary polynomial + (hbar/2) int w^2 + sqrt(hbar/m0) <w, (...) 1> with the
/// final momentum read off the last cell.
complex action_closed(const PhysParams& params, const NoiseSample& noise);

/// -int(R theta dp + H dt) with dp by forward differences of the node path and
/// H summed cell-wise.  Integration-by-parts oracle for action_closed: on a
/// refined copy of a fixed noise path the difference shrinks first order in dt.
complex action_direct(const PhysParams& params, const NoiseSample& noise);

/// The pinned Gaussian functional of the flux window: quadratic kernel
/// [[-1-i, -1], [1, -1]] on [t0, t), linear shift C*(1,0), one momentum pin,
/// normalization that cancels the kernel determinant.
GaussianFunctional build_integrand(const PhysParams& params, const TimeGrid& grid);

/// The stated regularized inverse of Id+K: identity off the window plus the
/// epsilon-perturbed window block [[eps, 1], [-1, -i]]; the eps entry is a
/// constant term, so off-window cells carry [[1+eps, 0], [0, 1]].
BlockOperator n_eps_inverse(const PhysParams& params, const TimeGrid& grid, double eps);

/// Exact cell-wise inverse of n_eps_inverse: the forward operator whose
/// quadratic form the dense oracle assembles when cross-checking.
BlockOperator n_eps_forward(const PhysParams& params, const TimeGrid& grid, double eps);

/// <f+g, Ninv_eps (f+g)> expanded into its four lattice terms:
/// (eps+1) off-window theta mass, eps window (f_theta + C)^2, -i window
/// momentum mass, off-window momentum mass.
complex quad_form_feps(const PhysParams& params, const TimeGrid& grid, double eps,
                       const GridFunction& f);

/// Deterministic part of exp(iS/hbar) pulled out of the Gaussian pairing.
complex classical_prefactor(const PhysParams& params);

/// Regularized pairing value: classical prefactor times the lemma evaluation
/// of build_integrand with the stated inverse.  eps must be positive.
complex t_transform_eps(const PhysParams& params, const TimeGrid& grid, double eps,
                        const GridFunction& f);

/// eps -> 0 limit: conservation delta marker and the unit-modulus phase
/// exp(-i p0 (p1 + 2 alpha/R)(t-t0) / (2 hbar m0)), the offset term dropped.
PropagatorValue propagator_limit(const PhysParams& params);

}  // namespace abprop

#endif
