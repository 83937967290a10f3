#ifndef ABPROP_PERTURBATION_HPP
#define ABPROP_PERTURBATION_HPP

#include <vector>

#include "abprop/ab_model.hpp"
#include "abprop/measure.hpp"
#include "abprop/propagator_value.hpp"

namespace abprop {

/// Interaction factor of one n-th order term: the endpoint exponential times
/// the time-weighted momentum-component integral of the test function.
complex g_n_eval(const PhysParams& params, const GridFunction& phi,
                 const std::vector<double>& s_list, const std::vector<double>& beta_list);

/// prod_j exp(C |beta_j|) with the explicit constant
/// C = |p1| / (m0 R) + sqrt(hbar / (m0 R^2)) sqrt(t - t0) |phi_p|_0.
/// Dominates |g_n_eval| for any admissible s_list.
double g_n_bound(const PhysParams& params, const GridFunction& phi,
                 const std::vector<double>& beta_list);

struct TruncationReport {
    complex x;               // series variable (-i/hbar)(t-t0) Vhat
    int order = 0;           // truncation order N
    complex partial_sum;     // sum_{n<=N} x^n / n!
    double remainder_bound;  // |x|^(N+1)/(N+1)! e^|x|
};

struct SeriesResult {
    PropagatorValue value;
    TruncationReport report;
};

/// Truncated exponential series for the perturbed circle propagator.  The
/// n-fold time integrals collapse to (t-t0)^n and the measure integral to the
/// scalar Vhat = V(p1 / (m0 R)).  Requires p1 = p0.
SeriesResult series_propagator(const PhysParams& params, const AtomicMeasure& m, int order);

/// exp{-(i/hbar)(t-t0)[p0^2/(2 m0) + V(p1/(m0 R))]} with the conservation
/// marker.  Complex weights give |phase| != 1; unitarity checks then do not
/// apply.
PropagatorValue closed_form_propagator(const PhysParams& params, const AtomicMeasure& m);

/// exp((t-t0) * total-variation moment(C)); dominates every normalized
/// partial sum of the series.
double series_global_bound(const PhysParams& params, const AtomicMeasure& m, double C);

/// Flux written as a charge ratio k/n in London units, with the matched
/// potential parameters of the exponential reduction.
struct ABReduction {
    int k = 1;
    int n = 1;
    double coupling = 1.0;  // g
    double B = 0.0;         // k hbar p1 / (n c m0 R)
    double b = 0.0;         // 1 + 1/B
    double alpha_frac = 0.0;
    bool detectable = false;
};

ABReduction make_ab_reduction(const PhysParams& params, int k, int n);

/// First-order potential g - (g b k / n) theta_dot.
double first_order_potential(const ABReduction& red, const PhysParams& params,
                             double theta_dot);

/// Order-J partial sum g sum_j sign^j / j! ((b k / n) theta_dot)^j.  The
/// printed expansion alternates (sign = -1); the concentrated-measure
/// propagator carries the opposite sign in its exponent, so the sign is an
/// explicit argument rather than a reconciled convention.
double potential_series(const ABReduction& red, double theta_dot, int order,
                        double sign = -1.0);

/// Coefficient of theta_dot once the B-dependent part is reduced at the
/// physical angular velocity: equals -k/n identically.
double ab_linear_coefficient(const ABReduction& red, const PhysParams& params);

}  // namespace abprop

#endif
