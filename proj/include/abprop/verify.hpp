#ifndef ABPROP_VERIFY_HPP
#define ABPROP_VERIFY_HPP

#include <string>
#include <vector>

#include "abprop/config.hpp"
#include "abprop/gaussian.hpp"
#include "abprop/measure.hpp"

namespace abprop {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<std::string> verification_suite_names();

/// Runs the named suites (all when `only` is empty) against the configured
/// parameters; each result carries the measured quantity it judged.
std::vector<SuiteResult> run_verification_suites(const RunConfig& config,
                                                 const std::vector<std::string>& only = {});

/// Random well-posed pinned-Gaussian instance for oracle comparisons:
/// small grid, two components, kernel entries bounded well inside the
/// convergent region, up to two pins on separated supports.
struct GaussianInstance {
    GaussianFunctional phi;
    GridFunction f;
};
GaussianInstance random_gaussian_instance(NormalRng& rng, int max_cells = 12,
                                          int forced_pins = -1);

/// Random finite measure with |beta| <= beta_max and unit-box weights.
AtomicMeasure random_measure(NormalRng& rng, int max_atoms, double beta_max,
                             bool complex_weights);

/// Random parameter draw with conservation imposed (p1 = p0, p0 nonzero).
PhysParams random_conserved_params(NormalRng& rng, double p_min = 0.5, double p_max = 5.0);

}  // namespace abprop

#endif
