#ifndef ABPROP_MEASURE_HPP
#define ABPROP_MEASURE_HPP

#include <string>
#include <vector>

#include "abprop/lattice.hpp"

namespace abprop {

struct MeasureAtom {
    double beta = 0.0;
    complex weight = 1.0;
};

/// Finite complex measure: a weighted list of point masses on the real line.
/// The exponential moment is finite automatically; moment() asserts that the
/// computed value stays finite.
struct AtomicMeasure {
    std::vector<MeasureAtom> atoms;
    std::string name;

    bool empty() const { return atoms.empty(); }

    /// Total-variation moment sum_j |w_j| exp(C |beta_j|).
    double moment(double C) const;
};

/// V(x) = sum_j w_j exp(beta_j x).  Overflow guarded: |beta_j x| > 700 names
/// the offending atom.
complex potential_eval(const AtomicMeasure& m, double x);

/// One atom per line: "beta weight_re weight_im"; '#' starts a comment.
/// Parse errors carry the 1-based line number.
AtomicMeasure parse_measure_text(const std::string& text, const std::string& origin = "");
AtomicMeasure load_measure_file(const std::string& path);
std::string measure_to_text(const AtomicMeasure& m);

}  // namespace abprop

#endif
