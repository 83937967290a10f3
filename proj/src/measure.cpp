#include "abprop/measure.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abprop {

double AtomicMeasure::moment(double C) const {
    double acc = 0.0;
    for (const MeasureAtom& atom : atoms) acc += std::abs(atom.weight) * std::exp(C * std::abs(atom.beta));
    if (!std::isfinite(acc))
        throw std::range_error("AtomicMeasure::moment: moment overflows at C = " + std::to_string(C));
    return acc;
}

complex potential_eval(const AtomicMeasure& m, double x) {
    complex acc(0.0);
    for (std::size_t j = 0; j < m.atoms.size(); ++j) {
        const double exponent = m.atoms[j].beta * x;
        if (std::abs(exponent) > 700.0)
            throw std::range_error("potential_eval: exp overflow at atom " + std::to_string(j) +
                                   " (beta = " + std::to_string(m.atoms[j].beta) + ")");
        acc += m.atoms[j].weight * std::exp(exponent);
    }
    return acc;
}

AtomicMeasure parse_measure_text(const std::string& text, const std::string& origin) {
    AtomicMeasure m;
    m.name = origin;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream fields(line);
        double beta, re, im;
        std::string extra;
        if (!(fields >> beta >> re >> im) || (fields >> extra))
            throw std::runtime_error("measure file" + (origin.empty() ? "" : " " + origin) +
                                     ": malformed atom at line " + std::to_string(line_no));
        m.atoms.push_back({beta, complex(re, im)});
    }
    return m;
}

AtomicMeasure load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open measure file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_measure_text(buf.str(), path);
}

std::string measure_to_text(const AtomicMeasure& m) {
    std::ostringstream out;
    char line[128];
    for (const MeasureAtom& atom : m.atoms) {
        std::snprintf(line, sizeof(line), "%.17g %.17g %.17g\n", atom.beta,
                      atom.weight.real(), atom.weight.imag());
        out << line;
    }
    return out.str();
}

}  // namespace abprop
