#ifndef ABPROP_CONFIG_HPP
#define ABPROP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abprop/ab_model.hpp"

namespace abprop {

/// User-input problem; carries the field (or file location) that failed.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& field_, const std::string& msg)
        : std::runtime_error("config error in '" + field_ + "': " + msg), field(field_) {}
    std::string field;
};

struct SweepSpec {
    std::string variable;  // phi | t | p0 | p1 | eps | alpha
    double min = 0.0;
    double max = 1.0;
    int steps = 1;
};

SweepSpec parse_sweep_spec(const std::string& text);  // "VAR:MIN:MAX:STEPS"

struct RunConfig {
    PhysParams params;
    int n_cells = 64;
    std::vector<double> eps_list{1e-2, 1e-3};
    std::vector<double> sigma_list{1e-2, 1e-3};
    std::optional<SweepSpec> sweep;
    std::string measure_path;
    std::string out_path;
    std::string format = "csv";  // csv | json
    std::uint64_t seed = 12345;
    int series_order_max = 12;
    int comb_truncation = 12;

    void validate() const;  // throws ConfigError naming the field
};

/// Flat "key = value" text; '#' starts a comment.  Unknown keys are errors.
void apply_config_text(RunConfig& config, const std::string& text,
                       const std::string& origin = "");
void apply_config_file(RunConfig& config, const std::string& path);

}  // namespace abprop

#endif
