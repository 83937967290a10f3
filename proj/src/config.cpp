#include "abprop/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace abprop {

namespace {

const std::vector<std::string> kSweepVariables = {"phi", "t", "p0", "p1", "eps", "alpha"};

double parse_double(const std::string& field, const std::string& text) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError(field, "not a number: '" + text + "'");
    }
    if (pos != text.size()) throw ConfigError(field, "trailing characters in '" + text + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

SweepSpec parse_sweep_spec(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4)
        throw ConfigError("sweep", "expected VAR:MIN:MAX:STEPS, got '" + text + "'");
    SweepSpec spec;
    spec.variable = trim(parts[0]);
    if (std::find(kSweepVariables.begin(), kSweepVariables.end(), spec.variable) ==
        kSweepVariables.end())
        throw ConfigError("sweep", "unknown variable '" + spec.variable + "'");
    spec.min = parse_double("sweep", parts[1]);
    spec.max = parse_double("sweep", parts[2]);
    const double steps = parse_double("sweep", parts[3]);
    if (steps < 1.0 || steps != std::floor(steps))
        throw ConfigError("sweep", "steps must be a positive integer");
    spec.steps = static_cast<int>(steps);
    return spec;
}

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const std::domain_error& err) {
        throw ConfigError("params", err.what());
    }
    if (n_cells < 1) throw ConfigError("n_cells", "must be >= 1");
    for (double eps : eps_list)
        if (!(eps > 0.0)) throw ConfigError("eps", "values must be > 0");
    for (double sigma : sigma_list)
        if (!(sigma > 0.0)) throw ConfigError("sigma", "values must be > 0");
    if (format != "csv" && format != "json") throw ConfigError("format", "must be csv or json");
    if (series_order_max < 0) throw ConfigError("series_order_max", "must be >= 0");
    if (comb_truncation < 0) throw ConfigError("comb_truncation", "must be >= 0");
    if (sweep) {
        if (sweep->steps < 1) throw ConfigError("sweep", "steps must be >= 1");
        if (sweep->variable == "eps" && !(sweep->min > 0.0))
            throw ConfigError("sweep", "eps sweep requires min > 0");
    }
}

void apply_config_text(RunConfig& config, const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin.empty() ? "config" : origin,
                              "missing '=' at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "m0") config.params.m0 = parse_double(key, value);
        else if (key == "R") config.params.R = parse_double(key, value);
        else if (key == "hbar") config.params.hbar = parse_double(key, value);
        else if (key == "c") config.params.c = parse_double(key, value);
        else if (key == "e") config.params.e = parse_double(key, value);
        else if (key == "phi") config.params.phi = parse_double(key, value);
        else if (key == "alpha") config.params.set_alpha(parse_double(key, value));
        else if (key == "p0") config.params.p0 = parse_double(key, value);
        else if (key == "p1") config.params.p1 = parse_double(key, value);
        else if (key == "a") config.params.a = parse_double(key, value);
        else if (key == "t0") config.params.t0 = parse_double(key, value);
        else if (key == "t") config.params.t = parse_double(key, value);
        else if (key == "n_cells") config.n_cells = static_cast<int>(parse_double(key, value));
        else if (key == "eps") config.eps_list = parse_double_list(key, value);
        else if (key == "sigma") config.sigma_list = parse_double_list(key, value);
        else if (key == "sweep") config.sweep = parse_sweep_spec(value);
        else if (key == "measure") config.measure_path = value;
        else if (key == "out") config.out_path = value;
        else if (key == "format") config.format = value;
        else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_double(key, value));
        else if (key == "series_order_max") config.series_order_max = static_cast<int>(parse_double(key, value));
        else if (key == "comb_truncation") config.comb_truncation = static_cast<int>(parse_double(key, value));
        else
            throw ConfigError(key, "unknown key at line " + std::to_string(line_no));
    }
}

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(config, buf.str(), path);
}

}  // namespace abprop
