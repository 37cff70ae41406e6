#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afmi/io.hpp"

namespace afmi {

enum class OutputFormat { Csv, Json, Svg };

std::string_view to_string(OutputFormat f);
OutputFormat output_format_from_string(std::string_view s);  // throws ConfigError

struct RegimeWindow {
    double eps_lo = 0.05, eps_hi = 0.6;
    double xi_lo = 0.0, xi_hi = 4.0;
    int samples = 120;
};

struct RunConfig {
    ModelParams params = reference_params();  // params.xi mirrors `xi` when set
    std::optional<double> xi;
    std::optional<XiRange> xi_range;
    GridSpec grid{};
    std::optional<XiBracket> bracket;
    IntegratorSettings integrator{};
    State initial_state = State(1.0, 0.5);
    double t_end = 500.0;
    int samples = 501;                       // simulate output samples
    std::vector<Branch> branches{Branch::StablePlus, Branch::UnstablePlus};
    ManifoldBudget budget{};
    RegimeWindow regime{};
    std::string output_path;                 // empty = standard output
    std::optional<OutputFormat> format;
    unsigned threads = 0;

    // xi for commands that need a single value (default 2.2).
    double scalar_xi() const;
    // Throws ConfigError when the two xi forms are combined or values are invalid.
    void validate() const;
};

// Schema reference printed with configuration errors.
std::string_view config_schema();

// Applies the keys of `j` on top of `base`. Unknown keys, wrong types and
// both xi forms at once raise ConfigError.
RunConfig parse_config(const json& j, RunConfig base = {});

// Reads and parses a config file; an empty or malformed file raises ConfigError.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Command-line overrides; every set field wins over the file.
struct ConfigOverrides {
    std::optional<double> alpha, beta, delta, epsilon, k, xi;
    std::optional<double> xi_from, xi_to;
    std::optional<int> steps;
    std::optional<double> bracket_lo, bracket_hi;
    std::optional<double> x0, y0, t_end;
    std::optional<int> nx, ny;
    std::optional<double> rel_tol, abs_tol, max_time;
    std::optional<std::string> output, format;
    std::optional<unsigned> threads;
};

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o);

}  // namespace afmi
