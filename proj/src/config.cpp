#include "afmi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace afmi {

std::string_view to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Svg: return "svg";
    }
    return "json";
}

OutputFormat output_format_from_string(std::string_view s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    if (s == "svg") return OutputFormat::Svg;
    throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv, json or svg)");
}

std::string_view config_schema() {
    return R"(config schema (JSON object, every key optional):
  params:      {alpha, beta, delta, epsilon, k}           numbers; defaults 0.1, 0.319, 0.3, 0.322, 15
  xi:          number | {from, to, steps}                 scalar for most commands, range for sweep
  grid:        {x_min, x_max, y_min, y_max, nx, ny}       basin grid, default [0.1,15]x[0.1,10] at 40x40
  bracket:     {lo, hi}                                   xi bracket for bifurcate
  integrator:  {rel_tol, abs_tol, max_time, max_steps, escape_norm, convergence_radius, convergence_dwell}
  initial_state: [x, y]                                   simulate start, default [1, 0.5]
  t_end:       number                                     simulate horizon, default 500
  samples:     integer                                    simulate output samples, default 501
  manifold:    {branches: [StablePlus|StableMinus|UnstablePlus|UnstableMinus ...],
                seed_factor, max_segment, max_arclength}
  regime:      {eps_lo, eps_hi, xi_lo, xi_hi, samples}
  output:      {path, format: csv|json|svg}
  threads:     integer (0 = auto)
)";
}

double RunConfig::scalar_xi() const {
    if (xi_range) throw ConfigError("this command needs a scalar xi, got a range");
    return xi.value_or(2.2);
}

void RunConfig::validate() const {
    if (xi && xi_range) throw ConfigError("xi given both as a scalar and as a range");
    if (xi_range) {
        if (xi_range->steps < 2) throw ConfigError("xi.steps must be at least 2");
        if (!std::isfinite(xi_range->from) || !std::isfinite(xi_range->to)) {
            throw ConfigError("xi range bounds must be finite");
        }
    }
    if (bracket && !(std::isfinite(bracket->lo) && std::isfinite(bracket->hi))) {
        throw ConfigError("bracket bounds must be finite");
    }
    if (!(t_end > 0)) throw ConfigError("t_end must be positive");
    if (samples < 2) throw ConfigError("samples must be at least 2");
    try {
        afmi::validate(params.with_xi(xi.value_or(xi_range ? xi_range->from : 2.2)));
        grid.validate();
        integrator.validate();
        detail::require_finite(initial_state);
        if (!in_phi(initial_state)) throw DomainError("initial_state must be non-negative");
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
    if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
    const std::set<std::string_view> ok(allowed);
    for (const auto& [key, value] : j.items()) {
        if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
    }
}

double number(const json& j, std::string_view where) {
    if (!j.is_number()) throw ConfigError(std::string(where) + " must be a number");
    return j.get<double>();
}

int integer(const json& j, std::string_view where) {
    if (!j.is_number_integer()) throw ConfigError(std::string(where) + " must be an integer");
    return j.get<int>();
}

template <class T, class F>
void maybe(const json& obj, const char* key, T& target, F&& conv, const std::string& where) {
    if (obj.contains(key)) target = conv(obj.at(key), where + "." + key);
}

}  // namespace

RunConfig parse_config(const json& j, RunConfig cfg) {
    check_keys(j, "config", {"params", "xi", "grid", "bracket", "integrator", "initial_state", "t_end", "samples",
                             "manifold", "regime", "output", "threads"});

    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p, "params", {"alpha", "beta", "delta", "epsilon", "k"});
        maybe(p, "alpha", cfg.params.alpha, number, "params");
        maybe(p, "beta", cfg.params.beta, number, "params");
        maybe(p, "delta", cfg.params.delta, number, "params");
        maybe(p, "epsilon", cfg.params.epsilon, number, "params");
        maybe(p, "k", cfg.params.k, number, "params");
    }
    if (j.contains("xi")) {
        const json& x = j.at("xi");
        if (x.is_number()) {
            cfg.xi = x.get<double>();
            cfg.xi_range.reset();
        } else if (x.is_object()) {
            check_keys(x, "xi", {"from", "to", "steps"});
            if (!x.contains("from") || !x.contains("to") || !x.contains("steps")) {
                throw ConfigError("xi range needs from, to and steps");
            }
            cfg.xi_range = XiRange{number(x.at("from"), "xi.from"), number(x.at("to"), "xi.to"),
                                   integer(x.at("steps"), "xi.steps")};
            cfg.xi.reset();
        } else {
            throw ConfigError("xi must be a number or {from, to, steps}");
        }
    }
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        check_keys(g, "grid", {"x_min", "x_max", "y_min", "y_max", "nx", "ny"});
        maybe(g, "x_min", cfg.grid.x_min, number, "grid");
        maybe(g, "x_max", cfg.grid.x_max, number, "grid");
        maybe(g, "y_min", cfg.grid.y_min, number, "grid");
        maybe(g, "y_max", cfg.grid.y_max, number, "grid");
        maybe(g, "nx", cfg.grid.nx, integer, "grid");
        maybe(g, "ny", cfg.grid.ny, integer, "grid");
    }
    if (j.contains("bracket")) {
        const json& b = j.at("bracket");
        check_keys(b, "bracket", {"lo", "hi"});
        if (!b.contains("lo") || !b.contains("hi")) throw ConfigError("bracket needs lo and hi");
        cfg.bracket = XiBracket{number(b.at("lo"), "bracket.lo"), number(b.at("hi"), "bracket.hi")};
    }
    if (j.contains("integrator")) {
        const json& s = j.at("integrator");
        check_keys(s, "integrator", {"rel_tol", "abs_tol", "max_time", "max_steps", "escape_norm",
                                     "convergence_radius", "convergence_dwell"});
        maybe(s, "rel_tol", cfg.integrator.rel_tol, number, "integrator");
        maybe(s, "abs_tol", cfg.integrator.abs_tol, number, "integrator");
        maybe(s, "max_time", cfg.integrator.max_time, number, "integrator");
        if (s.contains("max_steps")) {
            const int n = integer(s.at("max_steps"), "integrator.max_steps");
            if (n <= 0) throw ConfigError("integrator.max_steps must be positive");
            cfg.integrator.max_steps = static_cast<std::size_t>(n);
        }
        maybe(s, "escape_norm", cfg.integrator.escape_norm, number, "integrator");
        maybe(s, "convergence_radius", cfg.integrator.convergence_radius, number, "integrator");
        maybe(s, "convergence_dwell", cfg.integrator.convergence_dwell, number, "integrator");
    }
    if (j.contains("initial_state")) {
        const json& s = j.at("initial_state");
        if (!s.is_array() || s.size() != 2) throw ConfigError("initial_state must be [x, y]");
        cfg.initial_state = State(number(s[0], "initial_state[0]"), number(s[1], "initial_state[1]"));
    }
    maybe(j, "t_end", cfg.t_end, number, "config");
    maybe(j, "samples", cfg.samples, integer, "config");
    if (j.contains("manifold")) {
        const json& m = j.at("manifold");
        check_keys(m, "manifold", {"branches", "seed_factor", "max_segment", "max_arclength"});
        if (m.contains("branches")) {
            if (!m.at("branches").is_array()) throw ConfigError("manifold.branches must be an array");
            cfg.branches.clear();
            for (const auto& b : m.at("branches")) {
                if (!b.is_string()) throw ConfigError("manifold.branches entries must be strings");
                try {
                    cfg.branches.push_back(branch_from_string(b.get<std::string>()));
                } catch (const DomainError& e) {
                    throw ConfigError(e.what());
                }
            }
        }
        maybe(m, "seed_factor", cfg.budget.seed_factor, number, "manifold");
        maybe(m, "max_segment", cfg.budget.max_segment, number, "manifold");
        maybe(m, "max_arclength", cfg.budget.max_arclength, number, "manifold");
    }
    if (j.contains("regime")) {
        const json& r = j.at("regime");
        check_keys(r, "regime", {"eps_lo", "eps_hi", "xi_lo", "xi_hi", "samples"});
        maybe(r, "eps_lo", cfg.regime.eps_lo, number, "regime");
        maybe(r, "eps_hi", cfg.regime.eps_hi, number, "regime");
        maybe(r, "xi_lo", cfg.regime.xi_lo, number, "regime");
        maybe(r, "xi_hi", cfg.regime.xi_hi, number, "regime");
        maybe(r, "samples", cfg.regime.samples, integer, "regime");
    }
    if (j.contains("output")) {
        const json& o = j.at("output");
        check_keys(o, "output", {"path", "format"});
        if (o.contains("path")) {
            if (!o.at("path").is_string()) throw ConfigError("output.path must be a string");
            cfg.output_path = o.at("path").get<std::string>();
        }
        if (o.contains("format")) {
            if (!o.at("format").is_string()) throw ConfigError("output.format must be a string");
            cfg.format = output_format_from_string(o.at("format").get<std::string>());
        }
    }
    if (j.contains("threads")) {
        const int t = integer(j.at("threads"), "threads");
        if (t < 0) throw ConfigError("threads must be non-negative");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (cfg.xi) cfg.params.xi = *cfg.xi;
    return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw ConfigError("config file '" + path + "' is empty");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(j, std::move(base));
}

void apply_overrides(RunConfig& cfg, const ConfigOverrides& o) {
    if (o.alpha) cfg.params.alpha = *o.alpha;
    if (o.beta) cfg.params.beta = *o.beta;
    if (o.delta) cfg.params.delta = *o.delta;
    if (o.epsilon) cfg.params.epsilon = *o.epsilon;
    if (o.k) cfg.params.k = *o.k;
    if (o.xi) {
        cfg.xi = *o.xi;
        cfg.xi_range.reset();
    }
    if (o.xi_from || o.xi_to || o.steps) {
        if (o.xi) throw ConfigError("--xi cannot be combined with --xi-from/--xi-to/--steps");
        XiRange r = cfg.xi_range.value_or(XiRange{0.5, 3.0, 500});
        if (o.xi_from) r.from = *o.xi_from;
        if (o.xi_to) r.to = *o.xi_to;
        if (o.steps) r.steps = *o.steps;
        cfg.xi_range = r;
        cfg.xi.reset();
    }
    if (o.bracket_lo || o.bracket_hi) {
        XiBracket b = cfg.bracket.value_or(XiBracket{0.0, 0.0});
        if (o.bracket_lo) b.lo = *o.bracket_lo;
        if (o.bracket_hi) b.hi = *o.bracket_hi;
        if (!cfg.bracket && !(o.bracket_lo && o.bracket_hi)) {
            throw ConfigError("a bracket needs both --bracket-lo and --bracket-hi");
        }
        cfg.bracket = b;
    }
    if (o.x0) cfg.initial_state(0) = *o.x0;
    if (o.y0) cfg.initial_state(1) = *o.y0;
    if (o.t_end) cfg.t_end = *o.t_end;
    if (o.nx) cfg.grid.nx = *o.nx;
    if (o.ny) cfg.grid.ny = *o.ny;
    if (o.rel_tol) cfg.integrator.rel_tol = *o.rel_tol;
    if (o.abs_tol) cfg.integrator.abs_tol = *o.abs_tol;
    if (o.max_time) cfg.integrator.max_time = *o.max_time;
    if (o.output) cfg.output_path = *o.output;
    if (o.format) cfg.format = output_format_from_string(*o.format);
    if (o.threads) cfg.threads = *o.threads;
    if (cfg.xi) cfg.params.xi = *cfg.xi;
}

}  // namespace afmi
