#include "afmi/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace afmi {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
    os << "t,x,y\n";
    for (const auto& s : tr.samples) {
        os << format_double(s.t) << ',' << format_double(s.state(0)) << ',' << format_double(s.state(1)) << '\n';
    }
}

void write_manifold_csv(std::ostream& os, const std::vector<Manifold>& ms) {
    os << "branch,x,y\n";
    for (const auto& m : ms) {
        for (const auto& s : m.points) {
            os << to_string(m.branch) << ',' << format_double(s(0)) << ',' << format_double(s(1)) << '\n';
        }
    }
}

void write_sweep_csv(std::ostream& os, const SweepDataset& ds) {
    os << "xi,x1,y1,stab1,x2,y2,stab2,events\n";
    for (const auto& r : ds.rows) {
        const Equilibrium* lower = nullptr;
        const Equilibrium* upper = nullptr;
        for (const auto& e : r.interior) {
            if (e.kind == EquilibriumKind::InteriorHigh) upper = &e;
            else lower = &e;
        }
        os << format_double(r.xi);
        for (const Equilibrium* e : {lower, upper}) {
            if (e) {
                os << ',' << format_double(e->location(0)) << ',' << format_double(e->location(1)) << ','
                   << to_string(e->stability);
            } else {
                os << ",,,";
            }
        }
        os << ',';
        for (std::size_t i = 0; i < r.events.size(); ++i) os << (i ? ";" : "") << to_string(r.events[i]);
        os << '\n';
    }
}

void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs) {
    os << "kind,x,y,stability,re1,im1,re2,im2\n";
    for (const auto& e : eqs) {
        os << to_string(e.kind) << ',' << format_double(e.location(0)) << ',' << format_double(e.location(1)) << ','
           << to_string(e.stability);
        for (const auto& l : e.eigenvalues) os << ',' << format_double(l.real()) << ',' << format_double(l.imag());
        os << '\n';
    }
}

namespace {

json num(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

double get_num(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        throw DomainError("expected a number, got \"" + s + "\"");
    }
    return j.get<double>();
}

json vec(const Eigen::Vector2d& v) { return json::array({num(v(0)), num(v(1))}); }

Eigen::Vector2d get_vec(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DomainError("expected a 2-vector");
    return {get_num(j[0]), get_num(j[1])};
}

json eig(const EigenPair& e) {
    return json::array({json::array({e[0].real(), e[0].imag()}), json::array({e[1].real(), e[1].imag()})});
}

EigenPair get_eig(const json& j) {
    EigenPair e{};
    for (int i = 0; i < 2; ++i) e[i] = {j.at(i).at(0).get<double>(), j.at(i).at(1).get<double>()};
    return e;
}

std::string_view direction_name(TimeDirection d) { return d == TimeDirection::Forward ? "forward" : "backward"; }

TimeDirection direction_from(const std::string& s) {
    if (s == "forward") return TimeDirection::Forward;
    if (s == "backward") return TimeDirection::Backward;
    throw DomainError("unknown time direction: " + s);
}

CycleStability cycle_stability_from(const std::string& s) {
    for (auto c : {CycleStability::StableCycle, CycleStability::UnstableCycle, CycleStability::Neutral}) {
        if (to_string(c) == s) return c;
    }
    throw DomainError("unknown cycle stability: " + s);
}

TopologyClass topology_from(const std::string& s) {
    for (auto t : {TopologyClass::UnstableInsideStable, TopologyClass::StableInsideUnstable,
                   TopologyClass::NearCoincident, TopologyClass::Indeterminate}) {
        if (to_string(t) == s) return t;
    }
    throw DomainError("unknown topology class: " + s);
}

UpperCase upper_case_from(const std::string& s) {
    for (auto c : {UpperCase::StableRegime, UpperCase::WeakFocus, UpperCase::Repeller}) {
        if (to_string(c) == s) return c;
    }
    throw DomainError("unknown upper case: " + s);
}

}  // namespace

void to_json(json& j, const ModelParams& p) {
    j = json{{"alpha", p.alpha}, {"beta", p.beta}, {"delta", p.delta},
             {"epsilon", p.epsilon}, {"xi", p.xi}, {"k", p.k}};
}

void from_json(const json& j, ModelParams& p) {
    p.alpha = j.at("alpha").get<double>();
    p.beta = j.at("beta").get<double>();
    p.delta = j.at("delta").get<double>();
    p.epsilon = j.at("epsilon").get<double>();
    p.xi = j.at("xi").get<double>();
    p.k = j.at("k").get<double>();
}

void to_json(json& j, const IntegratorSettings& s) {
    j = json{{"rel_tol", s.rel_tol},
             {"abs_tol", s.abs_tol},
             {"max_time", s.max_time},
             {"max_steps", s.max_steps},
             {"escape_norm", s.escape_norm},
             {"convergence_radius", s.convergence_radius},
             {"convergence_dwell", s.convergence_dwell},
             {"detect_convergence", s.detect_convergence},
             {"stop_at_axis", s.stop_at_axis},
             {"ignore_start_equilibrium", s.ignore_start_equilibrium}};
}

void from_json(const json& j, IntegratorSettings& s) {
    s.rel_tol = j.at("rel_tol").get<double>();
    s.abs_tol = j.at("abs_tol").get<double>();
    s.max_time = j.at("max_time").get<double>();
    s.max_steps = j.at("max_steps").get<std::size_t>();
    s.escape_norm = j.at("escape_norm").get<double>();
    s.convergence_radius = j.at("convergence_radius").get<double>();
    s.convergence_dwell = j.at("convergence_dwell").get<double>();
    s.detect_convergence = j.value("detect_convergence", true);
    s.stop_at_axis = j.value("stop_at_axis", false);
    s.ignore_start_equilibrium = j.value("ignore_start_equilibrium", false);
}

void to_json(json& j, const Equilibrium& e) {
    j = json{{"kind", std::string(to_string(e.kind))},
             {"location", vec(e.location)},
             {"eigenvalues", eig(e.eigenvalues)},
             {"stability", std::string(to_string(e.stability))}};
}

void from_json(const json& j, Equilibrium& e) {
    e.kind = equilibrium_kind_from_string(j.at("kind").get<std::string>());
    e.location = get_vec(j.at("location"));
    e.eigenvalues = get_eig(j.at("eigenvalues"));
    e.stability = stability_class_from_string(j.at("stability").get<std::string>());
}

void to_json(json& j, const SaddleBoundCheck& c) {
    j = json{{"bound", num(c.bound)},
             {"bound_as_printed", num(c.bound_as_printed)},
             {"saddle_by_bound", c.saddle_by_bound},
             {"det", c.det},
             {"det_negative", c.det_negative},
             {"verdict", std::string(to_string(c.verdict))}};
}

void from_json(const json& j, SaddleBoundCheck& c) {
    c.bound = get_num(j.at("bound"));
    c.bound_as_printed = get_num(j.at("bound_as_printed"));
    c.saddle_by_bound = j.at("saddle_by_bound").get<bool>();
    c.det = j.at("det").get<double>();
    c.det_negative = j.at("det_negative").get<bool>();
    c.verdict = stability_class_from_string(j.at("verdict").get<std::string>());
}

void to_json(json& j, const UpperCaseCheck& c) {
    j = json{{"case", std::string(to_string(c.which))},
             {"det_bound", num(c.det_bound)},
             {"trace_bound", num(c.trace_bound)},
             {"trace", c.trace},
             {"det", c.det},
             {"agrees_with_direct", c.agrees_with_direct}};
}

void from_json(const json& j, UpperCaseCheck& c) {
    c.which = upper_case_from(j.at("case").get<std::string>());
    c.det_bound = get_num(j.at("det_bound"));
    c.trace_bound = get_num(j.at("trace_bound"));
    c.trace = j.at("trace").get<double>();
    c.det = j.at("det").get<double>();
    c.agrees_with_direct = j.at("agrees_with_direct").get<bool>();
}

void to_json(json& j, const StabilityReport& r) {
    j = json{{"trace", r.trace},
             {"determinant", r.determinant},
             {"eigenvalues", eig(r.eigenvalues)},
             {"stability", std::string(to_string(r.stability))}};
    if (r.theorem_flags.saddle) j["saddle_check"] = *r.theorem_flags.saddle;
    if (r.theorem_flags.upper) j["upper_check"] = *r.theorem_flags.upper;
}

void from_json(const json& j, StabilityReport& r) {
    r.trace = j.at("trace").get<double>();
    r.determinant = j.at("determinant").get<double>();
    r.eigenvalues = get_eig(j.at("eigenvalues"));
    r.stability = stability_class_from_string(j.at("stability").get<std::string>());
    r.theorem_flags = {};
    if (j.contains("saddle_check")) r.theorem_flags.saddle = j.at("saddle_check").get<SaddleBoundCheck>();
    if (j.contains("upper_check")) r.theorem_flags.upper = j.at("upper_check").get<UpperCaseCheck>();
}

void to_json(json& j, const AttractorId& a) {
    j = json{{"label", a.label()}, {"reference", a.reference}};
}

void from_json(const json& j, AttractorId& a) {
    a = attractor_from_label(j.at("label").get<std::string>());
    a.reference = j.at("reference").get<double>();
}

void to_json(json& j, const GridSpec& g) {
    j = json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
             {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

void from_json(const json& j, GridSpec& g) {
    g.x_min = j.at("x_min").get<double>();
    g.x_max = j.at("x_max").get<double>();
    g.y_min = j.at("y_min").get<double>();
    g.y_max = j.at("y_max").get<double>();
    g.nx = j.at("nx").get<int>();
    g.ny = j.at("ny").get<int>();
}

void to_json(json& j, const BasinEstimate& b) {
    j = json{{"grid", b.grid},
             {"counts", b.counts},
             {"fraction_prey_free", b.fraction_prey_free},
             {"unresolved", b.unresolved}};
}

void from_json(const json& j, BasinEstimate& b) {
    b.grid = j.at("grid").get<GridSpec>();
    b.counts = j.at("counts").get<std::map<std::string, std::size_t>>();
    b.fraction_prey_free = j.at("fraction_prey_free").get<double>();
    b.unresolved = j.at("unresolved").get<std::size_t>();
}

void to_json(json& j, const HalfLineSection& s) {
    j = json{{"anchor", vec(s.anchor)}, {"direction", vec(s.direction)}};
}

void from_json(const json& j, HalfLineSection& s) {
    s.anchor = get_vec(j.at("anchor"));
    s.direction = get_vec(j.at("direction"));
}

void to_json(json& j, const LimitCycleResult& r) {
    j = json{{"section", r.section},
             {"fixed_point", vec(r.fixed_point)},
             {"period", r.period},
             {"floquet_slope", num(r.floquet_slope)},
             {"stability", std::string(to_string(r.stability))},
             {"found_in", std::string(direction_name(r.found_in))}};
}

void from_json(const json& j, LimitCycleResult& r) {
    r.section = j.at("section").get<HalfLineSection>();
    r.fixed_point = get_vec(j.at("fixed_point"));
    r.period = j.at("period").get<double>();
    r.floquet_slope = get_num(j.at("floquet_slope"));
    r.stability = cycle_stability_from(j.at("stability").get<std::string>());
    r.found_in = direction_from(j.at("found_in").get<std::string>());
}

void to_json(json& j, const ManifoldTopology& t) {
    j = json{{"class", std::string(to_string(t.cls))},
             {"gap", num(t.gap)},
             {"r_unstable", num(t.r_unstable)},
             {"r_stable", num(t.r_stable)},
             {"ray", t.ray}};
}

void from_json(const json& j, ManifoldTopology& t) {
    t.cls = topology_from(j.at("class").get<std::string>());
    t.gap = get_num(j.at("gap"));
    t.r_unstable = get_num(j.at("r_unstable"));
    t.r_stable = get_num(j.at("r_stable"));
    t.ray = j.at("ray").get<HalfLineSection>();
}

void to_json(json& j, const BifurcationEvent& e) {
    json diag = json::object();
    for (const auto& [k, v] : e.diagnostics) diag[k] = num(v);
    j = json{{"kind", std::string(to_string(e.kind))},
             {"xi_star", e.xi_star},
             {"location", vec(e.location)},
             {"diagnostics", diag}};
}

void from_json(const json& j, BifurcationEvent& e) {
    e.kind = bifurcation_kind_from_string(j.at("kind").get<std::string>());
    e.xi_star = j.at("xi_star").get<double>();
    e.location = get_vec(j.at("location"));
    e.diagnostics.clear();
    for (const auto& [k, v] : j.at("diagnostics").items()) e.diagnostics[k] = get_num(v);
}

void to_json(json& j, const SweepRow& r) {
    json ev = json::array();
    for (auto k : r.events) ev.push_back(std::string(to_string(k)));
    j = json{{"xi", r.xi}, {"interior", r.interior}, {"events", ev}};
}

void from_json(const json& j, SweepRow& r) {
    r.xi = j.at("xi").get<double>();
    r.interior = j.at("interior").get<std::vector<Equilibrium>>();
    r.events.clear();
    for (const auto& k : j.at("events")) r.events.push_back(bifurcation_kind_from_string(k.get<std::string>()));
}

void to_json(json& j, const SweepDataset& d) {
    j = json{{"rows", d.rows}, {"events", d.events}};
}

void from_json(const json& j, SweepDataset& d) {
    d.rows = j.at("rows").get<std::vector<SweepRow>>();
    d.events = j.at("events").get<std::vector<BifurcationEvent>>();
}

}  // namespace afmi
