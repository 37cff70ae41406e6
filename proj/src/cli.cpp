#include "afmi/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "afmi/svg.hpp"

namespace afmi {

const std::vector<CasePreset>& case_presets() {
    static const std::vector<CasePreset> presets = {
        {1, reference_params(1.6), "one interior equilibrium, locally stable"},
        {2, reference_params(1.92), "two interior equilibria, bi-stability separated by the saddle's stable manifold"},
        {3, reference_params(2.2), "bi-stability with a stable focus E2"},
        {4, reference_params(2.469), "stable manifold of E1 winds around E2, prey-free basin dominates"},
        {5, reference_params(2.4741313), "homoclinic connection of the saddle E1"},
        {6, reference_params(2.478), "E2 an unstable focus just past the Hopf point"},
    };
    return presets;
}

const CasePreset& case_preset(int id) {
    for (const auto& c : case_presets()) {
        if (c.id == id) return c;
    }
    throw ConfigError("unknown case id " + std::to_string(id) + " (expected 1..6)");
}

namespace {

json equilibrium_reports(const ModelParams& p, const std::vector<Equilibrium>& eqs) {
    json reports = json::array();
    for (const auto& e : eqs) reports.push_back(json{{"equilibrium", e}, {"report", stability_report(p, e)}});
    return reports;
}

std::optional<Equilibrium> saddle_of(const ModelParams& p) {
    const auto eqs = interior_equilibria(p);
    auto e1 = find_equilibrium(eqs, EquilibriumKind::InteriorLow);
    if (e1 && jacobian(p, e1->location).determinant() < 0) return e1;
    return std::nullopt;
}

}  // namespace

json case_report(int id, unsigned threads) {
    const CasePreset& c = case_preset(id);
    const ModelParams& p = c.params;
    const auto eqs = all_equilibria(p);
    json j{{"case", id}, {"summary", c.summary}, {"params", p}, {"equilibria", eqs},
           {"reports", equilibrium_reports(p, eqs)}};

    const auto interior = interior_equilibria(p);
    if (id == 2 || id == 4) j["basin"] = basin_fraction(p, GridSpec{}, {}, threads);
    if (id == 3 || id == 6) {
        if (auto e2 = find_equilibrium(interior, EquilibriumKind::InteriorHigh)) {
            const HalfLineSection section{e2->location, Eigen::Vector2d::UnitX()};
            const auto cycle = find_limit_cycle(p, e2->location + State(0.3, 0.0), section);
            j["limit_cycle"] = cycle ? json(*cycle) : json(nullptr);
        }
    }
    if (id == 4 || id == 5) j["topology"] = manifold_topology(p);
    return j;
}

namespace {

struct Emitter {
    const RunConfig& cfg;
    std::ostream& out;

    void write(const std::string& text) const {
        if (cfg.output_path.empty()) {
            out << text;
            return;
        }
        std::ofstream f(cfg.output_path, std::ios::binary);
        if (!f) throw ConfigError("output path '" + cfg.output_path + "' is not writable");
        f << text;
        if (!f) throw ConfigError("failed writing '" + cfg.output_path + "'");
    }
};

OutputFormat pick_format(const RunConfig& cfg, std::string_view command, OutputFormat fallback,
                         std::initializer_list<OutputFormat> allowed) {
    const OutputFormat f = cfg.format.value_or(fallback);
    if (std::find(allowed.begin(), allowed.end(), f) == allowed.end()) {
        throw ConfigError("command '" + std::string(command) + "' cannot write " + std::string(to_string(f)));
    }
    return f;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

PortraitData portrait_for(const ModelParams& p) {
    PortraitData d;
    d.params = p;
    d.x_min = 0;
    d.x_max = p.k;
    d.y_min = 0;
    d.equilibria = all_equilibria(p);
    double y_hi = 10;
    for (const auto& e : d.equilibria) y_hi = std::max(y_hi, 1.2 * e.location(1));
    d.y_max = y_hi;
    return d;
}

std::string cmd_equilibria(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    const auto eqs = all_equilibria(p);
    if (pick_format(cfg, "equilibria", OutputFormat::Json, {OutputFormat::Json, OutputFormat::Csv}) ==
        OutputFormat::Csv) {
        std::ostringstream os;
        write_equilibria_csv(os, eqs);
        return os.str();
    }
    return dump(json{{"params", p}, {"equilibria", eqs}});
}

std::string cmd_stability(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    const auto eqs = all_equilibria(p);
    if (pick_format(cfg, "stability", OutputFormat::Json, {OutputFormat::Json, OutputFormat::Csv}) ==
        OutputFormat::Csv) {
        std::ostringstream os;
        os << "kind,x,y,trace,det,stability\n";
        for (const auto& e : eqs) {
            const StabilityReport r = stability_report(p, e);
            os << to_string(e.kind) << ',' << format_double(e.location(0)) << ',' << format_double(e.location(1))
               << ',' << format_double(r.trace) << ',' << format_double(r.determinant) << ',' << to_string(r.stability)
               << '\n';
        }
        return os.str();
    }
    return dump(json{{"params", p}, {"reports", equilibrium_reports(p, eqs)}});
}

std::string cmd_nullclines(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    const OutputFormat f =
        pick_format(cfg, "nullclines", OutputFormat::Csv, {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg});
    if (f == OutputFormat::Svg) return portrait_svg(portrait_for(p), {.title = "nullclines"});

    constexpr int kSamples = 200;
    std::vector<State> prey, pred;
    for (int i = 0; i <= kSamples; ++i) {
        const double x = p.k * i / kSamples;
        try {
            prey.emplace_back(x, prey_nullcline_y(p, x));
        } catch (const InfeasibleError&) {
        }
        pred.emplace_back(x, predator_nullcline_y(p, x));
    }
    if (f == OutputFormat::Csv) {
        std::ostringstream os;
        os << "curve,x,y\n";
        for (const auto& s : prey) os << "prey," << format_double(s(0)) << ',' << format_double(s(1)) << '\n';
        for (const auto& s : pred) os << "predator," << format_double(s(0)) << ',' << format_double(s(1)) << '\n';
        return os.str();
    }
    auto arr = [](const std::vector<State>& v) {
        json a = json::array();
        for (const auto& s : v) a.push_back({s(0), s(1)});
        return a;
    };
    return dump(json{{"params", p}, {"prey", arr(prey)}, {"predator", arr(pred)}});
}

std::string cmd_simulate(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    IntegratorSettings s = cfg.integrator;
    s.max_time = cfg.t_end;
    s.detect_convergence = false;
    std::vector<double> times(static_cast<std::size_t>(cfg.samples));
    for (int i = 0; i < cfg.samples; ++i) times[i] = cfg.t_end * i / (cfg.samples - 1);
    const Trajectory tr = integrate(p, cfg.initial_state, s, times);

    const OutputFormat f =
        pick_format(cfg, "simulate", OutputFormat::Csv, {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg});
    if (f == OutputFormat::Csv) {
        std::ostringstream os;
        write_trajectory_csv(os, tr);
        return os.str();
    }
    if (f == OutputFormat::Svg) {
        PortraitData d = portrait_for(p);
        d.trajectories.push_back(tr);
        return portrait_svg(d, {.title = "trajectory"});
    }
    json samples = json::array();
    for (const auto& smp : tr.samples) samples.push_back({smp.t, smp.state(0), smp.state(1)});
    return dump(json{{"params", p},
                     {"initial_state", {cfg.initial_state(0), cfg.initial_state(1)}},
                     {"termination", std::string(to_string(tr.termination))},
                     {"omega_limit", classify_omega_limit(p, cfg.initial_state, cfg.integrator)},
                     {"steps", tr.steps},
                     {"clip_events", tr.clip_events},
                     {"samples", samples}});
}

std::string cmd_manifold(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    const auto saddle = saddle_of(p);
    if (!saddle) throw PreconditionError("no interior saddle at this xi");
    std::vector<Manifold> ms;
    for (Branch b : cfg.branches) ms.push_back(trace_manifold(p, *saddle, b, cfg.budget));

    const OutputFormat f =
        pick_format(cfg, "manifold", OutputFormat::Csv, {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg});
    if (f == OutputFormat::Csv) {
        std::ostringstream os;
        write_manifold_csv(os, ms);
        return os.str();
    }
    if (f == OutputFormat::Svg) {
        PortraitData d = portrait_for(p);
        d.manifolds = ms;
        return portrait_svg(d, {.title = "invariant manifolds"});
    }
    json branches = json::array();
    for (const auto& m : ms) {
        json pts = json::array();
        for (const auto& s : m.points) pts.push_back({s(0), s(1)});
        branches.push_back(json{{"branch", std::string(to_string(m.branch))},
                                {"termination", std::string(to_string(m.termination))},
                                {"captured_by", m.captured_by},
                                {"arclength", m.arclength},
                                {"points", pts}});
    }
    TopologySettings ts;
    ts.budget = cfg.budget;
    return dump(json{{"params", p}, {"saddle", *saddle}, {"branches", branches}, {"topology", manifold_topology(p, ts)}});
}

std::string cmd_basin(const RunConfig& cfg) {
    const ModelParams p = cfg.params.with_xi(cfg.scalar_xi());
    std::vector<AttractorId> labels;
    const BasinEstimate b = basin_fraction(p, cfg.grid, cfg.integrator, cfg.threads, &labels);
    if (pick_format(cfg, "basin", OutputFormat::Json, {OutputFormat::Json, OutputFormat::Csv}) == OutputFormat::Csv) {
        std::ostringstream os;
        os << "x,y,attractor\n";
        for (int j = 0; j < cfg.grid.ny; ++j) {
            for (int i = 0; i < cfg.grid.nx; ++i) {
                os << format_double(cfg.grid.x(i)) << ',' << format_double(cfg.grid.y(j)) << ','
                   << labels[static_cast<std::size_t>(j) * cfg.grid.nx + i].label() << '\n';
            }
        }
        return os.str();
    }
    return dump(json{{"params", p}, {"basin", b}});
}

std::string cmd_sweep(const RunConfig& cfg) {
    if (cfg.xi && !cfg.xi_range) throw ConfigError("sweep needs xi as {from, to, steps}");
    const XiRange r = cfg.xi_range.value_or(XiRange{0.5, 3.0, 500});
    const SweepDataset ds = sweep(cfg.params, r, cfg.threads);
    const OutputFormat f =
        pick_format(cfg, "sweep", OutputFormat::Csv, {OutputFormat::Csv, OutputFormat::Json, OutputFormat::Svg});
    if (f == OutputFormat::Csv) {
        std::ostringstream os;
        write_sweep_csv(os, ds);
        return os.str();
    }
    if (f == OutputFormat::Svg) return sweep_svg(ds, {.title = "interior equilibria against xi"});
    return dump(json(ds));
}

std::string cmd_bifurcate(const RunConfig& cfg, const std::string& kind) {
    pick_format(cfg, "bifurcate", OutputFormat::Json, {OutputFormat::Json});
    auto need_bracket = [&]() {
        if (!cfg.bracket) throw ConfigError("bifurcate --kind " + kind + " needs a bracket {lo, hi}");
        return *cfg.bracket;
    };
    BifurcationEvent ev;
    if (kind == "transcritical") ev = locate_transcritical(cfg.params);
    else if (kind == "saddle-node") ev = locate_saddle_node(cfg.params, need_bracket());
    else if (kind == "hopf") ev = locate_hopf(cfg.params, need_bracket());
    else if (kind == "homoclinic") {
        TopologySettings ts;
        ts.budget = cfg.budget;
        ev = locate_homoclinic(cfg.params, need_bracket(), ts);
    } else {
        throw ConfigError("unknown bifurcation kind '" + kind + "'");
    }
    return dump(json(ev));
}

std::string cmd_regime_map(const RunConfig& cfg) {
    const RegimeWindow& w = cfg.regime;
    RegimeMap m;
    try {
        m = regime_map(cfg.params, w.eps_lo, w.eps_hi, w.xi_lo, w.xi_hi, w.samples);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const OutputFormat f =
        pick_format(cfg, "regime-map", OutputFormat::Svg, {OutputFormat::Svg, OutputFormat::Json, OutputFormat::Csv});
    if (f == OutputFormat::Svg) return regime_svg(m, {.title = "interior equilibrium regimes"});
    if (f == OutputFormat::Csv) {
        std::ostringstream os;
        os << "epsilon,xi,regime\n";
        for (int j = 0; j < m.n_xi; ++j) {
            for (int i = 0; i < m.n_eps; ++i) {
                const double eps = m.eps_lo + (m.eps_hi - m.eps_lo) * (i + 0.5) / m.n_eps;
                const double xi = m.xi_lo + (m.xi_hi - m.xi_lo) * (j + 0.5) / m.n_xi;
                os << format_double(eps) << ',' << format_double(xi) << ','
                   << to_string(m.cells[static_cast<std::size_t>(j) * m.n_eps + i]) << '\n';
            }
        }
        return os.str();
    }
    json curves = json::array();
    for (const auto& c : m.curves) {
        json pts = json::array();
        for (const auto& q : c.points) pts.push_back({q(0), q(1)});
        curves.push_back(json{{"name", c.name}, {"points", pts}});
    }
    return dump(json{{"params", cfg.params}, {"curves", curves}});
}

std::string cmd_case(const RunConfig& cfg, int id) {
    const CasePreset& c = case_preset(id);
    const OutputFormat f = pick_format(cfg, "case", OutputFormat::Json, {OutputFormat::Json, OutputFormat::Svg});
    if (f == OutputFormat::Svg) {
        PortraitData d = portrait_for(c.params);
        if (const auto s = saddle_of(c.params)) {
            d.manifolds.push_back(trace_manifold(c.params, *s, Branch::StablePlus, cfg.budget));
            d.manifolds.push_back(trace_manifold(c.params, *s, Branch::UnstablePlus, cfg.budget));
        }
        return portrait_svg(d, {.title = "case " + std::to_string(id)});
    }
    return dump(case_report(id, cfg.threads));
}

// Registers a value option whose presence is recorded in `target`.
template <class T>
void optional_flag(CLI::App& app, const std::string& name, std::optional<T>& target, const std::string& help,
                   std::vector<std::function<void()>>& finalizers) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app.add_option(name, *value, help);
    finalizers.push_back([opt, value, &target] {
        if (opt->count() > 0) target = *value;
    });
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"additional-food predator-prey analysis toolkit", "afmi"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    ConfigOverrides ov;
    std::vector<std::function<void()>> fin;
    app.add_option("-c,--config", config_path, "JSON config file");
    optional_flag(app, "--alpha", ov.alpha, "additional food quality parameter", fin);
    optional_flag(app, "--beta", ov.beta, "conversion efficiency", fin);
    optional_flag(app, "--delta", ov.delta, "predator death rate", fin);
    optional_flag(app, "--epsilon", ov.epsilon, "predator interference", fin);
    optional_flag(app, "--k", ov.k, "prey carrying capacity", fin);
    optional_flag(app, "--xi", ov.xi, "additional food quantity", fin);
    optional_flag(app, "--xi-from", ov.xi_from, "sweep start", fin);
    optional_flag(app, "--xi-to", ov.xi_to, "sweep end", fin);
    optional_flag(app, "--steps", ov.steps, "sweep samples", fin);
    optional_flag(app, "--bracket-lo", ov.bracket_lo, "bracket lower end", fin);
    optional_flag(app, "--bracket-hi", ov.bracket_hi, "bracket upper end", fin);
    optional_flag(app, "--x0", ov.x0, "initial prey", fin);
    optional_flag(app, "--y0", ov.y0, "initial predator", fin);
    optional_flag(app, "--t-end", ov.t_end, "simulation horizon", fin);
    optional_flag(app, "--nx", ov.nx, "basin grid columns", fin);
    optional_flag(app, "--ny", ov.ny, "basin grid rows", fin);
    optional_flag(app, "--rel-tol", ov.rel_tol, "integrator relative tolerance", fin);
    optional_flag(app, "--abs-tol", ov.abs_tol, "integrator absolute tolerance", fin);
    optional_flag(app, "--max-time", ov.max_time, "integration horizon for classification", fin);
    optional_flag(app, "-o,--output", ov.output, "output file (default stdout)", fin);
    optional_flag(app, "-f,--format", ov.format, "csv, json or svg", fin);
    optional_flag(app, "--threads", ov.threads, "worker threads (0 = auto)", fin);

    const std::pair<const char*, const char*> commands[] = {
        {"equilibria", "all equilibria with eigenvalues"},
        {"stability", "trace, determinant and class of each equilibrium"},
        {"nullclines", "sampled prey and predator nullclines"},
        {"simulate", "trajectory from --x0/--y0 up to --t-end"},
        {"manifold", "stable and unstable branches of the interior saddle"},
        {"basin", "omega-limit classification over a grid"},
        {"sweep", "interior equilibria and events along a xi range"},
        {"regime-map", "regime curves in the (epsilon, xi) plane"},
    };
    for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
    std::string kind;
    auto* bif = app.add_subcommand("bifurcate", "locate a bifurcation in xi")->fallthrough();
    bif->add_option("--kind", kind, "transcritical | saddle-node | hopf | homoclinic")
        ->required()
        ->check(CLI::IsMember({"transcritical", "saddle-node", "hopf", "homoclinic"}));
    int case_id = 0;
    auto* cs = app.add_subcommand("case", "preset scenarios 1..6")->fallthrough();
    cs->add_option("--id", case_id, "preset 1..6")->required()->check(CLI::Range(1, 6));

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    for (auto& f : fin) f();

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path);
        apply_overrides(cfg, ov);
        cfg.validate();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n\n" << config_schema();
        return 2;
    }

    try {
        const std::string cmd = app.get_subcommands().front()->get_name();
        std::string text;
        if (cmd == "equilibria") text = cmd_equilibria(cfg);
        else if (cmd == "stability") text = cmd_stability(cfg);
        else if (cmd == "nullclines") text = cmd_nullclines(cfg);
        else if (cmd == "simulate") text = cmd_simulate(cfg);
        else if (cmd == "manifold") text = cmd_manifold(cfg);
        else if (cmd == "basin") text = cmd_basin(cfg);
        else if (cmd == "sweep") text = cmd_sweep(cfg);
        else if (cmd == "bifurcate") text = cmd_bifurcate(cfg, kind);
        else if (cmd == "regime-map") text = cmd_regime_map(cfg);
        else if (cmd == "case") text = cmd_case(cfg, case_id);
        Emitter{cfg, out}.write(text);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace afmi
