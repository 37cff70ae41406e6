#include <sstream>

#include "afmi/io.hpp"
#include "afmi/svg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace afmi;

namespace {

// Text round trip: emit, parse, rebuild the value, emit again.
template <class T>
json twice(const T& value) {
    const json first = value;
    const T back = json::parse(first.dump()).get<T>();
    const json second = back;
    CHECK(first == second);
    return second;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("JSON round trips") {
    const ModelParams p = reference_params(2.2);
    CHECK(json::parse(json(p).dump()).get<ModelParams>() == p);

    IntegratorSettings s;
    s.rel_tol = 3e-9;
    s.stop_at_axis = true;
    const IntegratorSettings s2 = json::parse(json(s).dump()).get<IntegratorSettings>();
    CHECK(s2.rel_tol == s.rel_tol);
    CHECK(s2.stop_at_axis);
    twice(s);

    for (const auto& e : all_equilibria(p)) {
        const Equilibrium back = json::parse(json(e).dump()).get<Equilibrium>();
        CHECK(back.kind == e.kind);
        CHECK(back.location == e.location);
        CHECK(back.eigenvalues == e.eigenvalues);
        CHECK(back.stability == e.stability);
        const StabilityReport r = stability_report(p, e);
        twice(r);
        const StabilityReport rb = json::parse(json(r).dump()).get<StabilityReport>();
        CHECK(rb.trace == r.trace);
        CHECK(rb.theorem_flags.saddle.has_value() == r.theorem_flags.saddle.has_value());
        CHECK(rb.theorem_flags.upper.has_value() == r.theorem_flags.upper.has_value());
    }

    for (const char* label : {"PreyFreeEq", "InteriorEq(E2)", "LimitCycle", "Unknown", "TrivialEq"}) {
        const AttractorId a = attractor_from_label(label);
        CHECK(a.label() == label);
        CHECK(json::parse(json(a).dump()).get<AttractorId>() == a);
    }

    GridSpec g;
    g.nx = 10;
    g.ny = 12;
    const BasinEstimate b = basin_fraction(p, g);
    const BasinEstimate bb = json::parse(json(b).dump()).get<BasinEstimate>();
    CHECK(bb.counts == b.counts);
    CHECK(bb.fraction_prey_free == b.fraction_prey_free);
    CHECK(bb.grid.ny == 12);

    const ManifoldTopology t = manifold_topology(reference_params(2.46));
    const ManifoldTopology tb = json::parse(json(t).dump()).get<ManifoldTopology>();
    CHECK(tb.cls == t.cls);
    CHECK(tb.gap == t.gap);
    CHECK(tb.ray.direction == t.ray.direction);

    const ModelParams c = reference_params(2.476);
    const State e2 = interior_equilibria(c)[1].location;
    const auto cycle = find_limit_cycle(c, e2 + State(0.2, 0), HalfLineSection{e2, Eigen::Vector2d::UnitX()});
    REQUIRE(cycle);
    const LimitCycleResult cb = json::parse(json(*cycle).dump()).get<LimitCycleResult>();
    CHECK(cb.fixed_point == cycle->fixed_point);
    CHECK(cb.period == cycle->period);
    CHECK(cb.stability == cycle->stability);
    CHECK(cb.found_in == cycle->found_in);

    const SweepDataset ds = sweep(reference_params(), {0.5, 3.0, 60});
    const SweepDataset db = json::parse(json(ds).dump()).get<SweepDataset>();
    REQUIRE(db.rows.size() == ds.rows.size());
    REQUIRE(db.events.size() == ds.events.size());
    for (std::size_t i = 0; i < ds.events.size(); ++i) CHECK(db.events[i] == ds.events[i]);
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
        CHECK(db.rows[i].xi == ds.rows[i].xi);
        CHECK(db.rows[i].events == ds.rows[i].events);
        REQUIRE(db.rows[i].interior.size() == ds.rows[i].interior.size());
        for (std::size_t j = 0; j < ds.rows[i].interior.size(); ++j)
            CHECK(db.rows[i].interior[j].location == ds.rows[i].interior[j].location);
    }
    twice(ds);
}

TEST_CASE("non-finite numbers survive JSON") {
    ManifoldTopology t;
    t.gap = std::numeric_limits<double>::infinity();
    t.r_stable = std::numeric_limits<double>::infinity();
    t.r_unstable = std::nan("");
    const ManifoldTopology b = json::parse(json(t).dump()).get<ManifoldTopology>();
    CHECK(std::isinf(b.gap));
    CHECK(std::isnan(b.r_unstable));
}

TEST_CASE("CSV writers") {
    const ModelParams p = reference_params(2.2);
    std::ostringstream eq;
    write_equilibria_csv(eq, all_equilibria(p));
    CHECK(first_line(eq.str()) == "kind,x,y,stability,re1,im1,re2,im2");
    CHECK(count(eq.str(), "\n") == 1 + all_equilibria(p).size());

    const double times[] = {0.0, 1.0, 2.0};
    std::ostringstream tr;
    write_trajectory_csv(tr, integrate(p, State(1, 1), {}, times));
    CHECK(tr.str().rfind("t,x,y\n0,1,1\n", 0) == 0);
    CHECK(count(tr.str(), "\n") == 4);

    std::ostringstream mf;
    write_manifold_csv(mf, {trace_manifold(p, interior_equilibria(p)[0], Branch::UnstableMinus)});
    CHECK(first_line(mf.str()) == "branch,x,y");
    CHECK(mf.str().find("\nUnstableMinus,") != std::string::npos);

    std::ostringstream sw;
    write_sweep_csv(sw, sweep(reference_params(), {1.5, 2.6, 12}));
    CHECK(first_line(sw.str()) == "xi,x1,y1,stab1,x2,y2,stab2,events");
    CHECK(count(sw.str(), "\n") == 13);

    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("portrait SVG") {
    PortraitData d;
    d.params = reference_params(2.2);
    d.equilibria = all_equilibria(d.params);
    const std::string a = portrait_svg(d);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("version=\"1.1\"") != std::string::npos);
    CHECK(a.substr(a.size() - 7) == "</svg>\n");
    CHECK(count(a, "class=\"glyph interior\"") == 2);
    CHECK(count(a, "<g") == count(a, "</g>"));
    CHECK(count(a, "class=\"nullcline") == 2);
    CHECK(a.find(std::string(stability_color(StabilityClass::Saddle))) != std::string::npos);
    CHECK(a.find(std::string(stability_color(StabilityClass::StableFocus))) != std::string::npos);

    d.manifolds.push_back(trace_manifold(d.params, d.equilibria[3], Branch::StablePlus));
    d.trajectories.push_back(integrate(d.params, State(1, 1)));
    const std::string b1 = portrait_svg(d), b2 = portrait_svg(d);
    CHECK(b1 == b2);
    CHECK(count(b1, "class=\"manifold\"") == 1);
    CHECK(count(b1, "class=\"trajectory\"") == 1);
    // nullclines, manifolds, trajectories, glyphs in that order
    CHECK(b1.find("nullcline") < b1.find("class=\"manifold\""));
    CHECK(b1.find("class=\"manifold\"") < b1.find("class=\"trajectory\""));
    CHECK(b1.find("class=\"trajectory\"") < b1.find("class=\"glyph"));

    PortraitData bad = d;
    bad.x_max = bad.x_min;
    CHECK_THROWS_AS(portrait_svg(bad), LayoutError);
    bad = d;
    bad.y_max = NAN;
    CHECK_THROWS_AS(portrait_svg(bad), LayoutError);
    CHECK_THROWS_AS(portrait_svg(d, SvgStyle{100, 100, 60, ""}), LayoutError);
}

TEST_CASE("sweep SVG") {
    const SweepDataset ds = sweep(reference_params(), {0.5, 3.0, 100});
    const std::string s = sweep_svg(ds);
    CHECK(s == sweep_svg(ds));
    CHECK(count(s, "class=\"event\"") == ds.events.size());
    CHECK_THROWS_AS(sweep_svg(SweepDataset{}), LayoutError);
}

TEST_CASE("regime map") {
    const RegimeMap m = regime_map(reference_params(), 0.05, 0.6, 0.0, 4.0);
    REQUIRE(m.curves.size() == 3);
    const std::string s = regime_svg(m);
    CHECK(count(s, "<polyline class=\"boundary\"") == 3);
    CHECK(s == regime_svg(regime_map(reference_params(), 0.05, 0.6, 0.0, 4.0)));
    CHECK(m.cells.size() == static_cast<std::size_t>(m.n_eps * m.n_xi));

    // each curve is where its defining quantity vanishes
    const ModelParams p = reference_params();
    for (const auto& c : m.curves) {
        for (const auto& pt : c.points) {
            ModelParams q = p;
            q.epsilon = pt(0);
            q.xi = pt(1);
            const QuadraticCoefficients k = quadratic_coefficients(q);
            if (c.name == "b_zero") CHECK(std::abs(k.b) < 1e-9);
            if (c.name == "c_zero") CHECK(std::abs(k.c) < 1e-9);
            if (c.name == "equal_slopes") {
                const SlopeComparison sc = slope_comparison(q);
                CHECK(std::abs(sc.m_prey_axis - sc.m_pred_line) < 1e-9);
            }
        }
    }
    CHECK_THROWS_AS(regime_map(p, 0.6, 0.05, 0.0, 4.0), Error);
}
