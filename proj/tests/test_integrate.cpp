#include <random>
#include <vector>

#include "afmi/integrate.hpp"
#include "afmi/manifolds.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace afmi;

namespace {

IntegratorSettings plain(double rel = 1e-10) {
    IntegratorSettings s;
    s.rel_tol = rel;
    s.abs_tol = rel * 1e-2;
    s.detect_convergence = false;
    return s;
}

State final_state(const ModelParams& p, const State& s0, double t, const IntegratorSettings& s) {
    const double times[] = {t};
    const Trajectory tr = integrate(p, s0, s, times);
    REQUIRE(tr.samples.size() == 1);
    return tr.samples.back().state;
}

AttractorId::Kind kind_of(const ModelParams& p, State s0) { return classify_omega_limit(p, s0).kind; }

}  // namespace

TEST_CASE("agrees with a fixed-step RK4 reference") {
    for (double xi : {1.6, 2.2, 2.469}) {
        const ModelParams p = reference_params(xi);
        for (const State& s0 : {State(1.0, 0.5), State(10, 4), State(0.5, 9)}) {
            const State a = final_state(p, s0, 50.0, plain());
            const auto b = oracle::rk4(oracle::reference(xi), arr(s0), 50.0, 20000);
            CHECK(std::abs(a(0) - b[0]) < 1e-7);
            CHECK(std::abs(a(1) - b[1]) < 1e-7);
        }
    }
}

TEST_CASE("sampling at requested times") {
    const ModelParams p = reference_params(2.2);
    std::vector<double> times;
    for (int i = 0; i <= 10; ++i) times.push_back(5.0 * i);
    const Trajectory tr = integrate(p, State(1, 0.5), plain(1e-8), times);
    REQUIRE(tr.samples.size() == times.size());
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(tr.samples[i].t == doctest::Approx(times[i]));
    CHECK(tr.samples[0].state == State(1, 0.5));
}

TEST_CASE("backward integration retraces the forward path") {
    const ModelParams p = reference_params(2.2);
    const State s0(6, 5);
    const State mid = final_state(p, s0, 20.0, plain(1e-12));
    const double times[] = {20.0};
    const Trajectory back = integrate(p, mid, plain(1e-12), times, TimeDirection::Backward);
    CHECK((back.samples.back().state - s0).norm() < 1e-7);
}

TEST_CASE("equilibrium start stays put") {
    const ModelParams p = reference_params(2.2);
    for (const auto& e : all_equilibria(p)) {
        const Trajectory tr = integrate(p, e.location);
        CHECK(tr.termination == Termination::ConvergedTo);
        CHECK(tr.attractor == AttractorId::from_equilibrium(e.kind));
        for (const auto& smp : tr.samples) CHECK((smp.state - e.location).norm() < 1e-6);
    }
}

TEST_CASE("omega-limit examples") {
    const ModelParams p = reference_params(2.2);
    const Trajectory a = integrate(reference_params(2.469), State(1.0, 0.5));
    CHECK(a.termination == Termination::ConvergedTo);
    CHECK(a.attractor.label() == "PreyFreeEq");

    const Equilibrium e2 = interior_equilibria(p)[1];
    const Trajectory b = integrate(p, State(e2.location + State(1e-3, 0)));
    CHECK(b.termination == Termination::ConvergedTo);
    CHECK(b.attractor.label() == "InteriorEq(E2)");

    CHECK(kind_of(p, State(0.01, 8.0)) == AttractorId::Kind::PreyFreeEq);
    CHECK(classify_omega_limit(p, State(10, 4)).label() == "InteriorEq(E2)");

    const Equilibrium pf = *find_equilibrium(all_equilibria(p), EquilibriumKind::PreyFree);
    const Trajectory c = integrate(p, pf.location);
    CHECK(c.termination == Termination::ConvergedTo);
    CHECK(c.attractor.label() == "PreyFreeEq");
    CHECK(c.samples.back().t < 1e-9 + c.samples.front().t + 20.0);
}

TEST_CASE("invalid input") {
    const ModelParams p = reference_params(2.2);
    CHECK_THROWS_AS(integrate(p, State(-1, 1)), DomainError);
    IntegratorSettings s;
    s.rel_tol = 1e-2;
    CHECK_THROWS_AS(integrate(p, State(1, 1), s), DomainError);
    s = {};
    s.max_time = 0;
    CHECK_THROWS_AS(integrate(p, State(1, 1), s), DomainError);
}

TEST_CASE("observer can stop the run") {
    const ModelParams p = reference_params(2.2);
    int calls = 0;
    const Trajectory tr = integrate(p, State(1, 1), {}, {}, TimeDirection::Forward, [&](const StepView& v) {
        CHECK((v.at(v.t0()) - v.start()).norm() < 1e-12);
        CHECK((v.at(v.t1()) - v.end()).norm() < 1e-12);
        return ++calls < 5;
    });
    CHECK(calls == 5);
    CHECK(tr.termination == Termination::BudgetExhausted);
}

TEST_CASE("halving the tolerance changes little") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const ModelParams p = reference_params(1.6 + 1.2 * u(rng));
        const State s0(0.1 + 14.9 * u(rng), 0.1 + 9.9 * u(rng));
        const double rel = 1e-8;
        const State a = final_state(p, s0, 50.0, plain(rel));
        const State b = final_state(p, s0, 50.0, plain(rel / 2));
        CHECK((a - b).norm() < 10 * rel * std::max(a.norm(), 1.0));
    }
}

TEST_CASE("trajectories stay in the quadrant and bounded") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 1);
    std::size_t steps = 0, clips = 0;
    for (int i = 0; i < 100; ++i) {
        oracle::P op = oracle::draw(rng);
        const ModelParams p = lib(op);
        REQUIRE(is_bounded_regime(p).bounded);
        const State s0(p.k * u(rng), 3 * p.k * u(rng));
        IntegratorSettings s;
        s.max_time = 500;
        s.detect_convergence = false;
        double peak = 0;
        const Trajectory tr = integrate(p, s0, s, {}, TimeDirection::Forward, [&](const StepView& v) {
            peak = std::max(peak, v.end().norm());
            return true;
        });
        CHECK(tr.termination != Termination::Escaped);
        CHECK(peak <= 10 * std::max(s0.norm(), State(p.k, 3 * p.k).norm()));
        for (const auto& smp : tr.samples) {
            CHECK(smp.state(0) >= -s.abs_tol);
            CHECK(smp.state(1) >= -s.abs_tol);
        }
        steps += tr.steps;
        clips += tr.clip_events;
    }
    CHECK(static_cast<double>(clips) < 1e-3 * static_cast<double>(steps));
}

TEST_CASE("classification is stable when the horizon doubles") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(0, 1);
    for (double xi : {1.9, 2.2, 2.469}) {
        const ModelParams p = reference_params(xi);
        const Equilibrium e1 = interior_equilibria(p)[0];
        const Manifold up = trace_manifold(p, e1, Branch::StablePlus);
        const Manifold dn = trace_manifold(p, e1, Branch::StableMinus);
        int used = 0;
        while (used < 15) {
            const State s0(0.1 + 14.9 * u(rng), 0.1 + 9.9 * u(rng));
            if (distance_to_polyline(up.points, s0) < 1e-2 || distance_to_polyline(dn.points, s0) < 1e-2) continue;
            ++used;
            IntegratorSettings a, b;
            b.max_time = 2 * a.max_time;
            CHECK(classify_omega_limit(p, s0, a) == classify_omega_limit(p, s0, b));
        }
    }
}
