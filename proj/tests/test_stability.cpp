#include <random>

#include "afmi/stability.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace afmi;

namespace {

Equilibrium upper(double xi) { return *find_equilibrium(interior_equilibria(reference_params(xi)), EquilibriumKind::InteriorHigh); }
Equilibrium lower(double xi) { return *find_equilibrium(interior_equilibria(reference_params(xi)), EquilibriumKind::InteriorLow); }

// trace zero of E2 from an independent root solve
constexpr double kHopfXi = 2.477584088844826;

}  // namespace

TEST_CASE("eigenvalues of the upper equilibrium") {
    const StabilityReport weak = stability_report(reference_params(2.478), upper(2.478));
    CHECK(std::abs(weak.eigenvalues[1].real() - 0.000645064) < 1e-5);
    CHECK(std::abs(std::abs(weak.eigenvalues[1].imag()) - 0.0471803) < 1e-5);
    CHECK(weak.stability == StabilityClass::UnstableFocus);
    CHECK(std::abs(weak.trace - 0.00129013) < 1e-5);

    const StabilityReport s = stability_report(reference_params(2.2), upper(2.2));
    CHECK(std::abs(s.eigenvalues[0].real() + 0.118487) < 1e-4);
    CHECK(std::abs(std::abs(s.eigenvalues[0].imag()) - 0.011339) < 1e-4);
    CHECK(s.stability == StabilityClass::StableFocus);
    CHECK(std::abs(s.determinant - 0.014168) < 1e-4);
}

TEST_CASE("lower equilibrium is a saddle") {
    for (double xi : {2.2, 2.4741313}) {
        const Equilibrium e1 = lower(xi);
        const StabilityReport r = stability_report(reference_params(xi), e1);
        CHECK(r.stability == StabilityClass::Saddle);
        REQUIRE(r.theorem_flags.saddle);
        CHECK(r.theorem_flags.saddle->det_negative);
        CHECK(r.theorem_flags.saddle->saddle_by_bound);
        CHECK(r.theorem_flags.saddle->verdict == StabilityClass::Saddle);
    }
    const Equilibrium e1 = lower(2.4741313);
    CHECK(std::abs(e1.location(0) - 4.34883) < 1e-5);
    CHECK(std::abs(e1.location(1) - 5.15167) < 1e-5);
}

TEST_CASE("collided point is non-hyperbolic") {
    const ModelParams p = reference_params(two_interior_window(reference_params())->xi_high);
    const auto eqs = interior_equilibria(p);
    REQUIRE(eqs.size() == 1);
    const StabilityReport r = stability_report(p, eqs[0]);
    CHECK(std::abs(r.determinant) < 1e-6);
    CHECK(r.stability == StabilityClass::NonHyperbolic);
    REQUIRE(r.theorem_flags.saddle);
    CHECK(r.theorem_flags.saddle->verdict == StabilityClass::NonHyperbolic);
}

TEST_CASE("predator-free eigenvalues") {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = lib(oracle::draw(rng));
        const Equilibrium e = *find_equilibrium(boundary_equilibria(p), EquilibriumKind::PredatorFree);
        const StabilityReport r = stability_report(p, e);
        const double mu = p.beta * (p.k + p.xi) / (1 + p.alpha * p.xi + p.k) - p.delta;
        const double lo = std::min(-1.0, mu), hi = std::max(-1.0, mu);
        CHECK(r.eigenvalues[0].real() == doctest::Approx(lo));
        CHECK(r.eigenvalues[1].real() == doctest::Approx(hi));
    }
}

TEST_CASE("stale equilibrium is rejected") {
    Equilibrium e = upper(2.2);
    e.location(0) += 0.1;
    CHECK_THROWS_AS(stability_report(reference_params(2.2), e), PreconditionError);
    CHECK_THROWS_AS(trace_det_simplified(reference_params(2.2), boundary_equilibria(reference_params(2.2))[0]),
                    PreconditionError);
}

TEST_CASE("upper equilibrium cases") {
    const UpperCaseCheck stable = upper_stability_case(reference_params(2.2), upper(2.2));
    CHECK(stable.which == UpperCase::StableRegime);
    CHECK(stable.agrees_with_direct);
    const UpperCaseCheck rep = upper_stability_case(reference_params(2.478), upper(2.478));
    CHECK(rep.which == UpperCase::Repeller);
    CHECK(rep.agrees_with_direct);
    const UpperCaseCheck weak = upper_stability_case(reference_params(kHopfXi), upper(kHopfXi));
    CHECK(weak.which == UpperCase::WeakFocus);
    CHECK(weak.agrees_with_direct);
}

TEST_CASE("simplified trace and determinant agree with the jacobian") {
    std::mt19937_64 rng(17);
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = lib(oracle::draw(rng));
        for (const auto& e : interior_equilibria(p)) {
            const Eigen::Matrix2d J = jacobian(p, e.location);
            const TraceDet td = trace_det_simplified(p, e);
            const double scale = J.cwiseAbs().maxCoeff();
            CHECK(std::abs(td.trace - J.trace()) <= 1e-8 * std::max(std::abs(J.trace()), scale));
            CHECK(std::abs(td.det - J.determinant()) <= 1e-8 * std::max(std::abs(J.determinant()), scale * scale));
            ++checked;
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("conjugate system preserves trace and determinant signs") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = lib(oracle::draw(rng));
        const EquivalentParams ep = equivalent_params(p);
        for (const auto& e : all_equilibria(p)) {
            const Eigen::Matrix2d J = jacobian(p, e.location);
            const Eigen::Matrix2d Je = equivalent_jacobian(ep, e.location(0) / p.k, e.location(1));
            const double band = 1e-9 * std::max(1.0, J.cwiseAbs().maxCoeff());
            if (std::abs(J.trace()) > band) CHECK((J.trace() > 0) == (Je.trace() > 0));
            if (std::abs(J.determinant()) > band * band) CHECK((J.determinant() > 0) == (Je.determinant() > 0));
        }
    }
}

TEST_CASE("lower root is a saddle across the window") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0, 1);
    int bases = 0;
    for (int attempt = 0; attempt < 5000 && bases < 50; ++attempt) {
        const ModelParams p = lib(oracle::draw(rng));
        const auto w = two_interior_window(p);
        if (!w) continue;
        ++bases;
        for (int i = 0; i < 10; ++i) {
            const ModelParams q = p.with_xi(w->xi_low + (w->xi_high - w->xi_low) * (0.01 + 0.98 * u(rng)));
            const auto eqs = interior_equilibria(q);
            REQUIRE(eqs.size() == 2);
            CHECK(jacobian(q, eqs[0].location).determinant() < 0);
        }
    }
    CHECK(bases == 50);
}
