// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "afmi/bifurcation.hpp"
#include "afmi/manifolds.hpp"
#include "afmi/stability.hpp"

using namespace afmi;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

State upper(double xi) { return interior_equilibria(reference_params(xi)).at(1).location; }

EigenPair upper_eigs(double xi) { return eigenvalues2(jacobian(reference_params(xi), upper(xi))); }

Outcome equilibria_reproduced() {
    const State a = upper(2.2), b = upper(2.478);
    const bool ok = std::abs(a(0) - 8.02768) < 1e-3 && std::abs(a(1) - 5.05513) < 1e-3 &&
                    std::abs(b(0) - 5.26541) < 1e-3 && std::abs(b(1) - 5.34353) < 1e-3;
    return {ok, fmt("E2(2.2)=(%.6f, %.6f) E2(2.478)=(%.6f, %.6f)", a(0), a(1), b(0), b(1))};
}

bool close_pair(const EigenPair& l, double re, double im, double tol) {
    return std::abs(l[0].real() - re) < tol && std::abs(l[1].real() - re) < tol &&
           std::abs(std::abs(l[0].imag()) - im) < tol && std::abs(std::abs(l[1].imag()) - im) < tol &&
           l[0].imag() * l[1].imag() < 0;
}

Outcome eigenvalues_reproduced() {
    const EigenPair w = upper_eigs(2.478), s = upper_eigs(2.2);
    const bool ok = close_pair(w, 0.000645064, 0.0471803, 1e-4) && close_pair(s, -0.118487, 0.011339, 1e-3);
    return {ok, fmt("xi=2.478: %.9f +/- %.7fi; xi=2.2: %.6f +/- %.6fi", w[1].real(), std::abs(w[1].imag()),
                    s[1].real(), std::abs(s[1].imag()))};
}

Outcome saddle_node() {
    const BifurcationEvent ev = locate_saddle_node(reference_params(), {2.3, 2.6});
    const double a = ev.diagnostics.at("wT_F_xi"), b = ev.diagnostics.at("wT_D2F_vv");
    const bool ok = ev.xi_star >= 2.4820 && ev.xi_star <= 2.4835 && std::abs(a) > 1e-6 && std::abs(b) > 1e-6;
    return {ok, fmt("xi*=%.10f wT_F_xi=%.4e wT_D2F_vv=%.4e", ev.xi_star, a, b)};
}

Outcome homoclinic() {
    const auto t0 = Clock::now();
    const ModelParams base = reference_params();
    const BifurcationEvent ev = locate_homoclinic(base, {2.46, 2.48});
    int flips = 0, samples = 0;
    double prev = NAN;
    for (int i = 0; i <= 20; ++i) {
        const ModelParams p = base.with_xi(2.46 + 1e-3 * i);
        const double g = manifold_topology(p).gap;
        ++samples;
        if (!std::isnan(prev) && (g > 0) != (prev > 0)) ++flips;
        prev = g;
    }
    const double secs = seconds_since(t0);
    const bool ok = ev.xi_star >= 2.4721 && ev.xi_star <= 2.4761 && flips == 1 && secs <= 120;
    return {ok, fmt("xi*=%.8f topology flips=%d over %d samples, %.2fs", ev.xi_star, flips, samples, secs)};
}

Outcome hopf() {
    const ModelParams base = reference_params();
    const BifurcationEvent ev = locate_hopf(base, {2.2, 2.478});
    const ModelParams at = base.with_xi(ev.xi_star);
    const Eigen::Matrix2d J = jacobian(at, ev.location);
    const EigenPair l = eigenvalues2(J);
    const double dtr = ev.diagnostics.at("dtrace_dxi");
    const bool ok = ev.xi_star > 2.2 && ev.xi_star < 2.478 && J.determinant() > 0 && std::abs(dtr) > 1e-6 &&
                    std::abs(l[1].real()) < 1e-8;
    return {ok, fmt("xi*=%.10f det=%.4e dtrace/dxi=%.4f |Re lambda|=%.2e", ev.xi_star, J.determinant(), dtr,
                    std::abs(l[1].real()))};
}

Outcome transcritical() {
    const double a = transcritical_threshold(reference_params());
    const double b = transcritical_threshold(ModelParams{0.32, 0.6, 0.45, 0.15, 0.0, 15.0});
    const bool ok = std::abs(a - 1.61046) < 1e-4 && std::abs(b - 1.22951) < 1e-4;
    return {ok, fmt("reference %.6f, alternate set %.6f", a, b)};
}

Outcome regime_window() {
    const ModelParams base = reference_params();
    const double lo = 1.61046;
    const double hi = locate_saddle_node(base, {2.3, 2.6}).xi_star;
    int two = 0;
    for (int i = 1; i <= 50; ++i) {
        const double xi = lo + (hi - lo) * i / 51.0;
        if (interior_equilibria(base.with_xi(xi)).size() == 2) ++two;
    }
    const auto at3 = interior_equilibria(base.with_xi(3.0)).size();
    const auto at16 = interior_equilibria(base.with_xi(1.6)).size();
    const bool ok = two == 50 && at3 == 0 && at16 == 1;
    return {ok, fmt("two interiors at %d/50 samples in (1.61046, %.6f); xi=3.0 -> %zu; xi=1.6 -> %zu", two, hi, at3,
                    at16)};
}

Outcome basin_growth() {
    const auto t0 = Clock::now();
    const GridSpec grid{0.1, 15.0, 0.1, 10.0, 40, 40};
    const double hi = basin_fraction(reference_params(2.469), grid).fraction_prey_free;
    const double lo = basin_fraction(reference_params(1.9), grid).fraction_prey_free;
    const double secs = seconds_since(t0);
    const bool ok = hi > 0.5 && hi > lo && secs <= 120;
    return {ok, fmt("f(2.469)=%.6f f(1.9)=%.6f, %.2fs", hi, lo, secs)};
}

// ---------------------------------------------------------------- properties

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    const double beta = 0.2 + 0.8 * u(rng);
    return {0.02 + 0.5 * u(rng), beta, beta * (0.1 + 0.85 * u(rng)), 0.05 + 0.85 * u(rng), 4 * u(rng),
            5 + 25 * u(rng)};
}

bool jacobian_property(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = random_params(rng);
        const State s(2 * p.k * u(rng), 3 * p.k * u(rng));
        const Eigen::Matrix2d J = jacobian(p, s);
        const double scale = std::max(J.cwiseAbs().maxCoeff(), 1e-3);
        for (int c = 0; c < 2; ++c) {
            State e = State::Zero();
            e(c) = h;
            const State fd = (vector_field(p, State(s + e)) - vector_field(p, State(s - e))) / (2 * h);
            for (int r = 0; r < 2; ++r) {
                if (std::abs(J(r, c) - fd(r)) > 1e-5 * std::max(std::abs(J(r, c)), scale)) return false;
            }
        }
    }
    return true;
}

// Vieta relations, nullcline residuals and the conjugate-system zero set.
bool root_properties(std::mt19937_64& rng, int& two_count) {
    std::uniform_real_distribution<double> u(0, 1);
    two_count = 0;
    for (int attempt = 0; attempt < 20000 && two_count < 200; ++attempt) {
        const ModelParams base = random_params(rng);
        const auto w = two_interior_window(base);
        if (!w) continue;
        const ModelParams p = base.with_xi(w->xi_low + (w->xi_high - w->xi_low) * (0.01 + 0.98 * u(rng)));
        const auto eqs = interior_equilibria(p);
        if (eqs.size() != 2) return false;
        ++two_count;
        const QuadraticCoefficients q = quadratic_coefficients(p);
        const double x1 = eqs[0].location(0), x2 = eqs[1].location(0);
        if (std::abs(x1 + x2 + q.b / q.a) > 1e-9 * std::abs(q.b / q.a)) return false;
        if (std::abs(x1 * x2 - q.c / q.a) > 1e-9 * std::abs(q.c / q.a)) return false;
        const EquivalentParams ep = equivalent_params(p);
        for (const auto& e : all_equilibria(p)) {
            const State& s = e.location;
            if (is_interior(e.kind)) {
                if (std::abs(prey_nullcline_y(p, s(0)) - s(1)) > 1e-9 * std::max(1.0, s(1))) return false;
                if (std::abs(predator_nullcline_y(p, s(0)) - s(1)) > 1e-9 * std::max(1.0, s(1))) return false;
            }
            if (equivalent_field(ep, s(0) / p.k, s(1)).norm() > 1e-9) return false;
        }
    }
    return two_count == 200;
}

bool boundedness_property(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        if (!is_bounded_regime(p).bounded) return false;
        IntegratorSettings s;
        s.max_time = 500;
        s.detect_convergence = false;
        const State s0(p.k * u(rng), 3 * p.k * u(rng));
        const double cap = 10 * std::max(s0.norm(), State(p.k, 3 * p.k).norm());
        bool inside = true;
        const Trajectory tr = integrate(p, s0, s, {}, TimeDirection::Forward, [&](const StepView& v) {
            inside = inside && v.end().norm() <= cap;
            return true;
        });
        if (tr.termination == Termination::Escaped || !inside) return false;
    }
    return true;
}

double cross2(const State& a, const State& b) { return a(0) * b(1) - a(1) * b(0); }

int crossings(const std::vector<State>& poly, const State& a, const State& b) {
    int n = 0;
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const State &c = poly[i - 1], &d = poly[i];
        const bool s1 = (cross2(b - a, c - a) > 0) != (cross2(b - a, d - a) > 0);
        const bool s2 = (cross2(d - c, a - c) > 0) != (cross2(d - c, b - c) > 0);
        n += (s1 && s2) ? 1 : 0;
    }
    return n;
}

bool separatrix_property(std::mt19937_64& rng, int& pairs_total) {
    std::uniform_real_distribution<double> u(0, 1);
    pairs_total = 0;
    for (double xi : {1.9, 2.2, 2.469}) {
        const ModelParams p = reference_params(xi);
        const Equilibrium e1 = interior_equilibria(p).at(0);
        const Manifold up = trace_manifold(p, e1, Branch::StablePlus);
        const Manifold dn = trace_manifold(p, e1, Branch::StableMinus);
        int pairs = 0;
        for (int attempt = 0; attempt < 20000 && pairs < 50; ++attempt) {
            const Manifold& m = u(rng) < 0.5 ? up : dn;
            const std::size_t i = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(m.points.size() - 2));
            const State q = m.points[i];
            if (q(0) < 0.1 || q(0) > 15 || q(1) < 0.1 || q(1) > 10) continue;
            const Eigen::Vector2d t = (m.points[i + 1] - m.points[i - 1]).normalized();
            const double d = 0.02 + 0.03 * u(rng);
            const State a = q + d * Eigen::Vector2d(-t(1), t(0)), b = q - d * Eigen::Vector2d(-t(1), t(0));
            if (!in_phi(a) || !in_phi(b)) continue;
            auto far = [&](const State& s) {
                return std::min(distance_to_polyline(up.points, s), distance_to_polyline(dn.points, s)) > 1e-2;
            };
            if (!far(a) || !far(b)) continue;
            if (crossings(up.points, a, b) + crossings(dn.points, a, b) != 1) continue;
            ++pairs;
            if (classify_omega_limit(p, a) == classify_omega_limit(p, b)) return false;
        }
        if (pairs != 50) return false;
        pairs_total += pairs;
    }
    return true;
}

Outcome property_suites() {
    std::mt19937_64 rng(20240601);
    const bool jac = jacobian_property(rng);
    int two = 0;
    const bool roots = root_properties(rng, two);
    const bool bounded = boundedness_property(rng);
    int pairs = 0;
    const bool sep = separatrix_property(rng, pairs);
    return {jac && roots && bounded && sep,
            fmt("jacobian=%s roots/nullclines/conjugacy=%s (%d two-interior draws) boundedness=%s separatrix=%s (%d "
                "pairs)",
                jac ? "ok" : "FAIL", roots ? "ok" : "FAIL", two, bounded ? "ok" : "FAIL", sep ? "ok" : "FAIL", pairs)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"equilibrium reproduction", equilibria_reproduced},
        {"eigenvalue reproduction", eigenvalues_reproduced},
        {"saddle-node location", saddle_node},
        {"homoclinic location", homoclinic},
        {"Hopf location", hopf},
        {"transcritical threshold", transcritical},
        {"regime window", regime_window},
        {"bi-stability and basin growth", basin_growth},
        {"property suites", property_suites},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
