#include "afmi/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace afmi {

std::string_view to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::StableNode: return "StableNode";
        case StabilityClass::StableFocus: return "StableFocus";
        case StabilityClass::UnstableNode: return "UnstableNode";
        case StabilityClass::UnstableFocus: return "UnstableFocus";
        case StabilityClass::Saddle: return "Saddle";
        case StabilityClass::NonHyperbolic: return "NonHyperbolic";
    }
    return "NonHyperbolic";
}

StabilityClass stability_class_from_string(std::string_view name) {
    for (auto c : {StabilityClass::StableNode, StabilityClass::StableFocus, StabilityClass::UnstableNode,
                   StabilityClass::UnstableFocus, StabilityClass::Saddle, StabilityClass::NonHyperbolic}) {
        if (to_string(c) == name) return c;
    }
    throw DomainError("unknown stability class: " + std::string(name));
}

std::string_view to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Trivial: return "Trivial";
        case EquilibriumKind::PredatorFree: return "PredatorFree";
        case EquilibriumKind::PreyFree: return "PreyFree";
        case EquilibriumKind::InteriorLow: return "InteriorLow";
        case EquilibriumKind::InteriorHigh: return "InteriorHigh";
        case EquilibriumKind::InteriorCollided: return "InteriorCollided";
    }
    return "Trivial";
}

EquilibriumKind equilibrium_kind_from_string(std::string_view name) {
    for (auto k : {EquilibriumKind::Trivial, EquilibriumKind::PredatorFree, EquilibriumKind::PreyFree,
                   EquilibriumKind::InteriorLow, EquilibriumKind::InteriorHigh, EquilibriumKind::InteriorCollided}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown equilibrium kind: " + std::string(name));
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::NoInterior: return "NoInterior";
        case Regime::OneInterior: return "OneInterior";
        case Regime::TwoInterior: return "TwoInterior";
        case Regime::DegenerateBoundary: return "DegenerateBoundary";
    }
    return "NoInterior";
}

QuadraticCoefficients quadratic_coefficients(const ModelParams& p) {
    QuadraticCoefficients q{};
    q.a = p.beta * p.epsilon;
    q.b = p.beta * p.epsilon * p.xi - (p.delta - p.beta * (1.0 - p.epsilon)) * p.k;
    q.c = ((p.beta - p.delta * p.alpha - p.beta * p.epsilon) * p.xi - p.delta) * p.k;
    q.discriminant = q.b * q.b - 4.0 * q.a * q.c;
    return q;
}

double collision_tolerance(const QuadraticCoefficients& q) {
    return 1e-10 * std::max(1.0, q.b * q.b);
}

double prey_free_level(const ModelParams& p) {
    return predator_nullcline_intercept(p);
}

Equilibrium make_equilibrium(const ModelParams& p, EquilibriumKind kind, const State& location) {
    Equilibrium e;
    e.kind = kind;
    e.location = location;
    const Eigen::Matrix2d J = jacobian(p, location);
    e.eigenvalues = eigenvalues2(J);
    e.stability = classify_jacobian(J);
    return e;
}

namespace {

// Real roots of the quadratic, ascending. A double root is returned once.
std::vector<double> real_roots(const QuadraticCoefficients& q) {
    if (std::abs(q.discriminant) <= collision_tolerance(q)) return {-q.b / (2.0 * q.a)};
    if (q.discriminant < 0) return {};
    const double s = std::sqrt(q.discriminant);
    const double t = -0.5 * (q.b + std::copysign(s, q.b));
    double r1 = t / q.a;
    double r2 = (t != 0.0) ? q.c / t : -r1;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

}  // namespace

std::vector<Equilibrium> interior_equilibria(const ModelParams& p) {
    const QuadraticCoefficients q = quadratic_coefficients(p);
    const std::vector<double> roots = real_roots(q);
    std::vector<Equilibrium> out;
    if (roots.size() == 1) {
        const double x = roots[0];
        const double y = predator_nullcline_y(p, x);
        if (x > 0 && y > 0) out.push_back(make_equilibrium(p, EquilibriumKind::InteriorCollided, State(x, y)));
        return out;
    }
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double x = roots[i];
        const double y = predator_nullcline_y(p, x);
        if (!(x > 0 && y > 0)) continue;
        const auto kind = (i == 0) ? EquilibriumKind::InteriorLow : EquilibriumKind::InteriorHigh;
        out.push_back(make_equilibrium(p, kind, State(x, y)));
    }
    return out;
}

std::vector<Equilibrium> boundary_equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out;
    out.push_back(make_equilibrium(p, EquilibriumKind::Trivial, State(0.0, 0.0)));
    out.push_back(make_equilibrium(p, EquilibriumKind::PredatorFree, State(p.k, 0.0)));
    const double y = prey_free_level(p);
    if (y > 0) out.push_back(make_equilibrium(p, EquilibriumKind::PreyFree, State(0.0, y)));
    return out;
}

std::vector<Equilibrium> all_equilibria(const ModelParams& p) {
    std::vector<Equilibrium> out = boundary_equilibria(p);
    for (auto& e : interior_equilibria(p)) out.push_back(std::move(e));
    return out;
}

std::optional<Equilibrium> find_equilibrium(const std::vector<Equilibrium>& eqs, EquilibriumKind kind) {
    auto it = std::find_if(eqs.begin(), eqs.end(), [kind](const Equilibrium& e) { return e.kind == kind; });
    if (it == eqs.end()) return std::nullopt;
    return *it;
}

std::vector<double> discriminant_roots(const ModelParams& p) {
    // discriminant(xi) = A2 xi^2 + A1 xi + A0
    const double be = p.beta * p.epsilon;
    const double kc = (p.delta - p.beta * (1.0 - p.epsilon)) * p.k;
    const double slope_c = (p.beta - p.delta * p.alpha - p.beta * p.epsilon) * p.k;
    const double A2 = be * be;
    const double A1 = -2.0 * be * kc - 4.0 * be * slope_c;
    const double A0 = kc * kc + 4.0 * be * p.delta * p.k;
    const double disc = A1 * A1 - 4.0 * A2 * A0;
    if (disc < 0) return {};
    const double s = std::sqrt(disc);
    const double t = -0.5 * (A1 + std::copysign(s, A1));
    double r1 = t / A2;
    double r2 = A0 / t;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

std::optional<XiWindow> two_interior_window(const ModelParams& p) {
    const double denom = p.beta - p.delta * p.alpha - p.beta * p.epsilon;
    if (denom <= 0) return std::nullopt;
    const double xi_low = p.delta / denom;
    const double cap = (p.delta - p.beta * (1.0 - p.epsilon)) * p.k / (p.beta * p.epsilon);
    double xi_high = cap;
    for (double r : discriminant_roots(p)) {
        if (r > xi_low) {
            xi_high = std::min(r, cap);
            break;
        }
    }
    if (!(xi_high > xi_low)) return std::nullopt;
    return XiWindow{xi_low, xi_high};
}

Regime regime_classify(const ModelParams& base, double epsilon, double xi) {
    if (!(epsilon > 0) || !(xi >= 0)) throw PreconditionError("regime_classify needs epsilon > 0 and xi >= 0");
    ModelParams p = base;
    p.epsilon = epsilon;
    p.xi = xi;
    const QuadraticCoefficients q = quadratic_coefficients(p);

    // Interior equilibria need x > 0 and, on the predator line with positive
    // slope, x above the line's zero crossing.
    const double x_min = std::max(0.0, -predator_nullcline_intercept(p) / predator_nullcline_slope(p));

    if (std::abs(q.discriminant) <= collision_tolerance(q)) {
        const double x = -q.b / (2.0 * q.a);
        return (x > x_min) ? Regime::DegenerateBoundary : Regime::NoInterior;
    }
    if (q.discriminant < 0) return Regime::NoInterior;

    // Descartes: c < 0 -> one positive root; c > 0, b < 0 -> two; else none.
    const double s = std::sqrt(q.discriminant);
    const double larger = (-q.b + s) / (2.0 * q.a);
    const double smaller = q.c / (q.a * larger);
    int count = 0;
    if (q.c < 0) {
        count = (larger > x_min) ? 1 : 0;
    } else if (q.b < 0) {
        count = (larger > x_min) + (smaller > x_min && q.c > 0);
    }
    switch (count) {
        case 0: return Regime::NoInterior;
        case 1: return Regime::OneInterior;
        default: return Regime::TwoInterior;
    }
}

double transcritical_threshold(const ModelParams& p) {
    const double denom = p.beta - p.delta * p.alpha - p.beta * p.epsilon;
    if (denom <= 0) throw InfeasibleError("beta - delta alpha - beta epsilon must be positive");
    return p.delta / denom;
}

}  // namespace afmi
