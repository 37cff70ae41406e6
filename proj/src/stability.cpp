#include "afmi/stability.hpp"

#include <cmath>

namespace afmi {

std::string_view to_string(UpperCase c) {
    switch (c) {
        case UpperCase::StableRegime: return "StableRegime";
        case UpperCase::WeakFocus: return "WeakFocus";
        case UpperCase::Repeller: return "Repeller";
    }
    return "Repeller";
}

namespace {

constexpr double kStaleTolerance = 1e-6;
constexpr double kNullclineTolerance = 1e-8;
constexpr double kWeakFocusRelTol = 1e-8;

// Shorthand for the recurring linear forms at an interior point.
struct InteriorTerms {
    double x, y;
    double xs;     // x + xi
    double food;   // 1 + alpha xi + x
    double R;      // 1 + alpha xi + x + epsilon y
    double lin_s;  // (beta - delta) x + beta xi
    double lin_l;  // (beta - delta) x + (beta - delta alpha) xi - delta
};

InteriorTerms terms(const ModelParams& p, const State& s) {
    InteriorTerms t{};
    t.x = s(0);
    t.y = s(1);
    t.xs = t.x + p.xi;
    t.food = p.food_offset() + t.x;
    t.R = t.food + p.epsilon * t.y;
    t.lin_s = (p.beta - p.delta) * t.x + p.beta * p.xi;
    t.lin_l = (p.beta - p.delta) * t.x + (p.beta - p.delta * p.alpha) * p.xi - p.delta;
    return t;
}

// Upper bound on y for det < 0. `coupling` is the term multiplying
// delta in the second denominator summand: xi in the exact form, epsilon as
// printed in the original derivation.
double det_sign_bound(const ModelParams& p, const InteriorTerms& t, double coupling) {
    const double b2 = p.beta * p.beta;
    const double num = t.xs * (b2 * t.xs * t.xs * (p.k - 2.0 * t.x)) * t.lin_l;
    const double den = p.delta * p.k *
                       (t.xs * t.lin_s * t.lin_l +
                        p.delta * t.x * ((p.beta - p.delta) * t.x + p.beta * p.xi - p.delta * coupling) * t.food);
    return num / den;
}

double trace_sign_bound(const ModelParams& p, const InteriorTerms& t) {
    const double num = p.beta * t.xs *
                       (p.beta * ((1.0 - p.delta) * p.k - 2.0 * t.x) * t.xs + p.k * p.delta * p.delta * t.food);
    return num / (p.delta * p.k * t.lin_s);
}

void require_interior(const Equilibrium& e) {
    if (!is_interior(e.kind)) throw PreconditionError("operation requires an interior equilibrium");
}

}  // namespace

StabilityReport stability_report(const ModelParams& p, const Equilibrium& e) {
    const State& s = e.location;
    if (vector_field(p, s).norm() > kStaleTolerance) {
        throw PreconditionError("stale equilibrium: vector field does not vanish at the given location");
    }
    const Eigen::Matrix2d J = jacobian(p, s);
    StabilityReport r;
    r.trace = J.trace();
    r.determinant = J.determinant();
    r.eigenvalues = eigenvalues2(J);
    r.stability = classify_jacobian(J);
    if (e.kind == EquilibriumKind::InteriorLow || e.kind == EquilibriumKind::InteriorCollided) {
        r.theorem_flags.saddle = lower_saddle_check(p, e);
    }
    if (e.kind == EquilibriumKind::InteriorHigh) r.theorem_flags.upper = upper_stability_case(p, e);
    return r;
}

TraceDet trace_det_simplified(const ModelParams& p, const Equilibrium& interior) {
    require_interior(interior);
    const State& s = interior.location;
    if (std::abs(predator_nullcline_y(p, s(0)) - s(1)) > kNullclineTolerance * std::max(1.0, std::abs(s(1)))) {
        throw PreconditionError("point is not on the predator nullcline");
    }
    const InteriorTerms t = terms(p, s);
    const double b = p.beta, d = p.delta;
    const double R2 = t.R * t.R;
    const double R4 = R2 * R2;

    TraceDet out{};
    out.trace = (b * t.xs * (b * (1.0 - 2.0 * t.x / p.k - d) * t.xs + d * d * t.food) - d * t.lin_s * t.y) /
                (d * d * R2);
    // (beta - delta)(x + xi) multiplies the second summand.
    out.det = -b * t.xs / (d * d * d * R4) *
                  (b * b * t.xs * t.xs * (1.0 - 2.0 * t.x / p.k) - d * t.lin_s * t.y) * t.lin_l +
              b * t.x * t.y / (d * R4) * (t.lin_s - d * p.xi) * t.food;
    return out;
}

SaddleBoundCheck lower_saddle_check(const ModelParams& p, const Equilibrium& e1) {
    require_interior(e1);
    const InteriorTerms t = terms(p, e1.location);
    SaddleBoundCheck c;
    c.bound = det_sign_bound(p, t, p.xi);
    c.bound_as_printed = det_sign_bound(p, t, p.epsilon);
    c.saddle_by_bound = t.y > 0 && t.y < c.bound;
    const Eigen::Matrix2d J = jacobian(p, e1.location);
    c.det = J.determinant();
    c.det_negative = c.det < 0;
    c.verdict = classify_jacobian(J);
    return c;
}

UpperCaseCheck upper_stability_case(const ModelParams& p, const Equilibrium& e2) {
    require_interior(e2);
    const InteriorTerms t = terms(p, e2.location);
    UpperCaseCheck c;
    c.det_bound = det_sign_bound(p, t, p.xi);
    c.trace_bound = trace_sign_bound(p, t);
    const Eigen::Matrix2d J = jacobian(p, e2.location);
    c.trace = J.trace();
    c.det = J.determinant();

    const bool det_positive = t.y > c.det_bound;
    const bool on_trace_bound = std::abs(t.y - c.trace_bound) <= kWeakFocusRelTol * std::abs(t.y);
    if (det_positive && on_trace_bound) {
        c.which = UpperCase::WeakFocus;
    } else if (det_positive && t.y > c.trace_bound) {
        c.which = UpperCase::StableRegime;
    } else {
        c.which = UpperCase::Repeller;
    }

    const double scale = J.cwiseAbs().maxCoeff();
    switch (c.which) {
        case UpperCase::StableRegime: c.agrees_with_direct = c.trace < 0 && c.det > 0; break;
        case UpperCase::WeakFocus: c.agrees_with_direct = std::abs(c.trace) <= 1e-6 * scale && c.det > 0; break;
        case UpperCase::Repeller: c.agrees_with_direct = c.trace > 0 || c.det < 0; break;
    }
    return c;
}

}  // namespace afmi
