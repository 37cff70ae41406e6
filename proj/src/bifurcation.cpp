#include "afmi/bifurcation.hpp"

#include <algorithm>
#include <cmath>

#include "afmi/parallel.hpp"

namespace afmi {

std::string_view to_string(BifurcationKind k) {
    switch (k) {
        case BifurcationKind::Transcritical: return "Transcritical";
        case BifurcationKind::SaddleNode: return "SaddleNode";
        case BifurcationKind::Hopf: return "Hopf";
        case BifurcationKind::Homoclinic: return "Homoclinic";
    }
    return "Transcritical";
}

BifurcationKind bifurcation_kind_from_string(std::string_view name) {
    for (auto k : {BifurcationKind::Transcritical, BifurcationKind::SaddleNode, BifurcationKind::Hopf,
                   BifurcationKind::Homoclinic}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown bifurcation kind: " + std::string(name));
}

namespace {

constexpr double kZeroEigen = 1e-6;

Eigen::Vector2d fix_sign(Eigen::Vector2d v) {
    const double lead = (v(0) != 0.0) ? v(0) : v(1);
    return lead < 0 ? Eigen::Vector2d(-v) : v;
}

double discriminant_at(const ModelParams& base, double xi) {
    return quadratic_coefficients(base.with_xi(xi)).discriminant;
}

void check_bracket(XiBracket& b) {
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi)) throw DomainError("bracket must be finite");
    if (b.lo > b.hi) std::swap(b.lo, b.hi);
    if (!(b.lo >= 0)) throw DomainError("bracket must lie in xi >= 0");
}

// Bisection on a sign change of g over [lo, hi] to the given width.
template <class G>
XiBracket bisect(G&& g, XiBracket b, double width) {
    double glo = g(b.lo);
    while (b.hi - b.lo > width) {
        const double mid = 0.5 * (b.lo + b.hi);
        const double gm = g(mid);
        if ((gm < 0) == (glo < 0)) {
            b.lo = mid;
            glo = gm;
        } else {
            b.hi = mid;
        }
    }
    return b;
}

std::optional<Equilibrium> upper_interior(const ModelParams& p) {
    const auto eqs = interior_equilibria(p);
    for (const auto& e : eqs) {
        if (e.kind == EquilibriumKind::InteriorHigh) return e;
    }
    return std::nullopt;
}

double flag(bool b) { return b ? 1.0 : 0.0; }

}  // namespace

SotomayorQuantities sotomayor_quantities(const ModelParams& p, const Equilibrium& e) {
    const State& s = e.location;
    const Eigen::Matrix2d J = jacobian(p, s);
    const EigenPair ev = eigenvalues2(J);
    const double lam = std::abs(ev[0]) <= std::abs(ev[1]) ? ev[0].real() : ev[1].real();
    if (!(std::abs(ev[0]) < kZeroEigen || std::abs(ev[1]) < kZeroEigen)) {
        throw PreconditionError("Jacobian has no eigenvalue near zero");
    }

    SotomayorQuantities q;
    q.lambda_min = lam;
    q.v = fix_sign(real_eigenvector2(J, lam));
    q.w = fix_sign(real_eigenvector2(Eigen::Matrix2d(J.transpose()), lam));
    q.wT_F_xi = q.w.dot(field_xi_derivative(p, s));
    q.wT_D2F_vv = q.w.dot(field_hessians(p, s).bilinear(q.v, q.v));

    const double h = 1e-4 * (1.0 + s.norm());
    const State d2 = (vector_field(p, State(s + h * q.v)) - 2.0 * vector_field(p, s) +
                      vector_field(p, State(s - h * q.v))) /
                     (h * h);
    q.wT_D2F_vv_fd = q.w.dot(d2);
    q.fd_rel_error = std::abs(q.wT_D2F_vv - q.wT_D2F_vv_fd) / std::max(std::abs(q.wT_D2F_vv), 1e-300);
    return q;
}

SaddleNodeConditions saddle_node_conditions(const ModelParams& p, const Equilibrium& e) {
    const double x = e.location(0), y = e.location(1);
    const double a = p.alpha, b = p.beta, d = p.delta, eps = p.epsilon, xi = p.xi, k = p.k;
    SaddleNodeConditions c;

    c.y_excluded = ((b - d) * x + (b - d * a) * xi - d) / ((1.0 + a * xi + x) * (b - d * a));
    c.y_not_excluded = std::abs(y - c.y_excluded) > 1e-12 * std::max(1.0, std::abs(y));

    c.k_and_epsilon = k > 2.0 * x && eps < 1.0;

    const double lin = (b - d) * x + b * xi;
    c.y_lower = lin / ((b - d) * (x + xi));
    c.y_upper = b * b * (k - 2.0 * x) * (x + xi) * (x + xi) / (d * k * lin);
    c.y_bracket = c.y_lower < y && y < c.y_upper;

    c.xi_lower = ((1.0 + a) * xi - 1.0) / ((2.0 - eps) * eps);
    c.xi_upper = (b * eps * (x + xi) * (1.0 - d * eps) - d * x) / (d * eps);
    c.xi_bracket = c.xi_lower < y && y < c.xi_upper;
    return c;
}

BifurcationEvent locate_saddle_node(const ModelParams& base, XiBracket bracket) {
    check_bracket(bracket);
    const double dlo = discriminant_at(base, bracket.lo), dhi = discriminant_at(base, bracket.hi);
    if ((dlo < 0) == (dhi < 0)) throw BracketError("discriminant does not change sign over the bracket");

    const XiBracket fine = bisect([&](double xi) { return discriminant_at(base, xi); }, bracket, 1e-10);
    double xi_star = 0.5 * (fine.lo + fine.hi);
    bool closed_form = false;
    for (double r : discriminant_roots(base)) {
        if (r >= fine.lo - 1e-10 && r <= fine.hi + 1e-10) {
            xi_star = r;
            closed_form = true;
        }
    }

    const ModelParams p = base.with_xi(xi_star);
    const QuadraticCoefficients q = quadratic_coefficients(p);
    const double x = -q.b / (2.0 * q.a);
    const State loc(x, predator_nullcline_y(p, x));
    const Equilibrium e = make_equilibrium(p, EquilibriumKind::InteriorCollided, loc);

    BifurcationEvent ev;
    ev.kind = BifurcationKind::SaddleNode;
    ev.xi_star = xi_star;
    ev.location = loc;
    ev.diagnostics["discriminant"] = std::abs(q.discriminant);
    ev.diagnostics["closed_form_root"] = flag(closed_form);
    ev.diagnostics["bracket_width"] = fine.hi - fine.lo;
    ev.diagnostics["field_residual"] = vector_field(p, loc).norm();

    const SotomayorQuantities sq = sotomayor_quantities(p, e);
    ev.diagnostics["lambda_min"] = sq.lambda_min;
    ev.diagnostics["wT_F_xi"] = sq.wT_F_xi;
    ev.diagnostics["wT_D2F_vv"] = sq.wT_D2F_vv;
    ev.diagnostics["wT_D2F_vv_fd"] = sq.wT_D2F_vv_fd;
    ev.diagnostics["fd_rel_error"] = sq.fd_rel_error;

    const SaddleNodeConditions c = saddle_node_conditions(p, e);
    ev.diagnostics["cond_y_not_excluded"] = flag(c.y_not_excluded);
    ev.diagnostics["cond_k_and_epsilon"] = flag(c.k_and_epsilon);
    ev.diagnostics["cond_y_bracket"] = flag(c.y_bracket);
    ev.diagnostics["cond_xi_bracket"] = flag(c.xi_bracket);
    ev.diagnostics["y_bracket_lower"] = c.y_lower;
    ev.diagnostics["y_bracket_upper"] = c.y_upper;
    return ev;
}

BifurcationEvent locate_hopf(const ModelParams& base, XiBracket bracket) {
    check_bracket(bracket);
    auto upper = [&](double xi) {
        const auto e = upper_interior(base.with_xi(xi));
        if (!e) throw BracketError("upper interior equilibrium missing inside the bracket");
        return *e;
    };
    auto trace_at = [&](double xi) { return jacobian(base.with_xi(xi), upper(xi).location).trace(); };

    constexpr int kProbe = 16;
    for (int i = 0; i <= kProbe; ++i) {
        const double xi = bracket.lo + (bracket.hi - bracket.lo) * i / kProbe;
        if (!(jacobian(base.with_xi(xi), upper(xi).location).determinant() > 0)) {
            throw BracketError("det <= 0 for the upper equilibrium inside the bracket");
        }
    }
    const double tlo = trace_at(bracket.lo), thi = trace_at(bracket.hi);
    if ((tlo < 0) == (thi < 0)) throw BracketError("trace does not change sign over the bracket");

    const XiBracket fine = bisect(trace_at, bracket, 1e-12);
    const double xi_star = 0.5 * (fine.lo + fine.hi);
    const ModelParams p = base.with_xi(xi_star);
    const Equilibrium e = upper(xi_star);
    const Eigen::Matrix2d J = jacobian(p, e.location);
    const EigenPair lam = eigenvalues2(J);

    BifurcationEvent ev;
    ev.kind = BifurcationKind::Hopf;
    ev.xi_star = xi_star;
    ev.location = e.location;
    ev.diagnostics["trace"] = J.trace();
    ev.diagnostics["det"] = J.determinant();
    ev.diagnostics["re_lambda"] = lam[1].real();
    ev.diagnostics["im_lambda"] = std::abs(lam[1].imag());
    ev.diagnostics["omega"] = J.determinant() > 0 ? std::sqrt(J.determinant()) : 0.0;
    const double h = 1e-6;
    ev.diagnostics["dtrace_dxi"] = (trace_at(xi_star + h) - trace_at(xi_star - h)) / (2.0 * h);
    const double split = (J(0, 0) - J(1, 1)) * (J(0, 0) - J(1, 1)) + 4.0 * J(0, 1) * J(1, 0);
    ev.diagnostics["eigen_split"] = split;

    const double x = e.location(0), y = e.location(1);
    const double a = p.alpha, b = p.beta, d = p.delta;
    ev.diagnostics["excluded_y"] = b * (x + p.xi) / a * (2.0 * a * d * (1.0 + a + x) - b * (a * x + x + 2.0 * a + 1.0)) /
                                   ((b - 2.0 * d) * x + b * p.xi);
    ev.diagnostics["cond2_lhs"] = p.xi;
    ev.diagnostics["cond2_rhs"] = 1.0 + a * p.xi + p.epsilon + y;
    return ev;
}

BifurcationEvent locate_homoclinic(const ModelParams& base, XiBracket bracket, const TopologySettings& settings,
                                   double width) {
    check_bracket(bracket);
    if (!(width > 0)) throw DomainError("bisection width must be positive");
    if (!is_bounded_regime(base).bounded) throw PreconditionError("homoclinic search needs epsilon (1 - delta) < 1");

    auto gap_at = [&](double xi) {
        const ManifoldTopology t = manifold_topology(base.with_xi(xi), settings);
        if (t.cls == TopologyClass::Indeterminate) throw InfeasibleError("indeterminate manifold topology");
        return t.gap;
    };
    double glo = gap_at(bracket.lo), ghi = gap_at(bracket.hi);
    if ((glo < 0) == (ghi < 0)) throw BracketError("manifold topology is the same at both bracket ends");

    int iterations = 0;
    while (bracket.hi - bracket.lo > width) {
        const double mid = 0.5 * (bracket.lo + bracket.hi);
        const double gm = gap_at(mid);
        if ((gm < 0) == (glo < 0)) {
            bracket.lo = mid;
            glo = gm;
        } else {
            bracket.hi = mid;
            ghi = gm;
        }
        ++iterations;
    }

    BifurcationEvent ev;
    ev.kind = BifurcationKind::Homoclinic;
    ev.xi_star = 0.5 * (bracket.lo + bracket.hi);
    const ModelParams p = base.with_xi(ev.xi_star);
    const auto e1 = find_equilibrium(interior_equilibria(p), EquilibriumKind::InteriorLow);
    if (e1) ev.location = e1->location;
    ev.diagnostics["gap_lo"] = glo;
    ev.diagnostics["gap_hi"] = ghi;
    ev.diagnostics["gap"] = std::min(std::abs(glo), std::abs(ghi));
    ev.diagnostics["bracket_width"] = bracket.hi - bracket.lo;
    ev.diagnostics["iterations"] = iterations;
    return ev;
}

BifurcationEvent locate_transcritical(const ModelParams& base) {
    const double xi_star = transcritical_threshold(base);
    const ModelParams p = base.with_xi(xi_star);
    const QuadraticCoefficients q = quadratic_coefficients(p);

    BifurcationEvent ev;
    ev.kind = BifurcationKind::Transcritical;
    ev.xi_star = xi_star;
    ev.location = State(0.0, prey_free_level(p));
    ev.diagnostics["c"] = std::abs(q.c);
    ev.diagnostics["c_scaled"] = std::abs(q.c) / std::max(1.0, q.b * q.b);
    ev.diagnostics["interior_root_x"] = std::abs(q.c / q.b);

    // Eigenvalue of the prey-free state along the prey direction.
    auto prey_rate = [&](double xi) {
        const ModelParams pp = base.with_xi(xi);
        return jacobian(pp, State(0.0, prey_free_level(pp)))(0, 0);
    };
    ev.diagnostics["prey_rate_below"] = prey_rate(xi_star - 1e-3);
    ev.diagnostics["prey_rate_above"] = prey_rate(xi_star + 1e-3);
    return ev;
}

SweepDataset sweep(const ModelParams& base, XiRange range, unsigned threads) {
    if (range.steps < 2) throw PreconditionError("sweep needs at least 2 steps");
    if (!std::isfinite(range.from) || !std::isfinite(range.to)) throw DomainError("sweep range must be finite");
    double lo = std::min(range.from, range.to), hi = std::max(range.from, range.to);
    if (!(hi > lo)) throw DomainError("sweep range is empty");
    if (lo < 0) throw DomainError("sweep range must lie in xi >= 0");

    SweepDataset ds;
    ds.rows.resize(static_cast<std::size_t>(range.steps));
    parallel_for(
        ds.rows.size(),
        [&](std::size_t i) {
            const double xi = (i + 1 == ds.rows.size()) ? hi : lo + (hi - lo) * static_cast<double>(i) / (range.steps - 1);
            ds.rows[i].xi = xi;
            ds.rows[i].interior = interior_equilibria(base.with_xi(xi));
        },
        threads);

    auto upper_trace = [&](const SweepRow& r) -> std::optional<double> {
        for (const auto& e : r.interior) {
            if (e.kind == EquilibriumKind::InteriorHigh) return jacobian(base.with_xi(r.xi), e.location).trace();
        }
        return std::nullopt;
    };

    for (std::size_t i = 1; i < ds.rows.size(); ++i) {
        const double a = ds.rows[i - 1].xi, b = ds.rows[i].xi;
        const QuadraticCoefficients qa = quadratic_coefficients(base.with_xi(a));
        const QuadraticCoefficients qb = quadratic_coefficients(base.with_xi(b));
        std::vector<BifurcationEvent> found;

        if ((qa.c < 0) != (qb.c < 0)) {
            try {
                BifurcationEvent ev = locate_transcritical(base);
                if (ev.xi_star >= a && ev.xi_star <= b) found.push_back(std::move(ev));
            } catch (const InfeasibleError&) {
            }
        }
        if ((qa.discriminant < 0) != (qb.discriminant < 0)) {
            BifurcationEvent ev = locate_saddle_node(base, {a, b});
            if (ev.location(0) > 0) found.push_back(std::move(ev));
        }
        const auto ta = upper_trace(ds.rows[i - 1]), tb = upper_trace(ds.rows[i]);
        if (ta && tb && ((*ta < 0) != (*tb < 0))) {
            try {
                found.push_back(locate_hopf(base, {a, b}));
            } catch (const BracketError&) {
                // det <= 0 somewhere in the cell: not a Hopf point
            }
        }
        for (auto& ev : found) {
            ds.rows[i].events.push_back(ev.kind);
            ds.events.push_back(std::move(ev));
        }
    }
    std::stable_sort(ds.events.begin(), ds.events.end(),
                     [](const BifurcationEvent& x, const BifurcationEvent& y) { return x.xi_star < y.xi_star; });
    return ds;
}

}  // namespace afmi
