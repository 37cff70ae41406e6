#include "afmi/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "afmi/parallel.hpp"

namespace afmi {

std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::StablePlus: return "StablePlus";
        case Branch::StableMinus: return "StableMinus";
        case Branch::UnstablePlus: return "UnstablePlus";
        case Branch::UnstableMinus: return "UnstableMinus";
    }
    return "StablePlus";
}

Branch branch_from_string(std::string_view name) {
    for (auto b : {Branch::StablePlus, Branch::StableMinus, Branch::UnstablePlus, Branch::UnstableMinus}) {
        if (to_string(b) == name) return b;
    }
    throw DomainError("unknown manifold branch: " + std::string(name));
}

std::string_view to_string(CycleStability c) {
    switch (c) {
        case CycleStability::StableCycle: return "StableCycle";
        case CycleStability::UnstableCycle: return "UnstableCycle";
        case CycleStability::Neutral: return "Neutral";
    }
    return "Neutral";
}

std::string_view to_string(TopologyClass t) {
    switch (t) {
        case TopologyClass::UnstableInsideStable: return "UnstableInsideStable";
        case TopologyClass::StableInsideUnstable: return "StableInsideUnstable";
        case TopologyClass::NearCoincident: return "NearCoincident";
        case TopologyClass::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

Eigen::Vector2d branch_direction(const ModelParams& p, const Equilibrium& saddle, Branch branch) {
    const Eigen::Matrix2d J = jacobian(p, saddle.location);
    if (!(J.determinant() < 0)) throw PreconditionError("manifold tracing needs a saddle (det J < 0)");
    const EigenPair ev = eigenvalues2(J);
    const double lam_s = ev[0].real(), lam_u = ev[1].real();
    const Eigen::Vector2d vs = real_eigenvector2(J, lam_s);
    const Eigen::Vector2d vu = real_eigenvector2(J, lam_u);
    const double angle = std::acos(std::min(1.0, std::abs(vs.dot(vu))));
    if (!(angle > 1e-3)) throw PreconditionError("saddle eigenvectors are nearly parallel");

    Eigen::Vector2d v = is_stable_branch(branch) ? vs : vu;
    const int key = is_stable_branch(branch) ? 1 : 0;
    const double lead = (v(key) != 0.0) ? v(key) : v(1 - key);
    if (lead < 0) v = -v;
    if (branch == Branch::StableMinus || branch == Branch::UnstableMinus) v = -v;
    return v;
}

namespace {

// Splits any segment that is not shorter than max_segment.
std::vector<State> refine(const std::vector<State>& pts, double max_segment) {
    if (pts.empty()) return pts;
    std::vector<State> out;
    out.reserve(pts.size());
    out.push_back(pts.front());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const State& a = out.back();
        const State& b = pts[i];
        const double d = (b - a).norm();
        const int pieces = static_cast<int>(std::floor(d / max_segment)) + 1;
        for (int k = 1; k < pieces; ++k) out.push_back(a + (b - a) * (static_cast<double>(k) / pieces));
        out.push_back(b);
    }
    return out;
}

IntegratorSettings seeded(IntegratorSettings s) {
    s.ignore_start_equilibrium = true;
    return s;
}

}  // namespace

Manifold trace_manifold(const ModelParams& p, const Equilibrium& saddle, Branch branch, const ManifoldBudget& budget) {
    if (!(budget.max_segment > 0) || !(budget.max_arclength > 0) || !(budget.seed_factor > 0)) {
        throw DomainError("manifold budget must be positive");
    }
    const Eigen::Vector2d v = branch_direction(p, saddle, branch);
    const State seed = saddle.location + budget.seed_offset(saddle.location) * v;
    if (!in_phi(seed)) throw PreconditionError("branch seed leaves the non-negative quadrant");

    Manifold m;
    m.origin = saddle;
    m.branch = branch;
    m.points.push_back(seed);
    double length = 0;
    const double chunk = 0.5 * budget.max_segment;

    auto observer = [&](const StepView& step) {
        const double chord = (step.end() - step.start()).norm();
        const int n = std::max(1, static_cast<int>(std::ceil(chord / chunk)));
        for (int i = 1; i <= n; ++i) {
            const double t = (i == n) ? step.t1() : step.t0() + (step.t1() - step.t0()) * i / n;
            const State s = step.at(t).cwiseMax(0.0);
            length += (s - m.points.back()).norm();
            m.points.push_back(s);
        }
        return length < budget.max_arclength;
    };

    const TimeDirection dir = is_stable_branch(branch) ? TimeDirection::Backward : TimeDirection::Forward;
    const Trajectory tr = integrate(p, seed, seeded(budget.integrator), {}, dir, observer);
    m.termination = tr.termination;
    m.captured_by = tr.attractor;

    m.points = refine(m.points, budget.max_segment);
    m.arclength = 0;
    for (std::size_t i = 1; i < m.points.size(); ++i) m.arclength += (m.points[i] - m.points[i - 1]).norm();
    return m;
}

double distance_to_polyline(const std::vector<State>& poly, const State& s) {
    if (poly.empty()) throw PreconditionError("empty polyline");
    double best = (poly.front() - s).norm();
    for (std::size_t i = 1; i < poly.size(); ++i) {
        const Eigen::Vector2d seg = poly[i] - poly[i - 1];
        const double len2 = seg.squaredNorm();
        const double u = (len2 > 0) ? std::clamp((s - poly[i - 1]).dot(seg) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (poly[i - 1] + u * seg - s).norm());
    }
    return best;
}

void GridSpec::validate() const {
    for (double v : {x_min, x_max, y_min, y_max}) {
        if (!std::isfinite(v)) throw DomainError("grid bounds must be finite");
    }
    if (x_min < 0 || y_min < 0) throw DomainError("grid must lie in the non-negative quadrant");
    if (x_max < x_min || y_max < y_min) throw DomainError("grid bounds are reversed");
    if (nx < 1 || ny < 1) throw DomainError("grid resolution must be at least 1");
}

double GridSpec::x(int i) const {
    return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1);
}

double GridSpec::y(int j) const {
    return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1);
}

std::size_t BasinEstimate::resolved() const {
    std::size_t n = 0;
    for (const auto& [label, c] : counts) n += c;
    return n;
}

double BasinEstimate::fraction(const std::string& label) const {
    const std::size_t n = resolved();
    auto it = counts.find(label);
    if (n == 0 || it == counts.end()) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(n);
}

BasinEstimate basin_fraction(const ModelParams& p, const GridSpec& grid, const IntegratorSettings& settings,
                             unsigned threads, std::vector<AttractorId>* labels) {
    grid.validate();
    settings.validate();
    std::vector<AttractorId> out(grid.size());
    parallel_for(
        out.size(),
        [&](std::size_t idx) {
            const int i = static_cast<int>(idx % static_cast<std::size_t>(grid.nx));
            const int j = static_cast<int>(idx / static_cast<std::size_t>(grid.nx));
            try {
                out[idx] = classify_omega_limit(p, State(grid.x(i), grid.y(j)), settings);
            } catch (const IntegrationError&) {
                out[idx] = AttractorId::unknown();
            }
        },
        threads);

    BasinEstimate b;
    b.grid = grid;
    for (const auto& a : out) {
        if (a.kind == AttractorId::Kind::Unknown) ++b.unresolved;
        else ++b.counts[a.label()];
    }
    b.fraction_prey_free = b.fraction("PreyFreeEq");
    if (labels) *labels = std::move(out);
    return b;
}

namespace {

// +1 when the (possibly reversed) flow crosses the section from negative to
// positive side at s, -1 for the reverse, 0 when tangent.
int crossing_orientation(const ModelParams& p, const HalfLineSection& section, const State& s, TimeDirection dir) {
    const State f = (dir == TimeDirection::Forward ? 1.0 : -1.0) * vector_field(p, s);
    const double n = section.normal().dot(f);
    if (std::abs(n) <= 1e-9 * f.norm() || f.norm() == 0.0) return 0;
    return n > 0 ? 1 : -1;
}

}  // namespace

std::optional<ReturnHit> return_map(const ModelParams& p, const HalfLineSection& section, double coordinate,
                                    TimeDirection direction, const IntegratorSettings& settings) {
    const State start = section.anchor + coordinate * section.direction;
    if (!in_phi(start)) return std::nullopt;
    const int orientation = crossing_orientation(p, section, start, direction);
    if (orientation == 0) return std::nullopt;

    std::optional<ReturnHit> hit;
    auto observer = [&](const StepView& step) {
        if (auto c = find_crossing(step, section, orientation); c && c->t > 1e-9) {
            hit = ReturnHit{c->coordinate, c->t, c->state};
            return false;
        }
        return true;
    };
    integrate(p, start, settings, {}, direction, observer);
    return hit;
}

namespace {

// Fixed point of the return map in one time direction. Plain iteration;
// once the map contracts, secant steps on P(c) - c are tried and abandoned
// for the rest of the run if they leave the map's domain.
std::optional<double> iterate_return_map(const ModelParams& p, const HalfLineSection& section, double c0,
                                         TimeDirection dir, const LimitCycleSettings& s) {
    auto secant = [&](double a, double ga, double b, double gb) -> std::optional<double> {
        for (int k = 0; k < 60; ++k) {
            if (gb == ga) return std::nullopt;
            const double next = b - gb * (b - a) / (gb - ga);
            if (!(next > s.min_radius) || !std::isfinite(next)) return std::nullopt;
            const auto hit = return_map(p, section, next, dir, s.integrator);
            if (!hit) return std::nullopt;
            const double gn = hit->coordinate - next;
            if (std::abs(gn) < s.fixed_point_tol) return next;
            a = b;
            ga = gb;
            b = next;
            gb = gn;
        }
        return std::nullopt;
    };

    double c = c0;
    std::optional<double> prev_c, prev_g;
    bool use_secant = true;
    for (int n = 0; n < s.max_returns; ++n) {
        const auto hit = return_map(p, section, c, dir, s.integrator);
        if (!hit) return std::nullopt;
        const double g = hit->coordinate - c;
        if (std::abs(g) < s.fixed_point_tol) return c > s.min_radius ? std::optional<double>(c) : std::nullopt;
        if (hit->coordinate < s.min_radius) return std::nullopt;

        if (use_secant && prev_g && std::abs(g) < 0.5 * std::abs(*prev_g) && c != *prev_c) {
            if (auto root = secant(*prev_c, *prev_g, c, g)) return root;
            use_secant = false;
        }
        prev_c = c;
        prev_g = g;
        c = hit->coordinate;
    }
    return std::nullopt;
}

}  // namespace

std::optional<LimitCycleResult> find_limit_cycle(const ModelParams& p, const State& seed,
                                                 const HalfLineSection& section, const LimitCycleSettings& settings) {
    settings.integrator.validate();
    detail::require_finite(seed);
    if (!in_phi(seed)) throw DomainError("seed must lie in the non-negative quadrant");
    if ((seed - section.anchor).norm() <= settings.min_radius) return std::nullopt;

    // Seed's first crossing of the section.
    double c0 = 0;
    const double scale = 1.0 + seed.norm();
    if (std::abs(section.side(seed)) <= 1e-12 * scale && section.coordinate(seed) > 0) {
        c0 = section.coordinate(seed);
    } else {
        const State probe = section.anchor + std::max(settings.min_radius, 1e-3 * (1.0 + section.anchor.norm())) *
                                                 section.direction;
        const int orientation = crossing_orientation(p, section, probe, TimeDirection::Forward);
        if (orientation == 0) throw PreconditionError("section is tangent to the flow");
        std::optional<double> first;
        auto observer = [&](const StepView& step) {
            if (auto c = find_crossing(step, section, orientation)) {
                first = c->coordinate;
                return false;
            }
            return true;
        };
        integrate(p, seed, settings.integrator, {}, TimeDirection::Forward, observer);
        if (!first) return std::nullopt;
        c0 = *first;
    }
    if (crossing_orientation(p, section, section.anchor + c0 * section.direction, TimeDirection::Forward) == 0) {
        throw PreconditionError("section is tangent to the flow at the seed crossing");
    }

    std::optional<double> fixed = iterate_return_map(p, section, c0, TimeDirection::Forward, settings);
    TimeDirection found = TimeDirection::Forward;
    if (!fixed) {
        fixed = iterate_return_map(p, section, c0, TimeDirection::Backward, settings);
        found = TimeDirection::Backward;
    }
    if (!fixed) return std::nullopt;

    LimitCycleResult r;
    r.section = section;
    r.fixed_point = section.anchor + *fixed * section.direction;
    r.found_in = found;

    const double h = 1e-5 * std::max(1.0, *fixed);
    const auto fwd = return_map(p, section, *fixed, TimeDirection::Forward, settings.integrator);
    const auto up = return_map(p, section, *fixed + h, TimeDirection::Forward, settings.integrator);
    const auto dn = return_map(p, section, *fixed - h, TimeDirection::Forward, settings.integrator);
    if (fwd && up && dn) {
        r.period = fwd->time;
        r.floquet_slope = (up->coordinate - dn->coordinate) / (2.0 * h);
    } else {
        const auto bwd = return_map(p, section, *fixed, TimeDirection::Backward, settings.integrator);
        const auto bup = return_map(p, section, *fixed + h, TimeDirection::Backward, settings.integrator);
        const auto bdn = return_map(p, section, *fixed - h, TimeDirection::Backward, settings.integrator);
        if (!(bwd && bup && bdn)) throw IntegrationError("return map lost the cycle during the slope estimate");
        r.period = bwd->time;
        r.floquet_slope = 2.0 * h / (bup->coordinate - bdn->coordinate);
    }

    const double m = std::abs(r.floquet_slope);
    if (m < 1.0 - settings.neutral_band) r.stability = CycleStability::StableCycle;
    else if (m > 1.0 + settings.neutral_band) r.stability = CycleStability::UnstableCycle;
    else r.stability = CycleStability::Neutral;
    return r;
}

namespace {

// Distance of the branch's first ray crossing from the anchor. An unstable
// branch captured by the anchor itself counts as 0; a stable branch that
// leaves the ray's reach without crossing counts as +inf.
std::optional<double> first_ray_distance(const ModelParams& p, const Equilibrium& saddle, Branch branch,
                                         const HalfLineSection& ray, const TopologySettings& s) {
    const Eigen::Vector2d v = branch_direction(p, saddle, branch);
    const State seed = saddle.location + s.budget.seed_offset(saddle.location) * v;
    IntegratorSettings is = seeded(s.budget.integrator);
    is.max_time = s.max_time;

    std::optional<double> r;
    double travelled = 0;
    bool left = false;
    auto observer = [&](const StepView& step) {
        for (int orientation : {1, -1}) {
            if (auto c = find_crossing(step, ray, orientation)) {
                r = c->coordinate;
                return false;
            }
        }
        travelled += (step.end() - step.start()).norm();
        if ((step.end() - ray.anchor).norm() > s.region_radius) {
            left = true;
            return false;
        }
        return travelled < s.budget.max_arclength;
    };
    const TimeDirection dir = is_stable_branch(branch) ? TimeDirection::Backward : TimeDirection::Forward;
    const Trajectory tr = integrate(p, seed, is, {}, dir, observer);
    if (r) return r;
    if (!is_stable_branch(branch) && tr.termination == Termination::ConvergedTo &&
        (tr.final_state() - ray.anchor).norm() <= is.convergence_radius) {
        return 0.0;
    }
    if (is_stable_branch(branch) && left) return std::numeric_limits<double>::infinity();
    return std::nullopt;
}

}  // namespace

ManifoldTopology manifold_topology(const ModelParams& p, const TopologySettings& settings) {
    const std::vector<Equilibrium> interior = interior_equilibria(p);
    const auto e1 = find_equilibrium(interior, EquilibriumKind::InteriorLow);
    const auto e2 = find_equilibrium(interior, EquilibriumKind::InteriorHigh);
    if (!e1 || !e2) throw PreconditionError("topology needs two distinct interior equilibria");
    if (!(jacobian(p, e1->location).determinant() < 0)) {
        throw PreconditionError("lower interior equilibrium is not a saddle");
    }

    ManifoldTopology t;
    t.ray.anchor = e2->location;
    Eigen::Vector2d dir = settings.ray_direction.value_or(e2->location - e1->location);
    if (!(dir.norm() > 0)) throw DomainError("ray direction must be non-zero");
    t.ray.direction = dir.normalized();

    const auto ru = first_ray_distance(p, *e1, Branch::UnstablePlus, t.ray, settings);
    const auto rs = first_ray_distance(p, *e1, Branch::StablePlus, t.ray, settings);
    if (!ru || !rs) {
        t.cls = TopologyClass::Indeterminate;
        return t;
    }
    t.r_unstable = *ru;
    t.r_stable = *rs;
    t.gap = *rs - *ru;
    if (std::abs(t.gap) < settings.coincidence_tol) t.cls = TopologyClass::NearCoincident;
    else t.cls = t.gap > 0 ? TopologyClass::UnstableInsideStable : TopologyClass::StableInsideUnstable;
    return t;
}

}  // namespace afmi
