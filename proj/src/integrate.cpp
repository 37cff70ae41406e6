#include "afmi/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace afmi {

void IntegratorSettings::validate() const {
    const double positives[] = {rel_tol, abs_tol, max_time, escape_norm, convergence_radius, convergence_dwell};
    for (double v : positives) {
        if (!(v > 0) || !std::isfinite(v)) throw DomainError("integrator settings must be finite and positive");
    }
    if (max_steps == 0) throw DomainError("max_steps must be positive");
    if (rel_tol > 1e-3 || abs_tol > 1e-3) throw DomainError("integrator tolerances must not exceed 1e-3");
}

AttractorId AttractorId::from_equilibrium(EquilibriumKind k) {
    AttractorId a;
    switch (k) {
        case EquilibriumKind::Trivial: a.kind = Kind::TrivialEq; break;
        case EquilibriumKind::PredatorFree: a.kind = Kind::PredatorFreeEq; break;
        case EquilibriumKind::PreyFree: a.kind = Kind::PreyFreeEq; break;
        case EquilibriumKind::InteriorLow: a.kind = Kind::InteriorEq; a.index = 1; break;
        case EquilibriumKind::InteriorHigh: a.kind = Kind::InteriorEq; a.index = 2; break;
        case EquilibriumKind::InteriorCollided: a.kind = Kind::InteriorEq; a.index = 0; break;
    }
    return a;
}

std::string AttractorId::label() const {
    switch (kind) {
        case Kind::PreyFreeEq: return "PreyFreeEq";
        case Kind::InteriorEq: return index == 1 ? "InteriorEq(E1)" : index == 2 ? "InteriorEq(E2)" : "InteriorEq(E*)";
        case Kind::LimitCycle: return "LimitCycle";
        case Kind::PredatorFreeEq: return "PredatorFreeEq";
        case Kind::TrivialEq: return "TrivialEq";
        case Kind::Unknown: return "Unknown";
    }
    return "Unknown";
}

AttractorId attractor_from_label(const std::string& label) {
    AttractorId a;
    using K = AttractorId::Kind;
    if (label == "PreyFreeEq") a.kind = K::PreyFreeEq;
    else if (label == "InteriorEq(E1)") a = {K::InteriorEq, 1, 0};
    else if (label == "InteriorEq(E2)") a = {K::InteriorEq, 2, 0};
    else if (label == "InteriorEq(E*)") a = {K::InteriorEq, 0, 0};
    else if (label == "LimitCycle") a.kind = K::LimitCycle;
    else if (label == "PredatorFreeEq") a.kind = K::PredatorFreeEq;
    else if (label == "TrivialEq") a.kind = K::TrivialEq;
    else if (label == "Unknown") a.kind = K::Unknown;
    else throw DomainError("unknown attractor label: " + label);
    return a;
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::ConvergedTo: return "ConvergedTo";
        case Termination::Escaped: return "Escaped";
        case Termination::BudgetExhausted: return "BudgetExhausted";
        case Termination::ReachedAxis: return "ReachedAxis";
    }
    return "BudgetExhausted";
}

State StepView::at(double t) const {
    const double theta = (t - t0_) / h_;
    const double rest = 1.0 - theta;
    return coeffs_.col(0) +
           theta * (coeffs_.col(1) + rest * (coeffs_.col(2) + theta * (coeffs_.col(3) + rest * coeffs_.col(4))));
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

constexpr double kMinStep = 1e-14;

struct Capture {
    int index = -1;
    double since = 0;
};

int nearest_within(const std::vector<Equilibrium>& eqs, const State& s, double radius) {
    int best = -1;
    double best_d = radius;
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        const double d = (eqs[i].location - s).norm();
        if (d <= best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

}  // namespace

Trajectory integrate(const ModelParams& p, const State& s0, const IntegratorSettings& settings,
                     std::span<const double> output_times, TimeDirection direction, const StepObserver& observer) {
    settings.validate();
    detail::require_finite(s0);
    if (!in_phi(s0)) throw DomainError("initial state must lie in the non-negative quadrant");

    const double sign = (direction == TimeDirection::Forward) ? 1.0 : -1.0;
    auto f = [&](const State& s) -> State { return sign * vector_field(p, s); };

    std::vector<Equilibrium> eqs;
    if (settings.detect_convergence) eqs = all_equilibria(p);

    Trajectory tr;
    std::vector<double> outs(output_times.begin(), output_times.end());
    std::sort(outs.begin(), outs.end());
    std::size_t next_out = 0;
    const bool every_step = outs.empty();

    double t = 0.0;
    State y = s0;
    if (every_step) {
        tr.samples.push_back({t, y});
    } else {
        while (next_out < outs.size() && outs[next_out] <= 0.0) {
            if (outs[next_out] == 0.0) tr.samples.push_back({0.0, y});
            ++next_out;
        }
    }

    State k1 = f(y);
    Capture capture;
    int ignored = -1;
    if (settings.detect_convergence && settings.ignore_start_equilibrium) {
        ignored = nearest_within(eqs, y, settings.convergence_radius);
    }

    auto finish = [&](Termination term) {
        tr.termination = term;
        if (tr.samples.empty() || tr.samples.back().t != t) {
            if (every_step || tr.samples.empty()) tr.samples.push_back({t, y});
        }
        return tr;
    };

    // A start exactly on an equilibrium is captured without stepping.
    if (settings.detect_convergence && ignored < 0 && k1.norm() <= 1e-12 * (1.0 + y.norm())) {
        const int idx = nearest_within(eqs, y, settings.convergence_radius);
        if (idx >= 0) {
            tr.attractor = AttractorId::from_equilibrium(eqs[idx].kind);
            return finish(Termination::ConvergedTo);
        }
    }

    const double scale0 = settings.abs_tol + settings.rel_tol * y.norm();
    double h = std::clamp(0.01 * scale0 / std::max(k1.norm() * settings.rel_tol, 1e-300), 1e-6, 0.1);
    h = std::min(h, settings.max_time);

    while (true) {
        if (t >= settings.max_time || tr.steps >= settings.max_steps) return finish(Termination::BudgetExhausted);
        const bool last = (t + h >= settings.max_time);
        if (last) h = settings.max_time - t;

        const State k2 = f(y + h * (a21 * k1));
        const State k3 = f(y + h * (a31 * k1 + a32 * k2));
        const State k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const State k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const State k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const State y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const State k7 = f(y_new);
        const State err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double tol = settings.abs_tol + settings.rel_tol * std::max(y.norm(), y_new.norm());
        const double err = err_vec.norm() / tol;

        if (!std::isfinite(err)) {
            h *= 0.2;
            ++tr.rejected_steps;
            if (h < kMinStep) throw IntegrationError("step size underflow (non-finite error estimate)");
            continue;
        }

        if (err <= 1.0) {
            Eigen::Matrix<double, 2, 5> coeffs;
            const State diff = y_new - y;
            const State bspl = h * k1 - diff;
            coeffs.col(0) = y;
            coeffs.col(1) = diff;
            coeffs.col(2) = bspl;
            coeffs.col(3) = diff - h * k7 - bspl;
            coeffs.col(4) = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            const StepView view(t, h, y, y_new, coeffs);

            while (next_out < outs.size() && outs[next_out] <= t + h) {
                State s = view.at(outs[next_out]);
                tr.samples.push_back({outs[next_out], s.cwiseMax(0.0)});
                ++next_out;
            }

            State accepted = y_new;
            bool clipped = false;
            for (int i = 0; i < 2; ++i) {
                if (accepted(i) < 0.0) {
                    accepted(i) = 0.0;
                    clipped = true;
                }
            }
            t = last ? settings.max_time : t + h;
            y = accepted;
            k1 = clipped ? f(y) : k7;
            ++tr.steps;
            if (clipped) ++tr.clip_events;
            if (every_step) tr.samples.push_back({t, y});

            if (observer && !observer(view)) return finish(Termination::BudgetExhausted);
            if (y.norm() > settings.escape_norm) return finish(Termination::Escaped);
            if (clipped && settings.stop_at_axis) return finish(Termination::ReachedAxis);

            if (settings.detect_convergence) {
                int idx = nearest_within(eqs, y, settings.convergence_radius);
                if (ignored >= 0) {
                    if (idx == ignored) idx = -1;
                    else if ((eqs[ignored].location - y).norm() > settings.convergence_radius) ignored = -1;
                }
                if (idx < 0) {
                    capture.index = -1;
                } else if (idx != capture.index) {
                    capture = {idx, t};
                } else if (t - capture.since >= settings.convergence_dwell) {
                    tr.attractor = AttractorId::from_equilibrium(eqs[idx].kind);
                    return finish(Termination::ConvergedTo);
                }
            }

            const double fac = (err == 0.0) ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h *= fac;
        } else {
            ++tr.rejected_steps;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        }
        if (h < kMinStep) throw IntegrationError("step size underflow: the problem appears stiff");
    }
}

std::optional<SectionCrossing> find_crossing(const StepView& step, const HalfLineSection& section, int orientation) {
    const double g0 = orientation * section.side(step.start());
    const double g1 = orientation * section.side(step.end());
    if (!(g0 < 0.0 && g1 >= 0.0)) return std::nullopt;

    double lo = step.t0(), hi = step.t1();
    for (int i = 0; i < 100 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (orientation * section.side(step.at(mid)) < 0.0) lo = mid;
        else hi = mid;
    }
    const double tc = 0.5 * (lo + hi);
    const State s = step.at(tc);
    const double coord = section.coordinate(s);
    if (!(coord > 0.0)) return std::nullopt;
    return SectionCrossing{tc, s, coord};
}

AttractorId classify_omega_limit(const ModelParams& p, const State& s0, const IntegratorSettings& settings) {
    const std::vector<Equilibrium> interior = interior_equilibria(p);
    std::optional<HalfLineSection> section;
    int orientation = 1;
    if (!interior.empty()) {
        section = HalfLineSection{interior.back().location, Eigen::Vector2d::UnitX()};
        const State probe = section->anchor + 1e-3 * (1.0 + section->anchor.norm()) * section->direction;
        orientation = (section->normal().dot(vector_field(p, probe)) >= 0.0) ? 1 : -1;
    }

    std::vector<double> returns;
    StepObserver observer;
    if (section) {
        observer = [&](const StepView& step) {
            if (auto c = find_crossing(step, *section, orientation)) returns.push_back(c->coordinate);
            return true;
        };
    }

    IntegratorSettings s = settings;
    s.detect_convergence = true;
    const Trajectory tr = integrate(p, s0, s, {}, TimeDirection::Forward, observer);
    if (tr.termination == Termination::ConvergedTo) return tr.attractor;
    if (tr.termination == Termination::Escaped || returns.size() < 3) return AttractorId::unknown();

    const std::size_t n = returns.size();
    const double r1 = returns[n - 3], r2 = returns[n - 2], r3 = returns[n - 1];
    const double floor = 100.0 * settings.convergence_radius;
    const double spread = std::max({r1, r2, r3}) - std::min({r1, r2, r3});
    if (std::min({r1, r2, r3}) > floor && spread <= 1e-2 * r3) {
        AttractorId a;
        a.kind = AttractorId::Kind::LimitCycle;
        a.reference = r3;
        return a;
    }
    return AttractorId::unknown();
}

}  // namespace afmi
