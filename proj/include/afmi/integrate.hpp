#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afmi/equilibria.hpp"

namespace afmi {

struct IntegratorSettings {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_time = 2000.0;
    std::size_t max_steps = 5'000'000;
    double escape_norm = 1e6;
    double convergence_radius = 1e-5;
    double convergence_dwell = 10.0;
    bool detect_convergence = true;
    bool stop_at_axis = false;  // terminate with ReachedAxis when a coordinate is clipped to 0
    // No capture by the equilibrium next to s0 until the orbit has left its
    // convergence radius once (manifold seeds start inside that radius).
    bool ignore_start_equilibrium = false;

    // Throws DomainError when a field is non-positive or a tolerance exceeds 1e-3.
    void validate() const;
};

struct AttractorId {
    enum class Kind { PreyFreeEq, InteriorEq, LimitCycle, PredatorFreeEq, TrivialEq, Unknown };
    Kind kind = Kind::Unknown;
    int index = 0;          // InteriorEq: 1 = lower (E1), 2 = upper (E2), 0 = collided
    double reference = 0;   // LimitCycle: section coordinate of the last return

    static AttractorId unknown() { return {}; }
    static AttractorId from_equilibrium(EquilibriumKind k);

    // "PreyFreeEq", "InteriorEq(E2)", "LimitCycle", ...; the key used in counts.
    std::string label() const;

    friend bool operator==(const AttractorId& a, const AttractorId& b) {
        return a.kind == b.kind && a.index == b.index;
    }
};

AttractorId attractor_from_label(const std::string& label);

enum class Termination { ConvergedTo, Escaped, BudgetExhausted, ReachedAxis };

std::string_view to_string(Termination t);

struct Sample {
    double t;
    State state;
};

struct Trajectory {
    std::vector<Sample> samples;
    Termination termination = Termination::BudgetExhausted;
    AttractorId attractor;  // meaningful when termination == ConvergedTo
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t clip_events = 0;

    const State& final_state() const { return samples.back().state; }
    double final_time() const { return samples.back().t; }
};

enum class TimeDirection { Forward, Backward };

// One accepted step with its continuous extension. Times are measured along
// the integration direction (always increasing).
class StepView {
public:
    StepView(double t0, double h, const State& y0, const State& y1, const Eigen::Matrix<double, 2, 5>& coeffs)
        : t0_(t0), h_(h), y0_(y0), y1_(y1), coeffs_(coeffs) {}

    double t0() const { return t0_; }
    double t1() const { return t0_ + h_; }
    const State& start() const { return y0_; }
    const State& end() const { return y1_; }

    // Fourth-order dense output on [t0, t1].
    State at(double t) const;

private:
    double t0_, h_;
    State y0_, y1_;
    Eigen::Matrix<double, 2, 5> coeffs_;
};

// Return false to stop the integration after this step.
using StepObserver = std::function<bool(const StepView&)>;

// Adaptive Dormand-Prince 5(4) integration of the model (or its time
// reversal). Terminates on the first of: convergence to a known equilibrium
// (dwell satisfied), escape beyond escape_norm, axis clipping when
// stop_at_axis is set, observer request (reported as BudgetExhausted) or the
// time/step budget. When `output_times` is non-empty samples are taken at
// those times only; otherwise every accepted step is recorded.
// Throws IntegrationError when the step size underflows 1e-14.
Trajectory integrate(const ModelParams& p, const State& s0, const IntegratorSettings& settings = {},
                     std::span<const double> output_times = {}, TimeDirection direction = TimeDirection::Forward,
                     const StepObserver& observer = {});

// Upward crossing of the horizontal half-line to the right of `anchor`,
// i.e. the standard return section around an interior focus.
struct HalfLineSection {
    State anchor = State::Zero();
    Eigen::Vector2d direction = Eigen::Vector2d::UnitX();

    Eigen::Vector2d normal() const { return {-direction(1), direction(0)}; }
    double side(const State& s) const { return normal().dot(s - anchor); }
    double coordinate(const State& s) const { return direction.dot(s - anchor); }
};

struct SectionCrossing {
    double t;
    State state;
    double coordinate;  // distance from the anchor along the half-line
};

// Crossing of the half-line inside one step, refined by bisection on the
// dense output. orientation +1 accepts crossings where side() goes from
// negative to positive, -1 the reverse.
std::optional<SectionCrossing> find_crossing(const StepView& step, const HalfLineSection& section, int orientation);

// Forward orbit classification: nearest equilibrium when captured, a limit
// cycle when the orbit keeps returning to the section around the upper
// interior equilibrium at a bounded, non-shrinking distance, otherwise Unknown.
AttractorId classify_omega_limit(const ModelParams& p, const State& s0, const IntegratorSettings& settings = {});

}  // namespace afmi
