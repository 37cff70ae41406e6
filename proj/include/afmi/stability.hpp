#pragma once

#include <optional>
#include <string_view>

#include "afmi/equilibria.hpp"

namespace afmi {

// Outcome of the closed-form saddle test for the lower interior equilibrium.
struct SaddleBoundCheck {
    double bound = 0;             // upper bound on y1 below which det < 0
    double bound_as_printed = 0;  // same fraction with the printed delta*epsilon term
    bool saddle_by_bound = false; // 0 < y1 < bound
    double det = 0;               // direct determinant of the Jacobian
    bool det_negative = false;
    StabilityClass verdict{};     // direct classification (authoritative)
};

enum class UpperCase { StableRegime, WeakFocus, Repeller };

std::string_view to_string(UpperCase c);

struct UpperCaseCheck {
    UpperCase which{};
    double det_bound = 0;    // det > 0 iff y2 > det_bound (when the denominator is positive)
    double trace_bound = 0;  // trace < 0 iff y2 > trace_bound
    double trace = 0;        // direct values for comparison
    double det = 0;
    bool agrees_with_direct = false;
};

struct TheoremFlags {
    std::optional<SaddleBoundCheck> saddle;  // populated for InteriorLow
    std::optional<UpperCaseCheck> upper;     // populated for InteriorHigh
};

struct StabilityReport {
    double trace = 0;
    double determinant = 0;
    EigenPair eigenvalues{};
    StabilityClass stability{};
    TheoremFlags theorem_flags;
};

// Throws PreconditionError("stale equilibrium") when the vector field at
// e.location exceeds 1e-6.
StabilityReport stability_report(const ModelParams& p, const Equilibrium& e);

struct TraceDet {
    double trace;
    double det;
};

// Trace and determinant from the nullcline-substituted closed forms.
// Requires an interior point lying on the predator nullcline (1e-8).
TraceDet trace_det_simplified(const ModelParams& p, const Equilibrium& interior);

SaddleBoundCheck lower_saddle_check(const ModelParams& p, const Equilibrium& e1);

UpperCaseCheck upper_stability_case(const ModelParams& p, const Equilibrium& e2);

}  // namespace afmi
