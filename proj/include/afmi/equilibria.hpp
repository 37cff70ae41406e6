#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "afmi/linear2.hpp"
#include "afmi/model.hpp"

namespace afmi {

// Coefficients of the interior-equilibrium quadratic a x^2 + b x + c = 0
// obtained by substituting the predator nullcline into the prey nullcline.
struct QuadraticCoefficients {
    double a;
    double b;
    double c;
    double discriminant;  // b^2 - 4ac
};

QuadraticCoefficients quadratic_coefficients(const ModelParams& p);

enum class EquilibriumKind { Trivial, PredatorFree, PreyFree, InteriorLow, InteriorHigh, InteriorCollided };

std::string_view to_string(EquilibriumKind k);
EquilibriumKind equilibrium_kind_from_string(std::string_view name);

inline bool is_interior(EquilibriumKind k) {
    return k == EquilibriumKind::InteriorLow || k == EquilibriumKind::InteriorHigh ||
           k == EquilibriumKind::InteriorCollided;
}

struct Equilibrium {
    EquilibriumKind kind{};
    State location = State::Zero();
    EigenPair eigenvalues{};
    StabilityClass stability{};
};

// Fills eigenvalues and stability from the Jacobian at the given location.
Equilibrium make_equilibrium(const ModelParams& p, EquilibriumKind kind, const State& location);

// |discriminant| below this counts as a double root.
double collision_tolerance(const QuadraticCoefficients& q);

// Interior equilibria sorted by x. A single positive root of the quadratic is
// labelled InteriorHigh when it is the larger root and InteriorLow otherwise.
std::vector<Equilibrium> interior_equilibria(const ModelParams& p);

// (0,0), (k,0) and, when its predator density is positive, the prey-free state.
std::vector<Equilibrium> boundary_equilibria(const ModelParams& p);

// Boundary followed by interior equilibria.
std::vector<Equilibrium> all_equilibria(const ModelParams& p);

std::optional<Equilibrium> find_equilibrium(const std::vector<Equilibrium>& eqs, EquilibriumKind kind);

// Prey-free predator level ((beta - delta alpha) xi - delta) / (delta epsilon).
double prey_free_level(const ModelParams& p);

struct XiWindow {
    double xi_low;
    double xi_high;
};

// Range of xi with two positive interior equilibria for the parameters in p
// (p.xi is ignored). Empty when beta - delta alpha - beta epsilon <= 0.
std::optional<XiWindow> two_interior_window(const ModelParams& p);

// Both roots of discriminant(xi) = 0, ascending; empty when none are real.
std::vector<double> discriminant_roots(const ModelParams& p);

enum class Regime { NoInterior, OneInterior, TwoInterior, DegenerateBoundary };

std::string_view to_string(Regime r);

// Counts interior equilibria from the signs of b, c and the discriminant
// followed by the y > 0 filter; DegenerateBoundary marks a positive double root.
Regime regime_classify(const ModelParams& base, double epsilon, double xi);

// xi = delta / (beta - delta alpha - beta epsilon); throws InfeasibleError
// when the denominator is not positive.
double transcritical_threshold(const ModelParams& p);

}  // namespace afmi
