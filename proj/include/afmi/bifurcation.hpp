#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "afmi/manifolds.hpp"

namespace afmi {

enum class BifurcationKind { Transcritical, SaddleNode, Hopf, Homoclinic };

std::string_view to_string(BifurcationKind k);
BifurcationKind bifurcation_kind_from_string(std::string_view name);

struct BifurcationEvent {
    BifurcationKind kind{};
    double xi_star = 0;
    State location = State::Zero();
    std::map<std::string, double> diagnostics;  // booleans stored as 0/1

    bool operator==(const BifurcationEvent&) const = default;
};

struct XiBracket {
    double lo;
    double hi;
};

struct SotomayorQuantities {
    double wT_F_xi = 0;
    double wT_D2F_vv = 0;
    double wT_D2F_vv_fd = 0;  // same contraction from central second differences
    double fd_rel_error = 0;
    double lambda_min = 0;
    Eigen::Vector2d v = Eigen::Vector2d::Zero();  // null direction of J
    Eigen::Vector2d w = Eigen::Vector2d::Zero();  // null direction of J^T
};

// Throws PreconditionError unless J at e has an eigenvalue with |lambda| < 1e-6.
SotomayorQuantities sotomayor_quantities(const ModelParams& p, const Equilibrium& e);

// Closed-form sufficient conditions for the fold at (x~, y~). Informational;
// the Sotomayor quantities decide.
struct SaddleNodeConditions {
    bool y_not_excluded = false;   // y~ differs from the excluded value
    bool k_and_epsilon = false;    // k > 2 x~ and epsilon < 1
    bool y_bracket = false;        // lower < y~ < upper
    bool xi_bracket = false;       // xi bound < y~ < upper
    double y_excluded = 0;
    double y_lower = 0, y_upper = 0;
    double xi_lower = 0, xi_upper = 0;
};

SaddleNodeConditions saddle_node_conditions(const ModelParams& p, const Equilibrium& e);

// Root of the discriminant in xi; throws BracketError without a sign change.
BifurcationEvent locate_saddle_node(const ModelParams& base, XiBracket bracket);

// Trace zero of the upper interior equilibrium; throws BracketError without a
// sign change or when det <= 0 (or the equilibrium is missing) inside the bracket.
BifurcationEvent locate_hopf(const ModelParams& base, XiBracket bracket);

// Bisection on the sign of the manifold gap to width `width`. Throws
// BracketError when both endpoints share a sign, PreconditionError outside
// the bounded regime and InfeasibleError on an indeterminate topology.
BifurcationEvent locate_homoclinic(const ModelParams& base, XiBracket bracket, const TopologySettings& settings = {},
                                   double width = 1e-6);

// Throws InfeasibleError when beta - delta alpha - beta epsilon <= 0.
BifurcationEvent locate_transcritical(const ModelParams& base);

struct XiRange {
    double from;
    double to;
    int steps;
};

struct SweepRow {
    double xi = 0;
    std::vector<Equilibrium> interior;  // sorted by x
    std::vector<BifurcationKind> events;  // events located in (previous xi, xi]
};

struct SweepDataset {
    std::vector<SweepRow> rows;           // xi strictly increasing
    std::vector<BifurcationEvent> events;  // sorted by xi_star
};

// Reversed ranges are swept in increasing order. Throws PreconditionError
// when steps < 2.
SweepDataset sweep(const ModelParams& base, XiRange range, unsigned threads = 0);

}  // namespace afmi
