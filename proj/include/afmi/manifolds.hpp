#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afmi/integrate.hpp"

namespace afmi {

// Plus branches: unstable with x increasing, stable with y increasing.
enum class Branch { StablePlus, StableMinus, UnstablePlus, UnstableMinus };

std::string_view to_string(Branch b);
Branch branch_from_string(std::string_view name);

inline bool is_stable_branch(Branch b) { return b == Branch::StablePlus || b == Branch::StableMinus; }

struct ManifoldBudget {
    double seed_factor = 1e-6;   // seed offset = seed_factor * (1 + |saddle|)
    double max_segment = 0.05;
    double max_arclength = 200.0;
    IntegratorSettings integrator = tight_settings();

    static IntegratorSettings tight_settings() {
        IntegratorSettings s;
        s.rel_tol = 1e-10;
        s.abs_tol = 1e-12;
        s.stop_at_axis = true;
        return s;
    }
    double seed_offset(const State& saddle) const { return seed_factor * (1.0 + saddle.norm()); }
};

struct Manifold {
    Equilibrium origin;
    Branch branch{};
    std::vector<State> points;  // starts at the seed, not at the saddle
    double arclength = 0;
    Termination termination = Termination::BudgetExhausted;
    AttractorId captured_by;    // when termination == ConvergedTo
};

// Unit eigenvector of the saddle along the branch, sign fixed by the branch.
Eigen::Vector2d branch_direction(const ModelParams& p, const Equilibrium& saddle, Branch branch);

// Throws PreconditionError unless det J < 0 at the saddle and the two
// eigenvectors are separated by more than 1e-3 rad.
Manifold trace_manifold(const ModelParams& p, const Equilibrium& saddle, Branch branch,
                        const ManifoldBudget& budget = {});

// Smallest distance from s to the polyline.
double distance_to_polyline(const std::vector<State>& poly, const State& s);

struct GridSpec {
    double x_min = 0.1, x_max = 15.0;
    double y_min = 0.1, y_max = 10.0;
    int nx = 40, ny = 40;

    void validate() const;  // finite, inside the quadrant, nx, ny >= 1
    double x(int i) const;  // inclusive linspace; a single node sits at x_min
    double y(int j) const;
    std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
};

struct BasinEstimate {
    GridSpec grid;
    std::map<std::string, std::size_t> counts;  // keyed by AttractorId::label(), resolved only
    double fraction_prey_free = 0;
    std::size_t unresolved = 0;

    std::size_t resolved() const;
    double fraction(const std::string& label) const;
};

// Grid node (i, j) is stored at index j * nx + i in `labels` when requested.
BasinEstimate basin_fraction(const ModelParams& p, const GridSpec& grid, const IntegratorSettings& settings = {},
                             unsigned threads = 0, std::vector<AttractorId>* labels = nullptr);

enum class CycleStability { StableCycle, UnstableCycle, Neutral };

std::string_view to_string(CycleStability c);

struct LimitCycleSettings {
    IntegratorSettings integrator = ManifoldBudget::tight_settings();
    double fixed_point_tol = 1e-8;
    int max_returns = 400;
    double neutral_band = 1e-3;
    double min_radius = 1e-4;  // smaller fixed points are the anchor itself
};

struct LimitCycleResult {
    HalfLineSection section;
    State fixed_point = State::Zero();
    double period = 0;
    double floquet_slope = 0;
    CycleStability stability = CycleStability::Neutral;
    TimeDirection found_in = TimeDirection::Forward;
};

struct ReturnHit {
    double coordinate;
    double time;
    State state;
};

// One application of the return map to the section point at `coordinate`.
std::optional<ReturnHit> return_map(const ModelParams& p, const HalfLineSection& section, double coordinate,
                                    TimeDirection direction, const IntegratorSettings& settings);

// Iterates the return map from the seed's first crossing, first forward and
// then in reversed time. Returns nullopt when neither converges to a point
// away from the anchor. Throws PreconditionError when the section is tangent
// to the flow at the seed's crossing.
std::optional<LimitCycleResult> find_limit_cycle(const ModelParams& p, const State& seed,
                                                 const HalfLineSection& section,
                                                 const LimitCycleSettings& settings = {});

enum class TopologyClass { UnstableInsideStable, StableInsideUnstable, NearCoincident, Indeterminate };

std::string_view to_string(TopologyClass t);

struct TopologySettings {
    ManifoldBudget budget{};
    double coincidence_tol = 1e-3;
    double max_time = 3000.0;
    double region_radius = 50.0;  // a stable branch beyond this distance from the anchor passes outside
    // Ray from the upper interior equilibrium; defaults to the direction
    // pointing away from the lower one.
    std::optional<Eigen::Vector2d> ray_direction;
};

struct ManifoldTopology {
    TopologyClass cls = TopologyClass::Indeterminate;
    double gap = 0;          // r_stable - r_unstable; positive = unstable inside, may be +inf
    double r_unstable = 0;   // first crossing distances along the ray
    double r_stable = 0;
    HalfLineSection ray;
};

// Throws PreconditionError unless two distinct interiors exist and the lower
// one is a saddle.
ManifoldTopology manifold_topology(const ModelParams& p, const TopologySettings& settings = {});

}  // namespace afmi
