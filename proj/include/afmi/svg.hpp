#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "afmi/bifurcation.hpp"

namespace afmi {

struct SvgStyle {
    int width = 800;
    int height = 600;
    double margin = 80;
    std::string title;
};

// Fill colour of equilibrium glyphs.
std::string_view stability_color(StabilityClass c);

struct PortraitData {
    ModelParams params;
    double x_min = 0, x_max = 15;
    double y_min = 0, y_max = 10;
    bool nullclines = true;
    std::vector<Manifold> manifolds;
    std::vector<Trajectory> trajectories;
    std::vector<Equilibrium> equilibria;
};

// Phase portrait with layers nullclines, manifolds, trajectories, equilibria.
// Throws LayoutError on a degenerate axis range.
std::string portrait_svg(const PortraitData& data, const SvgStyle& style = {});

// Interior branch x-coordinates against xi, coloured by stability, with
// event markers. Throws LayoutError on an empty dataset.
std::string sweep_svg(const SweepDataset& data, const SvgStyle& style = {});

struct RegimeCurve {
    std::string name;
    std::vector<Eigen::Vector2d> points;  // (epsilon, xi), inside the map window
};

struct RegimeMap {
    double eps_lo = 0.05, eps_hi = 0.6;
    double xi_lo = 0, xi_hi = 4;
    int n_eps = 0, n_xi = 0;
    std::vector<Regime> cells;  // index j * n_eps + i
    std::vector<RegimeCurve> curves;
};

// Regime classification on an (epsilon, xi) grid plus the three boundary
// curves b = 0, c = 0 and equal nullcline slopes at the prey axis.
RegimeMap regime_map(const ModelParams& base, double eps_lo, double eps_hi, double xi_lo, double xi_hi,
                     int samples = 120);

std::string regime_svg(const RegimeMap& map, const SvgStyle& style = {});

}  // namespace afmi
