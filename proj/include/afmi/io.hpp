#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "afmi/bifurcation.hpp"
#include "afmi/stability.hpp"

namespace afmi {

using json = nlohmann::json;

// CSV writers; numbers carry 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);              // t,x,y
void write_manifold_csv(std::ostream& os, const std::vector<Manifold>& ms);     // branch,x,y
void write_sweep_csv(std::ostream& os, const SweepDataset& ds);                 // xi,x1,y1,stab1,x2,y2,stab2,events
void write_equilibria_csv(std::ostream& os, const std::vector<Equilibrium>& eqs);

// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

// JSON mappings. Every from_json inverts the matching to_json exactly;
// infinities are written as the strings "inf" / "-inf".
void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);
void to_json(json& j, const IntegratorSettings& s);
void from_json(const json& j, IntegratorSettings& s);
void to_json(json& j, const Equilibrium& e);
void from_json(const json& j, Equilibrium& e);
void to_json(json& j, const SaddleBoundCheck& c);
void from_json(const json& j, SaddleBoundCheck& c);
void to_json(json& j, const UpperCaseCheck& c);
void from_json(const json& j, UpperCaseCheck& c);
void to_json(json& j, const StabilityReport& r);
void from_json(const json& j, StabilityReport& r);
void to_json(json& j, const AttractorId& a);
void from_json(const json& j, AttractorId& a);
void to_json(json& j, const GridSpec& g);
void from_json(const json& j, GridSpec& g);
void to_json(json& j, const BasinEstimate& b);
void from_json(const json& j, BasinEstimate& b);
void to_json(json& j, const HalfLineSection& s);
void from_json(const json& j, HalfLineSection& s);
void to_json(json& j, const LimitCycleResult& r);
void from_json(const json& j, LimitCycleResult& r);
void to_json(json& j, const ManifoldTopology& t);
void from_json(const json& j, ManifoldTopology& t);
void to_json(json& j, const BifurcationEvent& e);
void from_json(const json& j, BifurcationEvent& e);
void to_json(json& j, const SweepRow& r);
void from_json(const json& j, SweepRow& r);
void to_json(json& j, const SweepDataset& d);
void from_json(const json& j, SweepDataset& d);

}  // namespace afmi
