#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "wft/bj_system.hpp"
#include "wft/front_tracking.hpp"
#include "wft/pattern_analysis.hpp"
#include "wft/scalar_law.hpp"
#include "wft/scenario.hpp"

namespace wft {

using json = nlohmann::json;
namespace fs = std::filesystem;

// %.17g
std::string fmt_real(Real x);
Real parse_real(const std::string& s);

// Rows x,u,v,w: the first row (x = -inf) is the left tail, every further row a
// breakpoint with the value on its right.
void write_datum_csv(const fs::path& path, const StepFunction& datum);
StepFunction read_datum_csv(const fs::path& path);

// id,family,kind,birth_t,death_t,x_birth,speed,strength,generation,lineage,uL,vL,wL,uR,vR,wR
void write_fronts_csv(const fs::path& path, const FTSolution& sol);
// t,x,in_ids,out_ids,V,Q,F,tv,np_total,simplified
void write_events_csv(const fs::path& path, const FTSolution& sol);
// Polylines "front id, family, t, x, strength": birth and death (or horizon) point per front.
void write_diagram_csv(const fs::path& path, const FTSolution& sol);
// t,x,u,y_min
void write_scalar_csv(const fs::path& path, const ScalarSolutionSample& s);

json to_json(const FTParams& p);
FTParams ft_params_from_json(const json& j, FTParams base);
json to_json(const ScenarioParams& sp);
json to_json(const RiemannSolution& sol);
json to_json(const CertificateReport& r);
json to_json(const PatternReport& r);
json to_json(const CollapseReport& r);
json to_json(const DatumSpec& d);
DatumSpec datum_spec_from_json(const json& j);

// run.json: parameters, counters and the scenario eps.
json run_summary(const FTSolution& sol, Real eps);

// datum.csv, fronts.csv, events.csv and run.json in one directory.
void write_run(const fs::path& dir, const FTSolution& sol, Real eps, const json& extra = json::object());
struct LoadedRun {
  FTSolution sol;
  Real eps = 0;
  json summary;
};
LoadedRun read_run(const fs::path& dir);

json read_json_file(const fs::path& path);
void write_json_file(const fs::path& path, const json& j);

}  // namespace wft
