#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wft/front_tracking.hpp"
#include "wft/scenario.hpp"

namespace wft {

struct TrajectoryPoint {
  Real t = 0, x = 0, strength = 0;
  FrontId id = -1;  // front carrying the segment that starts here
};

// Event-linked polyline of one big 2-shock across its interactions.
struct Trajectory {
  std::vector<FrontId> ids;
  std::vector<TrajectoryPoint> points;  // segment starts, plus a final end point
  Real t_begin = 0, t_end = 0;
  Real max_strength_jump = 0;  // largest strength change at one interaction
  std::size_t drift_flags = 0; // interactions changing the strength by more than omega^2

  bool empty() const { return ids.empty(); }
  bool alive_at(Real t) const { return !empty() && t >= t_begin && t < t_end; }
  Real position(Real t) const;
  Real drift() const;  // average speed
  bool contains(FrontId id) const;
};

struct BigShocks {
  bool found = false;
  Trajectory Jl, Jr;
  std::optional<Real> meeting_time;
  std::string message;
};

BigShocks identify_big_2shocks(const FTSolution& sol, const ScenarioParams& sp);

struct Generation {
  int j = 0;
  Real R_strength = 0, S_strength = 0;  // strongest 3-shock and 1-shock
  FrontId R_id = -1, S_id = -1;
  Real R_time = 0, S_time = 0;          // birth (reflection) times
  Real strength() const { return std::max(R_strength, S_strength); }
};

struct Cancellation {
  Real t = 0, x = 0;
  Family family = Family::One;
  int generation = 0;
  Real shock_in = 0;      // strength of the incoming shock
  Real rarefaction_in = 0;
  Real shock_out = 0;     // same-family outgoing shock strength (0 if none)
};

struct Reflections {
  std::vector<Generation> generations;  // consecutive from 0 while a shock is present
  std::vector<Cancellation> cancellations;
  std::size_t parity_violations = 0;
};

Reflections extract_reflections(const FTSolution& sol, const BigShocks& big, const ScenarioParams& sp);

struct DecayFit {
  Real ratio = 0;
  Real K_low = 0, K_high = 0;
  Real K = 0;  // smallest K with s_j in [omega^(j+1) sqrt(eps)/K, K omega^(j+1)]
  int J_used = 0;
};

DecayFit decay_fit(const std::vector<Real>& strengths, Real omega, Real eps);

struct Functionals {
  Real V13 = 0, R13 = 0;
};

Functionals functionals_v13_r13(const FTSolution& sol, const BigShocks& big, Real t);

enum class Region { LeftOfJl, RightOfJr, Between };
Region region_from_string(const std::string& s);
const char* to_string(Region r);

struct Census {
  std::array<std::size_t, 3> count{};
  std::array<Real, 3> strength{};
  std::size_t np_count = 0;
  Real np_strength = 0;
  std::size_t total() const { return count[0] + count[1] + count[2]; }
};

// Fronts of the big shocks themselves are excluded. When either big shock is
// absent at t the region between them is empty and the missing boundary
// collapses onto the other one (or +inf if both are absent).
Census wave_census(const FTSolution& sol, const BigShocks& big, Real t, Region region,
                   const std::vector<int>& families = {1, 2, 3});

struct PatternOptions {
  int min_generations = 3;
  Real K_cap = 100;
  Real confinement_time = -1;  // < 0 means 8/omega
};

struct ConfinementResult {
  std::size_t left_violations = 0, right_violations = 0;
  Real left_strength = 0, right_strength = 0;
  bool pass() const { return left_violations == 0 && right_violations == 0; }
};

ConfinementResult confinement_check(const FTSolution& sol, const BigShocks& big, Real t_from);

struct FunctionalSample {
  Real t = 0;
  int j = 0;
  Functionals f;
};

struct PatternReport {
  BigShocks big;
  Reflections reflections;
  std::optional<DecayFit> fit;
  ConfinementResult confinement;
  std::vector<FunctionalSample> functionals;
  Real noise_floor = 0;
  int generations_found = 0;
  int J_used = 0;
  bool monotone_decay = false;
  bool crit_big_shocks = false, crit_generations = false, crit_decay = false, crit_confinement = false,
       crit_resolved = false;
  bool incomplete = false;
  bool pass = false;
  std::vector<std::string> notes;
};

PatternReport verify_pattern(const FTSolution& sol, const ScenarioParams& sp, const PatternOptions& opt = {});

struct CollapseShock {
  Family family = Family::One;
  FrontId id = -1;
  Real x = 0, speed = 0, strength = 0;
};

struct CollapseReport {
  bool pass = false;
  std::optional<Real> t_bar;  // first window time satisfying all checks
  std::vector<CollapseShock> shocks;  // the six shocks at t_bar (or at the last scanned time)
  Real residual13 = 0, residual_other = 0;
  std::vector<std::string> failures;  // reasons at the last scanned time when failing
};

CollapseReport collapse_check(const FTSolution& sol, const ScenarioParams& sp, Real t_lo = Real(0.9),
                              Real t_hi = Real(1.5), int samples = 61);

// Kinematic placement: a 3-front of the given speed reaches x = -q + omega t at t.
Real kinematic_placement(const ScenarioParams& sp, Real t_arrival, Real speed = 4);

struct AdversarialCalibration {
  std::vector<AdversarialInsert> inserts;
  std::vector<Real> target_times;   // reflection times the inserts are aimed at
  std::vector<Real> arrival_times;  // simulated arrivals at J_l
};

// Places `count` 3-rarefactions so that the k-th one reaches J_l just after
// the k-th reflection of a 1-shock off J_l in the run with the earlier ones.
AdversarialCalibration calibrate_adversarial(const StepFunction& base, const ScenarioParams& sp,
                                             const FTParams& params, Real strength, int count,
                                             Real lag = Real(1e-6));

}  // namespace wft
