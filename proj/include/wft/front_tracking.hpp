#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "wft/riemann.hpp"

namespace wft {

// Piecewise-constant profile: values[k] holds on (breakpoints[k-1], breakpoints[k]).
struct StepFunction {
  std::vector<Real> breakpoints;
  std::vector<State> values;

  static StepFunction constant(const State& U) { return {{}, {U}}; }

  std::size_t size() const { return breakpoints.size(); }
  const State& left_tail() const { return values.front(); }
  const State& right_tail() const { return values.back(); }
  State value_at(Real x) const;  // right-continuous
  Real total_variation() const;  // Euclidean norm of jumps

  // Throws DomainError unless breakpoints increase strictly and sizes match.
  void validate() const;
  // Removes zero jumps.
  StepFunction pruned() const;
};

StepFunction operator+(const StepFunction& a, const StepFunction& b);
StepFunction operator-(const StepFunction& a, const StepFunction& b);

using FrontId = std::int64_t;

struct Front {
  FrontId id = -1;
  Family family = Family::One;
  WaveKind kind = WaveKind::Shock;
  Real x_birth = 0;  // position at birth_t
  Real birth_t = 0;
  Real death_t = kInf;
  Real speed = 0;
  State left, right;
  Real strength = 0;
  int generation = 0;
  std::vector<FrontId> parents;

  bool physical() const { return family != Family::NonPhysical; }
  bool alive_at(Real t) const { return birth_t <= t && t < death_t; }
  Real position(Real t) const { return x_birth + speed * (t - birth_t); }
};

struct FTParams {
  Real delta_rar = Real(0.01);
  Real thresh_simplified = Real(1e-6);
  Real np_speed = kNonPhysicalSpeed;
  Real t_end = 1;
  std::size_t max_fronts = 200000;
  Real clip_lo = -kInf, clip_hi = kInf;
  // Outgoing 1-/3-waves below this strength are dropped; an outgoing 2-wave
  // takes up the mismatch, or else a non-physical front carries it.
  Real min_strength = 0;
  Real glimm_C = 100;
  // 2-fronts at least this strong count as big shocks for the generation counter.
  Real big_wave_threshold = kInf;
  // Relative position tolerance for grouping fronts into one event.
  Real merge_tol = Real(1e-12);
  // Non-physical residuals up to this size are absorbed into the preceding
  // physical wave instead of starting a new front.
  Real np_absorb_tol = Real(1e-13);

  void validate() const;
};

struct GlimmValue {
  Real V = 0, Q = 0, F = 0;
};

struct Event {
  Real t = 0, x = 0;
  std::vector<FrontId> in_ids, out_ids;
  GlimmValue glimm;
  Real tv = 0;
  Real np_total = 0;  // live non-physical strength after the event
  bool simplified = false;
};

struct FTSolution {
  StepFunction datum;
  FTParams params;
  Real eta = 0;
  std::vector<Front> fronts;  // indexed by id
  std::vector<Event> events;
  GlimmValue initial_glimm;
  Real initial_tv = 0;
  Real horizon = 0;  // evolution is recorded on [0, horizon]
  bool truncated = false;
  std::size_t simplified_events = 0;
  std::size_t pruned_waves = 0;
  std::size_t clipped_fronts = 0;
  Real max_np_total = 0;     // max over time of live non-physical strength
  Real created_np_total = 0; // sum of strengths of all non-physical fronts created
  Real absorbed_total = 0;   // strength of pruned waves taken up by 2-fronts plus absorbed roundoff residuals
  std::size_t max_live_fronts = 0;

  const Front& front(FrontId id) const { return fronts.at(static_cast<std::size_t>(id)); }
  std::vector<const Front*> live_at(Real t) const;  // sorted by position
};

// Assigns consecutive ids.
class IdAllocator {
 public:
  explicit IdAllocator(FrontId first = 0) : next_(first) {}
  FrontId next() { return next_++; }
  FrontId peek() const { return next_; }

 private:
  FrontId next_;
};

// Converts the waves of a Riemann solution into fronts born at (t, x):
// rarefactions split into ceil(s/delta_rar) equal jumps moving at the
// eigenvalue of their right state.
std::vector<Front> fronts_from_solution(const RiemannSolution& sol, Real t, Real x, const FTParams& params,
                                        const SystemParams& p, IdAllocator& ids);

std::vector<Front> init_fronts(const StepFunction& datum, const FTParams& params, const SystemParams& p,
                               IdAllocator* ids = nullptr);

struct Collision {
  Real t = 0, x = 0;
  std::vector<FrontId> participants;
};

// Time at which adjacent fronts a (left) and b (right) meet, if ever, not before t.
std::optional<Real> meeting_time(const Front& a, const Front& b, Real t);

// Earliest collision among fronts (sorted by position at time t), with all
// fronts meeting at the same point grouped into one event.
std::optional<Collision> next_collision(std::span<const Front> fronts, Real t, Real merge_tol = Real(1e-12));

// Resolves an interaction of adjacent incoming fronts at (t, x).
std::vector<Front> resolve_collision(std::span<const Front> incoming, Real t, Real x, const FTParams& params,
                                     const SystemParams& p, IdAllocator& ids, bool* simplified = nullptr,
                                     std::size_t* pruned = nullptr, Real* absorbed = nullptr);

FTSolution evolve(const StepFunction& datum, const FTParams& params, const SystemParams& p);

// Fronts given in left-to-right order.
GlimmValue glimm_functional(std::span<const Front* const> fronts, Real C);
GlimmValue glimm_functional(std::span<const Front> fronts, Real C);

StepFunction sample_solution(const FTSolution& sol, Real t);

}  // namespace wft
