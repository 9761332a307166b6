#pragma once

#include <span>
#include <string>
#include <vector>

#include "wft/bj_system.hpp"

namespace wft {

// Shock-branch orientation: U+ = U- + sigma_i * s * r_i(U-) for families 1, 3.
constexpr int kShockSign1 = -1;
constexpr int kShockSign3 = +1;

// Default speed of non-physical fronts; every characteristic speed is <= 5.
constexpr Real kNonPhysicalSpeed = 10;

struct Wave {
  Family family = Family::One;
  WaveKind kind = WaveKind::Shock;
  Real strength = 0;
  State left, right;
  Real speed_lo = 0, speed_hi = 0;

  bool physical() const { return family != Family::NonPhysical; }
};

struct RiemannSolution {
  std::vector<Wave> waves;

  // Far right state of the chain (UL when there are no waves).
  State right_state(const State& UL) const;
};

struct HugoniotFit {
  Real sigma = 0;
  Real residual = 0;
};

State shock_state(int family, Real s, const State& Uminus, const SystemParams& p);
State rarefaction_state(int family, Real s, const State& Uminus, const SystemParams& p);
HugoniotFit hugoniot_residual(const State& Uminus, const State& Uplus, const SystemParams& p);

// Signed curve parameter of a physical wave: tau along r for families 1, 3
// (U+ = U- + tau r), and v+ - v- for family 2.
Real signed_parameter(Family family, WaveKind kind, Real strength);

// Builds the wave of the given family and signed parameter leaving UL.
Wave make_wave(Family family, Real param, const State& UL, const SystemParams& p);

struct RiemannOptions {
  int max_iter = 100;
  Real tol = Real(1e-10);       // required reconstruction residual
  Real fd_step = Real(1e-7);    // finite-difference step for the Newton Jacobian
};

struct RiemannDiagnostics {
  int iterations = 0;
  Real residual = 0;
};

// Accurate solver: 1-wave, 2-wave, 3-wave with the 2-wave's v-jump pinned to
// vR - vL and (s1, s3) from damped Newton.
RiemannSolution solve_riemann(const State& UL, const State& UR, const SystemParams& p,
                              const RiemannOptions& opt = {}, RiemannDiagnostics* diag = nullptr);

struct IncomingWave {
  Family family;
  WaveKind kind;
  Real strength;
};

// Simplified solver: outgoing waves only in the incoming physical families,
// each carrying the summed signed parameter of its incoming fronts, ordered by
// family; the residual jump to UR goes to one non-physical wave.
RiemannSolution solve_riemann_simplified(const State& UL, const State& UR, const SystemParams& p,
                                         std::span<const IncomingWave> incoming,
                                         Real np_speed = kNonPhysicalSpeed);

// Lax inequalities for a shock of the given family with 1e-9 slack.
bool lax_admissible(const Wave& w, const SystemParams& p, Real slack = Real(1e-9));

}  // namespace wft
