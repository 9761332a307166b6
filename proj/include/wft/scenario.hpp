#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wft/front_tracking.hpp"

namespace wft {

struct ScenarioParams {
  Real eps = 0;
  Real q = 20;
  Real eta = 0;
  Real omega = 0;
  Real r = 0;
  Real Ttilde = 0;
  Real rho = 0;
  Real a = 0;
  State U_I;
  int J_max_feasible = 0;
};

ScenarioParams derive_params(Real eps);

// Front-tracking defaults for a scenario: delta_rar = omega^(J_max+2),
// thresh_simplified = delta_rar^3, t_end = 2 Ttilde, clip window [-rho, rho],
// min_strength = 1e-3 delta_rar.
FTParams default_ft_params(const ScenarioParams& sp, int J_max = 3);

StepFunction build_piecewise_datum(const ScenarioParams& sp, const SystemParams& p);

// Placement of the compression ramps. Each ramp focuses at t = 1; the focus
// points of the 1- and 3-ramps sit at block_center + focus1 / focus3.
struct CompressionLayout {
  Real focus1 = Real(0.5);
  Real focus3 = Real(-1.0);
  Real strength13 = -1;  // curve length of the 1-/3-ramps; < 0 means omega
  Real strength2 = -1;   // v-drop of the 2-ramp; < 0 means omega
};

StepFunction build_compression_profile(const ScenarioParams& sp, const SystemParams& p, Real mesh,
                                       const CompressionLayout& layout = {});

struct MollifyResult {
  StepFunction profile;
  Real radius = 0;  // accepted radius
  int attempts = 0;
  Real tv_difference = 0;
};

// Cells no wider than fine_mesh are read as midpoint samples of a Lipschitz
// profile (piecewise-linear interpolation); wider cells as genuine steps.
// The profile is convolved with a smooth bump and resampled on its own cells.
MollifyResult mollify(const StepFunction& profile, Real radius, const ScenarioParams& sp, Real fine_mesh);

enum class NormType { BV, W1inf };
NormType norm_type_from_string(const std::string& s);
const char* to_string(NormType n);

struct PerturbationSpec {
  NormType norm = NormType::BV;
  std::uint64_t seed = 0;
  Real budget = 0;        // TV (BV) or W^{1,inf} norm (W1inf)
  Real support_lo = 0, support_hi = 0;  // defaults to (-a + 1/2, a - 1/2) when equal
  int teeth = 10;         // BV comb
  int modes = 6;          // W1inf Fourier modes
  Real mesh = Real(0.25); // W1inf sampling mesh
};

struct PerturbResult {
  StepFunction datum;
  StepFunction added;  // the perturbation itself (BV kind; W1inf sampled)
  Real norm = 0;       // exact TV (BV) or W^{1,inf} norm of the continuous perturbation (W1inf)
};

PerturbResult perturb(const StepFunction& datum, const PerturbationSpec& spec, const ScenarioParams& sp);

// Smooth W^{1,inf} perturbation generated by perturb(); exposed for checking.
struct SmoothPerturbation {
  struct Mode {
    Real k = 0;
    State amp_sin, amp_cos;
  };
  std::vector<Mode> modes;
  Real lo = 0, hi = 0, ramp = 1;  // taper: 1 on [lo+ramp, hi-ramp], 0 outside (lo, hi)
  State value(Real x) const;
  State derivative(Real x) const;
};
SmoothPerturbation make_smooth_perturbation(const PerturbationSpec& spec, const ScenarioParams& sp);
// sup |Z| + sup |Z'| (Euclidean norms), located by grid scan plus golden refinement.
Real w1inf_norm(const SmoothPerturbation& z, Real grid = Real(1e-3));

// Inserts a 3-rarefaction jump of the given strength at placement: the datum
// is unchanged right of placement, every value left of it is shifted by
// strength * r3 (r3 depends on v only, so earlier 3-jumps there are kept).
StepFunction adversarial_rarefaction(const StepFunction& datum, const ScenarioParams& sp, const SystemParams& p,
                                     Real strength, Real placement);

enum class DatumKind { PiecewiseZ, CompressionV, MollifiedU, Perturbed };
DatumKind datum_kind_from_string(const std::string& s);
const char* to_string(DatumKind k);

struct AdversarialInsert {
  Real strength = 0;
  Real placement = 0;
};

struct DatumSpec {
  DatumKind kind = DatumKind::PiecewiseZ;
  Real eps = Real(0.3);
  Real mesh = -1;    // compression mesh; < 0 means omega/100
  Real radius = -1;  // initial mollifier radius; < 0 means mesh
  DatumKind base = DatumKind::MollifiedU;  // base datum for the perturbed kind
  PerturbationSpec perturbation;
  CompressionLayout layout;
  std::vector<AdversarialInsert> adversarial;
};

struct BuiltDatum {
  StepFunction datum;
  ScenarioParams sp;
  Real mollify_radius = 0;
  Real perturbation_norm = 0;
};

BuiltDatum build_datum(const DatumSpec& spec);

}  // namespace wft
