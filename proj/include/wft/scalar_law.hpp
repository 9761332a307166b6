#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wft/core.hpp"

namespace wft {

// Uniformly convex flux f with f'' >= c_conv. When `quadratic` is set,
// f(z) = k z^2 and the Legendre transform is taken in closed form.
struct ConvexFlux {
  std::function<Real(Real)> f, fprime;
  Real c_conv = 0;
  bool quadratic = false;
  Real k = 0;

  static ConvexFlux burgers();             // z^2 / 2
  static ConvexFlux quadratic_flux(Real k); // k z^2

  // Inverse of fprime; bracket search outward from 0 otherwise.
  Real fprime_inverse(Real xi) const;
  // L(xi) = sup_z (xi z - f(z)).
  Real legendre(Real xi) const;
  // Throws DomainError if a finite-difference f'' sample on [lo, hi] falls below c_conv / 2.
  void check_convex(Real lo, Real hi, int samples = 64) const;
};

// Initial datum with its primitive P(x) = int_0^x u0 on [x_lo, x_hi].
struct ScalarProfile {
  std::function<Real(Real)> u0, primitive;
  Real x_lo = -kInf, x_hi = kInf;
  Real M = 0;  // sup |u0|

  // Piecewise constant: values[k] on (breakpoints[k-1], breakpoints[k]); defined on the whole line.
  static ScalarProfile steps(const std::vector<Real>& breakpoints, const std::vector<Real>& values);
  static ScalarProfile riemann(Real uL, Real uR, Real x0 = 0);
  static ScalarProfile constant(Real c);
  // u0 = sum_k (a_k sin(k x) + b_k cos(k x)), k = 1, 2, ..., on the whole line.
  static ScalarProfile fourier(const std::vector<Real>& a, const std::vector<Real>& b);
  // Sampled function on [lo, hi] with its primitive by Gauss quadrature; M by sampling.
  static ScalarProfile function(std::function<Real(Real)> u0, Real lo, Real hi, int cells = 4096);
};

ScalarProfile operator+(const ScalarProfile& a, const ScalarProfile& b);

struct ScalarSolutionSample {
  Real t = 0;
  std::vector<Real> x, u, y;  // positions, values, backward minimizers
  ConvexFlux flux;
  ScalarProfile profile;
};

struct LaxOleinikOptions {
  int grid = 2000;  // scan points per minimization bracket
};

ScalarSolutionSample lax_oleinik_solve(const ConvexFlux& flux, const ScalarProfile& u0, Real t,
                                       const std::vector<Real>& xs, const LaxOleinikOptions& opt = {});

// Leftmost minimizer of y -> P(y) + t L((x - y)/t) at a single point.
Real backward_minimizer(const ConvexFlux& flux, const ScalarProfile& u0, Real t, Real x,
                        const LaxOleinikOptions& opt = {}, Real y_floor = -kInf);

// X(t, y) = inf {x : y*(x) > y}.
Real characteristic_map(const ScalarSolutionSample& sample, Real y);

struct OleinikReport {
  Real max_ratio = -kInf;
  std::optional<std::pair<std::size_t, std::size_t>> witness;
  bool pass = true;
};
OleinikReport check_oleinik(const ScalarSolutionSample& sample, const ConvexFlux& flux, Real tol = Real(1e-9));

struct AdlReport {
  Real lhs = 0, rhs = 0;
  Real y_minus = 0, y_plus = 0;
  bool pass = false;
};
AdlReport check_adl_lower(const ScalarSolutionSample& sample, const ConvexFlux& flux, Real a, Real b,
                          Real tol = Real(1e-9));

struct CensusShock {
  Real x = 0, jump = 0;
};
// Jumps of adjacent samples exceeding max(jump_threshold, slope_cap * h); adjacent detections merged.
std::vector<CensusShock> shock_census(const ScalarSolutionSample& sample, Real jump_threshold, Real slope_cap = 0);
// 10 h sup|f''| TV on the sampled grid.
Real default_census_threshold(const ScalarSolutionSample& sample, Real sup_f2);

struct ProbeOptions {
  std::vector<Real> times;
  int trials = 4;
  Real amplitude = Real(0.05);
  std::uint64_t seed = 0;
  int modes = 4;
  Real x_lo = 0, x_hi = 0;
  int samples = 1000;
  Real jump_threshold = -1;  // < 0 means 0.05
};

struct ProbeReport {
  std::vector<std::vector<std::size_t>> counts, counts_half;  // [trial][time]
  std::vector<bool> unstable;                                  // per trial
  bool stable() const;
};

// Each trial adds seeded Fourier modes with coefficients amplitude * N(0,1) / k^2
// and repeats the census with the same modes at half the amplitude.
ProbeReport schaeffer_probe(const ConvexFlux& flux, const ScalarProfile& u0, const ProbeOptions& opt);

}  // namespace wft
