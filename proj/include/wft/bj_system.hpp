#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wft/core.hpp"

namespace wft {

// Coupling parameter eta of the 3x3 system, 0 < eta < 1/4.
class SystemParams {
 public:
  explicit SystemParams(Real eta);
  Real eta() const { return eta_; }

 private:
  Real eta_;
};

struct EigenData {
  std::array<Real, 3> lambdas{};   // ascending
  std::array<State, 3> rvecs{};    // r1, r2, r3
  std::array<Real, 3> gn_values{}; // grad(lambda_i) . r_i
};

State flux(const State& U, const SystemParams& p);
Mat3 jacobian(const State& U, const SystemParams& p);

// Closed-form eigenvalue of family i (1..3).
Real lambda(int i, const State& U, const SystemParams& p);
std::array<Real, 3> eigenvalues(const State& U, const SystemParams& p);
State lambda_gradient(int i, const State& U, const SystemParams& p);

// Right eigenvectors; r1, r3 closed form, r2 normalised to second component 1.
State r1(const State& U);
State r3(const State& U);
State r2(const State& U, const SystemParams& p);
State eigenvector(int i, const State& U, const SystemParams& p);

// Full eigenstructure with residual check |JF r - lambda r| <= 1e-9 |r|.
// Throws DomainError outside |U| < 1, InternalError on residual failure.
EigenData eigen(const State& U, const SystemParams& p);

struct CertificateReport {
  bool pass = true;
  int resolution = 0;
  std::size_t points = 0;
  std::array<Real, 3> lambda_min{}, lambda_max{};
  Real min_gap12 = kInf, min_gap23 = kInf;
  Real max_gn_error_analytic = 0;
  Real max_gn_error_fd = 0;
  std::optional<State> witness;  // first violating state
  std::vector<std::string> violations;
};

// Sweeps a resolution^3 grid of [-1,1]^3 restricted to |U| < 1.
CertificateReport certify_domain(const SystemParams& p, int resolution);

}  // namespace wft
