#include "wft/bj_system.hpp"

#include <algorithm>
#include <cmath>

namespace wft {

SystemParams::SystemParams(Real eta) : eta_(eta) {
  if (!(eta > 0 && eta < Real(0.25)))
    throw DomainError("eta must lie in (0, 1/4), got " + std::to_string(static_cast<double>(eta)));
}

State flux(const State& U, const SystemParams& p) {
  const Real u = U.u, v = U.v, w = U.w, eta = p.eta();
  State F;
  F.u = 4 * ((v - 1) * u - w) + 2 * eta * (u * w - u * u * (v - 1));
  F.v = v * v;
  F.w = 4 * (v * (v - 2) * u - (v - 1) * w) + eta * (w * w - u * u * (v - 2) * v);
  return F;
}

Mat3 jacobian(const State& U, const SystemParams& p) {
  const Real u = U.u, v = U.v, w = U.w, eta = p.eta();
  Mat3 J{};
  J[0][0] = 4 * (v - 1) + 2 * eta * (w - 2 * u * (v - 1));
  J[0][1] = 4 * u - 2 * eta * u * u;
  J[0][2] = -4 + 2 * eta * u;
  J[1][0] = 0;
  J[1][1] = 2 * v;
  J[1][2] = 0;
  J[2][0] = 4 * v * (v - 2) - 2 * eta * u * (v - 2) * v;
  J[2][1] = 4 * ((2 * v - 2) * u - w) - eta * u * u * (2 * v - 2);
  J[2][2] = -4 * (v - 1) + 2 * eta * w;
  return J;
}

Real lambda(int i, const State& U, const SystemParams& p) {
  const Real eta = p.eta();
  switch (i) {
    case 1: return 2 * eta * (U.w - (U.v - 2) * U.u) - 4;
    case 2: return 2 * U.v;
    case 3: return 2 * eta * (U.w - U.v * U.u) + 4;
  }
  throw DomainError("family must be 1, 2 or 3");
}

std::array<Real, 3> eigenvalues(const State& U, const SystemParams& p) {
  return {lambda(1, U, p), lambda(2, U, p), lambda(3, U, p)};
}

State lambda_gradient(int i, const State& U, const SystemParams& p) {
  const Real eta = p.eta();
  switch (i) {
    case 1: return {-2 * eta * (U.v - 2), -2 * eta * U.u, 2 * eta};
    case 2: return {0, 2, 0};
    case 3: return {-2 * eta * U.v, -2 * eta * U.u, 2 * eta};
  }
  throw DomainError("family must be 1, 2 or 3");
}

State r1(const State& U) { return {1, 0, U.v}; }
State r3(const State& U) { return {1, 0, U.v - 2}; }

State r2(const State& U, const SystemParams& p) {
  // Rows 1 and 3 of (JF - 2v I)(a, 1, c) = 0.
  const Mat3 J = jacobian(U, p);
  const Real l = 2 * U.v;
  const Real a11 = J[0][0] - l, a13 = J[0][2];
  const Real a31 = J[2][0], a33 = J[2][2] - l;
  const Real det = a11 * a33 - a13 * a31;
  if (std::fabs(det) < Real(1e-14)) throw InternalError("degenerate r2 kernel system at " + to_string(U));
  const Real b1 = -J[0][1], b3 = -J[2][1];
  return {(b1 * a33 - a13 * b3) / det, 1, (a11 * b3 - b1 * a31) / det};
}

State eigenvector(int i, const State& U, const SystemParams& p) {
  switch (i) {
    case 1: return r1(U);
    case 2: return r2(U, p);
    case 3: return r3(U);
  }
  throw DomainError("family must be 1, 2 or 3");
}

EigenData eigen(const State& U, const SystemParams& p) {
  if (!(norm(U) < 1)) throw DomainError("eigen: state outside |U| < 1: " + to_string(U));
  EigenData e;
  const Mat3 J = jacobian(U, p);
  for (int i = 1; i <= 3; ++i) {
    e.lambdas[i - 1] = lambda(i, U, p);
    e.rvecs[i - 1] = eigenvector(i, U, p);
    e.gn_values[i - 1] = dot(lambda_gradient(i, U, p), e.rvecs[i - 1]);
    const State res = mul(J, e.rvecs[i - 1]) - e.lambdas[i - 1] * e.rvecs[i - 1];
    if (norm(res) > Real(1e-9) * norm(e.rvecs[i - 1]))
      throw InternalError("eigenpair " + std::to_string(i) + " residual too large at " + to_string(U));
  }
  return e;
}

CertificateReport certify_domain(const SystemParams& p, int resolution) {
  if (resolution < 8) throw DomainError("certify_domain: resolution must be >= 8");
  CertificateReport rep;
  rep.resolution = resolution;
  rep.lambda_min.fill(kInf);
  rep.lambda_max.fill(-kInf);
  const Real eta = p.eta();
  const std::array<Real, 3> gn_expected{4 * eta, 2, -4 * eta};
  const std::array<Real, 3> lo{-6, -2, 3}, hi{Real(-2.5), 2, 5};
  const Real slack = Real(1e-12);
  const Real h = Real(1e-6);

  auto fail = [&](const State& U, const std::string& what) {
    if (rep.pass) rep.witness = U;
    rep.pass = false;
    if (rep.violations.size() < 20) rep.violations.push_back(what + " at " + to_string(U));
  };

  for (int a = 0; a < resolution; ++a)
    for (int b = 0; b < resolution; ++b)
      for (int c = 0; c < resolution; ++c) {
        const State U{-1 + Real(2 * a + 1) / resolution, -1 + Real(2 * b + 1) / resolution,
                      -1 + Real(2 * c + 1) / resolution};
        if (!(norm(U) < 1)) continue;
        ++rep.points;
        const EigenData e = eigen(U, p);
        for (int i = 0; i < 3; ++i) {
          rep.lambda_min[i] = std::min(rep.lambda_min[i], e.lambdas[i]);
          rep.lambda_max[i] = std::max(rep.lambda_max[i], e.lambdas[i]);
          if (e.lambdas[i] < lo[i] - slack || e.lambdas[i] > hi[i] + slack)
            fail(U, "lambda" + std::to_string(i + 1) + " out of range");
          const Real ga = std::fabs(e.gn_values[i] - gn_expected[i]);
          rep.max_gn_error_analytic = std::max(rep.max_gn_error_analytic, ga);
          if (ga > slack) fail(U, "gn" + std::to_string(i + 1) + " analytic mismatch");
          const State& r = e.rvecs[i];
          const Real fd = (lambda(i + 1, U + h * r, p) - lambda(i + 1, U - h * r, p)) / (2 * h);
          const Real gf = std::fabs(fd - gn_expected[i]);
          rep.max_gn_error_fd = std::max(rep.max_gn_error_fd, gf);
          if (gf > Real(1e-5)) fail(U, "gn" + std::to_string(i + 1) + " finite-difference mismatch");
        }
        const Real g12 = e.lambdas[1] - e.lambdas[0], g23 = e.lambdas[2] - e.lambdas[1];
        rep.min_gap12 = std::min(rep.min_gap12, g12);
        rep.min_gap23 = std::min(rep.min_gap23, g23);
        if (g12 < Real(0.5) - slack) fail(U, "gap lambda2-lambda1 below 1/2");
        if (g23 < 1 - slack) fail(U, "gap lambda3-lambda2 below 1");
      }
  return rep;
}

}  // namespace wft
