#include "wft/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

namespace wft {
namespace {

void check_shock_orientation() {
  // sigma_1 = -1 and sigma_3 = +1 follow from the signs of grad(lambda_i).r_i;
  // confirm once that both branches lower lambda across the shock.
  static std::once_flag once;
  std::call_once(once, [] {
    const SystemParams p(Real(0.09));
    const State U{Real(0.1), Real(0.05), Real(-0.1)};
    const Real s = Real(0.01);
    const State U1 = U + (kShockSign1 * s) * r1(U);
    const State U3 = U + (kShockSign3 * s) * r3(U);
    if (!(lambda(1, U, p) > lambda(1, U1, p)) || !(lambda(3, U, p) > lambda(3, U3, p)))
      throw InternalError("shock orientation signs violate the Lax condition");
  });
}

void check_wave_pre(Real s, const State& Um, const char* who) {
  if (!(s >= 0) || s > Real(0.2))
    throw DomainError(std::string(who) + ": strength must lie in [0, 0.2]");
  if (!(norm(Um) < Real(0.8))) throw DomainError(std::string(who) + ": |U-| must be < 0.8, got " + to_string(Um));
}

// Right state of the 2-shock from Um to the given v+, on the Hugoniot locus.
State hugoniot2_to(const State& Um, Real vp, const SystemParams& p) {
  const Real sigma = Um.v + vp;
  const State Fm = flux(Um, p);
  State X{Um.u, vp, Um.w};
  Real res = kInf;
  int settled = 0;
  for (int it = 0; it < 50; ++it) {
    const State F = flux(X, p);
    const Real R1 = F.u - Fm.u - sigma * (X.u - Um.u);
    const Real R3 = F.w - Fm.w - sigma * (X.w - Um.w);
    res = std::fmax(std::fabs(R1), std::fabs(R3));
    if (res <= Real(1e-12) && ++settled >= 3) break;
    const Mat3 J = jacobian(X, p);
    const Real a = J[0][0] - sigma, b = J[0][2], c = J[2][0], d = J[2][2] - sigma;
    const Real det = a * d - b * c;
    if (det == 0) break;
    const Real du = -(d * R1 - b * R3) / det;
    const Real dw = -(a * R3 - c * R1) / det;
    X.u += du;
    X.w += dw;
    if (res <= Real(1e-12) && std::fabs(du) + std::fabs(dw) <= 4 * kEps * (1 + std::fabs(X.u) + std::fabs(X.w))) break;
  }
  if (!(res <= Real(1e-12)))
    throw ConvergenceError("2-Hugoniot root finding did not converge from " + to_string(Um));
  return X;
}

State rk4_r2(const State& U, Real h, const SystemParams& p) {
  const State k1 = r2(U, p);
  const State k2 = r2(U + (h / 2) * k1, p);
  const State k3 = r2(U + (h / 2) * k2, p);
  const State k4 = r2(U + h * k3, p);
  return U + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

// Integral curve of r2 from Um to the given v+ (either direction).
State rarefaction2_to(const State& Um, Real vp, const SystemParams& p) {
  const Real total = vp - Um.v;
  if (total == 0) return Um;
  const Real dir = total > 0 ? 1 : -1;
  const Real len = std::fabs(total);
  State U = Um;
  Real done = 0;
  Real h = std::fmin(len, Real(0.02));
  int steps = 0;
  while (done < len) {
    if (++steps > 100000) throw ConvergenceError("rarefaction integration: too many steps");
    h = std::fmin(h, len - done);
    const State full = rk4_r2(U, dir * h, p);
    const State half = rk4_r2(rk4_r2(U, dir * h / 2, p), dir * h / 2, p);
    const Real err = norm_inf(half - full) / 15;
    const Real tol = std::fmax(Real(1e-17), Real(1e-15) * h);
    if (err <= tol) {
      U = half + (Real(1) / 15) * (half - full);
      done += h;
      if (!(norm(U) < 1)) throw DomainError("rarefaction integration left |U| < 1");
    }
    const Real fac = err > 0 ? Real(0.9) * std::pow(tol / err, Real(0.2)) : Real(4);
    h *= std::clamp(fac, Real(0.2), Real(4));
  }
  U.v = vp;
  return U;
}

}  // namespace

State RiemannSolution::right_state(const State& UL) const {
  return waves.empty() ? UL : waves.back().right;
}

State shock_state(int family, Real s, const State& Uminus, const SystemParams& p) {
  check_wave_pre(s, Uminus, "shock_state");
  check_shock_orientation();
  if (s == 0) return Uminus;
  switch (family) {
    case 1: return Uminus + (kShockSign1 * s) * r1(Uminus);
    case 2: return hugoniot2_to(Uminus, Uminus.v - s, p);
    case 3: return Uminus + (kShockSign3 * s) * r3(Uminus);
  }
  throw DomainError("shock_state: family must be 1, 2 or 3");
}

State rarefaction_state(int family, Real s, const State& Uminus, const SystemParams& p) {
  check_wave_pre(s, Uminus, "rarefaction_state");
  if (s == 0) return Uminus;
  State out;
  switch (family) {
    case 1: out = Uminus + (-kShockSign1 * s) * r1(Uminus); break;
    case 2: out = rarefaction2_to(Uminus, Uminus.v + s, p); break;
    case 3: out = Uminus + (-kShockSign3 * s) * r3(Uminus); break;
    default: throw DomainError("rarefaction_state: family must be 1, 2 or 3");
  }
  if (!(norm(out) < 1)) throw DomainError("rarefaction_state: result leaves |U| < 1");
  return out;
}

HugoniotFit hugoniot_residual(const State& Uminus, const State& Uplus, const SystemParams& p) {
  const State dU = Uplus - Uminus;
  const Real n2 = dot(dU, dU);
  if (n2 == 0) throw DomainError("hugoniot_residual: states coincide");
  const State dF = flux(Uplus, p) - flux(Uminus, p);
  HugoniotFit fit;
  fit.sigma = dot(dF, dU) / n2;
  fit.residual = norm(dF - fit.sigma * dU);
  return fit;
}

Real signed_parameter(Family family, WaveKind kind, Real strength) {
  const bool shock = kind == WaveKind::Shock;
  switch (family) {
    case Family::One: return shock ? kShockSign1 * strength : -kShockSign1 * strength;
    case Family::Two: return shock ? -strength : strength;
    case Family::Three: return shock ? kShockSign3 * strength : -kShockSign3 * strength;
    case Family::NonPhysical: break;
  }
  throw DomainError("signed_parameter: non-physical wave has no curve parameter");
}

Wave make_wave(Family family, Real param, const State& UL, const SystemParams& p) {
  Wave w;
  w.family = family;
  w.left = UL;
  w.strength = std::fabs(param);
  const int i = family_index(family);
  if (family == Family::One || family == Family::Three) {
    const State r = family == Family::One ? r1(UL) : r3(UL);
    const int sign = family == Family::One ? kShockSign1 : kShockSign3;
    w.right = UL + param * r;
    w.kind = (param * sign > 0) ? WaveKind::Shock : WaveKind::Rarefaction;
  } else if (family == Family::Two) {
    const Real vp = UL.v + param;
    if (param < 0) {
      w.kind = WaveKind::Shock;
      w.right = hugoniot2_to(UL, vp, p);
    } else {
      w.kind = WaveKind::Rarefaction;
      w.right = rarefaction2_to(UL, vp, p);
    }
  } else {
    throw DomainError("make_wave: physical family required");
  }
  const Real ll = lambda(i, w.left, p), lr = lambda(i, w.right, p);
  if (w.kind == WaveKind::Shock) {
    const Real s = family == Family::Two ? w.left.v + w.right.v : (ll + lr) / 2;
    w.speed_lo = w.speed_hi = s;
  } else {
    w.speed_lo = ll;
    w.speed_hi = lr;
  }
  return w;
}

RiemannSolution solve_riemann(const State& UL, const State& UR, const SystemParams& p,
                              const RiemannOptions& opt, RiemannDiagnostics* diag) {
  RiemannSolution sol;
  if (UL == UR) {
    if (diag) *diag = {};
    return sol;
  }
  if (!(norm(UL) < Real(0.8)) || !(norm(UR) < Real(0.8)))
    throw DomainError("solve_riemann: states must satisfy |U| < 0.8: " + to_string(UL) + " " + to_string(UR));
  if (norm(UR - UL) > Real(0.3)) throw DomainError("solve_riemann: |UR - UL| must be <= 0.3");
  check_shock_orientation();

  const Real vL = UL.v, vR = UR.v;
  const State rl = r1(UL);

  auto middle = [&](Real t1) {
    const State A = UL + t1 * rl;
    if (vR < vL) return std::pair{A, hugoniot2_to(A, vR, p)};
    if (vR > vL) return std::pair{A, rarefaction2_to(A, vR, p)};
    return std::pair{A, A};
  };
  auto G = [&](Real t1, Real t3, std::array<Real, 2>& g) {
    const State B = middle(t1).second;
    const State C = B + t3 * r3(B);
    g = {C.u - UR.u, C.w - UR.w};
    return std::fmax(std::fabs(g[0]), std::fabs(g[1]));
  };
  auto G_safe = [&](Real t1, Real t3, std::array<Real, 2>& g) -> Real {
    try {
      return G(t1, t3, g);
    } catch (const DomainError&) {
      return kInf;
    } catch (const ConvergenceError&) {
      return kInf;
    }
  };

  // Linearised decomposition at UL.
  const State dU = UR - UL;
  const State rr2 = r2(UL, p);
  const Real a2 = dU.v;
  const Real du = dU.u - a2 * rr2.u, dw = dU.w - a2 * rr2.w;
  Real t3 = (du * vL - dw) / 2;
  Real t1 = du - t3;

  std::array<Real, 2> g{};
  Real gn = G_safe(t1, t3, g);
  if (!std::isfinite(gn)) {
    t1 = t3 = 0;
    gn = G_safe(t1, t3, g);
  }
  const Real scale = 1 + norm_inf(UR);
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    if (gn <= 2 * kEps * scale) break;
    std::array<std::array<Real, 2>, 2> J{};
    const std::array<Real, 2> tau{t1, t3};
    bool ok = true;
    for (int j = 0; j < 2; ++j) {
      const Real h = opt.fd_step * std::fmax(Real(1), std::fabs(tau[j]));
      std::array<Real, 2> gp{}, gm{};
      const Real np = j == 0 ? G_safe(t1 + h, t3, gp) : G_safe(t1, t3 + h, gp);
      const Real nm = j == 0 ? G_safe(t1 - h, t3, gm) : G_safe(t1, t3 - h, gm);
      if (!std::isfinite(np) || !std::isfinite(nm)) { ok = false; break; }
      J[0][j] = (gp[0] - gm[0]) / (2 * h);
      J[1][j] = (gp[1] - gm[1]) / (2 * h);
    }
    if (!ok) break;
    const Real det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    if (det == 0 || !std::isfinite(det)) break;
    const Real d1 = -(J[1][1] * g[0] - J[0][1] * g[1]) / det;
    const Real d3 = -(J[0][0] * g[1] - J[1][0] * g[0]) / det;
    Real damp = 1;
    bool improved = false;
    for (int k = 0; k < 30; ++k, damp /= 2) {
      std::array<Real, 2> gt{};
      const Real nt = G_safe(t1 + damp * d1, t3 + damp * d3, gt);
      if (nt < gn) {
        t1 += damp * d1;
        t3 += damp * d3;
        g = gt;
        gn = nt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  if (diag) *diag = {it, gn};
  if (!(gn <= opt.tol)) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "solve_riemann: Newton failed after %d iterations, residual %.3g, tau = (%.6g, %.6g)",
                  it, static_cast<double>(gn), static_cast<double>(t1), static_cast<double>(t3));
    throw ConvergenceError(std::string(buf) + " UL=" + to_string(UL) + " UR=" + to_string(UR));
  }

  // Roundoff-size 1- and 3-waves are dropped when the residual allows it.
  const Real floor = 8 * kEps * scale;
  if ((std::fabs(t1) <= floor || std::fabs(t3) <= floor) && (t1 != 0 || t3 != 0)) {
    const Real s1 = std::fabs(t1) <= floor ? 0 : t1, s3 = std::fabs(t3) <= floor ? 0 : t3;
    std::array<Real, 2> gs{};
    const Real ns = G_safe(s1, s3, gs);
    if (ns <= opt.tol) {
      t1 = s1;
      t3 = s3;
      if (diag) diag->residual = ns;
    }
  }

  const auto [A, B] = middle(t1);
  if (t1 != 0) {
    Wave w = make_wave(Family::One, t1, UL, p);
    w.right = A;
    sol.waves.push_back(w);
  }
  if (vR != vL) {
    Wave w;
    w.family = Family::Two;
    w.left = A;
    w.right = B;
    w.strength = std::fabs(vR - vL);
    if (vR < vL) {
      w.kind = WaveKind::Shock;
      w.speed_lo = w.speed_hi = vL + vR;
    } else {
      w.kind = WaveKind::Rarefaction;
      w.speed_lo = 2 * vL;
      w.speed_hi = 2 * vR;
    }
    sol.waves.push_back(w);
  }
  if (t3 != 0) {
    Wave w = make_wave(Family::Three, t3, B, p);
    w.right = UR;
    if (w.kind == WaveKind::Shock) {
      w.speed_lo = w.speed_hi = (lambda(3, B, p) + lambda(3, UR, p)) / 2;
    } else {
      w.speed_lo = lambda(3, B, p);
      w.speed_hi = lambda(3, UR, p);
    }
    sol.waves.push_back(w);
  }
  if (sol.waves.empty()) return sol;
  sol.waves.back().right = UR;
  return sol;
}

RiemannSolution solve_riemann_simplified(const State& UL, const State& UR, const SystemParams& p,
                                         std::span<const IncomingWave> incoming, Real np_speed) {
  RiemannSolution sol;
  if (UL == UR) return sol;
  if (!(norm(UL) < Real(0.8)) || !(norm(UR) < Real(0.8)))
    throw DomainError("solve_riemann_simplified: states must satisfy |U| < 0.8");
  if (norm(UR - UL) > Real(0.3)) throw DomainError("solve_riemann_simplified: |UR - UL| must be <= 0.3");
  std::array<Real, 3> param{0, 0, 0};
  std::array<bool, 3> present{false, false, false};
  for (const IncomingWave& in : incoming) {
    if (in.family == Family::NonPhysical || in.strength == 0) continue;
    const int k = family_index(in.family) - 1;
    param[k] += signed_parameter(in.family, in.kind, in.strength);
    present[k] = true;
  }
  State cur = UL;
  for (int k = 0; k < 3; ++k) {
    if (!present[k] || param[k] == 0) continue;
    Wave w = make_wave(family_from_index(k + 1), param[k], cur, p);
    cur = w.right;
    sol.waves.push_back(w);
  }
  if (cur != UR) {
    Wave w;
    w.family = Family::NonPhysical;
    w.kind = WaveKind::Shock;
    w.left = cur;
    w.right = UR;
    w.strength = norm(UR - cur);
    w.speed_lo = w.speed_hi = np_speed;
    sol.waves.push_back(w);
  }
  return sol;
}

bool lax_admissible(const Wave& w, const SystemParams& p, Real slack) {
  if (!w.physical() || w.kind != WaveKind::Shock) return true;
  const int i = family_index(w.family);
  const Real s = w.speed_lo;
  return lambda(i, w.left, p) + slack >= s && s >= lambda(i, w.right, p) - slack;
}

}  // namespace wft
