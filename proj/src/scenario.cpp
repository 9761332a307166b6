#include "wft/scenario.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <string>

namespace wft {

ScenarioParams derive_params(Real eps) {
  if (!(eps > 0) || eps > Real(0.3)) throw DomainError("derive_params: eps must lie in (0, 0.3]");
  ScenarioParams sp;
  sp.eps = eps;
  sp.q = 20;
  sp.eta = eps * eps;
  sp.omega = eps * eps * eps;
  sp.r = std::pow(eps, 10) / 4;
  sp.Ttilde = 40 / sp.omega;
  sp.rho = 12 * sp.Ttilde + 40;
  sp.a = sp.q + 7;
  sp.U_I = {eps, sp.omega, -eps};
  Real floor = 1000 * kEps;
  int j = 0;
  while (std::pow(sp.omega, j + 2) * std::sqrt(eps) > floor) ++j;
  sp.J_max_feasible = j;
  return sp;
}

FTParams default_ft_params(const ScenarioParams& sp, int J_max) {
  if (J_max < 0) throw DomainError("default_ft_params: J_max must be >= 0");
  FTParams fp;
  fp.delta_rar = std::pow(sp.omega, J_max + 2);
  fp.thresh_simplified = fp.delta_rar * fp.delta_rar * fp.delta_rar;
  fp.t_end = 2 * sp.Ttilde;
  fp.clip_lo = -sp.rho;
  fp.clip_hi = sp.rho;
  fp.min_strength = Real(1e-3) * fp.delta_rar;
  fp.big_wave_threshold = sp.omega / 2;
  return fp;
}

namespace {

void check_eta(const ScenarioParams& sp, const SystemParams& p) {
  if (std::fabs(p.eta() - sp.eta) > 16 * kEps * sp.eta) throw DomainError("scenario: system eta differs from eps^2");
}

State triple_shock(const State& U, Real s, const SystemParams& p) {
  return shock_state(3, s, shock_state(2, s, shock_state(1, s, U, p), p), p);
}

void check_inside(const State& U, const char* what) {
  if (!(norm(U) < 1)) throw DomainError(std::string(what) + ": state leaves |U| < 1");
}

}  // namespace

StepFunction build_piecewise_datum(const ScenarioParams& sp, const SystemParams& p) {
  check_eta(sp, p);
  State U2 = triple_shock(sp.U_I, sp.omega, p);
  State U3 = triple_shock(U2, sp.omega, p);
  return {{-sp.q, sp.q}, {sp.U_I, U2, U3}};
}

namespace {

struct Ramp {
  std::vector<Real> x;
  std::vector<State> values;  // values[k] right of x[k]
  State end;
  Real lo = 0, hi = 0;
};

// Straight 1- or 3-compression from A along the shock branch, focusing at xf
// for t = 1: jump k sits at xs + (k + 1/2) h with h = 4 eta s / n.
Ramp straight_ramp(int family, const State& A, Real s, Real xf, Real mesh, const SystemParams& p) {
  Real L = 4 * p.eta() * s;
  int n = std::max(1, static_cast<int>(std::ceil(L / mesh)));
  Real h = L / n;
  Real xs = xf - lambda(family, A, p);
  State r = family == 1 ? r1(A) : r3(A);
  Real sign = family == 1 ? kShockSign1 : kShockSign3;
  Ramp out;
  for (int k = 0; k < n; ++k) {
    out.x.push_back(xs + (k + Real(0.5)) * h);
    out.values.push_back(A + (sign * s * (k + 1) / n) * r);
    check_inside(out.values.back(), "build_compression_profile");
  }
  out.end = out.values.back();
  out.lo = xs;
  out.hi = xs + L;
  return out;
}

// 2-compression of total v-drop s from A: chained exact 2-shocks of v-drop
// d = s/n with jump k at xs + (k + 1/2) 2d.
Ramp two_ramp(const State& A, Real s, Real xf, Real mesh, const SystemParams& p) {
  Real L = 2 * s;
  int n = std::max(1, static_cast<int>(std::ceil(L / mesh)));
  Real d = s / n;
  Real xs = xf - 2 * A.v;
  Ramp out;
  State U = A;
  for (int k = 0; k < n; ++k) {
    out.x.push_back(xs + (k + Real(0.5)) * 2 * d);
    U = shock_state(2, d, U, p);
    check_inside(U, "build_compression_profile");
    out.values.push_back(U);
  }
  out.end = U;
  out.lo = xs;
  out.hi = xs + L;
  return out;
}

}  // namespace

StepFunction build_compression_profile(const ScenarioParams& sp, const SystemParams& p, Real mesh,
                                       const CompressionLayout& layout) {
  check_eta(sp, p);
  if (!(mesh > 0) || mesh > sp.omega / 100 * (1 + 1e-12))
    throw DomainError("build_compression_profile: mesh must lie in (0, omega/100]");
  Real s13 = layout.strength13 < 0 ? sp.omega : layout.strength13;
  Real s2 = layout.strength2 < 0 ? sp.omega : layout.strength2;
  if (!(s13 > 0) || !(s2 > 0)) throw DomainError("build_compression_profile: ramp strengths must be positive");
  StepFunction out;
  out.values.push_back(sp.U_I);
  State U = sp.U_I;
  Real prev_hi = -kInf;
  for (Real center : {-sp.q, sp.q}) {
    Ramp r3 = straight_ramp(3, U, s13, center + layout.focus3, mesh, p);
    Ramp r2 = two_ramp(r3.end, s2, center, mesh, p);
    Ramp r1 = straight_ramp(1, r2.end, s13, center + layout.focus1, mesh, p);
    for (const Ramp* r : {&r3, &r2, &r1}) {
      if (r->lo - prev_hi < 1) throw DomainError("build_compression_profile: ramps closer than the unit gap");
      out.breakpoints.insert(out.breakpoints.end(), r->x.begin(), r->x.end());
      out.values.insert(out.values.end(), r->values.begin(), r->values.end());
      prev_hi = r->hi;
    }
    U = r1.end;
  }
  out.validate();
  return out;
}

namespace {

using Gauss = boost::math::quadrature::gauss<Real, 20>;

Real bump(Real s) { return std::fabs(s) < 1 ? std::exp(-1 / (1 - s * s)) : Real(0); }

// Continuous-or-step representative of a sampled profile as segments
// [x0, x1] carrying linear data from U0 to U1.
struct Segment {
  Real x0, x1;
  State U0, U1;
  State at(Real x) const {
    if (!(x1 > x0) || !std::isfinite(x0) || !std::isfinite(x1)) return U0;
    Real th = (x - x0) / (x1 - x0);
    return U0 + th * (U1 - U0);
  }
};

std::vector<Segment> representative(const StepFunction& f, Real fine_mesh) {
  std::size_t n = f.size();
  std::vector<Segment> seg;
  if (n == 0) {
    seg.push_back({-kInf, kInf, f.values[0], f.values[0]});
    return seg;
  }
  auto fine = [&](std::size_t k) {  // interior cell k lies on (b[k-1], b[k])
    return k >= 1 && k < n && f.breakpoints[k] - f.breakpoints[k - 1] <= fine_mesh;
  };
  auto mid = [&](std::size_t k) { return (f.breakpoints[k - 1] + f.breakpoints[k]) / 2; };
  seg.push_back({-kInf, f.breakpoints[0], f.values[0], f.values[0]});
  std::size_t k = 1;
  while (k < n) {
    if (!fine(k)) {
      seg.push_back({f.breakpoints[k - 1], f.breakpoints[k], f.values[k], f.values[k]});
      ++k;
      continue;
    }
    std::size_t j = k;
    while (k < n && fine(k)) ++k;
    std::size_t l = k - 1;
    seg.push_back({f.breakpoints[j - 1], mid(j), f.values[j - 1], f.values[j]});
    for (std::size_t i = j; i < l; ++i) seg.push_back({mid(i), mid(i + 1), f.values[i], f.values[i + 1]});
    seg.push_back({mid(l), f.breakpoints[l], f.values[l], f.values[l + 1]});
  }
  seg.push_back({f.breakpoints[n - 1], kInf, f.values[n], f.values[n]});
  return seg;
}

// (psi_R * P)(m) with psi_R(y) = bump(y/R)/R normalized on the same nodes.
State convolve(const std::vector<Segment>& seg, Real m, Real R) {
  auto first = std::upper_bound(seg.begin(), seg.end(), m - R, [](Real x, const Segment& s) { return x < s.x1; });
  State acc{};
  Real mass = 0;
  for (auto it = first; it != seg.end() && it->x0 < m + R; ++it) {
    // s = (m - x)/R runs over [(m - x1)/R, (m - x0)/R] intersected with [-1, 1]
    Real s_lo = std::max(Real(-1), (m - it->x1) / R);
    Real s_hi = std::min(Real(1), (m - it->x0) / R);
    if (!(s_hi > s_lo)) continue;
    const int pieces = 4;
    for (int q = 0; q < pieces; ++q) {
      Real a = s_lo + (s_hi - s_lo) * q / pieces;
      Real b = s_lo + (s_hi - s_lo) * (q + 1) / pieces;
      Real half = (b - a) / 2, c = (a + b) / 2;
      const auto& abs = Gauss::abscissa();
      const auto& wts = Gauss::weights();
      for (std::size_t i = 0; i < abs.size(); ++i) {
        for (int sgn : {-1, 1}) {
          if (i == 0 && sgn == 1 && abs[0] == 0) continue;
          Real s = c + sgn * half * abs[i];
          Real wgt = wts[i] * half * bump(s);
          acc += wgt * it->at(m - R * s);
          mass += wgt;
        }
      }
    }
  }
  if (!(mass > 0)) throw InternalError("mollify: empty convolution window");
  return (1 / mass) * acc;
}

}  // namespace

MollifyResult mollify(const StepFunction& profile, Real radius, const ScenarioParams& sp, Real fine_mesh) {
  profile.validate();
  if (!(radius > 0)) throw DomainError("mollify: radius must be positive");
  if (!(fine_mesh > 0)) throw DomainError("mollify: fine mesh must be positive");
  auto seg = representative(profile, fine_mesh * (1 + Real(1e-9)));
  const int max_attempts = 40;
  Real R = radius;
  for (int attempt = 1; attempt <= max_attempts; ++attempt, R /= 2) {
    StepFunction out = profile;
    for (std::size_t k = 1; k < profile.size(); ++k) {
      Real m = (profile.breakpoints[k - 1] + profile.breakpoints[k]) / 2;
      out.values[k] = convolve(seg, m, R);
    }
    Real tv = (out - profile).total_variation();
    if (tv < sp.r) return {out.pruned(), R, attempt, tv};
  }
  throw DomainError("mollify: TV bound unattainable at the minimum radius");
}

NormType norm_type_from_string(const std::string& s) {
  if (s == "BV" || s == "bv") return NormType::BV;
  if (s == "W1inf" || s == "w1inf") return NormType::W1inf;
  throw DomainError("unknown norm type: " + s);
}

const char* to_string(NormType n) { return n == NormType::BV ? "BV" : "W1inf"; }

namespace {

// Smooth step: 0 for t <= 0, 1 for t >= 1.
Real smooth_step(Real t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  Real a = std::exp(-1 / t), b = std::exp(-1 / (1 - t));
  return a / (a + b);
}

Real smooth_step_d(Real t) {
  if (t <= 0 || t >= 1) return 0;
  Real a = std::exp(-1 / t), b = std::exp(-1 / (1 - t));
  Real da = a / (t * t), db = -b / ((1 - t) * (1 - t));
  return (da * (a + b) - a * (da + db)) / ((a + b) * (a + b));
}

void support_of(const PerturbationSpec& spec, const ScenarioParams& sp, Real& lo, Real& hi) {
  lo = spec.support_lo;
  hi = spec.support_hi;
  if (lo == hi) {
    lo = -sp.a + Real(0.5);
    hi = sp.a - Real(0.5);
  }
  if (!(lo < hi)) throw DomainError("perturb: empty support");
}

}  // namespace

State SmoothPerturbation::value(Real x) const {
  if (!(x > lo && x < hi)) return {};
  Real phi = smooth_step((x - lo) / ramp) * smooth_step((hi - x) / ramp);
  State acc{};
  for (const auto& m : modes) acc += std::sin(m.k * x) * m.amp_sin + std::cos(m.k * x) * m.amp_cos;
  return phi * acc;
}

State SmoothPerturbation::derivative(Real x) const {
  if (!(x > lo && x < hi)) return {};
  Real sl = smooth_step((x - lo) / ramp), sr = smooth_step((hi - x) / ramp);
  Real phi = sl * sr;
  Real dphi = (smooth_step_d((x - lo) / ramp) * sr - sl * smooth_step_d((hi - x) / ramp)) / ramp;
  State g{}, dg{};
  for (const auto& m : modes) {
    g += std::sin(m.k * x) * m.amp_sin + std::cos(m.k * x) * m.amp_cos;
    dg += (m.k * std::cos(m.k * x)) * m.amp_sin - (m.k * std::sin(m.k * x)) * m.amp_cos;
  }
  return dphi * g + phi * dg;
}

SmoothPerturbation make_smooth_perturbation(const PerturbationSpec& spec, const ScenarioParams& sp) {
  SmoothPerturbation z;
  support_of(spec, sp, z.lo, z.hi);
  z.ramp = std::min(Real(2), (z.hi - z.lo) / 4);
  Rng rng(spec.seed);
  for (int i = 0; i < spec.modes; ++i) {
    SmoothPerturbation::Mode m;
    m.k = rng.uniform(Real(0.1), Real(1));
    m.amp_sin = {rng.normal(), rng.normal(), rng.normal()};
    m.amp_cos = {rng.normal(), rng.normal(), rng.normal()};
    z.modes.push_back(m);
  }
  Real n = w1inf_norm(z);
  if (!(n > 0)) throw InternalError("perturb: degenerate Fourier sum");
  Real scale = spec.budget / n;
  for (auto& m : z.modes) {
    m.amp_sin *= scale;
    m.amp_cos *= scale;
  }
  return z;
}

namespace {

template <class F>
Real sup_norm(F f, Real lo, Real hi, Real grid) {
  std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / grid));
  Real h = (hi - lo) / n;
  std::vector<Real> vals(n + 1);
  for (std::size_t i = 0; i <= n; ++i) vals[i] = f(lo + i * h);
  Real best = 0;
  for (std::size_t i = 0; i <= n; ++i) {
    best = std::max(best, vals[i]);
    bool peak = (i == 0 || vals[i] > vals[i - 1]) && (i == n || vals[i] >= vals[i + 1]);
    if (!peak || !(vals[i] > 0)) continue;
    Real a = std::max(lo, lo + (i - Real(1)) * h), b = std::min(hi, lo + (i + Real(1)) * h);
    std::uintmax_t iters = 200;
    auto res = boost::math::tools::brent_find_minima([&](Real x) { return -f(x); }, a, b,
                                                     std::numeric_limits<Real>::digits / 2, iters);
    best = std::max(best, -res.second);
  }
  return best;
}

}  // namespace

Real w1inf_norm(const SmoothPerturbation& z, Real grid) {
  Real s0 = sup_norm([&](Real x) { return norm(z.value(x)); }, z.lo, z.hi, grid);
  Real s1 = sup_norm([&](Real x) { return norm(z.derivative(x)); }, z.lo, z.hi, grid);
  return s0 + s1;
}

PerturbResult perturb(const StepFunction& datum, const PerturbationSpec& spec, const ScenarioParams& sp) {
  datum.validate();
  if (!(spec.budget >= 0)) throw DomainError("perturb: negative budget");
  if (!(spec.budget < sp.r)) throw DomainError("perturb: budget must be below r");
  Real lo, hi;
  support_of(spec, sp, lo, hi);
  if (spec.norm == NormType::BV && (lo <= -sp.a || hi >= sp.a))
    throw DomainError("perturb: BV support must lie strictly inside (-a, a)");
  PerturbResult out;
  out.added = StepFunction::constant({});
  if (spec.budget == 0) {
    out.datum = datum;
    return out;
  }
  if (spec.norm == NormType::BV) {
    if (spec.teeth < 1) throw DomainError("perturb: need at least one tooth");
    Rng rng(spec.seed);
    Real slot = (hi - lo) / spec.teeth;
    Real height = spec.budget / (2 * spec.teeth);
    for (int i = 0; i < spec.teeth; ++i) {
      Real width = rng.uniform(Real(0.2), Real(0.8)) * slot;
      Real start = lo + i * slot + rng.uniform(Real(0.05), Real(0.95) - width / slot) * slot;
      State dir = rng.unit_vector();
      out.added.breakpoints.push_back(start);
      out.added.values.push_back(height * dir);
      out.added.breakpoints.push_back(start + width);
      out.added.values.push_back({});
    }
    out.norm = out.added.total_variation();
  } else {
    if (!(spec.mesh > 0)) throw DomainError("perturb: sampling mesh must be positive");
    SmoothPerturbation z = make_smooth_perturbation(spec, sp);
    std::size_t n = static_cast<std::size_t>(std::ceil((hi - lo) / spec.mesh));
    Real h = (hi - lo) / n;
    out.added.breakpoints.push_back(lo);
    for (std::size_t i = 0; i < n; ++i) {
      out.added.values.push_back(z.value(lo + (i + Real(0.5)) * h));
      out.added.breakpoints.push_back(i + 1 == n ? hi : lo + (i + 1) * h);
    }
    out.added.values.push_back({});
    out.norm = w1inf_norm(z);
  }
  out.datum = (datum + out.added).pruned();
  return out;
}

StepFunction adversarial_rarefaction(const StepFunction& datum, const ScenarioParams& sp, const SystemParams& p,
                                     Real strength, Real placement) {
  check_eta(sp, p);
  datum.validate();
  if (!(placement < -sp.a)) throw DomainError("adversarial_rarefaction: placement must lie left of -a");
  if (!(strength >= 0) || strength > sp.omega) throw DomainError("adversarial_rarefaction: strength must lie in [0, omega]");
  if (strength == 0) return datum;
  auto it = std::lower_bound(datum.breakpoints.begin(), datum.breakpoints.end(), placement);
  if (it != datum.breakpoints.end() && *it == placement)
    throw DomainError("adversarial_rarefaction: placement coincides with a breakpoint");
  std::size_t cell = static_cast<std::size_t>(it - datum.breakpoints.begin());
  State U0 = datum.values[cell];
  State shift = strength * r3(U0);
  StepFunction out;
  for (std::size_t k = 0; k < cell; ++k) {
    out.values.push_back(datum.values[k] + shift);
    check_inside(out.values.back(), "adversarial_rarefaction");
    out.breakpoints.push_back(datum.breakpoints[k]);
  }
  out.values.push_back(U0 + shift);
  out.breakpoints.push_back(placement);
  for (std::size_t k = cell; k < datum.values.size(); ++k) {
    out.values.push_back(datum.values[k]);
    if (k < datum.breakpoints.size()) out.breakpoints.push_back(datum.breakpoints[k]);
  }
  out.validate();
  return out;
}

DatumKind datum_kind_from_string(const std::string& s) {
  if (s == "piecewise_Z" || s == "Z") return DatumKind::PiecewiseZ;
  if (s == "compression_V" || s == "V") return DatumKind::CompressionV;
  if (s == "mollified_U" || s == "U") return DatumKind::MollifiedU;
  if (s == "perturbed") return DatumKind::Perturbed;
  throw DomainError("unknown datum kind: " + s);
}

const char* to_string(DatumKind k) {
  switch (k) {
    case DatumKind::PiecewiseZ: return "piecewise_Z";
    case DatumKind::CompressionV: return "compression_V";
    case DatumKind::MollifiedU: return "mollified_U";
    case DatumKind::Perturbed: return "perturbed";
  }
  return "?";
}

BuiltDatum build_datum(const DatumSpec& spec) {
  BuiltDatum out;
  out.sp = derive_params(spec.eps);
  SystemParams p(out.sp.eta);
  Real mesh = spec.mesh < 0 ? out.sp.omega / 100 : spec.mesh;
  Real radius = spec.radius < 0 ? mesh : spec.radius;
  auto base = [&](DatumKind kind) {
    switch (kind) {
      case DatumKind::PiecewiseZ: return build_piecewise_datum(out.sp, p);
      case DatumKind::CompressionV: return build_compression_profile(out.sp, p, mesh, spec.layout);
      case DatumKind::MollifiedU: {
        auto m = mollify(build_compression_profile(out.sp, p, mesh, spec.layout), radius, out.sp, mesh);
        out.mollify_radius = m.radius;
        return m.profile;
      }
      case DatumKind::Perturbed: break;
    }
    throw DomainError("build_datum: the base of a perturbed datum cannot be perturbed");
  };
  if (spec.kind == DatumKind::Perturbed) {
    auto r = perturb(base(spec.base), spec.perturbation, out.sp);
    out.datum = r.datum;
    out.perturbation_norm = r.norm;
  } else {
    out.datum = base(spec.kind);
  }
  for (const auto& adv : spec.adversarial) out.datum = adversarial_rarefaction(out.datum, out.sp, p, adv.strength, adv.placement);
  return out;
}

}  // namespace wft
