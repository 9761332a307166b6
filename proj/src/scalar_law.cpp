#include "wft/scalar_law.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <memory>

namespace wft {

ConvexFlux ConvexFlux::burgers() { return quadratic_flux(Real(0.5)); }

ConvexFlux ConvexFlux::quadratic_flux(Real k) {
  if (!(k > 0)) throw DomainError("quadratic_flux: k must be positive");
  ConvexFlux fl;
  fl.f = [k](Real z) { return k * z * z; };
  fl.fprime = [k](Real z) { return 2 * k * z; };
  fl.c_conv = 2 * k;
  fl.quadratic = true;
  fl.k = k;
  return fl;
}

Real ConvexFlux::fprime_inverse(Real xi) const {
  if (quadratic) return xi / (2 * k);
  const Real f0 = fprime(0);
  if (xi == f0) return 0;
  // fprime grows at least like c_conv z, which bounds the bracket.
  Real lo = 0, hi = 0;
  Real step = std::fabs(xi - f0) / c_conv;
  if (xi > f0) hi = step * Real(1.0000001) + kEps;
  else lo = -step * Real(1.0000001) - kEps;
  auto g = [&](Real z) { return fprime(z) - xi; };
  Real glo = g(lo), ghi = g(hi);
  if (!(glo <= 0 && ghi >= 0)) {
    for (int it = 0; it < 200 && !(glo <= 0 && ghi >= 0); ++it) {
      if (glo > 0) lo -= step + 1, glo = g(lo);
      if (ghi < 0) hi += step + 1, ghi = g(hi);
    }
    if (!(glo <= 0 && ghi >= 0)) throw ConvergenceError("fprime_inverse: no bracket");
  }
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  boost::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                             boost::math::tools::eps_tolerance<Real>(std::numeric_limits<Real>::digits - 2),
                                             iters);
  return (r.first + r.second) / 2;
}

Real ConvexFlux::legendre(Real xi) const {
  if (quadratic) return xi * xi / (4 * k);
  const Real z = fprime_inverse(xi);
  return xi * z - f(z);
}

void ConvexFlux::check_convex(Real lo, Real hi, int samples) const {
  if (!(hi > lo)) hi = lo + 1;
  const Real h = std::max((hi - lo) * Real(1e-4), Real(1e-6));
  for (int i = 0; i <= samples; ++i) {
    const Real z = lo + (hi - lo) * i / samples;
    const Real f2 = (fprime(z + h) - fprime(z - h)) / (2 * h);
    if (f2 < c_conv / 2)
      throw DomainError("non-convex flux detected: f'' sample " + std::to_string(static_cast<double>(f2)) +
                        " below c_conv/2 at z=" + std::to_string(static_cast<double>(z)));
  }
}

ScalarProfile ScalarProfile::steps(const std::vector<Real>& bp, const std::vector<Real>& vals) {
  if (vals.size() != bp.size() + 1) throw DomainError("steps: need one more value than breakpoints");
  for (std::size_t k = 1; k < bp.size(); ++k)
    if (!(bp[k] > bp[k - 1])) throw DomainError("steps: breakpoints must increase");
  auto b = std::make_shared<std::vector<Real>>(bp);
  auto v = std::make_shared<std::vector<Real>>(vals);
  // tab[k] = int_{bp[0]}^{bp[k]} u0.
  auto tab = std::make_shared<std::vector<Real>>(bp.size(), 0);
  for (std::size_t k = 1; k < bp.size(); ++k) (*tab)[k] = (*tab)[k - 1] + vals[k] * (bp[k] - bp[k - 1]);
  auto raw = [b, v, tab](Real x) {
    if (b->empty()) return (*v)[0] * x;
    if (x <= (*b)[0]) return (*v)[0] * (x - (*b)[0]);
    const auto k = static_cast<std::size_t>(std::upper_bound(b->begin(), b->end(), x) - b->begin()) - 1;
    return (*tab)[k] + (*v)[k + 1] * (x - (*b)[k]);
  };
  const Real off = raw(0);
  ScalarProfile p;
  p.u0 = [b, v](Real x) {
    const auto k = static_cast<std::size_t>(std::upper_bound(b->begin(), b->end(), x) - b->begin());
    return (*v)[k];
  };
  p.primitive = [raw, off](Real x) { return raw(x) - off; };
  for (Real x : vals) p.M = std::max(p.M, std::fabs(x));
  return p;
}

ScalarProfile ScalarProfile::riemann(Real uL, Real uR, Real x0) { return steps({x0}, {uL, uR}); }

ScalarProfile ScalarProfile::constant(Real c) { return steps({}, {c}); }

ScalarProfile ScalarProfile::fourier(const std::vector<Real>& a, const std::vector<Real>& b) {
  auto A = std::make_shared<std::vector<Real>>(a);
  auto B = std::make_shared<std::vector<Real>>(b);
  ScalarProfile p;
  p.u0 = [A, B](Real x) {
    Real s = 0;
    for (std::size_t k = 0; k < A->size(); ++k) s += (*A)[k] * std::sin(Real(k + 1) * x);
    for (std::size_t k = 0; k < B->size(); ++k) s += (*B)[k] * std::cos(Real(k + 1) * x);
    return s;
  };
  p.primitive = [A, B](Real x) {
    Real s = 0;
    for (std::size_t k = 0; k < A->size(); ++k) {
      const Real kk = Real(k + 1);
      s += (*A)[k] * (1 - std::cos(kk * x)) / kk;
    }
    for (std::size_t k = 0; k < B->size(); ++k) {
      const Real kk = Real(k + 1);
      s += (*B)[k] * std::sin(kk * x) / kk;
    }
    return s;
  };
  for (Real c : a) p.M += std::fabs(c);
  for (Real c : b) p.M += std::fabs(c);
  return p;
}

ScalarProfile ScalarProfile::function(std::function<Real(Real)> u0, Real lo, Real hi, int cells) {
  if (!(hi > lo) || cells < 1) throw DomainError("function profile: need lo < hi and cells >= 1");
  using Gauss = boost::math::quadrature::gauss<Real, 20>;
  const Real h = (hi - lo) / cells;
  auto table = std::make_shared<std::vector<Real>>(static_cast<std::size_t>(cells) + 1, 0);
  for (int k = 0; k < cells; ++k)
    (*table)[k + 1] = (*table)[k] + Gauss::integrate(u0, lo + k * h, lo + (k + 1) * h);
  auto raw = [u0, table, lo, h, cells](Real x) {
    Real xc = std::clamp(x, lo, lo + cells * h);
    int k = std::min(cells - 1, std::max(0, static_cast<int>(std::floor((xc - lo) / h))));
    const Real a = lo + k * h;
    return (*table)[k] + (xc > a ? Gauss::integrate(u0, a, xc) : Real(0));
  };
  const Real off = (lo <= 0 && 0 <= hi) ? raw(0) : 0;
  ScalarProfile p;
  p.u0 = u0;
  p.primitive = [raw, off](Real x) { return raw(x) - off; };
  p.x_lo = lo;
  p.x_hi = hi;
  for (int k = 0; k <= 8 * cells; ++k) p.M = std::max(p.M, std::fabs(u0(lo + (hi - lo) * k / (8 * cells))));
  return p;
}

ScalarProfile operator+(const ScalarProfile& a, const ScalarProfile& b) {
  ScalarProfile p;
  auto ua = a.u0, ub = b.u0, pa = a.primitive, pb = b.primitive;
  p.u0 = [ua, ub](Real x) { return ua(x) + ub(x); };
  p.primitive = [pa, pb](Real x) { return pa(x) + pb(x); };
  p.x_lo = std::max(a.x_lo, b.x_lo);
  p.x_hi = std::min(a.x_hi, b.x_hi);
  p.M = a.M + b.M;
  return p;
}

namespace {

Real minimizer(const ConvexFlux& flux, const ScalarProfile& u0, Real t, Real x, const LaxOleinikOptions& opt,
               Real y_floor, bool rightmost) {
  Real lo = x - t * flux.fprime(u0.M), hi = x - t * flux.fprime(-u0.M);
  if (lo < u0.x_lo || hi > u0.x_hi)
    throw DomainError("lax_oleinik: x=" + std::to_string(static_cast<double>(x)) +
                      " needs the datum on [" + std::to_string(static_cast<double>(lo)) + ", " +
                      std::to_string(static_cast<double>(hi)) + "]");
  lo = std::max(lo, std::min(y_floor, hi));
  if (hi - lo <= 0) return lo;
  auto G = [&](Real y) { return u0.primitive(y) + t * flux.legendre((x - y) / t); };
  auto dG = [&](Real y) { return u0.u0(y) - flux.fprime_inverse((x - y) / t); };
  const int n = std::max(8, opt.grid);
  const Real h = (hi - lo) / n;
  int best = 0;
  Real gbest = kInf;
  for (int k = 0; k <= n; ++k) {
    const Real g = G(lo + k * h);
    if (g < gbest || (rightmost && g <= gbest)) {
      gbest = g;
      best = k;
    }
  }
  Real a = lo + std::max(0, best - 1) * h, b = lo + std::min(n, best + 1) * h;
  // The minimizer is where y -> u0(y) - (f')^{-1}((x-y)/t) turns from negative to positive.
  Real da = dG(a), db = dG(b);
  if (da < 0 && db > 0) {
    for (int it = 0; it < 300; ++it) {
      const Real m = a + (b - a) / 2;
      if (m <= a || m >= b) break;
      const Real dm = dG(m);
      if (dm < 0 || (rightmost && dm == 0)) a = m;
      else b = m;
    }
    return rightmost ? b : a;
  }
  if (best == 0 && da >= 0) return lo;
  if (best == n && db <= 0) return hi;
  auto r = boost::math::tools::brent_find_minima(G, a, b, std::numeric_limits<Real>::digits / 2);
  return r.first;
}

}  // namespace

Real backward_minimizer(const ConvexFlux& flux, const ScalarProfile& u0, Real t, Real x, const LaxOleinikOptions& opt,
                        Real y_floor) {
  if (!(t > 0)) throw DomainError("lax_oleinik: t must be positive");
  return minimizer(flux, u0, t, x, opt, y_floor, false);
}

ScalarSolutionSample lax_oleinik_solve(const ConvexFlux& flux, const ScalarProfile& u0, Real t,
                                       const std::vector<Real>& xs, const LaxOleinikOptions& opt) {
  if (!(t > 0)) throw DomainError("lax_oleinik: t must be positive");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1]) throw DomainError("lax_oleinik: positions must be sorted");
  flux.check_convex(-u0.M, u0.M);
  ScalarSolutionSample s;
  s.t = t;
  s.flux = flux;
  s.profile = u0;
  s.x = xs;
  Real floor = -kInf;
  for (Real x : xs) {
    const Real y = minimizer(flux, u0, t, x, opt, floor, false);
    floor = y;
    s.y.push_back(y);
    Real u = std::clamp(flux.fprime_inverse((x - y) / t), -u0.M, u0.M);
    // Where the characteristic leaves a point of continuity, u equals u0 there.
    if (std::isfinite(y)) {
      const Real uy = u0.u0(y);
      if (std::fabs(uy - u) <= Real(1e-9) * std::max(Real(1), u0.M)) u = uy;
    }
    s.u.push_back(u);
  }
  return s;
}

Real characteristic_map(const ScalarSolutionSample& s, Real y) {
  if (s.x.empty()) throw DomainError("characteristic_map: empty sample");
  if (y < s.y.front() || y > s.y.back())
    throw DomainError("characteristic_map: y outside the sampled minimizer range [" +
                      std::to_string(static_cast<double>(s.y.front())) + ", " +
                      std::to_string(static_cast<double>(s.y.back())) + "]");
  const auto it = std::upper_bound(s.y.begin(), s.y.end(), y);
  if (it == s.y.end()) return s.x.back();
  const std::size_t i = static_cast<std::size_t>(it - s.y.begin());
  if (i == 0) return s.x.front();
  Real a = s.x[i - 1], b = s.x[i];
  for (int k = 0; k < 200; ++k) {
    const Real m = a + (b - a) / 2;
    if (m <= a || m >= b) break;
    if (backward_minimizer(s.flux, s.profile, s.t, m) > y) b = m;
    else a = m;
  }
  return b;
}

OleinikReport check_oleinik(const ScalarSolutionSample& s, const ConvexFlux& flux, Real tol) {
  OleinikReport rep;
  const std::size_t n = s.x.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(s.x[j] > s.x[i])) continue;
      const Real r = (s.u[j] - s.u[i]) * s.t * flux.c_conv / (s.x[j] - s.x[i]);
      if (r > rep.max_ratio) {
        rep.max_ratio = r;
        rep.witness = std::make_pair(i, j);
      }
    }
  rep.pass = rep.max_ratio <= 1 + tol;
  return rep;
}

AdlReport check_adl_lower(const ScalarSolutionSample& s, const ConvexFlux& flux, Real a, Real b, Real tol) {
  if (!(a < b)) throw DomainError("check_adl_lower: need a < b");
  if (s.x.empty() || a < s.x.front() || b > s.x.back())
    throw DomainError("check_adl_lower: [a, b] outside the sampled range; sample at least [" +
                      std::to_string(static_cast<double>(a)) + ", " + std::to_string(static_cast<double>(b)) + "]");
  AdlReport rep;
  // sup {y : X(y) < a} is the left limit of y* at a; inf {y : X(y) > b} its right limit at b.
  rep.y_minus = minimizer(s.flux, s.profile, s.t, a, {}, -kInf, false);
  rep.y_plus = minimizer(s.flux, s.profile, s.t, b, {}, -kInf, true);
  const Real ua = std::clamp(flux.fprime_inverse((a - rep.y_minus) / s.t), -s.profile.M, s.profile.M);
  const Real ub = std::clamp(flux.fprime_inverse((b - rep.y_plus) / s.t), -s.profile.M, s.profile.M);
  rep.lhs = ub - ua;
  rep.rhs = -2 * (rep.y_plus - rep.y_minus) / (s.t * flux.c_conv);
  rep.pass = rep.lhs >= rep.rhs - tol;
  return rep;
}

std::vector<CensusShock> shock_census(const ScalarSolutionSample& s, Real thr, Real cap) {
  std::vector<CensusShock> out;
  std::ptrdiff_t start = -1;
  auto flush = [&](std::size_t end) {
    const auto i = static_cast<std::size_t>(start);
    out.push_back({(s.x[i] + s.x[end]) / 2, s.u[end] - s.u[i]});
    start = -1;
  };
  for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
    const Real h = s.x[i + 1] - s.x[i];
    const bool hit = std::fabs(s.u[i + 1] - s.u[i]) > std::max(thr, cap * h);
    if (hit && start < 0) start = static_cast<std::ptrdiff_t>(i);
    if (!hit && start >= 0) flush(i);
  }
  if (start >= 0) flush(s.x.size() - 1);
  return out;
}

Real default_census_threshold(const ScalarSolutionSample& s, Real sup_f2) {
  if (s.x.size() < 2) return 0;
  Real tv = 0;
  for (std::size_t i = 0; i + 1 < s.u.size(); ++i) tv += std::fabs(s.u[i + 1] - s.u[i]);
  const Real h = (s.x.back() - s.x.front()) / static_cast<Real>(s.x.size() - 1);
  return 10 * h * sup_f2 * tv;
}

bool ProbeReport::stable() const {
  return std::none_of(unstable.begin(), unstable.end(), [](bool b) { return b; });
}

ProbeReport schaeffer_probe(const ConvexFlux& flux, const ScalarProfile& u0, const ProbeOptions& opt) {
  if (!(opt.x_hi > opt.x_lo) || opt.samples < 2) throw DomainError("schaeffer_probe: bad sampling window");
  ProbeReport rep;
  Rng rng(opt.seed);
  std::vector<Real> xs(static_cast<std::size_t>(opt.samples));
  for (int i = 0; i < opt.samples; ++i)
    xs[static_cast<std::size_t>(i)] = opt.x_lo + (opt.x_hi - opt.x_lo) * i / (opt.samples - 1);
  const Real thr = opt.jump_threshold < 0 ? Real(0.05) : opt.jump_threshold;
  for (int tr = 0; tr < opt.trials; ++tr) {
    std::vector<Real> a(static_cast<std::size_t>(opt.modes)), b(static_cast<std::size_t>(opt.modes));
    for (int k = 0; k < opt.modes; ++k) {
      const Real kk = Real(k + 1);
      a[static_cast<std::size_t>(k)] = opt.amplitude * rng.normal() / (kk * kk);
      b[static_cast<std::size_t>(k)] = opt.amplitude * rng.normal() / (kk * kk);
    }
    auto half = [](std::vector<Real> c) {
      for (Real& v : c) v /= 2;
      return c;
    };
    const ScalarProfile full = u0 + ScalarProfile::fourier(a, b);
    const ScalarProfile halfp = u0 + ScalarProfile::fourier(half(a), half(b));
    std::vector<std::size_t> c1, c2;
    for (Real t : opt.times) {
      c1.push_back(shock_census(lax_oleinik_solve(flux, full, t, xs), thr).size());
      c2.push_back(shock_census(lax_oleinik_solve(flux, halfp, t, xs), thr).size());
    }
    rep.unstable.push_back(c1 != c2);
    rep.counts.push_back(std::move(c1));
    rep.counts_half.push_back(std::move(c2));
  }
  return rep;
}

}  // namespace wft
