#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wft/scalar_law.hpp"

using namespace wft;

namespace {

std::vector<Real> grid(Real lo, Real hi, Real h) {
  std::vector<Real> xs;
  const int n = static_cast<int>(std::lround((hi - lo) / h));
  for (int i = 0; i <= n; ++i) xs.push_back(lo + i * h);
  return xs;
}

// Burgers solution with datum -sin by brute-force minimization of
// P(y) + (x - y)^2 / (2 t), P(y) = cos y - 1, over a uniform y grid.
Real minus_sin_oracle(Real t, Real x, Real hy) {
  Real best = kInf, ystar = 0;
  for (Real y = x - 2 * t - 1; y <= x + 2 * t + 1; y += hy) {
    const Real v = std::cos(y) - 1 + (x - y) * (x - y) / (2 * t);
    if (v < best) {
      best = v;
      ystar = y;
    }
  }
  return (x - ystar) / t;
}

// Smooth solution along characteristics x = y + t u0(y) for increasing u0.
Real characteristic_solution(Real (*u0)(Real), Real t, Real x) {
  Real a = x - 10, b = x + 10;
  for (int k = 0; k < 200; ++k) {
    const Real m = (a + b) / 2;
    (m + t * u0(m) < x ? a : b) = m;
  }
  return u0((a + b) / 2);
}

Real arctan(Real y) { return std::atan(y); }

}  // namespace

TEST_CASE("Burgers Riemann problems") {
  const ConvexFlux f = ConvexFlux::burgers();
  const auto shock = lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 1, {Real(0.4), Real(0.6)});
  CHECK(shock.u[0] == doctest::Approx(1));
  CHECK(shock.u[1] == doctest::Approx(0));
  const auto fan = lax_oleinik_solve(f, ScalarProfile::riemann(0, 1), 1, {Real(-0.5), Real(0.25), Real(0.5), Real(2)});
  CHECK(fan.u[0] == doctest::Approx(0));
  CHECK(fan.u[1] == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(fan.u[2] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(fan.u[3] == doctest::Approx(1));
  CHECK_THROWS_AS(lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 0, {Real(0)}), DomainError);
}

TEST_CASE("compression datum focuses into a shock") {
  // v0(x) = u(1, -x) for the 0/1 fan: 1 for x < -1, -x on [-1, 0], 0 for x > 0.
  const ConvexFlux f = ConvexFlux::burgers();
  const ScalarProfile v0 = ScalarProfile::function([](Real x) { return std::clamp(-x, Real(0), Real(1)); }, -20, 20);
  const auto xs = grid(-1, 2, Real(0.001));
  for (Real t : {Real(0.5), Real(0.9)}) {
    const auto s = lax_oleinik_solve(f, v0, t, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
      // Before focusing: linear on [t - 1, 0] with slope -1/(1 - t).
      const Real x = xs[i];
      const Real ref = x <= t - 1 ? 1 : (x >= 0 ? 0 : -x / (1 - t));
      CHECK(std::fabs(s.u[i] - ref) <= 1e-6);
    }
    CHECK(shock_census(s, Real(0.5)).empty());
  }
  const auto s1 = lax_oleinik_solve(f, v0, Real(1.2), xs);
  const auto c = shock_census(s1, Real(0.5));
  REQUIRE(c.size() == 1);
  CHECK(c[0].jump == doctest::Approx(-1).epsilon(1e-6));
  CHECK(c[0].x == doctest::Approx(0.1).epsilon(2e-2));
}

TEST_CASE("characteristic map") {
  const ConvexFlux f = ConvexFlux::burgers();
  const auto xs = grid(-3, 3, Real(0.01));
  const auto fan = lax_oleinik_solve(f, ScalarProfile::riemann(0, 1), 1, xs);
  CHECK(characteristic_map(fan, -1) == doctest::Approx(-1).epsilon(1e-6));
  const auto sh = lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 1, xs);
  CHECK(std::fabs(characteristic_map(sh, -1) - 0) <= 1e-6);
  CHECK(std::fabs(characteristic_map(sh, Real(-0.2)) - Real(0.5)) <= 1e-6);
  CHECK_THROWS_AS(characteristic_map(sh, 100), DomainError);
}

TEST_CASE("Oleinik estimate") {
  const ConvexFlux f = ConvexFlux::burgers();
  const auto xs = grid(-2, 2, Real(0.01));
  const auto sh = lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 1, xs);
  const OleinikReport a = check_oleinik(sh, f);
  CHECK(a.pass);
  CHECK(a.max_ratio <= 0);

  const auto fan = lax_oleinik_solve(f, ScalarProfile::riemann(0, 1), 1, xs);
  const OleinikReport b = check_oleinik(fan, f);
  CHECK(b.pass);
  CHECK(b.max_ratio == doctest::Approx(1).epsilon(1e-6));

  const ScalarProfile at = ScalarProfile::function(arctan, -40, 40);
  for (Real t : {Real(0.5), Real(2)}) {
    const auto s = lax_oleinik_solve(f, at, t, xs);
    for (std::size_t i = 0; i < xs.size(); i += 40) CHECK(std::fabs(s.u[i] - characteristic_solution(arctan, t, xs[i])) <= 1e-6);
    const OleinikReport r = check_oleinik(s, f);
    CHECK(r.pass);
    CHECK(r.max_ratio < 1);
    CHECK(r.max_ratio == doctest::Approx(t / (1 + t)).epsilon(1e-3));
  }

  CHECK(check_oleinik(lax_oleinik_solve(f, ScalarProfile::constant(0), 1, {Real(0)}), f).max_ratio == -kInf);
}

TEST_CASE("lower estimate on a shock") {
  const ConvexFlux f = ConvexFlux::burgers();
  const auto xs = grid(-2, 2, Real(0.01));
  const auto sh = lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 1, xs);
  const AdlReport r = check_adl_lower(sh, f, Real(0.4), Real(0.6));
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(-1));
  CHECK(r.y_minus == doctest::Approx(-0.6).epsilon(1e-6));
  CHECK(r.y_plus == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(r.rhs == doctest::Approx(-2.4).epsilon(1e-6));

  const auto fan = lax_oleinik_solve(f, ScalarProfile::riemann(0, 1), 1, xs);
  const AdlReport g = check_adl_lower(fan, f, Real(-0.5), Real(0.5));
  CHECK(g.pass);
  CHECK(g.lhs >= 0);
  CHECK(g.rhs <= 0);
  CHECK_THROWS_AS(check_adl_lower(sh, f, Real(0.6), Real(0.4)), DomainError);
  CHECK_THROWS_AS(check_adl_lower(sh, f, -5, 0), DomainError);
}

TEST_CASE("shock census") {
  const ConvexFlux f = ConvexFlux::burgers();
  const auto xs = grid(-2, 2, Real(0.01));
  const auto c = shock_census(lax_oleinik_solve(f, ScalarProfile::riemann(1, 0), 1, xs), Real(0.5));
  REQUIRE(c.size() == 1);
  CHECK(c[0].x == doctest::Approx(0.5).epsilon(0.02));
  CHECK(c[0].jump == doctest::Approx(-1));

  const ScalarProfile ms = ScalarProfile::fourier({-1}, {});
  CHECK(shock_census(lax_oleinik_solve(f, ms, Real(0.5), grid(-3.1, 3.1, Real(0.01))), Real(0.05)).empty());

  const Real h = Real(0.01);
  const auto cell = grid(-3.1, 3.1, h);
  const auto s2 = lax_oleinik_solve(f, ms, 2, cell);
  const auto shocks = shock_census(s2, Real(0.05));
  REQUIRE(shocks.size() == 1);
  CHECK(std::fabs(shocks[0].x) <= h);
  std::size_t k = 0;
  while (cell[k + 1] < shocks[0].x) ++k;
  const Real ref = minus_sin_oracle(2, cell[k + 1], h / 16) - minus_sin_oracle(2, cell[k], h / 16);
  CHECK(std::fabs(shocks[0].jump - ref) <= h / 16);
  for (std::size_t i = 0; i < cell.size(); i += 31) CHECK(std::fabs(s2.u[i] - minus_sin_oracle(2, cell[i], h / 16)) <= h / 16);
  // Limits of u = sin(2u) on either side of the shock.
  Real u = 1;
  for (int it = 0; it < 100; ++it) u = std::sin(2 * u);
  CHECK(shocks[0].jump == doctest::Approx(-2 * u).epsilon(0.03));
}

TEST_CASE("Galilean invariance of Burgers") {
  const ConvexFlux f = ConvexFlux::burgers();
  const ScalarProfile base = ScalarProfile::fourier({-1, Real(0.3)}, {Real(0.2)});
  const Real c = Real(0.7), t = Real(1.5);
  const auto xs = grid(-3, 3, Real(0.05));
  std::vector<Real> shifted;
  for (Real x : xs) shifted.push_back(x - c * t);
  const auto a = lax_oleinik_solve(f, base + ScalarProfile::constant(c), t, xs);
  const auto b = lax_oleinik_solve(f, base, t, shifted);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::fabs(a.u[i] - (c + b.u[i])) <= 1e-6);
}

TEST_CASE("quadratic flux scaling") {
  // f = k z^2 with u0 gives w = 2 k u solving Burgers with datum 2 k u0.
  const Real kq = Real(1.5), t = Real(1.2);
  const auto xs = grid(-3, 3, Real(0.05));
  const auto a = lax_oleinik_solve(ConvexFlux::quadratic_flux(kq), ScalarProfile::fourier({Real(-0.5)}, {}), t, xs);
  const auto b = lax_oleinik_solve(ConvexFlux::burgers(), ScalarProfile::fourier({-kq}, {}), t, xs);
  for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::fabs(2 * kq * a.u[i] - b.u[i]) <= 1e-5);
}

TEST_CASE("probe") {
  const ConvexFlux f = ConvexFlux::burgers();
  ProbeOptions opt;
  opt.times = {1, 2, 3};
  opt.trials = 3;
  opt.x_lo = -3;
  opt.x_hi = 3;
  opt.samples = 400;
  opt.seed = 5;

  opt.amplitude = 0;
  const ProbeReport z = schaeffer_probe(f, ScalarProfile::constant(0), opt);
  CHECK(z.stable());
  for (const auto& row : z.counts)
    for (std::size_t n : row) CHECK(n == 0);

  opt.amplitude = Real(0.001);
  const ProbeReport inc = schaeffer_probe(f, ScalarProfile::function(arctan, -30, 30), opt);
  CHECK(inc.stable());
  for (const auto& row : inc.counts)
    for (std::size_t n : row) CHECK(n == 0);

  opt.times = {2, 3, 4};
  opt.x_lo = Real(-3.1);
  opt.x_hi = Real(3.1);
  opt.amplitude = Real(0.01);
  const ProbeReport s = schaeffer_probe(f, ScalarProfile::fourier({-1}, {}), opt);
  CHECK(s.stable());
  for (const auto& row : s.counts)
    for (std::size_t n : row) CHECK(n == 1);

  opt.x_hi = opt.x_lo;
  CHECK_THROWS_AS(schaeffer_probe(f, ScalarProfile::constant(0), opt), DomainError);
}

TEST_CASE("convex flux helpers") {
  const ConvexFlux q = ConvexFlux::quadratic_flux(2);
  CHECK(q.legendre(4) == doctest::Approx(2));  // sup (4 z - 2 z^2) at z = 1
  CHECK(q.fprime_inverse(4) == doctest::Approx(1));
  ConvexFlux g;
  g.f = [](Real z) { return z * z / 2 + z * z * z * z / 10; };
  g.fprime = [](Real z) { return z + 2 * z * z * z / 5; };
  g.c_conv = 1;
  CHECK(g.fprime_inverse(g.fprime(Real(0.7))) == doctest::Approx(0.7).epsilon(1e-10));
  const Real xi = g.fprime(Real(0.7));
  CHECK(g.legendre(xi) == doctest::Approx(xi * 0.7 - g.f(0.7)).epsilon(1e-10));
  ConvexFlux bad;
  bad.f = [](Real z) { return -z * z; };
  bad.fprime = [](Real z) { return -2 * z; };
  bad.c_conv = 1;
  CHECK_THROWS_AS(bad.check_convex(-1, 1), DomainError);
}
