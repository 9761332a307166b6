#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "wft/scenario.hpp"

using namespace wft;

namespace {

Real rh_residual(const State& a, const State& b, Real eta) {
  return oracle::rankine_hugoniot(oracle::vec(a), oracle::vec(b), eta).residual;
}

}  // namespace

TEST_CASE("zero-strength waves are the identity") {
  const SystemParams p(Real(0.09));
  const State U{Real(0.1), Real(0.2), Real(-0.1)};
  for (int i = 1; i <= 3; ++i) {
    CHECK(shock_state(i, 0, U, p) == U);
    CHECK(rarefaction_state(i, 0, U, p) == U);
  }
}

TEST_CASE("2-shock speed is pinned by the second flux component") {
  const Real eta = Real(0.09);
  const SystemParams p(eta);
  const State Um{0, Real(0.1), 0};
  const State Up = shock_state(2, Real(0.05), Um, p);
  CHECK(Up.v == doctest::Approx(0.05).epsilon(1e-15));
  const HugoniotFit h = hugoniot_residual(Um, Up, p);
  CHECK(std::fabs(h.sigma - Real(0.15)) <= 1e-12);
  CHECK(h.residual <= 1e-12);
  const auto ref = oracle::rankine_hugoniot(oracle::vec(Um), oracle::vec(Up), eta);
  CHECK(std::fabs(ref.sigma - Real(0.15)) <= 1e-12);
  CHECK(ref.residual <= 1e-12);
  const Wave w = make_wave(Family::Two, Up.v - Um.v, Um, p);
  CHECK(w.kind == WaveKind::Shock);
  CHECK(lax_admissible(w, p));
}

TEST_CASE("1- and 3-shocks are straight and satisfy Rankine-Hugoniot") {
  const ScenarioParams sp = derive_params(Real(0.3));
  const SystemParams p(sp.eta);
  const State U1 = shock_state(1, sp.omega, sp.U_I, p);
  const State d = U1 - sp.U_I;
  // Collinear with r1(U_I) = (1, 0, omega).
  CHECK(d.v == 0);
  CHECK(std::fabs(d.w - sp.omega * d.u) <= 1e-15);
  CHECK(std::fabs(std::fabs(d.u) - sp.omega) <= 1e-15);
  CHECK(rh_residual(sp.U_I, U1, sp.eta) <= 1e-9);
  const State U2 = shock_state(2, sp.omega, U1, p);
  CHECK(rh_residual(U1, U2, sp.eta) <= 1e-9);
  const State U3 = shock_state(3, sp.omega, U2, p);
  CHECK(rh_residual(U2, U3, sp.eta) <= 1e-9);
  CHECK(rh_residual(sp.U_I, shock_state(1, Real(0.05), sp.U_I, p), sp.eta) <= 1e-9);
  // Lax admissibility from the reference eigenvalues.
  const State pairs[3][2] = {{sp.U_I, U1}, {U1, U2}, {U2, U3}};
  for (int i = 0; i < 3; ++i) {
    const auto l = oracle::lambdas(oracle::vec(pairs[i][0]), sp.eta)[static_cast<std::size_t>(i)];
    const auto r = oracle::lambdas(oracle::vec(pairs[i][1]), sp.eta)[static_cast<std::size_t>(i)];
    const Real s = oracle::rankine_hugoniot(oracle::vec(pairs[i][0]), oracle::vec(pairs[i][1]), sp.eta).sigma;
    CHECK(l >= s - 1e-9);
    CHECK(s >= r - 1e-9);
  }
}

TEST_CASE("weak-wave limit of the Hugoniot speed") {
  const SystemParams p(Real(0.09));
  const State U{Real(0.1), Real(0.2), Real(-0.1)};
  const State Up = U + Real(1e-6) * r1(U);
  CHECK(std::fabs(hugoniot_residual(U, Up, p).sigma - lambda(1, U, p)) <= 1e-4);
  CHECK_THROWS_AS(hugoniot_residual(U, U, p), DomainError);
}

TEST_CASE("1-rarefaction is a straight segment") {
  const SystemParams p(Real(0.09));
  const State Up = rarefaction_state(1, Real(0.1), {0, Real(0.5), 0}, p);
  CHECK(Up.u == doctest::Approx(0.1));
  CHECK(Up.v == 0.5);
  CHECK(Up.w == doctest::Approx(0.05));
  CHECK(lambda(1, Up, p) > lambda(1, {0, Real(0.5), 0}, p));
}

TEST_CASE("2-rarefaction matches a fixed-step integration") {
  const Real eta = Real(0.09);
  const SystemParams p(eta);
  const State Up = rarefaction_state(2, Real(0.1), {0, 0, 0}, p);
  const auto ref = oracle::integrate_r2({0, 0, 0}, Real(0.1), eta);
  CHECK(Up.v == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(std::fabs(Up.u - ref[0]) <= 1e-8);
  CHECK(std::fabs(Up.w - ref[2]) <= 1e-8);
  CHECK(lambda(2, Up, p) == doctest::Approx(0.2));
}

TEST_CASE("Riemann solver examples") {
  const ScenarioParams sp = derive_params(Real(0.3));
  const SystemParams p(sp.eta);
  CHECK(solve_riemann(sp.U_I, sp.U_I, p).waves.empty());

  const State UII = shock_state(3, sp.omega, shock_state(2, sp.omega, shock_state(1, sp.omega, sp.U_I, p), p), p);
  const RiemannSolution s = solve_riemann(sp.U_I, UII, p);
  REQUIRE(s.waves.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(family_index(s.waves[static_cast<std::size_t>(i)].family) == i + 1);
    CHECK(s.waves[static_cast<std::size_t>(i)].kind == WaveKind::Shock);
    CHECK(s.waves[static_cast<std::size_t>(i)].strength == doctest::Approx(sp.omega).epsilon(1e-9));
  }
  for (std::size_t k = 0; k + 1 < s.waves.size(); ++k) {
    CHECK(s.waves[k].right == s.waves[k + 1].left);
    CHECK(s.waves[k].speed_hi < s.waves[k + 1].speed_lo);
  }

  const State UL{Real(0.1), Real(-0.05), Real(0.2)};
  const State UR = rarefaction_state(2, Real(0.1), UL, p);
  const RiemannSolution r = solve_riemann(UL, UR, p);
  REQUIRE(r.waves.size() == 1);
  CHECK(r.waves[0].family == Family::Two);
  CHECK(r.waves[0].kind == WaveKind::Rarefaction);
  CHECK(r.waves[0].strength == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(solve_riemann({0, 0, 0}, {Real(0.4), 0, 0}, p), DomainError);
  CHECK_THROWS_AS(solve_riemann({Real(0.85), 0, 0}, {Real(0.8), 0, 0}, p), DomainError);
}

TEST_CASE("random small Riemann problems") {
  const Real eta = Real(0.09);
  const SystemParams p(eta);
  std::mt19937_64 g(5);
  std::uniform_real_distribution<Real> U(-1, 1);
  for (int n = 0; n < 500; ++n) {
    const State UL{Real(0.4) * U(g), Real(0.4) * U(g), Real(0.4) * U(g)};
    const State d{Real(0.05) * U(g), Real(0.05) * U(g), Real(0.05) * U(g)};
    const RiemannSolution s = solve_riemann(UL, UL + d, p);
    State chain = UL;
    Real dv = 0;
    for (const Wave& w : s.waves) {
      CHECK(norm(w.left - chain) <= 1e-15);
      chain = make_wave(w.family, signed_parameter(w.family, w.kind, w.strength), chain, p).right;
      if (w.family == Family::Two) dv += w.right.v - w.left.v;
      else CHECK(w.right.v == w.left.v);
      if (w.kind == WaveKind::Shock) {
        CHECK(rh_residual(w.left, w.right, eta) <= 1e-9);
        CHECK(lax_admissible(w, p));
        CHECK(w.speed_lo == w.speed_hi);
      } else {
        CHECK(w.speed_lo <= w.speed_hi);
      }
    }
    CHECK(norm(chain - (UL + d)) <= 1e-10);
    CHECK(std::fabs(dv - d.v) <= 1e-15);
  }
}

TEST_CASE("weak waves follow the eigenbasis decomposition") {
  const Real eta = Real(0.09);
  const SystemParams p(eta);
  std::mt19937_64 g(6);
  std::uniform_real_distribution<Real> U(-1, 1);
  for (int n = 0; n < 200; ++n) {
    const State UL{Real(0.4) * U(g), Real(0.4) * U(g), Real(0.4) * U(g)};
    State d{U(g), U(g), U(g)};
    const Real delta = Real(1e-3) * std::fabs(U(g)) + Real(1e-6);
    d = d * (delta / norm(d));
    const auto X = oracle::vec(UL);
    const auto a = oracle::decompose(oracle::r1(X), oracle::r2(X, eta), oracle::r3(X), oracle::vec(d));
    Real s[3] = {0, 0, 0};
    for (const Wave& w : solve_riemann(UL, UL + d, p).waves) s[family_index(w.family) - 1] += w.strength;
    for (int i = 0; i < 3; ++i) CHECK(std::fabs(s[i] - std::fabs(a[static_cast<std::size_t>(i)])) <= 10 * delta * delta);
  }
}

TEST_CASE("simplified solver keeps incoming families") {
  const SystemParams p(Real(0.09));
  const State UL{Real(0.1), Real(0.05), Real(-0.1)};
  // 3-front followed by a 1-front.
  const Wave w3 = make_wave(Family::Three, Real(0.01), UL, p);
  const Wave w1 = make_wave(Family::One, Real(-0.02), w3.right, p);
  const IncomingWave in[] = {{Family::Three, w3.kind, w3.strength}, {Family::One, w1.kind, w1.strength}};
  const RiemannSolution s = solve_riemann_simplified(UL, w1.right, p, in);
  Real s1 = 0, s3 = 0, np = 0;
  for (const Wave& w : s.waves) {
    if (w.family == Family::One) s1 += w.strength;
    else if (w.family == Family::Three) s3 += w.strength;
    else np += w.strength;
  }
  CHECK(std::fabs(s1 - w1.strength) <= 1e-15);
  CHECK(std::fabs(s3 - w3.strength) <= 1e-15);
  CHECK(np <= 1e-10);
  CHECK(s.waves.back().right == w1.right);

  CHECK(solve_riemann_simplified(UL, UL, p, {}).waves.empty());

  // Two 2-shocks merge into one with additive v-jump.
  const Wave a = make_wave(Family::Two, Real(-0.02), UL, p);
  const Wave b = make_wave(Family::Two, Real(-0.03), a.right, p);
  const IncomingWave in2[] = {{Family::Two, a.kind, a.strength}, {Family::Two, b.kind, b.strength}};
  const RiemannSolution m = solve_riemann_simplified(UL, b.right, p, in2);
  std::size_t twos = 0;
  Real s2 = 0;
  for (const Wave& w : m.waves)
    if (w.family == Family::Two) {
      ++twos;
      s2 += w.strength;
      CHECK(w.kind == WaveKind::Shock);
    }
  CHECK(twos == 1);
  CHECK(s2 == doctest::Approx(0.05).epsilon(1e-14));
  const RiemannSolution acc = solve_riemann(UL, b.right, p);
  for (const Wave& w : acc.waves)
    if (w.family == Family::Two) CHECK(w.strength == doctest::Approx(s2).epsilon(1e-12));
}
