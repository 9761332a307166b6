#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wft/scenario.hpp"

using namespace wft;

namespace {

Front moving(FrontId id, Real x, Real speed) {
  Front f;
  f.id = id;
  f.x_birth = x;
  f.speed = speed;
  return f;
}

Front physical(FrontId id, Family fam, WaveKind kind, Real strength) {
  Front f = moving(id, Real(id), 0);
  f.family = fam;
  f.kind = kind;
  f.strength = strength;
  return f;
}

// Pairwise definition: a left of b approach when a is non-physical and b
// physical, when fam(a) > fam(b), or when they share a family and one is a shock.
Real brute_force_Q(const std::vector<Front>& fr) {
  Real Q = 0;
  for (std::size_t i = 0; i < fr.size(); ++i)
    for (std::size_t j = i + 1; j < fr.size(); ++j) {
      const Front &a = fr[i], &b = fr[j];
      bool app;
      if (!b.physical()) app = false;
      else if (!a.physical()) app = true;
      else if (a.family != b.family) app = family_index(a.family) > family_index(b.family);
      else app = a.kind == WaveKind::Shock || b.kind == WaveKind::Shock;
      if (app) Q += a.strength * b.strength;
    }
  return Q;
}

std::vector<Front> to_fronts(const std::vector<Wave>& waves, const FTParams& fp, const SystemParams& p,
                             IdAllocator& ids) {
  RiemannSolution s;
  s.waves = waves;
  return fronts_from_solution(s, 0, 0, fp, p, ids);
}

}  // namespace

TEST_CASE("constant datum gives no fronts and no events") {
  const SystemParams p(Real(0.09));
  FTParams fp;
  CHECK(init_fronts(StepFunction::constant({Real(0.1), 0, 0}), fp, p).empty());
  const FTSolution sol = evolve(StepFunction::constant({Real(0.1), 0, 0}), fp, p);
  CHECK(sol.fronts.empty());
  CHECK(sol.events.empty());
  CHECK(sol.initial_tv == 0);
  CHECK_FALSE(sol.truncated);
}

TEST_CASE("datum Z starts with six shocks of strength omega") {
  const ScenarioParams sp = derive_params(Real(0.3));
  const SystemParams p(sp.eta);
  const FTParams fp = default_ft_params(sp, 5);
  const auto fr = init_fronts(build_piecewise_datum(sp, p), fp, p);
  REQUIRE(fr.size() == 6);
  const int fam[] = {1, 2, 3, 1, 2, 3};
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(family_index(fr[k].family) == fam[k]);
    CHECK(fr[k].kind == WaveKind::Shock);
    CHECK(fr[k].strength == doctest::Approx(sp.omega).epsilon(1e-9));
  }
  CHECK(std::fabs(fr[1].speed - sp.omega) <= 0.1 * sp.omega);
  CHECK(std::fabs(fr[4].speed + sp.omega) <= 0.1 * sp.omega);
}

TEST_CASE("rarefactions split into equal jumps") {
  const SystemParams p(Real(0.09));
  FTParams fp;
  fp.delta_rar = Real(0.03);
  const State UL{0, Real(-0.05), 0};
  const State UR = rarefaction_state(2, Real(0.1), UL, p);
  const auto fr = init_fronts({{0}, {UL, UR}}, fp, p);
  REQUIRE(fr.size() == 4);
  for (const Front& f : fr) {
    CHECK(f.family == Family::Two);
    CHECK(f.kind == WaveKind::Rarefaction);
    CHECK(f.strength == doctest::Approx(0.025).epsilon(1e-12));
  }
  for (std::size_t k = 0; k + 1 < fr.size(); ++k) {
    CHECK(fr[k].right == fr[k + 1].left);
    CHECK(fr[k].speed < fr[k + 1].speed);
  }
  CHECK(fr.front().left == UL);
  CHECK(norm(fr.back().right - UR) <= 1e-12);
  CHECK_THROWS_AS(init_fronts({{0}, {State{}, State{Real(0.5), 0, 0}}}, fp, p), DomainError);
}

TEST_CASE("collision times") {
  const Front g[] = {moving(0, 0, 3), moving(1, 1, -5)};
  const auto c0 = next_collision(g, 0);
  REQUIRE(c0);
  CHECK(c0->t == doctest::Approx(0.125));
  CHECK(c0->x == doctest::Approx(0.375));
  CHECK(c0->participants == std::vector<FrontId>{0, 1});

  const Front par[] = {moving(0, 0, 1), moving(1, 1, 1)};
  CHECK_FALSE(next_collision(par, 0));
  const Front apart[] = {moving(0, 0, -1), moving(1, 1, 1)};
  CHECK_FALSE(next_collision(apart, 0));

  const Front three[] = {moving(0, 0, 1), moving(1, 1, 0), moving(2, 2, -1), moving(3, 5, 0)};
  const auto c3 = next_collision(three, 0);
  REQUIRE(c3);
  CHECK(c3->t == doctest::Approx(1));
  CHECK(c3->x == doctest::Approx(1));
  CHECK(c3->participants == std::vector<FrontId>{0, 1, 2});
}

TEST_CASE("Glimm functional") {
  const Front one[] = {physical(0, Family::Two, WaveKind::Shock, Real(0.3))};
  const GlimmValue g1 = glimm_functional(one, 100);
  CHECK(g1.V == doctest::Approx(0.3));
  CHECK(g1.Q == 0);
  CHECK(g1.F == doctest::Approx(0.3));

  const Front pair[] = {physical(0, Family::Three, WaveKind::Shock, Real(0.2)),
                        physical(1, Family::One, WaveKind::Shock, Real(0.5))};
  CHECK(glimm_functional(pair, 100).Q == doctest::Approx(0.1));
  const Front sep[] = {physical(0, Family::One, WaveKind::Shock, Real(0.2)),
                       physical(1, Family::Three, WaveKind::Shock, Real(0.5))};
  CHECK(glimm_functional(sep, 100).Q == 0);
  const Front rr[] = {physical(0, Family::Two, WaveKind::Rarefaction, Real(0.2)),
                      physical(1, Family::Two, WaveKind::Rarefaction, Real(0.5))};
  CHECK(glimm_functional(rr, 100).Q == 0);

  Rng rng(11);
  for (int n = 0; n < 50; ++n) {
    std::vector<Front> fr;
    for (int k = 0; k < 12; ++k) {
      const int fam = 1 + static_cast<int>(rng.uniform() * 4);
      fr.push_back(physical(k, family_from_index(std::min(fam, 4)),
                            rng.uniform() < 0.5 ? WaveKind::Shock : WaveKind::Rarefaction, rng.uniform()));
    }
    const GlimmValue g = glimm_functional(fr, 7);
    Real V = 0;
    for (const Front& f : fr) V += f.strength;
    CHECK(g.V == doctest::Approx(V));
    CHECK(g.Q == doctest::Approx(brute_force_Q(fr)).epsilon(1e-13));
    CHECK(g.F == doctest::Approx(V + 7 * g.Q));
  }
}

TEST_CASE("1-front crossing a 3-front keeps both strengths") {
  const SystemParams p(Real(0.09));
  FTParams fp;
  IdAllocator ids;
  const State UL{Real(0.1), Real(0.05), Real(-0.1)};
  const Wave w3 = make_wave(Family::Three, Real(0.02), UL, p);
  const Wave w1 = make_wave(Family::One, Real(-0.01), w3.right, p);
  const auto in = to_fronts({w3, w1}, fp, p, ids);
  REQUIRE(in.size() == 2);
  const auto out = resolve_collision(in, 0, 0, fp, p, ids);
  REQUIRE(out.size() == 2);
  CHECK(out[0].family == Family::One);
  CHECK(out[1].family == Family::Three);
  CHECK(out[0].strength == in[1].strength);
  CHECK(out[1].strength == in[0].strength);
  CHECK(out[0].kind == WaveKind::Shock);
  CHECK(out[1].kind == w3.kind);
  CHECK(out[0].left == UL);
  CHECK(out[1].right == w1.right);
  CHECK(out[0].speed == doctest::Approx(lambda(1, out[0].left, p)).epsilon(0.01));
}

TEST_CASE("merging 2-shocks add their v-jumps") {
  const SystemParams p(Real(0.09));
  FTParams fp;
  IdAllocator ids;
  const State UL{Real(0.05), Real(0.1), Real(0.02)};
  const Wave a = make_wave(Family::Two, Real(-0.04), UL, p);
  const Wave b = make_wave(Family::Two, Real(-0.03), a.right, p);
  const auto in = to_fronts({a, b}, fp, p, ids);
  const auto out = resolve_collision(in, 0, 0, fp, p, ids);
  std::size_t twos = 0;
  for (const Front& f : out)
    if (f.family == Family::Two) {
      ++twos;
      CHECK(f.kind == WaveKind::Shock);
      CHECK(f.strength == doctest::Approx(0.07).epsilon(1e-12));
      CHECK(f.speed == doctest::Approx(f.left.v + f.right.v).epsilon(1e-12));
    }
  CHECK(twos == 1);
  const RiemannSolution ref = solve_riemann(UL, b.right, p);
  for (const Wave& w : ref.waves)
    for (const Front& f : out)
      if (f.family == w.family) CHECK(f.strength == doctest::Approx(w.strength).epsilon(1e-9));
}

TEST_CASE("a 1-shock reflecting off a big 2-shock") {
  const ScenarioParams sp = derive_params(Real(0.3));
  const SystemParams p(sp.eta);
  FTParams fp = default_ft_params(sp, 3);
  IdAllocator ids;
  const Wave J = make_wave(Family::Two, -sp.omega, sp.U_I, p);
  const Real s = sp.omega;
  const Wave S = make_wave(Family::One, signed_parameter(Family::One, WaveKind::Shock, s), J.right, p);
  auto in = to_fronts({J, S}, fp, p, ids);
  in[0].generation = 0;
  in[1].generation = 0;
  const auto out = resolve_collision(in, 0, 0, fp, p, ids);
  const Front *t1 = nullptr, *j2 = nullptr, *r3 = nullptr;
  for (const Front& f : out) {
    if (f.family == Family::One) t1 = &f;
    if (f.family == Family::Two) j2 = &f;
    if (f.family == Family::Three) r3 = &f;
  }
  REQUIRE(t1);
  REQUIRE(j2);
  REQUIRE(r3);
  CHECK(std::fabs(j2->strength - sp.omega) <= sp.omega * sp.omega);
  CHECK(std::fabs(j2->speed - J.speed_lo) <= sp.omega * sp.omega);
  CHECK(std::fabs(t1->strength - s) <= s * sp.omega);
  CHECK(r3->strength >= s * sp.omega / 10);
  CHECK(r3->strength <= s * sp.omega * 10);
  CHECK(r3->generation == 1);
  CHECK(t1->generation == 0);
}

TEST_CASE("evolution of datum Z") {
  const ScenarioParams sp = derive_params(Real(0.3));
  const SystemParams p(sp.eta);
  const FTParams fp = default_ft_params(sp, 5);
  const StepFunction Z = build_piecewise_datum(sp, p);
  const FTSolution a = evolve(Z, fp, p);
  const FTSolution b = evolve(Z, fp, p);
  CHECK_FALSE(a.truncated);
  REQUIRE(a.events.size() == b.events.size());
  REQUIRE(a.fronts.size() == b.fronts.size());
  for (std::size_t k = 0; k < a.events.size(); ++k) {
    CHECK(a.events[k].t == b.events[k].t);
    CHECK(a.events[k].x == b.events[k].x);
    CHECK(a.events[k].out_ids == b.events[k].out_ids);
    CHECK(a.events[k].glimm.F == b.events[k].glimm.F);
  }
  Real F = a.initial_glimm.F;
  for (const Event& e : a.events) {
    CHECK(e.glimm.F <= F);
    F = e.glimm.F;
  }
  for (const Front& f : a.fronts) {
    if (!f.physical()) continue;
    const Real lo[] = {-6, -2, 3}, hi[] = {Real(-2.5), 2, 5};
    CHECK(f.speed >= lo[family_index(f.family) - 1]);
    CHECK(f.speed <= hi[family_index(f.family) - 1]);
  }

  const StepFunction s0 = sample_solution(a, 0);
  CHECK(s0.size() == Z.size());
  for (std::size_t k = 0; k < Z.values.size(); ++k) CHECK(norm(s0.values[k] - Z.values[k]) <= 1e-15);
  const StepFunction mid = sample_solution(a, sp.Ttilde / 2);
  CHECK(mid.left_tail() == Z.left_tail());
  CHECK(norm(mid.right_tail() - Z.right_tail()) <= 1e-12);
  CHECK(mid.size() > 6);
  CHECK_THROWS_AS(sample_solution(a, a.horizon * 2), DomainError);

  FTParams tight = fp;
  tight.max_fronts = 1;
  CHECK(evolve(Z, tight, p).truncated);
}

TEST_CASE("a single shock translates") {
  const SystemParams p(Real(0.09));
  FTParams fp;
  fp.t_end = 3;
  const State UL{0, Real(0.1), 0};
  const State UR = shock_state(2, Real(0.05), UL, p);
  const FTSolution sol = evolve({{Real(0.5)}, {UL, UR}}, fp, p);
  CHECK(sol.events.empty());
  for (Real t : {Real(0), Real(1), Real(2.5)}) {
    const StepFunction s = sample_solution(sol, t);
    REQUIRE(s.size() == 1);
    CHECK(s.breakpoints[0] == doctest::Approx(0.5 + 0.15 * t).epsilon(1e-12));
    CHECK(s.values[0] == UL);
    CHECK(s.values[1] == UR);
  }
}

TEST_CASE("parameter validation") {
  FTParams fp;
  fp.delta_rar = 0;
  CHECK_THROWS_AS(fp.validate(), DomainError);
  FTParams ok;
  CHECK_NOTHROW(ok.validate());
}
