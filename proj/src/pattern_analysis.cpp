#include "wft/pattern_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace wft {

Real Trajectory::position(Real t) const {
  if (points.empty()) throw DomainError("trajectory: empty");
  auto it = std::upper_bound(points.begin(), points.end() - 1, t,
                             [](Real v, const TrajectoryPoint& p) { return v < p.t; });
  if (it != points.begin()) --it;
  if (it == points.end() - 1 && points.size() > 1) --it;
  const auto& a = *it;
  const auto& b = *(it + 1 == points.end() ? it : it + 1);
  if (b.t == a.t) return a.x;
  return a.x + (b.x - a.x) * (t - a.t) / (b.t - a.t);
}

Real Trajectory::drift() const {
  if (points.size() < 2 || !(t_end > t_begin)) return 0;
  return (points.back().x - points.front().x) / (points.back().t - points.front().t);
}

bool Trajectory::contains(FrontId id) const { return std::find(ids.begin(), ids.end(), id) != ids.end(); }

namespace {

struct Index {
  std::vector<std::int64_t> birth_event, death_event;
};

Index build_index(const FTSolution& sol) {
  Index idx;
  idx.birth_event.assign(sol.fronts.size(), -1);
  idx.death_event.assign(sol.fronts.size(), -1);
  for (std::size_t e = 0; e < sol.events.size(); ++e) {
    for (FrontId id : sol.events[e].in_ids) idx.death_event[static_cast<std::size_t>(id)] = static_cast<std::int64_t>(e);
    for (FrontId id : sol.events[e].out_ids) idx.birth_event[static_cast<std::size_t>(id)] = static_cast<std::int64_t>(e);
  }
  return idx;
}

bool in_band(const Front& f, Real omega) {
  return f.family == Family::Two && f.strength >= omega / 2 && f.strength <= 2 * omega;
}

struct Chain {
  Trajectory traj;
  std::int64_t meeting_event = -1;
};

Chain follow(const FTSolution& sol, const Index& idx, FrontId root, Real omega) {
  Chain c;
  FrontId cur = root;
  c.traj.ids.push_back(root);
  c.traj.t_begin = sol.front(root).birth_t;
  while (true) {
    std::int64_t e = idx.death_event[static_cast<std::size_t>(cur)];
    if (e < 0) break;
    const Event& ev = sol.events[static_cast<std::size_t>(e)];
    int big_in = 0;
    for (FrontId id : ev.in_ids) big_in += in_band(sol.front(id), omega);
    if (big_in >= 2) {
      c.meeting_event = e;
      break;
    }
    FrontId next = -1;
    for (FrontId id : ev.out_ids) {
      const Front& f = sol.front(id);
      if (in_band(f, omega) && (next < 0 || f.strength > sol.front(next).strength)) next = id;
    }
    if (next < 0) break;
    Real jump = std::fabs(sol.front(next).strength - sol.front(cur).strength);
    c.traj.max_strength_jump = std::max(c.traj.max_strength_jump, jump);
    if (jump > omega * omega) ++c.traj.drift_flags;
    c.traj.ids.push_back(next);
    cur = next;
  }
  c.traj.t_end = std::min(sol.front(cur).death_t, sol.horizon);
  for (FrontId id : c.traj.ids) {
    const Front& f = sol.front(id);
    c.traj.points.push_back({f.birth_t, f.x_birth, f.strength, id});
  }
  const Front& last = sol.front(cur);
  c.traj.points.push_back({c.traj.t_end, last.position(c.traj.t_end), last.strength, cur});
  return c;
}

bool is_root(const FTSolution& sol, const Front& f, Real omega) {
  if (!in_band(f, omega)) return false;
  for (FrontId id : f.parents)
    if (in_band(sol.front(id), omega)) return false;
  return true;
}

}  // namespace

BigShocks identify_big_2shocks(const FTSolution& sol, const ScenarioParams& sp) {
  BigShocks out;
  Index idx = build_index(sol);
  Real om = sp.omega;
  std::optional<Chain> best_l, best_r;
  for (const Front& f : sol.fronts) {
    if (!is_root(sol, f, om)) continue;
    bool near_l = std::fabs(f.x_birth + sp.q) <= sp.q / 2;
    bool near_r = std::fabs(f.x_birth - sp.q) <= sp.q / 2;
    if (!near_l && !near_r) continue;
    Chain c = follow(sol, idx, f.id, om);
    Real d = c.traj.drift();
    Real life = c.traj.t_end - c.traj.t_begin;
    auto better = [&](const std::optional<Chain>& b) {
      return !b || life > b->traj.t_end - b->traj.t_begin;
    };
    if (near_l && d >= om / 3 && d <= 3 * om && better(best_l)) best_l = c;
    if (near_r && -d >= om / 3 && -d <= 3 * om && better(best_r)) best_r = c;
  }
  if (!best_l || !best_r) {
    out.message = "pattern absent: fewer than two big 2-shock candidates";
    return out;
  }
  out.found = true;
  out.Jl = best_l->traj;
  out.Jr = best_r->traj;
  if (best_l->meeting_event >= 0 && best_l->meeting_event == best_r->meeting_event)
    out.meeting_time = sol.events[static_cast<std::size_t>(best_l->meeting_event)].t;
  return out;
}

namespace {

struct Window {
  Real lo = 0, hi = 0;
  bool empty() const { return !(hi > lo); }
};

Window region_window(const FTSolution& sol, const BigShocks& big) {
  if (!big.found) return {};
  Real lo = std::max(big.Jl.t_begin, big.Jr.t_begin);
  Real hi = big.meeting_time ? *big.meeting_time : std::min(big.Jl.t_end, big.Jr.t_end);
  return {lo, std::min(hi, sol.horizon)};
}

bool big_member(const BigShocks& big, FrontId id) { return big.Jl.contains(id) || big.Jr.contains(id); }

// Follows same-family, same-generation parents back to the interaction with a
// big shock that created the front; returns the event index or -1.
std::int64_t origin_event(const FTSolution& sol, const Index& idx, const BigShocks& big, FrontId id) {
  const Front* f = &sol.front(id);
  while (true) {
    std::int64_t e = idx.birth_event[static_cast<std::size_t>(f->id)];
    if (e < 0) return -1;
    const Front* next = nullptr;
    for (FrontId q : f->parents) {
      const Front& c = sol.front(q);
      if (c.family == f->family && c.generation == f->generation && (!next || c.strength > next->strength)) next = &c;
    }
    if (!next) {
      for (FrontId in : sol.events[static_cast<std::size_t>(e)].in_ids)
        if (big_member(big, in)) return e;
      return -1;
    }
    f = next;
  }
}

}  // namespace

Reflections extract_reflections(const FTSolution& sol, const BigShocks& big, const ScenarioParams& sp) {
  (void)sp;
  Reflections out;
  Window win = region_window(sol, big);
  if (win.empty()) return out;
  Index idx = build_index(sol);
  std::unordered_set<FrontId> cancelled;
  for (const Event& ev : sol.events) {
    if (!(ev.t >= win.lo && ev.t < win.hi)) continue;
    if (!(ev.x > big.Jl.position(ev.t) && ev.x < big.Jr.position(ev.t))) continue;
    for (Family fam : {Family::One, Family::Three}) {
      const Front* shock = nullptr;
      Real rar = 0;
      for (FrontId id : ev.in_ids) {
        const Front& f = sol.front(id);
        if (f.family != fam) continue;
        if (f.kind == WaveKind::Shock) {
          if (!shock || f.strength > shock->strength) shock = &f;
        } else {
          rar += f.strength;
        }
      }
      if (!shock || !(rar > 0)) continue;
      Real out_shock = 0;
      for (FrontId id : ev.out_ids) {
        const Front& f = sol.front(id);
        if (f.family == fam && f.kind == WaveKind::Shock) out_shock = std::max(out_shock, f.strength);
      }
      if (out_shock < shock->strength / 2) {
        out.cancellations.push_back({ev.t, ev.x, fam, shock->generation, shock->strength, rar, out_shock});
        cancelled.insert(shock->id);
      }
    }
  }
  // A shock is erased when its same-family continuation ends in a cancellation;
  // erased shocks never reach the opposite big shock and do not count.
  auto erased = [&](const Front& start) {
    const Front* f = &start;
    for (;;) {
      if (cancelled.count(f->id)) return true;
      std::int64_t e = idx.death_event[static_cast<std::size_t>(f->id)];
      if (e < 0) return false;
      const Front* next = nullptr;
      for (FrontId id : sol.events[static_cast<std::size_t>(e)].out_ids) {
        const Front& g = sol.front(id);
        if (g.family == f->family && g.kind == WaveKind::Shock && (!next || g.strength > next->strength)) next = &g;
      }
      if (!next) return false;
      f = next;
    }
  };
  std::vector<Generation> gens;
  for (const Front& f : sol.fronts) {
    if (f.family != Family::One && f.family != Family::Three) continue;
    if (f.kind != WaveKind::Shock) continue;
    Real lo = std::max(f.birth_t, win.lo), hi = std::min(f.death_t, win.hi);
    if (!(hi > lo)) continue;
    Real tm = (lo + hi) / 2;
    Real x = f.position(tm);
    if (!(x > big.Jl.position(tm) && x < big.Jr.position(tm))) continue;
    if (f.generation < 0) continue;
    if (!cancelled.empty() && erased(f)) continue;
    std::size_t j = static_cast<std::size_t>(f.generation);
    if (gens.size() <= j) gens.resize(j + 1);
    gens[j].j = static_cast<int>(j);
    if (f.family == Family::Three && f.strength > gens[j].R_strength) {
      gens[j].R_strength = f.strength;
      gens[j].R_id = f.id;
    }
    if (f.family == Family::One && f.strength > gens[j].S_strength) {
      gens[j].S_strength = f.strength;
      gens[j].S_id = f.id;
    }
  }
  for (auto& g : gens) {
    if (!(g.strength() > 0)) break;
    for (int fam : {3, 1}) {
      FrontId id = fam == 3 ? g.R_id : g.S_id;
      if (id < 0) continue;
      std::int64_t e = origin_event(sol, idx, big, id);
      Real t = e >= 0 ? sol.events[static_cast<std::size_t>(e)].t : sol.front(id).birth_t;
      (fam == 3 ? g.R_time : g.S_time) = t;
      if (g.j == 0) continue;
      // 1-shocks reflect off J_l into 3-shocks, 3-shocks off J_r into 1-shocks.
      const Trajectory& side = fam == 3 ? big.Jl : big.Jr;
      bool ok = false;
      if (e >= 0)
        for (FrontId in : sol.events[static_cast<std::size_t>(e)].in_ids) ok |= side.contains(in);
      if (!ok) ++out.parity_violations;
    }
    out.generations.push_back(g);
  }
  return out;
}

DecayFit decay_fit(const std::vector<Real>& s, Real omega, Real eps) {
  if (s.size() < 2) throw DomainError("decay_fit: need at least two generations");
  for (Real v : s)
    if (!(v > 0)) throw DomainError("decay_fit: non-positive strength");
  DecayFit fit;
  fit.J_used = static_cast<int>(s.size());
  fit.ratio = std::pow(s.back() / s.front(), 1 / Real(s.size() - 1));
  fit.K_low = kInf;
  fit.K_high = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    Real c = s[j] / std::pow(omega, Real(j + 1));
    fit.K_low = std::min(fit.K_low, c);
    fit.K_high = std::max(fit.K_high, c);
  }
  fit.K = std::max(fit.K_high, std::sqrt(eps) / fit.K_low);
  return fit;
}

Functionals functionals_v13_r13(const FTSolution& sol, const BigShocks& big, Real t) {
  Window win = region_window(sol, big);
  if (win.empty() || !(t >= win.lo && t < win.hi)) throw DomainError("functionals_v13_r13: t outside the region window");
  Real xl = big.Jl.position(t), xr = big.Jr.position(t);
  Functionals out;
  for (const Front* f : sol.live_at(t)) {
    if (f->family != Family::One && f->family != Family::Three) continue;
    Real x = f->position(t);
    if (!(x > xl && x < xr)) continue;
    (f->kind == WaveKind::Shock ? out.V13 : out.R13) += f->strength;
  }
  return out;
}

Region region_from_string(const std::string& s) {
  if (s == "left_of_Jl") return Region::LeftOfJl;
  if (s == "right_of_Jr") return Region::RightOfJr;
  if (s == "between") return Region::Between;
  throw DomainError("unknown region: " + s);
}

const char* to_string(Region r) {
  switch (r) {
    case Region::LeftOfJl: return "left_of_Jl";
    case Region::RightOfJr: return "right_of_Jr";
    case Region::Between: return "between";
  }
  return "?";
}

Census wave_census(const FTSolution& sol, const BigShocks& big, Real t, Region region, const std::vector<int>& families) {
  bool l_alive = big.found && big.Jl.alive_at(t), r_alive = big.found && big.Jr.alive_at(t);
  Real xl, xr;
  if (l_alive && r_alive) {
    xl = big.Jl.position(t);
    xr = big.Jr.position(t);
  } else if (l_alive || r_alive) {
    xl = xr = l_alive ? big.Jl.position(t) : big.Jr.position(t);
  } else {
    xl = xr = kInf;
  }
  bool between_exists = l_alive && r_alive;
  Census c;
  for (const Front* f : sol.live_at(t)) {
    if (big.found && big_member(big, f->id)) continue;
    Real x = f->position(t);
    Region where;
    if (between_exists)
      where = x < xl ? Region::LeftOfJl : (x > xr ? Region::RightOfJr : Region::Between);
    else if (r_alive)
      where = x > xr ? Region::RightOfJr : Region::LeftOfJl;
    else
      where = x < xl ? Region::LeftOfJl : Region::RightOfJr;
    if (where != region) continue;
    if (!f->physical()) {
      ++c.np_count;
      c.np_strength += f->strength;
      continue;
    }
    int i = family_index(f->family);
    if (std::find(families.begin(), families.end(), i) == families.end()) continue;
    ++c.count[static_cast<std::size_t>(i - 1)];
    c.strength[static_cast<std::size_t>(i - 1)] += f->strength;
  }
  return c;
}

ConfinementResult confinement_check(const FTSolution& sol, const BigShocks& big, Real t_from) {
  ConfinementResult out;
  Window win = region_window(sol, big);
  Real lo0 = std::max(t_from, win.lo);
  if (win.empty() || !(win.hi > lo0)) return out;
  for (const Front& f : sol.fronts) {
    if (!f.physical() || big_member(big, f.id)) continue;
    Real lo = std::max(f.birth_t, lo0), hi = std::min(f.death_t, win.hi);
    if (!(hi > lo)) continue;
    Real tm = (lo + hi) / 2, x = f.position(tm);
    if (x < big.Jl.position(tm) && (f.family == Family::Two || f.family == Family::Three)) {
      ++out.left_violations;
      out.left_strength += f.strength;
    }
    if (x > big.Jr.position(tm) && (f.family == Family::One || f.family == Family::Two)) {
      ++out.right_violations;
      out.right_strength += f.strength;
    }
  }
  return out;
}

PatternReport verify_pattern(const FTSolution& sol, const ScenarioParams& sp, const PatternOptions& opt) {
  PatternReport rep;
  rep.incomplete = sol.truncated;
  if (rep.incomplete) rep.notes.push_back("evolution truncated: verdict incomplete");
  if (sol.horizon < sp.Ttilde) {
    rep.incomplete = true;
    rep.notes.push_back("solution horizon below Ttilde");
  }
  rep.big = identify_big_2shocks(sol, sp);
  rep.crit_big_shocks = rep.big.found;
  rep.noise_floor = 10 * (sol.max_np_total + sol.absorbed_total + sol.params.delta_rar);
  if (!rep.big.found) {
    rep.notes.push_back(rep.big.message);
    return rep;
  }
  if (rep.big.Jl.drift_flags + rep.big.Jr.drift_flags > 0)
    rep.notes.push_back("big 2-shock strength changed by more than omega^2 at an interaction");
  rep.reflections = extract_reflections(sol, rep.big, sp);
  const auto& gens = rep.reflections.generations;
  rep.generations_found = static_cast<int>(gens.size());
  rep.crit_generations = rep.generations_found >= opt.min_generations;
  std::vector<Real> used;
  for (const auto& g : gens) {
    if (!(g.strength() > rep.noise_floor)) break;
    used.push_back(g.strength());
  }
  rep.J_used = static_cast<int>(used.size());
  rep.crit_resolved = rep.J_used >= opt.min_generations;
  rep.monotone_decay = true;
  for (std::size_t j = 1; j < used.size(); ++j) rep.monotone_decay &= used[j] < used[j - 1];
  if (used.size() >= 2) {
    rep.fit = decay_fit(used, sp.omega, sp.eps);
    rep.crit_decay = rep.fit->K <= opt.K_cap;
  }
  Real t_conf = opt.confinement_time < 0 ? 8 / sp.omega : opt.confinement_time;
  rep.confinement = confinement_check(sol, rep.big, t_conf);
  rep.crit_confinement = rep.confinement.pass();
  if (rep.reflections.parity_violations > 0) rep.notes.push_back("reflection parity violated");
  if (!rep.reflections.cancellations.empty()) rep.notes.push_back("cancellation events recorded");
  Window win = region_window(sol, rep.big);
  for (std::size_t j = 0; j + 1 < gens.size(); ++j) {
    Real a = std::max(gens[j].R_time, gens[j].S_time);
    Real nb[2] = {gens[j + 1].R_id >= 0 ? gens[j + 1].R_time : kInf, gens[j + 1].S_id >= 0 ? gens[j + 1].S_time : kInf};
    Real b = std::min(nb[0], nb[1]);
    Real t = (a + b) / 2;
    if (!(b > a) || !std::isfinite(b) || !(t >= win.lo && t < win.hi)) continue;
    rep.functionals.push_back({t, static_cast<int>(j), functionals_v13_r13(sol, rep.big, t)});
  }
  rep.pass = !rep.incomplete && rep.crit_big_shocks && rep.crit_generations && rep.crit_decay &&
             rep.crit_confinement && rep.crit_resolved;
  return rep;
}

CollapseReport collapse_check(const FTSolution& sol, const ScenarioParams& sp, Real t_lo, Real t_hi, int samples) {
  if (!(t_hi > t_lo) || samples < 2) throw DomainError("collapse_check: bad window");
  if (sol.horizon < t_hi) throw DomainError("collapse_check: solution horizon below the window");
  CollapseReport rep;
  Real om = sp.omega, lo13 = om * std::sqrt(sp.eps) / 2, hi13 = 2 * om;
  for (int k = 0; k < samples; ++k) {
    Real t = t_lo + (t_hi - t_lo) * k / (samples - 1);
    std::vector<std::string> fail;
    std::vector<CollapseShock> six;
    std::unordered_set<FrontId> chosen;
    auto live = sol.live_at(t);
    for (int block = 0; block < 2; ++block) {
      const Front* pick[3] = {nullptr, nullptr, nullptr};
      for (const Front* f : live) {
        if (!f->physical() || f->kind != WaveKind::Shock) continue;
        if ((f->position(t) < 0) != (block == 0)) continue;
        auto& slot = pick[family_index(f->family) - 1];
        if (!slot || f->strength > slot->strength) slot = f;
      }
      for (int i = 0; i < 3; ++i) {
        if (!pick[i]) {
          fail.push_back("missing " + std::string(family_name(family_from_index(i + 1))) + "-shock in block " +
                         std::to_string(block));
          continue;
        }
        const Front* f = pick[i];
        chosen.insert(f->id);
        six.push_back({f->family, f->id, f->position(t), f->speed, f->strength});
        if (i == 1) {
          if (f->strength < om / 2 || f->strength > 2 * om) fail.push_back("2-shock strength outside [omega/2, 2 omega]");
          Real ratio = (block == 0 ? f->speed : -f->speed) / om;
          if (!(ratio >= Real(1) / 3 && ratio <= 3)) fail.push_back("2-shock speed not within factor 3 of omega");
        } else if (f->strength < lo13 || f->strength > hi13) {
          fail.push_back("1-/3-shock strength outside [omega sqrt(eps)/2, 2 omega]");
        }
      }
      if (pick[0] && pick[1] && pick[2] &&
          !(pick[0]->position(t) < pick[1]->position(t) && pick[1]->position(t) < pick[2]->position(t)))
        fail.push_back("block " + std::to_string(block) + " not ordered 1, 2, 3");
    }
    Real r13 = 0, other = 0;
    for (const Front* f : live) {
      if (chosen.count(f->id)) continue;
      if (f->family == Family::One || f->family == Family::Three)
        r13 += f->strength;
      else
        other += f->strength;
    }
    if (r13 > 2 * om) fail.push_back("residual 1-/3-strength above 2 omega");
    if (other > 100 * sp.r) fail.push_back("residual strength outside families 1, 3 above 100 r");
    rep.shocks = six;
    rep.residual13 = r13;
    rep.residual_other = other;
    rep.failures = fail;
    if (fail.empty()) {
      rep.pass = true;
      rep.t_bar = t;
      return rep;
    }
  }
  return rep;
}

Real kinematic_placement(const ScenarioParams& sp, Real t_arrival, Real speed) {
  return -sp.q + sp.omega * t_arrival - speed * t_arrival;
}

namespace {

StepFunction with_inserts(const StepFunction& base, const ScenarioParams& sp, const SystemParams& p,
                          const std::vector<AdversarialInsert>& ins) {
  StepFunction d = base;
  for (const auto& a : ins) d = adversarial_rarefaction(d, sp, p, a.strength, a.placement);
  return d;
}

// Time of the interaction of J_l with its strongest incoming generation-k 1-shock.
std::optional<Real> reflection_time(const FTSolution& sol, const BigShocks& big, int k) {
  std::optional<Real> t;
  Real best = 0;
  for (const Event& ev : sol.events) {
    bool jl = false;
    for (FrontId id : ev.in_ids) jl |= big.Jl.contains(id);
    if (!jl) continue;
    for (FrontId id : ev.in_ids) {
      const Front& f = sol.front(id);
      if (f.family == Family::One && f.kind == WaveKind::Shock && f.generation == k && f.strength > best) {
        best = f.strength;
        t = ev.t;
      }
    }
  }
  return t;
}

std::optional<Real> arrival_time(const FTSolution& sol, const BigShocks& big, Real strength, Real after) {
  for (const Event& ev : sol.events) {
    if (ev.t <= after) continue;
    bool jl = false, rar = false;
    for (FrontId id : ev.in_ids) {
      const Front& f = sol.front(id);
      jl |= big.Jl.contains(id);
      rar |= f.family == Family::Three && f.kind == WaveKind::Rarefaction && f.strength >= strength / 2;
    }
    if (jl && rar) return ev.t;
  }
  return std::nullopt;
}

}  // namespace

AdversarialCalibration calibrate_adversarial(const StepFunction& base, const ScenarioParams& sp,
                                             const FTParams& params, Real strength, int count, Real lag) {
  SystemParams p(sp.eta);
  AdversarialCalibration cal;
  for (int k = 0; k < count; ++k) {
    FTParams fp = params;
    fp.t_end = std::min(params.t_end, Real(30) * (k + 2));
    FTSolution ref = evolve(with_inserts(base, sp, p, cal.inserts), fp, p);
    BigShocks big = identify_big_2shocks(ref, sp);
    if (!big.found) throw DomainError("calibrate_adversarial: big shocks not found");
    auto T = reflection_time(ref, big, k);
    if (!T) throw DomainError("calibrate_adversarial: no reflection of generation " + std::to_string(k));
    Real target = *T + lag;
    fp.t_end = std::min(params.t_end, target + 5);
    const Real after = cal.arrival_times.empty() ? -kInf : cal.arrival_times.back();
    auto arrival = [&](Real x) {
      auto ins = cal.inserts;
      ins.push_back({strength, x});
      FTSolution s = evolve(with_inserts(base, sp, p, ins), fp, p);
      auto a = arrival_time(s, identify_big_2shocks(s, sp), strength, after);
      if (!a) throw DomainError("calibrate_adversarial: rarefaction never reaches J_l");
      return *a;
    };
    Real x0 = kinematic_placement(sp, target, lambda(3, base.left_tail(), p));
    Real x1 = x0 - 1;
    for (const auto& a : cal.inserts) {
      if (std::fabs(x0 - a.placement) < 2) x0 -= 4;
      if (std::fabs(x1 - a.placement) < 2) x1 -= 4;
    }
    Real f0 = arrival(x0) - target, f1 = arrival(x1) - target;
    for (int it = 0; it < 40 && std::fabs(f1) > lag * Real(1e-3); ++it) {
      if (f1 == f0) throw ConvergenceError("calibrate_adversarial: flat secant");
      Real x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
      x0 = x1;
      f0 = f1;
      x1 = x2;
      f1 = arrival(x1) - target;
    }
    if (std::fabs(f1) > lag * Real(1e-3)) throw ConvergenceError("calibrate_adversarial: secant did not converge");
    cal.inserts.push_back({strength, x1});
    cal.target_times.push_back(target);
    cal.arrival_times.push_back(target + f1);
  }
  return cal;
}

}  // namespace wft
