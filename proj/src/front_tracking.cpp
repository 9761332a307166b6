#include "wft/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace wft {

State StepFunction::value_at(Real x) const {
  const auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
  return values[static_cast<std::size_t>(it - breakpoints.begin())];
}

Real StepFunction::total_variation() const {
  Real tv = 0;
  for (std::size_t k = 0; k + 1 < values.size(); ++k) tv += norm(values[k + 1] - values[k]);
  return tv;
}

void StepFunction::validate() const {
  if (values.size() != breakpoints.size() + 1)
    throw DomainError("StepFunction: need exactly one more value than breakpoints");
  for (std::size_t k = 1; k < breakpoints.size(); ++k)
    if (!(breakpoints[k] > breakpoints[k - 1])) throw DomainError("StepFunction: breakpoints must increase strictly");
  for (Real b : breakpoints)
    if (!std::isfinite(b)) throw DomainError("StepFunction: non-finite breakpoint");
}

StepFunction StepFunction::pruned() const {
  StepFunction out;
  out.values.push_back(values.front());
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (values[k + 1] == out.values.back()) continue;
    out.breakpoints.push_back(breakpoints[k]);
    out.values.push_back(values[k + 1]);
  }
  return out;
}

namespace {

template <class Op>
StepFunction combine(const StepFunction& a, const StepFunction& b, Op op) {
  std::vector<Real> xs;
  std::merge(a.breakpoints.begin(), a.breakpoints.end(), b.breakpoints.begin(), b.breakpoints.end(),
             std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  StepFunction out;
  out.breakpoints = xs;
  out.values.reserve(xs.size() + 1);
  out.values.push_back(op(a.left_tail(), b.left_tail()));
  for (Real x : xs) out.values.push_back(op(a.value_at(x), b.value_at(x)));
  return out;
}

}  // namespace

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const State& x, const State& y) { return x + y; });
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const State& x, const State& y) { return x - y; });
}

void FTParams::validate() const {
  if (!(delta_rar > 0)) throw DomainError("FTParams: delta_rar must be > 0");
  if (!(thresh_simplified > 0)) throw DomainError("FTParams: thresh_simplified must be > 0");
  if (!(np_speed > 5)) throw DomainError("FTParams: non-physical speed must exceed 5");
  if (!(t_end >= 0)) throw DomainError("FTParams: t_end must be >= 0");
  if (max_fronts < 1) throw DomainError("FTParams: max_fronts must be >= 1");
  if (!(clip_lo < clip_hi)) throw DomainError("FTParams: empty clip window");
  if (!(min_strength >= 0)) throw DomainError("FTParams: min_strength must be >= 0");
  if (!(merge_tol > 0)) throw DomainError("FTParams: merge_tol must be > 0");
  if (!(np_absorb_tol >= 0)) throw DomainError("FTParams: np_absorb_tol must be >= 0");
}

std::vector<const Front*> FTSolution::live_at(Real t) const {
  std::vector<const Front*> out;
  for (const Front& f : fronts)
    if (f.alive_at(t)) out.push_back(&f);
  std::sort(out.begin(), out.end(), [t](const Front* a, const Front* b) {
    const Real xa = a->position(t), xb = b->position(t);
    if (xa != xb) return xa < xb;
    if (a->speed != b->speed) return a->speed < b->speed;
    return a->id < b->id;
  });
  return out;
}

std::vector<Front> fronts_from_solution(const RiemannSolution& sol, Real t, Real x, const FTParams& params,
                                        const SystemParams& p, IdAllocator& ids) {
  std::vector<Front> out;
  for (const Wave& w : sol.waves) {
    if (w.strength == 0) continue;
    Front f;
    f.family = w.family;
    f.kind = w.kind;
    f.birth_t = t;
    f.x_birth = x;
    if (w.kind == WaveKind::Shock || !w.physical()) {
      f.id = ids.next();
      f.speed = w.speed_lo;
      f.left = w.left;
      f.right = w.right;
      f.strength = w.strength;
      out.push_back(f);
      continue;
    }
    const Real ratio = w.strength / params.delta_rar;
    if (ratio > 1e6) throw DomainError("rarefaction discretisation would need more than 1e6 fronts");
    const int n = std::max(1, static_cast<int>(std::ceil(ratio)));
    const int fam = family_index(w.family);
    State prev = w.left;
    const Real param = signed_parameter(w.family, w.kind, w.strength);
    const State r = fam == 1 ? r1(w.left) : r3(w.left);
    for (int k = 1; k <= n; ++k) {
      State next;
      if (k == n) next = w.right;
      else if (fam == 2) next = rarefaction_state(2, w.strength / n, prev, p);
      else next = w.left + (param * k / n) * r;
      f.id = ids.next();
      f.left = prev;
      f.right = next;
      f.strength = fam == 2 ? std::fabs(next.v - prev.v) : w.strength / n;
      f.speed = lambda(fam, next, p);
      out.push_back(f);
      prev = next;
    }
  }
  return out;
}

namespace {

// Drops 1-/3-waves weaker than min_strength. When a 2-wave of at least
// min_strength is present it takes up the mismatch: waves left of it are
// rebuilt forward from UL, waves right of it backward from UR, so the 1- and
// 3-fronts stay exact. Otherwise the mismatch becomes a trailing non-physical wave.
Wave wave_ending_at(Family family, Real param, const State& UR, const SystemParams& p) {
  const State r = family == Family::One ? r1(UR) : r3(UR);
  Wave w = make_wave(family, param, UR - param * r, p);
  w.right = UR;
  return w;
}

RiemannSolution prune_weak(const RiemannSolution& sol, const State& UL, const State& UR, const FTParams& params,
                           const SystemParams& p, std::size_t& pruned, Real& absorbed) {
  bool any = false;
  for (const Wave& w : sol.waves)
    if (w.physical() && w.family != Family::Two && w.strength < params.min_strength) any = true;
  if (!any) return sol;
  auto weak = [&](const Wave& w) { return w.family != Family::Two && w.strength < params.min_strength; };
  std::ptrdiff_t mid = -1;
  bool np_present = false;
  for (std::size_t k = 0; k < sol.waves.size(); ++k) {
    if (!sol.waves[k].physical()) np_present = true;
    if (sol.waves[k].family == Family::Two && sol.waves[k].strength >= params.min_strength) mid = k;
  }
  if (np_present) mid = -1;
  RiemannSolution out;
  if (mid >= 0) {
    State cur = UL;
    for (std::ptrdiff_t k = 0; k < mid; ++k) {
      const Wave& w = sol.waves[k];
      if (!w.physical()) continue;
      if (weak(w)) {
        ++pruned;
        absorbed += w.strength;
        continue;
      }
      out.waves.push_back(make_wave(w.family, signed_parameter(w.family, w.kind, w.strength), cur, p));
      cur = out.waves.back().right;
    }
    std::vector<Wave> tail;
    State end = UR;
    for (std::ptrdiff_t k = static_cast<std::ptrdiff_t>(sol.waves.size()) - 1; k > mid; --k) {
      const Wave& w = sol.waves[k];
      if (!w.physical()) continue;
      if (weak(w)) {
        ++pruned;
        absorbed += w.strength;
        continue;
      }
      tail.push_back(wave_ending_at(w.family, signed_parameter(w.family, w.kind, w.strength), end, p));
      end = tail.back().left;
    }
    const Wave& w2 = sol.waves[mid];
    Wave nw = make_wave(Family::Two, signed_parameter(Family::Two, w2.kind, w2.strength), cur, p);
    nw.right = end;
    const Real dv = end.v - cur.v;
    nw.strength = std::fabs(dv);
    if (dv < 0) {
      nw.kind = WaveKind::Shock;
      nw.speed_lo = nw.speed_hi = cur.v + end.v;
    } else {
      nw.kind = WaveKind::Rarefaction;
      nw.speed_lo = lambda(2, cur, p);
      nw.speed_hi = lambda(2, end, p);
    }
    out.waves.push_back(nw);
    out.waves.insert(out.waves.end(), tail.rbegin(), tail.rend());
    return out;
  }
  State cur = UL;
  for (const Wave& w : sol.waves) {
    if (!w.physical()) continue;
    if (weak(w)) {
      ++pruned;
      continue;
    }
    Wave nw = make_wave(w.family, signed_parameter(w.family, w.kind, w.strength), cur, p);
    cur = nw.right;
    out.waves.push_back(nw);
  }
  if (cur != UR) {
    Wave np;
    np.family = Family::NonPhysical;
    np.left = cur;
    np.right = UR;
    np.strength = norm(UR - cur);
    np.speed_lo = np.speed_hi = params.np_speed;
    out.waves.push_back(np);
  }
  return out;
}

// Drops a trailing non-physical wave at roundoff level by moving its jump
// into the preceding physical wave.
RiemannSolution absorb_residual(RiemannSolution sol, const FTParams& params, Real& absorbed) {
  if (sol.waves.size() < 2) return sol;
  const Wave& last = sol.waves.back();
  if (last.physical() || last.strength > params.np_absorb_tol) return sol;
  Wave& prev = sol.waves[sol.waves.size() - 2];
  if (!prev.physical()) return sol;
  prev.right = last.right;
  absorbed += last.strength;
  sol.waves.pop_back();
  return sol;
}

std::string event_dump(std::span<const Front> incoming, Real t, Real x) {
  std::ostringstream os;
  os.precision(17);
  os << "event at t=" << t << " x=" << x << " incoming:";
  for (const Front& f : incoming)
    os << " [id " << f.id << " fam " << family_name(f.family) << " " << kind_name(f.kind) << " s=" << f.strength
       << " L=" << to_string(f.left) << " R=" << to_string(f.right) << "]";
  return os.str();
}

}  // namespace

std::vector<Front> init_fronts(const StepFunction& datum, const FTParams& params, const SystemParams& p,
                               IdAllocator* ids_in) {
  datum.validate();
  params.validate();
  if (datum.total_variation() > Real(0.3)) throw DomainError("init_fronts: datum TV exceeds 0.3");
  IdAllocator local;
  IdAllocator& ids = ids_in ? *ids_in : local;
  std::vector<Front> out;
  for (std::size_t k = 0; k < datum.breakpoints.size(); ++k) {
    const State& UL = datum.values[k];
    const State& UR = datum.values[k + 1];
    if (UL == UR) continue;
    RiemannSolution sol;
    try {
      sol = solve_riemann(UL, UR, p);
    } catch (const std::exception& e) {
      throw DomainError("init_fronts: Riemann problem at breakpoint " + std::to_string(k) + " failed: " + e.what());
    }
    std::size_t pruned = 0;
    Real absorbed = 0;
    sol = absorb_residual(prune_weak(sol, UL, UR, params, p, pruned, absorbed), params, absorbed);
    auto fr = fronts_from_solution(sol, 0, datum.breakpoints[k], params, p, ids);
    out.insert(out.end(), fr.begin(), fr.end());
  }
  return out;
}

std::optional<Real> meeting_time(const Front& a, const Front& b, Real t) {
  if (!(a.speed > b.speed)) return std::nullopt;
  const Real t0 = std::max(a.birth_t, b.birth_t);
  const Real gap = b.position(t0) - a.position(t0);
  const Real tm = gap <= 0 ? t0 : t0 + gap / (a.speed - b.speed);
  return std::max(tm, t);
}

namespace {

Real group_tol(const FTParams& params, Real x) { return params.merge_tol * std::max(Real(1), std::fabs(x)); }

}  // namespace

std::optional<Collision> next_collision(std::span<const Front> fronts, Real t, Real merge_tol) {
  std::optional<Collision> best;
  std::size_t best_k = 0;
  for (std::size_t k = 0; k + 1 < fronts.size(); ++k) {
    const auto tm = meeting_time(fronts[k], fronts[k + 1], t);
    if (!tm) continue;
    const Real x = (fronts[k].position(*tm) + fronts[k + 1].position(*tm)) / 2;
    if (!best || *tm < best->t || (*tm == best->t && x < best->x)) {
      best = Collision{*tm, x, {}};
      best_k = k;
    }
  }
  if (!best) return best;
  const Real tol = merge_tol * std::max(Real(1), std::fabs(best->x));
  std::size_t lo = best_k, hi = best_k + 1;
  while (lo > 0 && std::fabs(fronts[lo - 1].position(best->t) - best->x) <= tol) --lo;
  while (hi + 1 < fronts.size() && std::fabs(fronts[hi + 1].position(best->t) - best->x) <= tol) ++hi;
  for (std::size_t k = lo; k <= hi; ++k) best->participants.push_back(fronts[k].id);
  return best;
}

namespace {

// A 3-front crossing a 1-front: r1 and r3 depend on v only, so the fronts
// exchange order with unchanged curve parameters.
std::vector<Wave> crossing_waves(const Front& f3, const Front& f1, const State& UL, const State& UR,
                                 const SystemParams& p) {
  const Wave w1 = make_wave(Family::One, signed_parameter(Family::One, f1.kind, f1.strength), UL, p);
  Wave w3 = make_wave(Family::Three, signed_parameter(Family::Three, f3.kind, f3.strength), w1.right, p);
  w3.right = UR;
  return {w1, w3};
}

}  // namespace

std::vector<Front> resolve_collision(std::span<const Front> incoming, Real t, Real x, const FTParams& params,
                                     const SystemParams& p, IdAllocator& ids, bool* simplified,
                                     std::size_t* pruned_out, Real* absorbed_out) {
  if (incoming.size() < 2) throw DomainError("resolve_collision: need at least two fronts");
  const State UL = incoming.front().left;
  const State UR = incoming.back().right;

  const bool crossing =
      incoming.size() == 2 && incoming[0].family == Family::Three && incoming[1].family == Family::One;
  bool any_np = false;
  Real s1 = 0, s2 = 0;  // two largest strengths
  for (const Front& f : incoming) {
    if (!f.physical()) any_np = true;
    if (f.strength > s1) { s2 = s1; s1 = f.strength; }
    else if (f.strength > s2) s2 = f.strength;
  }
  const bool use_simplified = !crossing && (any_np || s1 * s2 < params.thresh_simplified);
  if (simplified) *simplified = use_simplified;

  RiemannSolution sol;
  try {
    if (crossing) {
      sol.waves = crossing_waves(incoming[0], incoming[1], UL, UR, p);
    } else if (use_simplified) {
      std::vector<IncomingWave> in;
      for (const Front& f : incoming) in.push_back({f.family, f.kind, f.strength});
      sol = solve_riemann_simplified(UL, UR, p, in, params.np_speed);
    } else {
      sol = solve_riemann(UL, UR, p);
    }
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("interaction solver failed: ") + e.what() + "; " + event_dump(incoming, t, x));
  }
  std::size_t pruned = 0;
  Real absorbed = 0;
  if (!crossing) sol = absorb_residual(prune_weak(sol, UL, UR, params, p, pruned, absorbed), params, absorbed);
  if (pruned_out) *pruned_out = pruned;
  if (absorbed_out) *absorbed_out = absorbed;
  std::vector<Front> out = fronts_from_solution(sol, t, x, params, p, ids);

  // Generation bookkeeping: transmitted fronts keep the generation of the
  // strongest incoming front of their family; fronts of a family absent from
  // the incoming set are new and count one more reflection when a big 2-front
  // takes part.
  bool big = false;
  std::array<const Front*, 4> strongest{nullptr, nullptr, nullptr, nullptr};  // 1, 3, any 1/3
  for (const Front& f : incoming) {
    if (f.family == Family::Two && f.strength >= params.big_wave_threshold) big = true;
    if (f.family == Family::One || f.family == Family::Three) {
      const int slot = f.family == Family::One ? 0 : 1;
      if (!strongest[slot] || f.strength > strongest[slot]->strength) strongest[slot] = &f;
      if (!strongest[2] || f.strength > strongest[2]->strength) strongest[2] = &f;
    }
  }
  std::vector<FrontId> parents;
  for (const Front& f : incoming) parents.push_back(f.id);
  for (Front& f : out) {
    f.parents = parents;
    if (f.family == Family::One || f.family == Family::Three) {
      const int slot = f.family == Family::One ? 0 : 1;
      if (strongest[slot]) f.generation = strongest[slot]->generation;
      else if (strongest[2]) f.generation = strongest[2]->generation + (big ? 1 : 0);
      else f.generation = 0;
    } else {
      f.generation = 0;
    }
  }
  return out;
}

GlimmValue glimm_functional(std::span<const Front* const> fronts, Real C) {
  GlimmValue g;
  std::array<Real, 4> all{0, 0, 0, 0}, shock{0, 0, 0, 0};  // families 1..3, index 0 unused
  Real np = 0;
  for (const Front* f : fronts) {
    g.V += f->strength;
    if (f->physical()) {
      const int k = family_index(f->family);
      Real acc = np;
      for (int m = k + 1; m <= 3; ++m) acc += all[m];
      acc += f->kind == WaveKind::Shock ? all[k] : shock[k];
      g.Q += f->strength * acc;
      all[k] += f->strength;
      if (f->kind == WaveKind::Shock) shock[k] += f->strength;
    } else {
      np += f->strength;
    }
  }
  g.F = g.V + C * g.Q;
  return g;
}

GlimmValue glimm_functional(std::span<const Front> fronts, Real C) {
  std::vector<const Front*> ptrs;
  for (const Front& f : fronts) ptrs.push_back(&f);
  return glimm_functional(std::span<const Front* const>(ptrs), C);
}

namespace {

struct QueueEntry {
  Real t, x;
  FrontId a, b;  // b < 0: exit of front a through the clip window
  std::uint64_t seq;
};

struct QueueLater {
  bool operator()(const QueueEntry& l, const QueueEntry& r) const {
    if (l.t != r.t) return l.t > r.t;
    if (l.x != r.x) return l.x > r.x;
    return l.seq > r.seq;
  }
};

class Tracker {
 public:
  Tracker(const StepFunction& datum, const FTParams& params, const SystemParams& p) : params_(params), p_(p) {
    sol_.datum = datum;
    sol_.params = params;
    sol_.eta = p.eta();
  }

  FTSolution run() {
    std::vector<Front> init = init_fronts(sol_.datum, params_, p_, &ids_);
    for (Front& f : init) add_front(std::move(f));
    FrontId prev = -1;
    for (const Front& f : sol_.fronts) {
      link_after(prev, f.id);
      prev = f.id;
    }
    live_ = sol_.fronts.size();
    sol_.max_live_fronts = live_;
    std::vector<const Front*> order = live_list();
    sol_.initial_glimm = glimm_functional(std::span<const Front* const>(order), params_.glimm_C);
    sol_.initial_tv = tv_of(order);
    sol_.max_np_total = np_of(order);
    for (const Front* f : order)
      if (!f->physical()) sol_.created_np_total += f->strength;
    if (live_ > params_.max_fronts) {
      sol_.truncated = true;
      sol_.horizon = 0;
      return std::move(sol_);
    }
    for (FrontId id = head_; id >= 0 && next_[id] >= 0; id = next_[id]) schedule_pair(id, next_[id], 0);
    schedule_exit(head_, 0);
    schedule_exit(tail_, 0);

    sol_.horizon = params_.t_end;
    while (!queue_.empty()) {
      const QueueEntry e = queue_.top();
      queue_.pop();
      if (e.t > params_.t_end) break;
      if (e.b < 0) {
        handle_exit(e);
        continue;
      }
      if (!alive(e.a) || !alive(e.b) || next_[e.a] != e.b) continue;
      if (!handle_collision(e)) break;
    }
    return std::move(sol_);
  }

 private:
  bool alive(FrontId id) const { return id >= 0 && sol_.fronts[id].death_t == kInf; }

  void add_front(Front f) {
    if (f.id != static_cast<FrontId>(sol_.fronts.size())) throw InternalError("front ids out of sequence");
    sol_.fronts.push_back(std::move(f));
    prev_.push_back(-1);
    next_.push_back(-1);
  }

  void link_after(FrontId after, FrontId id) {
    prev_[id] = after;
    if (after >= 0) {
      next_[id] = next_[after];
      next_[after] = id;
    } else {
      next_[id] = head_;
      head_ = id;
    }
    if (next_[id] >= 0) prev_[next_[id]] = id;
    else tail_ = id;
  }

  void unlink(FrontId id) {
    const FrontId a = prev_[id], b = next_[id];
    if (a >= 0) next_[a] = b;
    else head_ = b;
    if (b >= 0) prev_[b] = a;
    else tail_ = a;
    prev_[id] = next_[id] = -1;
  }

  std::vector<const Front*> live_list() const {
    std::vector<const Front*> out;
    out.reserve(live_);
    for (FrontId id = head_; id >= 0; id = next_[id]) out.push_back(&sol_.fronts[id]);
    return out;
  }

  static Real tv_of(const std::vector<const Front*>& fs) {
    Real tv = 0;
    for (const Front* f : fs) tv += norm(f->right - f->left);
    return tv;
  }

  static Real np_of(const std::vector<const Front*>& fs) {
    Real s = 0;
    for (const Front* f : fs)
      if (!f->physical()) s += f->strength;
    return s;
  }

  void schedule_pair(FrontId a, FrontId b, Real t) {
    if (a < 0 || b < 0) return;
    const Front& fa = sol_.fronts[a];
    const Front& fb = sol_.fronts[b];
    const auto tm = meeting_time(fa, fb, t);
    if (!tm || *tm > params_.t_end) return;
    const Real x = (fa.position(*tm) + fb.position(*tm)) / 2;
    queue_.push({*tm, x, a, b, seq_++});
  }

  void schedule_exit(FrontId id, Real t) {
    if (id < 0) return;
    const Front& f = sol_.fronts[id];
    Real te = kInf;
    if (id == head_ && f.speed < 0 && std::isfinite(params_.clip_lo))
      te = f.birth_t + (params_.clip_lo - f.x_birth) / f.speed;
    if (id == tail_ && f.speed > 0 && std::isfinite(params_.clip_hi))
      te = std::min(te, f.birth_t + (params_.clip_hi - f.x_birth) / f.speed);
    if (!std::isfinite(te) || te > params_.t_end) return;
    queue_.push({std::max(te, t), f.position(std::max(te, t)), id, -1, seq_++});
  }

  void handle_exit(const QueueEntry& e) {
    if (!alive(e.a) || (e.a != head_ && e.a != tail_)) return;
    Front& f = sol_.fronts[e.a];
    const Real x = f.position(e.t);
    const bool out = (e.a == head_ && x <= params_.clip_lo) || (e.a == tail_ && x >= params_.clip_hi);
    if (!out) return;
    const bool was_head = e.a == head_;
    f.death_t = e.t;
    unlink(e.a);
    --live_;
    ++sol_.clipped_fronts;
    schedule_exit(was_head ? head_ : tail_, e.t);
  }

  bool handle_collision(const QueueEntry& e) {
    const Real t = e.t, x = e.x;
    const Real tol = group_tol(params_, x);
    FrontId first = e.a, last = e.b;
    while (prev_[first] >= 0 && std::fabs(sol_.fronts[prev_[first]].position(t) - x) <= tol) first = prev_[first];
    while (next_[last] >= 0 && std::fabs(sol_.fronts[next_[last]].position(t) - x) <= tol) last = next_[last];

    std::vector<Front> incoming;
    for (FrontId id = first;; id = next_[id]) {
      incoming.push_back(sol_.fronts[id]);
      if (id == last) break;
    }
    bool simplified = false;
    std::size_t pruned = 0;
    Real absorbed = 0;
    std::vector<Front> out = resolve_collision(incoming, t, x, params_, p_, ids_, &simplified, &pruned, &absorbed);
    sol_.pruned_waves += pruned;
    sol_.absorbed_total += absorbed;
    if (simplified) ++sol_.simplified_events;

    const FrontId L = prev_[first], R = next_[last];
    Event ev;
    ev.t = t;
    ev.x = x;
    ev.simplified = simplified;
    for (const Front& f : incoming) {
      ev.in_ids.push_back(f.id);
      sol_.fronts[f.id].death_t = t;
      unlink(f.id);
    }
    FrontId after = L;
    for (Front& f : out) {
      ev.out_ids.push_back(f.id);
      if (!f.physical()) sol_.created_np_total += f.strength;
      const FrontId id = f.id;
      add_front(std::move(f));
      link_after(after, id);
      after = id;
    }
    live_ = live_ + out.size() - incoming.size();
    sol_.max_live_fronts = std::max(sol_.max_live_fronts, live_);

    const std::vector<const Front*> order = live_list();
    ev.glimm = glimm_functional(std::span<const Front* const>(order), params_.glimm_C);
    ev.tv = tv_of(order);
    ev.np_total = np_of(order);
    sol_.max_np_total = std::max(sol_.max_np_total, ev.np_total);
    sol_.events.push_back(std::move(ev));

    if (live_ > params_.max_fronts) {
      sol_.truncated = true;
      sol_.horizon = t;
      return false;
    }
    const std::vector<FrontId>& ids = sol_.events.back().out_ids;
    if (ids.empty()) {
      schedule_pair(L, R, t);
    } else {
      schedule_pair(L, ids.front(), t);
      for (std::size_t k = 0; k + 1 < ids.size(); ++k) schedule_pair(ids[k], ids[k + 1], t);
      schedule_pair(ids.back(), R, t);
    }
    if (L < 0) schedule_exit(head_, t);
    if (R < 0) schedule_exit(tail_, t);
    return true;
  }

  FTParams params_;
  SystemParams p_;
  FTSolution sol_;
  IdAllocator ids_;
  std::vector<FrontId> prev_, next_;
  FrontId head_ = -1, tail_ = -1;
  std::size_t live_ = 0;
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueLater> queue_;
  std::uint64_t seq_ = 0;
};

}  // namespace

FTSolution evolve(const StepFunction& datum, const FTParams& params, const SystemParams& p) {
  params.validate();
  Tracker tracker(datum, params, p);
  return tracker.run();
}

StepFunction sample_solution(const FTSolution& sol, Real t) {
  if (!(t >= 0) || t > sol.horizon) throw DomainError("sample_solution: t outside the covered horizon");
  const std::vector<const Front*> live = sol.live_at(t);
  if (live.empty()) {
    // Without fronts the profile is constant; without clipping it equals the datum tail.
    return StepFunction::constant(sol.datum.left_tail());
  }
  StepFunction out;
  out.values.push_back(live.front()->left);
  for (std::size_t k = 0; k < live.size(); ++k) {
    const Real x = live[k]->position(t);
    if (!out.breakpoints.empty() && x <= out.breakpoints.back()) {
      out.values.back() = live[k]->right;
      continue;
    }
    out.breakpoints.push_back(x);
    out.values.push_back(live[k]->right);
  }
  return out.pruned();
}

}  // namespace wft
