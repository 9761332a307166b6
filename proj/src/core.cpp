#include "wft/core.hpp"

#include <cstdio>

namespace wft {

Family family_from_index(int i) {
  if (i < 1 || i > 4) throw DomainError("family index out of range: " + std::to_string(i));
  return static_cast<Family>(i);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::One: return "1";
    case Family::Two: return "2";
    case Family::Three: return "3";
    case Family::NonPhysical: return "np";
  }
  return "?";
}

const char* kind_name(WaveKind k) { return k == WaveKind::Shock ? "shock" : "rarefaction"; }

std::string to_string(const State& s) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "(%.17g, %.17g, %.17g)", static_cast<double>(s.u),
                static_cast<double>(s.v), static_cast<double>(s.w));
  return buf;
}

Rng::Rng(std::uint64_t seed) : gen_(seed) {}

Real Rng::uniform() { return static_cast<Real>(gen_() >> 11) * Real(0x1.0p-53); }

Real Rng::uniform(Real lo, Real hi) { return lo + (hi - lo) * uniform(); }

Real Rng::normal() {
  // Box-Muller; one variate per call keeps the stream position simple.
  Real a = uniform();
  Real b = uniform();
  if (a <= 0) a = Real(0x1.0p-53);
  return std::sqrt(-2 * std::log(a)) * std::cos(Real(2 * M_PI) * b);
}

State Rng::unit_vector() {
  for (;;) {
    State s{normal(), normal(), normal()};
    Real n = norm(s);
    if (n > Real(1e-12)) return (Real(1) / n) * s;
  }
}

}  // namespace wft
