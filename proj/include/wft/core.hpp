#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace wft {

#ifdef WFT_EXTENDED_PRECISION
using Real = long double;
#else
using Real = double;
#endif

constexpr bool kExtendedPrecision = sizeof(Real) > sizeof(double);
constexpr Real kInf = std::numeric_limits<Real>::infinity();
constexpr Real kEps = std::numeric_limits<Real>::epsilon();

// Wave families. NonPhysical marks fronts of the simplified solver.
enum class Family : int { One = 1, Two = 2, Three = 3, NonPhysical = 4 };

enum class WaveKind : int { Shock = 0, Rarefaction = 1 };

inline int family_index(Family f) { return static_cast<int>(f); }
Family family_from_index(int i);
const char* family_name(Family f);
const char* kind_name(WaveKind k);

// Point (u,v,w) of the state space; also used for flux values and jumps.
struct State {
  Real u = 0, v = 0, w = 0;

  State& operator+=(const State& o) { u += o.u; v += o.v; w += o.w; return *this; }
  State& operator-=(const State& o) { u -= o.u; v -= o.v; w -= o.w; return *this; }
  State& operator*=(Real s) { u *= s; v *= s; w *= s; return *this; }

  friend State operator+(State a, const State& b) { return a += b; }
  friend State operator-(State a, const State& b) { return a -= b; }
  friend State operator*(Real s, State a) { return a *= s; }
  friend State operator*(State a, Real s) { return a *= s; }
  friend State operator-(const State& a) { return {-a.u, -a.v, -a.w}; }
  friend bool operator==(const State& a, const State& b) {
    return a.u == b.u && a.v == b.v && a.w == b.w;
  }
  friend bool operator!=(const State& a, const State& b) { return !(a == b); }

  Real operator[](int i) const { return i == 0 ? u : (i == 1 ? v : w); }
};

inline Real dot(const State& a, const State& b) { return a.u * b.u + a.v * b.v + a.w * b.w; }
inline Real norm(const State& a) { return std::sqrt(dot(a, a)); }
inline Real norm_inf(const State& a) {
  return std::fmax(std::fabs(a.u), std::fmax(std::fabs(a.v), std::fabs(a.w)));
}

using Mat3 = std::array<std::array<Real, 3>, 3>;

inline State mul(const Mat3& m, const State& x) {
  return {m[0][0] * x.u + m[0][1] * x.v + m[0][2] * x.w,
          m[1][0] * x.u + m[1][1] * x.v + m[1][2] * x.w,
          m[2][0] * x.u + m[2][1] * x.v + m[2][2] * x.w};
}

// Precondition violations and invalid input.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Iterative solvers that fail to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken internal consistency (formula mismatch, violated invariant).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

std::string to_string(const State& s);

// Uniform variates built directly from mt19937_64 output bits, so streams do
// not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Real uniform();                  // [0,1)
  Real uniform(Real lo, Real hi);  // [lo,hi)
  Real normal();
  State unit_vector();

 private:
  std::mt19937_64 gen_;
};

}  // namespace wft
