#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "wft/bj_system.hpp"

using namespace wft;

namespace {

State random_state(std::mt19937_64& g, Real radius) {
  std::uniform_real_distribution<Real> U(-radius, radius);
  State s;
  do s = {U(g), U(g), U(g)};
  while (norm(s) >= radius);
  return s;
}

}  // namespace

TEST_CASE("system parameters reject eta outside (0, 1/4)") {
  CHECK_THROWS_AS(SystemParams(0), DomainError);
  CHECK_THROWS_AS(SystemParams(0.25), DomainError);
  CHECK_THROWS_AS(SystemParams(-0.1), DomainError);
  CHECK(SystemParams(0.24).eta() == doctest::Approx(0.24));
}

TEST_CASE("flux at special states") {
  for (Real eta : {Real(0.01), Real(0.09), Real(0.2)}) {
    const SystemParams p(eta);
    const State z = flux({0, 0, 0}, p);
    CHECK(z.u == 0);
    CHECK(z.v == 0);
    CHECK(z.w == 0);
    const State e2 = flux({0, 1, 0}, p);
    CHECK(e2.u == 0);
    CHECK(e2.v == 1);
    CHECK(e2.w == 0);
  }
  const SystemParams p(Real(0.09));
  const State e1 = flux({1, 0, 0}, p);
  CHECK(e1.u == doctest::Approx(-4 + 2 * 0.09));
  CHECK(e1.v == 0);
  CHECK(e1.w == 0);
}

TEST_CASE("flux matches the reference formula") {
  std::mt19937_64 g(1);
  const SystemParams p(Real(0.09));
  for (int k = 0; k < 100; ++k) {
    const State U = random_state(g, 1);
    const State F = flux(U, p);
    const auto R = oracle::flux(oracle::vec(U), p.eta());
    CHECK(F.u == doctest::Approx(R[0]).epsilon(1e-14));
    CHECK(F.v == doctest::Approx(R[1]).epsilon(1e-14));
    CHECK(F.w == doctest::Approx(R[2]).epsilon(1e-14));
  }
}

TEST_CASE("jacobian at the origin") {
  const SystemParams p(Real(0.09));
  const Mat3 J = jacobian({0, 0, 0}, p);
  CHECK(J[1][0] == 0);
  CHECK(J[1][1] == 0);
  CHECK(J[1][2] == 0);
  const State e = mul(J, {1, 0, 0});
  CHECK(e.u == doctest::Approx(-4));
  CHECK(e.v == 0);
  CHECK(std::fabs(e.w) < 1e-15);
}

TEST_CASE("jacobian matches centered finite differences") {
  std::mt19937_64 g(2);
  for (Real eta : {Real(0.01), Real(0.09), Real(0.24)}) {
    const SystemParams p(eta);
    for (int k = 0; k < 200; ++k) {
      const State U = random_state(g, 1);
      const Mat3 J = jacobian(U, p);
      const auto D = oracle::fd_jacobian(oracle::vec(U), eta);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::fabs(J[i][j] - D[i][j]) <= 1e-6 * std::max(Real(1), std::fabs(D[i][j])));
    }
  }
}

TEST_CASE("eigenstructure at special states") {
  const SystemParams p(Real(0.09));
  const EigenData e0 = eigen({0, 0, 0}, p);
  CHECK(e0.lambdas[0] == doctest::Approx(-4));
  CHECK(e0.lambdas[1] == doctest::Approx(0));
  CHECK(e0.lambdas[2] == doctest::Approx(4));
  CHECK(e0.rvecs[0] == State{1, 0, 0});
  CHECK(e0.rvecs[2] == State{1, 0, -2});
  // (0,1,0) lies on the boundary of the working domain; closed forms only.
  const auto l1 = eigenvalues({0, 1, 0}, p);
  CHECK(l1[0] == doctest::Approx(-4));
  CHECK(l1[1] == doctest::Approx(2));
  CHECK(l1[2] == doctest::Approx(4));
  CHECK_THROWS_AS(eigen({1, 0, 0}, p), DomainError);
}

TEST_CASE("eigenpairs satisfy the finite-difference Jacobian") {
  std::mt19937_64 g(3);
  const Real eta = Real(0.09);
  const SystemParams p(eta);
  for (int k = 0; k < 200; ++k) {
    const State U = random_state(g, 1);
    const EigenData e = eigen(U, p);
    CHECK(e.lambdas[0] < e.lambdas[1]);
    CHECK(e.lambdas[1] < e.lambdas[2]);
    const auto L = oracle::lambdas(oracle::vec(U), eta);
    const auto D = oracle::fd_jacobian(oracle::vec(U), eta);
    for (int i = 0; i < 3; ++i) {
      CHECK(e.lambdas[static_cast<std::size_t>(i)] == doctest::Approx(L[static_cast<std::size_t>(i)]).epsilon(1e-14));
      const State r = e.rvecs[static_cast<std::size_t>(i)];
      const auto rv = oracle::vec(r);
      Real res = 0;
      for (int a = 0; a < 3; ++a) {
        Real s = -L[static_cast<std::size_t>(i)] * rv[static_cast<std::size_t>(a)];
        for (int b = 0; b < 3; ++b) s += D[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] * rv[static_cast<std::size_t>(b)];
        res += s * s;
      }
      CHECK(std::sqrt(res) <= 1e-8 * norm(r));
    }
    CHECK(e.rvecs[1].v == 1);
    const auto k2 = oracle::r2(oracle::vec(U), eta);
    CHECK(e.rvecs[1].u == doctest::Approx(k2[0]).epsilon(1e-7));
    CHECK(e.rvecs[1].w == doctest::Approx(k2[2]).epsilon(1e-7));
    CHECK(e.rvecs[0] == State{1, 0, U.v});
    CHECK(e.rvecs[2] == State{1, 0, U.v - 2});
  }
}

TEST_CASE("genuine nonlinearity values are constant") {
  std::mt19937_64 g(4);
  for (Real eta : {Real(0.01), Real(0.09), Real(0.24)}) {
    const SystemParams p(eta);
    for (int k = 0; k < 100; ++k) {
      const State U = random_state(g, 1);
      const EigenData e = eigen(U, p);
      CHECK(std::fabs(e.gn_values[0] - 4 * eta) <= 1e-12);
      CHECK(std::fabs(e.gn_values[1] - 2) <= 1e-12);
      CHECK(std::fabs(e.gn_values[2] + 4 * eta) <= 1e-12);
      // Directional finite difference of the reference eigenvalues.
      const Real h = Real(1e-5);
      for (int i = 0; i < 3; ++i) {
        auto X = oracle::vec(U), a = X, b = X;
        const auto r = oracle::vec(e.rvecs[static_cast<std::size_t>(i)]);
        for (int c = 0; c < 3; ++c) {
          a[static_cast<std::size_t>(c)] += h * r[static_cast<std::size_t>(c)];
          b[static_cast<std::size_t>(c)] -= h * r[static_cast<std::size_t>(c)];
        }
        const Real d = (oracle::lambdas(a, eta)[static_cast<std::size_t>(i)] - oracle::lambdas(b, eta)[static_cast<std::size_t>(i)]) / (2 * h);
        CHECK(std::fabs(d - e.gn_values[static_cast<std::size_t>(i)]) <= 1e-5);
      }
    }
  }
}

TEST_CASE("domain certificate") {
  for (Real eta : {Real(0.01), Real(0.24)}) {
    const CertificateReport r = certify_domain(SystemParams(eta), 16);
    CHECK(r.pass);
    CHECK(r.points > 0);
    CHECK(r.lambda_min[0] >= -6);
    CHECK(r.lambda_max[0] <= -2.5);
    CHECK(r.lambda_min[1] >= -2);
    CHECK(r.lambda_max[1] <= 2);
    CHECK(r.lambda_min[2] >= 3);
    CHECK(r.lambda_max[2] <= 5);
    CHECK(r.min_gap12 >= 0.5);
    CHECK(r.min_gap23 >= 1);
    CHECK(r.violations.empty());
    CHECK_FALSE(r.witness);
  }
  CHECK_THROWS_AS(certify_domain(SystemParams(0.09), 4), DomainError);
}
