#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "twistor/canonical.hpp"
#include "twistor/flow.hpp"
#include "twistor/zmetric.hpp"

using namespace twistor;

namespace {

Rational random_positive(std::mt19937& g) {
  std::uniform_int_distribution<int> num(1, 60), den(1, 30);
  Rational q(num(g), den(g));
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("coefficient arithmetic is a commutative ring") {
  std::mt19937 g(7);
  std::uniform_int_distribution<int> e(-4, 4), c(-9, 9);
  auto rnd = [&] {
    Coeff x;
    for (int k = 0; k < 3; ++k) x += Coeff::lambda(e(g), c(g));
    x += Coeff::symbol(Symbol::jet(1, 0, 0), c(g));
    return x;
  };
  for (int trial = 0; trial < 50; ++trial) {
    Coeff a = rnd(), b = rnd(), d = rnd();
    CHECK(a * b == b * a);
    CHECK((a * b) * d == a * (b * d));
    CHECK(a * (b + d) == a * b + a * d);
  }
}

TEST_CASE("canonical Ricci equals the closed form at random rationals") {
  std::mt19937 g(11);
  for (int trial = 0; trial < 30; ++trial) {
    MetricParams p;
    p.n = 2 + trial % 2;
    p.lambda2 = random_positive(g);
    p.rho = random_positive(g);
    auto r = ricci_canonical(p);
    CHECK(r.fiber == 4 / p.lambda2 + 4 * p.n * p.lambda2);
    CHECK(r.base == 4 * p.n + 8 - 4 * p.lambda2);
  }
}

TEST_CASE("flow right-hand sides are -2 times the Ricci coefficients") {
  std::mt19937 g(13);
  for (int trial = 0; trial < 30; ++trial) {
    MetricParams p;
    p.n = 2 + trial % 2;
    p.lambda2 = random_positive(g);
    auto rc = ricci_canonical(p);
    auto [c1, c2] = flow::rhs_exact(flow::Family::Canonical, p.n, p.lambda2);
    CHECK(c1 == -2 * rc.fiber * p.lambda2);
    CHECK(c2 == -2 * rc.base);
    auto rz = ricci_z(p);
    auto [z1, z2] = flow::rhs_exact(flow::Family::Z, p.n, p.lambda2);
    CHECK(z1 == -2 * rz.fiber * p.lambda2);
    CHECK(z2 == -2 * rz.base);
  }
}

TEST_CASE("fixed rays of the mu dynamics are the Einstein roots") {
  for (int n : {2, 3, 4}) {
    for (const Rational& mu : einstein_solve_canonical(n)) {
      auto [a, b] = flow::rhs_exact(flow::Family::Canonical, n, mu);
      CHECK(a - mu * b == 0);
    }
    Rational e = einstein_solve_z(n);
    auto [a, b] = flow::rhs_exact(flow::Family::Z, n, e);
    CHECK(a - e * b == 0);
  }
}

TEST_CASE("Z invariant is conserved by the exact flow") {
  std::mt19937 g(17);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + trial % 3;
    Rational rho0 = random_positive(g), mu0 = random_positive(g);
    Rational T = flow::classify(rho0, mu0, n).time;
    Rational e(1, n + 2);
    for (Rational f : {Rational(1, 4), Rational(1, 2), Rational(9, 10)}) {
      auto [rho, rm] = flow::closed_form_z_exact(rho0, mu0, n, f * T);
      CHECK(rho * (rm / rho - e) == rho0 * (mu0 - e));
    }
  }
}

TEST_CASE("RK4 conserves the canonical invariant away from the Einstein rays") {
  std::mt19937 g(19);
  std::uniform_real_distribution<double> mu(0.4, 3.0);
  for (int trial = 0; trial < 10; ++trial) {
    flow::FlowState s0{0, 1, mu(g), flow::Family::Canonical, 2};
    if (std::fabs(s0.mu - 1) < 0.05) continue;
    flow::IntegrateOptions o;
    o.t_end = 5e-3;
    CHECK(flow::integrate(s0, o).max_drift <= 1e-8);
  }
}

TEST_CASE("canonical Kahler criterion holds exactly at s lambda^2 = 1") {
  for (Rational s : {Rational(1), Rational(2), Rational(1, 3)}) {
    MetricParams p;
    p.s_ratio = s;
    p.lambda2 = 1 / s;
    CHECK(kahler_criterion(p));
    p.lambda2 = 2 / s;
    CHECK_FALSE(kahler_criterion(p));
  }
}
