#include <catch2/catch_amalgamated.hpp>

#include "twistor/flow.hpp"

using namespace twistor;
using namespace twistor::flow;
using Catch::Approx;

TEST_CASE("right-hand sides") {
  CHECK(rhs_exact(Family::Canonical, 2, 1) == std::pair<Rational, Rational>{-24, -24});
  CHECK(rhs_exact(Family::Canonical, 2, 2) == std::pair<Rational, Rational>{-72, -16});
  CHECK(rhs_exact(Family::Z, 2, Rational(7, 3)) == std::pair<Rational, Rational>{-8, -32});
  CHECK(mu_rate({0, 1, 1, Family::Canonical, 2}) == 0);
}

TEST_CASE("closed-form Z flow") {
  auto [rho, rm] = closed_form_z_exact(1, Rational(1, 2), 2, Rational(1, 64));
  CHECK(rho == Rational(1, 2));
  CHECK(rm == Rational(3, 8));
  CHECK(rm / rho == Rational(3, 4));
  auto [r0, m0] = closed_form_z_exact(1, Rational(1, 2), 2, 0);
  CHECK(r0 == 1);
  CHECK(m0 == Rational(1, 2));
  CHECK_THROWS_AS(closed_form_z_exact(1, Rational(1, 2), 2, Rational(1, 32)), Extinct);
}

TEST_CASE("Z invariant along the closed form") {
  CHECK(invariant({0, 1, 0.5, Family::Z, 2}) == Approx(0.25));
  FlowState s = closed_form_z(1, 0.5, 2, 1.0 / 64);
  CHECK(invariant(s) == Approx(0.25));
  CHECK(invariant({0, 3, 0.25, Family::Z, 2}) == 0);
}

TEST_CASE("canonical invariant is undefined on Einstein rays") {
  CHECK_THROWS_AS(invariant({0, 1, 1, Family::Canonical, 2}), OnEinsteinRay);
  CHECK_NOTHROW(invariant({0, 1, 1.5, Family::Canonical, 2}));
}

TEST_CASE("RK4 matches the Z closed form") {
  FlowState s0{0, 1, 0.5, Family::Z, 2};
  IntegrateOptions o;
  o.t_end = 0.9 / 32;
  Trajectory tr = integrate(s0, o);
  REQUIRE(tr.samples.size() > 100);
  for (const auto& s : tr.samples) {
    FlowState e = closed_form_z(1, 0.5, 2, s.t);
    CHECK(std::fabs(s.rho - e.rho) <= 1e-8 * e.rho);
    CHECK(std::fabs(s.mu - e.mu) <= 1e-8 * e.mu);
  }
  CHECK(tr.max_drift <= 1e-9);
}

TEST_CASE("integration locates the floor or throws StepTooLarge") {
  FlowState s0{0, 1, 0.5, Family::Z, 2};
  IntegrateOptions o;
  o.dt = 1e-3;
  o.t_end = 1;
  Trajectory tr = integrate(s0, o);
  REQUIRE(tr.event);
  CHECK(tr.event->mode == "rho-floor");
  CHECK(tr.event->time == Approx(1.0 / 32).epsilon(1e-9));
  o.locate_events = false;
  CHECK_THROWS_AS(integrate(s0, o), StepTooLarge);
}

TEST_CASE("classification of Z singularities") {
  Classification c = classify(1, Rational(1, 2), 2);
  CHECK(c.mode == Mode::Extinction);
  CHECK(c.time == Rational(1, 32));
  CHECK(c.mu_limit == "infinity");
  CHECK(to_string(c.mode) == "base-shrinks-faster");
  c = classify(1, Rational(1, 8), 2);
  CHECK(c.mode == Mode::Collapse);
  CHECK(c.time == Rational(1, 64));
  CHECK(c.rho_limit == Rational(1, 2));
  CHECK(classify(1, Rational(1, 4), 2).mode == Mode::EinsteinRay);
}

TEST_CASE("canonical flow from above the Kahler-Einstein ray decreases toward 1") {
  FlowState s0{0, 1, 1.01, Family::Canonical, 2};
  IntegrateOptions o;
  o.t_end = 0.03;
  Trajectory tr = integrate(s0, o);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    CHECK(tr.samples[k].mu < tr.samples[k - 1].mu);
    CHECK(tr.samples[k].mu > 1);
  }
}

TEST_CASE("canonical flow backward from near 1/(n+1) approaches 1/(n+1)") {
  const double e = 1.0 / 3;
  FlowState s0{0, 1, e + 0.01, Family::Canonical, 2};
  IntegrateOptions o;
  o.t_end = -6;
  Trajectory tr = integrate(s0, o);
  CHECK(std::fabs(tr.samples.back().mu - e) < 1e-3);
  for (std::size_t k = 1; k < tr.samples.size(); ++k)
    CHECK(std::fabs(tr.samples[k].mu - e) <= std::fabs(tr.samples[k - 1].mu - e) + 1e-15);
}

TEST_CASE("Z backward limit is the Einstein ray") {
  Rational prev = 1;
  for (int k = 1; k <= 6; ++k) {
    Rational t = -Rational(1) * k * k;
    auto [rho, rm] = closed_form_z_exact(1, Rational(1, 2), 2, t);
    Rational gap = abs(rm / rho - Rational(1, 4));
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < Rational(1, 1000));
}

TEST_CASE("entropy diagnostics") {
  CHECK(scal_z_exact(1, Rational(1, 4), 2) == 160);
  CHECK(tau_exact(1, Rational(1, 2), Rational(3, 8), 2) == Rational(1, 32));
  auto rs = entropy_series(1, 0.5, 2, 200);
  CHECK(rs.size() == 200);
  CHECK(nondecreasing_w(rs));
  for (const auto& r : rs) CHECK(r.u * r.vol_ratio == Approx(1.0));
  CHECK_THROWS(entropy_series(1, 0.2, 2, 200));
}
