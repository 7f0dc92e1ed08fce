#include <catch2/catch_amalgamated.hpp>

#include "twistor/canonical.hpp"

using namespace twistor;

namespace {

MetricParams params(int n, Rational mu) {
  MetricParams p;
  p.n = n;
  p.lambda2 = mu;
  return p;
}

}  // namespace

TEST_CASE("canonical Ricci coefficients at exact parameters") {
  auto r = ricci_canonical(params(2, 1));
  CHECK(r.fiber == 12);
  CHECK(r.base == 12);
  CHECK(r.off_diagonal_zero);
  r = ricci_canonical(params(2, Rational(1, 3)));
  CHECK(r.fiber == Rational(44, 3));
  CHECK(r.base == Rational(44, 3));
  r = ricci_canonical(params(3, 2));
  CHECK(r.fiber == 26);
  CHECK(r.base == 12);
}

TEST_CASE("symbolic canonical Ricci matches 4/L^2 + 4n L^2 and 4n + 8 - 4 L^2") {
  for (int n : {2, 3}) {
    RicciDiag r = ricci_canonical_symbolic(n);
    RicciDiag e = expected_ricci_canonical(n);
    CHECK(r.fiber == e.fiber);
    CHECK(r.base == e.base);
    CHECK(r.off_diagonal_zero);
  }
}

TEST_CASE("canonical Einstein roots") {
  CHECK(einstein_solve_canonical(2) == std::vector<Rational>{Rational(1, 3), 1});
  CHECK(einstein_solve_canonical(5) == std::vector<Rational>{Rational(1, 6), 1});
}

TEST_CASE("Kahler criterion") {
  CHECK(kahler_criterion(params(2, 1)));
  CHECK_FALSE(kahler_criterion(params(2, Rational(1, 3))));
  CHECK(kahler_criterion(params(3, 1)));
  CHECK_FALSE(kahler_criterion(params(2, 2)));
}

TEST_CASE("Kahler criterion with a scalar ratio s is s lambda^2 = 1") {
  MetricParams p = params(2, Rational(1, 2));
  p.s_ratio = 2;
  CHECK(kahler_criterion(p));
  p.lambda2 = 1;
  CHECK_FALSE(kahler_criterion(p));
}

TEST_CASE("contact identity with symbolic ratio") { CHECK(contact_check(2).all()); }

TEST_CASE("canonical Ricci map") {
  CHECK(ricci_map_canonical(params(2, 1)).lambda2 == 1);
  CHECK(ricci_map_canonical(params(2, Rational(1, 3))).lambda2 == Rational(1, 3));
  CHECK(ricci_map_canonical(params(2, 2)).lambda2 == Rational(9, 2));
  CHECK_THROWS_AS(ricci_map_canonical(params(2, 4)), OutOfDomain);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(ricci_canonical(params(1, 1)), InvalidParams);
  CHECK_THROWS_AS(ricci_canonical(params(2, 0)), InvalidParams);
  MetricParams p = params(2, 1);
  p.rho = -1;
  CHECK_THROWS_AS(ricci_canonical(p), InvalidParams);
}

TEST_CASE("canonical connection satisfies the first structure equation") {
  CanonicalModel M = canonical_model(2);
  for (const auto& r : first_structure_residual(M.frame, M.connection, M.rules)) CHECK(r.is_zero());
  CHECK(M.connection(0, 1) == OneForm::basis(M.basis.a2(), -2));
}

TEST_CASE("listed canonical curvature components match or carry a misprint note") {
  CanonicalModel M = canonical_model(2);
  CHECK(M.curvature(0, 0).is_zero());
  CHECK(M.curvature(1, 1).is_zero());
  for (const auto& c : listed_components_canonical(M)) {
    INFO(c.name);
    CHECK((c.match || !c.note.empty()));
  }
}
