#include <catch2/catch_amalgamated.hpp>

#include "twistor/zmetric.hpp"

using namespace twistor;

namespace {

MetricParams params(int n, Rational mu, Rational rho = 1) {
  MetricParams p;
  p.n = n;
  p.lambda2 = mu;
  p.rho = rho;
  return p;
}

}  // namespace

TEST_CASE("Z Ricci coefficients at exact parameters") {
  auto r = ricci_z(params(2, Rational(1, 4)));
  CHECK(r.fiber == 16);
  CHECK(r.base == 16);
  CHECK(r.off_diagonal_zero);
  r = ricci_z(params(3, 1));
  CHECK(r.fiber == 4);
  CHECK(r.base == 20);
}

TEST_CASE("symbolic Z Ricci is 4/L^2 on the fiber and 4n + 8 on the base") {
  ZModel M = z_model(2);
  RicciDiag r = ricci_z_symbolic(M);
  CHECK(r.fiber == Coeff::lambda(-2, 4));
  CHECK(r.base == Coeff(16));
  CHECK(r.off_diagonal_zero);
  CHECK_FALSE(ricci_has_formal_symbols(ricci_matrix_z(M)));
}

TEST_CASE("Z Einstein root is 1/(n+2)") {
  CHECK(einstein_solve_z(2) == Rational(1, 4));
  CHECK(einstein_solve_z(3) == Rational(1, 5));
}

TEST_CASE("Z Einstein root for n = 6", "[slow]") { CHECK(einstein_solve_z(6) == Rational(1, 8)); }

TEST_CASE("Z Ricci map lands on the Einstein ray for every input") {
  for (Rational mu : {Rational(1, 7), Rational(1), Rational(5, 2)})
    for (Rational rho : {Rational(1), Rational(3)}) {
      MetricParams q = ricci_map_z(params(2, mu, rho));
      CHECK(q.rho == 16);
      CHECK(q.lambda2 == Rational(1, 4));
    }
}

TEST_CASE("Z connection is skew and solves the first structure equation") {
  ZModel M = z_model(2);
  for (int i = 0; i < M.connection.dim(); ++i)
    for (int j = 0; j < M.connection.dim(); ++j) CHECK(M.connection(i, j) == -M.connection(j, i));
  for (const auto& r : first_structure_residual(M.frame, M.connection, M.rules)) CHECK(r.is_zero());
  CHECK(M.connection(0, 1) == OneForm::basis(M.basis.a2(), -2));
}

TEST_CASE("horizontal distribution is integrable and the truncation is sound") {
  CHECK(distribution_integrable(z_model(2)));
  CHECK(truncation_sound(2));
}

TEST_CASE("hat alpha derivatives: leading term and negative control") {
  HatAlphaReport rep = hat_alpha_derivatives(2);
  for (const auto& e : rep.entries) {
    CHECK(e.grade0_match);
    CHECK(e.without_gamma_terms);
  }
  CHECK(rep.control_differs);
}

TEST_CASE("unknown hat alpha components of d A_ij", "[slow]") {
  UnknownProbe p = probe_unknowns(2);
  CHECK_FALSE(p.ricci_free_of_unknowns);
  CHECK(p.d2_forces_zero);
  CHECK(p.completed_d2_zero);
  CHECK(p.completed_ricci_unchanged);
}

TEST_CASE("Z and canonical connections at lambda = 1 differ only in alpha_1 and alpha_3 on the base") {
  ZCanonicalDiff d = z_canonical_difference(2);
  Basis B(2);
  for (int k : d.base_support) CHECK((k == B.a1() || k == B.a3()));
  CHECK_FALSE(d.fiber_fiber_differs);
}
