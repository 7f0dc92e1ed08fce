#include <catch2/catch_amalgamated.hpp>

#include "twistor/liealg.hpp"

using namespace twistor;

TEST_CASE("sp(n+1) dimension") {
  auto L2 = build_sp_basis(2);
  CHECK(L2.dim() == 21);
  CHECK(L2.basis.front().size() == 12);
  CHECK(build_sp_basis(3).dim() == 36);
}

TEST_CASE("bracket of a matrix with itself vanishes") {
  auto L = build_sp_basis(2);
  for (const auto& A : L.basis) CHECK(bracket(A, A).is_zero());
}

TEST_CASE("sp(1) part of the structure constants") {
  Basis B(2);
  auto sc = structure_constants(build_sp_basis(2));
  // d alpha_mu = 2 alpha_eta ^ alpha_nu for cyclic (mu, eta, nu)
  DerivativeRules R = mc_rules(sc, B);
  for (auto [mu, eta, nu] : kCyclic) {
    TwoForm d = exterior_derivative(OneForm::basis(B.alpha(mu)), R);
    CHECK(d.at(B.alpha(eta), B.alpha(nu)) == Coeff(2));
  }
}

TEST_CASE("Jacobi identity holds exactly") {
  CHECK(jacobi_violations(structure_constants(build_sp_basis(2))) == 0);
  CHECK(jacobi_violations(structure_constants(build_sp_basis(3))) == 0);
}

TEST_CASE("perturbed structure constants break Jacobi") {
  auto sc = structure_constants(build_sp_basis(2));
  sc.c.begin()->second += 1;
  CHECK(jacobi_violations(sc) > 0);
}

TEST_CASE("abelian algebra has an empty bracket table") {
  LieAlgebraSpec L;
  L.n = 1;
  for (int k = 0; k < 3; ++k) {
    RatMatrix D(3);
    D(k, k) = 1;
    L.basis.push_back(D);
  }
  CHECK(structure_constants(L).c.empty());
}

TEST_CASE("block equations hold for n = 2 and 3") {
  CHECK(verify_block_equations(2).all_pass());
  CHECK(verify_block_equations(3).all_pass());
}

TEST_CASE("perturbed structure constants fail a block equation") {
  auto sc = structure_constants(build_sp_basis(2));
  sc.c.begin()->second += 1;
  CHECK_FALSE(verify_block_equations(Basis(2), sc).all_pass());
}

TEST_CASE("HP^n sectional curvatures") {
  for (int n : {2, 3}) {
    CurvatureTensor T = hpn_curvature(n);
    CHECK(T.foreign_terms == 0);
    CHECK(sectional(T, 0, n) == 4);
    CHECK(sectional(T, 0, 2 * n) == 4);
    CHECK(sectional(T, 0, 3 * n) == 4);
    for (int a = 1; a < n; ++a) CHECK(sectional(T, 0, a) == 1);
    CHECK_THROWS_AS(sectional(T, 1, 1), EqualIndices);
  }
}

TEST_CASE("HP^2 is quarter pinched on frame pairs") {
  CurvatureTensor T = hpn_curvature(2);
  Rational lo = 100, hi = -100;
  for (int A = 0; A < T.dim(); ++A)
    for (int B = 0; B < T.dim(); ++B)
      if (A != B) {
        lo = std::min(lo, sectional(T, A, B));
        hi = std::max(hi, sectional(T, A, B));
      }
  CHECK(lo == 1);
  CHECK(hi == 4);
}

TEST_CASE("HP^n Ricci and scalar curvature") {
  for (int n : {2, 3}) {
    CurvatureTensor T = hpn_curvature(n);
    auto ric = ricci(T);
    for (int A = 0; A < T.dim(); ++A)
      for (int B = 0; B < T.dim(); ++B) CHECK(ric[A][B] == (A == B ? 4 * (n + 2) : 0));
    CHECK(scalar(T) == 16 * n * (n + 2));
    CHECK(check_symmetries(T).all());
  }
}

TEST_CASE("closed-form and Maurer-Cartan curvature agree") {
  CHECK(hpn_curvature(2) == hpn_curvature_mc(2));
}
