#include <catch2/catch_amalgamated.hpp>

#include "twistor/liealg.hpp"

using namespace twistor;

TEST_CASE("wedge is antisymmetric") {
  Basis B(2);
  OneForm a1 = OneForm::basis(B.a1()), a3 = OneForm::basis(B.a3());
  CHECK(wedge(a1, a1).is_zero());
  CHECK(wedge(a3, a1) == -wedge(a1, a3));
}

TEST_CASE("wedge sign convention on dual pairs") {
  Basis B(2);
  TwoForm w = wedge(OneForm::basis(B.a3()), OneForm::basis(B.a1()));
  CHECK(eval_pair(w, dual(B.a3()), dual(B.a1())) == Coeff(1));
  CHECK(eval_pair(w, dual(B.a1()), dual(B.a3())) == Coeff(-1));
}

TEST_CASE("eval_pair on scaled dual vectors") {
  Basis B(2);
  TwoForm w = wedge(OneForm::basis(B.a1(), 4), OneForm::basis(B.a3()));
  Coeff inv = Coeff::lambda(-1);
  CHECK(eval_pair(w, dual(B.a1(), inv), dual(B.a3(), inv)) == Coeff::lambda(-2, 4));
  CHECK(eval_pair(w, dual(B.a1()), dual(B.a1())).is_zero());
}

TEST_CASE("d(alpha_2) from the sp(3) structure constants") {
  Basis B(2);
  DerivativeRules R = mc_rules(structure_constants(build_sp_basis(2)), B);
  TwoForm expect = wedge(OneForm::basis(B.a3(), 2), OneForm::basis(B.a1()));
  for (int a = 0; a < 2; ++a) {
    expect += wedge(OneForm::basis(B.x(2, a), 2), OneForm::basis(B.x(0, a)));
    expect += wedge(OneForm::basis(B.x(3, a), 2), OneForm::basis(B.x(1, a)));
  }
  CHECK(exterior_derivative(OneForm::basis(B.a2()), R) == expect);
  CHECK(exterior_derivative(OneForm{}, R).is_zero());
}

TEST_CASE("curvature of the sp(n)sp(1) connection matches the closed-form blocks") {
  Basis B(2);
  DerivativeRules R = mc_rules(structure_constants(build_sp_basis(2)), B);
  FormMatrix<OneForm> G = spnsp1_connection(B);
  FormMatrix<TwoForm> mc = exterior_derivative(G, R);
  FormMatrix<TwoForm> sq = mat_wedge(G, G);
  FormMatrix<TwoForm> Omega = hpn_curvature_forms(B);
  for (int i = 0; i < G.dim(); ++i)
    for (int j = 0; j < G.dim(); ++j) CHECK(mc(i, j) + sq(i, j) == Omega(i, j));
}

TEST_CASE("mat_wedge with a zero matrix is zero") {
  Basis B(2);
  FormMatrix<OneForm> Z(4), G(4);
  G(0, 1) = OneForm::basis(B.a1());
  G(1, 0) = OneForm::basis(B.a2());
  FormMatrix<TwoForm> W = mat_wedge(Z, G);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(W(i, j).is_zero());
}

TEST_CASE("mat_wedge rejects mismatched dimensions") {
  FormMatrix<OneForm> A(3), C(4);
  CHECK_THROWS_AS(mat_wedge(A, C), DimensionMismatch);
}

TEST_CASE("missing jet rule is reported") {
  Basis B(2);
  DerivativeRules R = mc_rules(structure_constants(build_sp_basis(2)), B);
  OneForm f = OneForm::basis(B.a1(), Coeff::symbol(Symbol::jet(1, 0, 0)) + Coeff::lambda(2));
  CHECK_THROWS_AS(exterior_derivative(f, R), MissingRule);
}
