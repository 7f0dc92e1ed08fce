#include <catch2/catch_amalgamated.hpp>

#include "twistor/coeff.hpp"

using namespace twistor;

TEST_CASE("lambda monomials multiply by adding exponents") {
  Coeff a = Coeff::lambda(3, 2), b = Coeff::lambda(-1, Rational(1, 4));
  CHECK(a * b == Coeff::lambda(2, Rational(1, 2)));
  CHECK((a * b).at_mu(4) == 2);
}

TEST_CASE("at_mu evaluates even lambda powers exactly") {
  Coeff c = Coeff::lambda(-2, 4) + Coeff::lambda(2, 8);
  CHECK(c.at_mu(1) == 12);
  CHECK(c.at_mu(Rational(1, 3)) == Rational(44, 3));
  CHECK(c.vanishes_at_mu(1) == false);
  CHECK((Coeff::lambda(2) - Coeff(1)).vanishes_at_mu(1));
}

TEST_CASE("additive inverse cancels to zero") {
  Coeff c = Coeff::lambda(1, 3) + Coeff::symbol(Symbol::jet(1, 0, 0), 2);
  CHECK((c - c).is_zero());
  CHECK((c + (-c)).is_zero());
}

TEST_CASE("symbol products are truncated at the grade cut") {
  Coeff x = Coeff::symbol(Symbol::jet(1, 0, 0));
  Coeff y = Coeff::symbol(Symbol::jet(3, 2, 1));
  CHECK_FALSE(Coeff::mul(x, y, 3).is_zero());
  CHECK(Coeff::mul(x, y, 2).is_zero());
  CHECK(Coeff::mul(x, y, 3).max_grade() == 2);
  CHECK(Coeff::mul(x, y).is_zero() == (kDefaultCut <= 2));
}

TEST_CASE("substitute replaces a symbol") {
  Symbol u = Symbol::unknown(0);
  Coeff c = Coeff::symbol(u, 3) + Coeff(1);
  CHECK(c.substitute(u, Coeff(0)) == Coeff(1));
  CHECK(c.substitute(u, Coeff::lambda(2)).at_mu(2) == 7);
  CHECK(c.depends_on([&](Symbol s) { return s == u; }));
}

TEST_CASE("parse_rational accepts integers and fractions") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-1/4") == Rational(-1, 4));
  CHECK(parse_rational("6/8") == Rational(3, 4));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
}

TEST_CASE("rational_sqrt finds exact square roots only") {
  Rational r;
  CHECK(rational_sqrt(Rational(9, 16), r));
  CHECK(r == Rational(3, 4));
  CHECK_FALSE(rational_sqrt(Rational(2), r));
}
