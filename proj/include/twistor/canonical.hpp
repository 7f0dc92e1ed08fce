#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistor/liealg.hpp"
#include "twistor/moving_frame.hpp"

namespace twistor {

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct OutOfDomain : std::domain_error {
  using std::domain_error::domain_error;
};

/// Parameters of a twistor metric: n, lambda^2, rho and the scalar ratio s.
struct MetricParams {
  int n = 2;
  Rational lambda2 = 1;
  Rational rho = 1;
  Rational s_ratio = 1;

  void validate() const {
    if (n < 2) throw InvalidParams("n must be at least 2");
    if (lambda2 <= 0) throw InvalidParams("lambda^2 must be positive");
    if (rho <= 0) throw InvalidParams("rho must be positive");
    if (s_ratio <= 0) throw InvalidParams("s_ratio must be positive");
  }
};

/// Ricci coefficients evaluated at lambda^2 = mu.
struct RicciValues {
  Rational fiber;
  Rational base;
  bool off_diagonal_zero = false;
};

inline RicciValues evaluate(const RicciDiag& r, const Rational& mu) {
  return {r.fiber.at_mu(mu), r.base.at_mu(mu), r.off_diagonal_zero};
}

/// Orthonormal coframe (lambda alpha_1, lambda alpha_3, X^0, X^1, X^2, X^3).
inline Coframe twistor_coframe(const Basis& B) {
  Coframe F;
  for (int k : {B.a1(), B.a3()}) {
    F.index.push_back(k);
    F.scale.push_back(Coeff::lambda(1));
    F.blocks.push_back("fiber");
  }
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < B.n(); ++a) {
      F.index.push_back(B.x(i, a));
      F.scale.push_back(1);
      F.blocks.push_back("base");
    }
  return F;
}

/// Frame position of X^i_a in the twistor coframe.
inline int xpos(const Basis& B, int i, int a) { return 2 + i * B.n() + a; }

/// Connection, curvature and rules of the canonical deformation family, symbolic in lambda.
struct CanonicalModel {
  Basis basis;
  DerivativeRules rules;
  Coframe frame;
  FormMatrix<OneForm> connection;
  FormMatrix<TwoForm> curvature;
};

inline CanonicalModel canonical_model(int n, const Coeff& ratio = 1) {
  if (n < 2) throw InvalidParams("n must be at least 2");
  Basis B(n);
  DerivativeRules R = mc_rules(structure_constants(build_sp_basis(n)), B, ratio);
  Coframe F = twistor_coframe(B);
  FormMatrix<OneForm> w = levi_civita(F, R);
  FormMatrix<TwoForm> O = curvature(w, R);
  return {B, std::move(R), std::move(F), std::move(w), std::move(O)};
}

/// The connection matrix written with Gamma_mu^{+-} = Gamma_mu +- c_mu alpha_mu.
///
/// c_1 = c_3 = lambda^2 - 1; c_2 = 1, or lambda^2 - 1 when `literal_gamma2` is set.
inline FormMatrix<OneForm> connection_canonical_display(const Basis& B, bool literal_gamma2 = false) {
  const int n = B.n();
  const Coeff lam = Coeff::lambda(1);
  const Coeff lm1 = Coeff::lambda(2) - 1;
  std::array<Coeff, 4> c{0, lm1, literal_gamma2 ? lm1 : Coeff(1), lm1};
  std::array<FormMatrix<OneForm>, 4> G{gamma_matrix(B, 0), gamma_matrix(B, 1), gamma_matrix(B, 2),
                                       gamma_matrix(B, 3)};
  // Gamma_mu^{sign} entry (a, b).
  auto gpm = [&](int mu, int sign, int a, int b) {
    OneForm e = G[mu](a, b);
    if (a == b) e += OneForm::basis(B.alpha(mu), c[mu].scaled(sign));
    return e;
  };
  FormMatrix<OneForm> M(4 * n + 2, twistor_coframe(B).blocks);
  auto X = [&](int i, int a, int s) { return OneForm::basis(B.x(i, a), lam.scaled(s)); };

  M(0, 1) = OneForm::basis(B.a2(), -2);
  M(1, 0) = OneForm::basis(B.a2(), 2);
  // Fiber rows: (lambda alpha_1, X^i) and (lambda alpha_3, X^i) entries.
  const int r1[4][2] = {{1, -1}, {0, 1}, {3, 1}, {2, -1}};
  const int r3[4][2] = {{3, -1}, {2, 1}, {1, -1}, {0, 1}};
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < n; ++a) {
      M(0, xpos(B, i, a)) = X(r1[i][0], a, r1[i][1]);
      M(xpos(B, i, a), 0) = X(r1[i][0], a, -r1[i][1]);
      M(1, xpos(B, i, a)) = X(r3[i][0], a, r3[i][1]);
      M(xpos(B, i, a), 1) = X(r3[i][0], a, -r3[i][1]);
    }
  // Base block: (slot, sign of Gamma, sign inside Gamma^{+-}); slot 0 is Gamma_0.
  const int bb[4][4][3] = {
      {{0, 1, 0}, {1, -1, -1}, {2, -1, 1}, {3, -1, -1}},
      {{1, 1, -1}, {0, 1, 0}, {3, -1, 1}, {2, 1, -1}},
      {{2, 1, 1}, {3, 1, 1}, {0, 1, 0}, {1, -1, 1}},
      {{3, 1, -1}, {2, -1, -1}, {1, 1, 1}, {0, 1, 0}},
  };
  for (int I = 0; I < 4; ++I)
    for (int J = 0; J < 4; ++J)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          auto [slot, s, pm] = bb[I][J];
          OneForm e = slot == 0 ? G[0](a, b) : gpm(slot, pm, a, b);
          M(xpos(B, I, a), xpos(B, J, b)) = e.scaled(s);
        }
  return M;
}

inline FormMatrix<OneForm> connection_canonical(const MetricParams& p) {
  p.validate();
  return canonical_model(p.n, Coeff(p.s_ratio)).connection;
}

inline FormMatrix<TwoForm> curvature_canonical(const MetricParams& p) {
  p.validate();
  return canonical_model(p.n, Coeff(p.s_ratio)).curvature;
}

/// Comparison of one listed curvature or connection entry against the engine.
struct ComponentCheck {
  std::string name;
  bool match = false;
  std::string note;  // non-empty for a known misprint in the listed form
};

/// The listed curvature components of the canonical family, compared to the engine curvature.
inline std::vector<ComponentCheck> listed_components_canonical(const CanonicalModel& M) {
  const Basis& B = M.basis;
  const int n = B.n();
  const Coeff l3 = Coeff::lambda(3), l2 = Coeff::lambda(2);
  const Coeff m = Coeff::lambda(1, 2) - Coeff::lambda(3);  // 2 lambda - lambda^3
  const Coeff typo = Coeff::lambda(1, 2) - Coeff::lambda(2);  // 2 lambda - lambda^2
  std::vector<ComponentCheck> out;
  auto e = [](int k) { return OneForm::basis(k); };

  auto scalar_entry = [&](const std::string& name, int r, int c, const TwoForm& expect) {
    out.push_back({name, M.curvature(r, c) == expect, ""});
  };
  scalar_entry("Omega^{-2}_{-2}", 0, 0, TwoForm{});
  scalar_entry("Omega^{-1}_{-1}", 1, 1, TwoForm{});
  {
    TwoForm w = wedge(e(B.a3()), e(B.a1())).scaled(4);
    Coeff k = Coeff(4) - l2.scaled(2);
    w += scale(k, inner_wedge(x_vector(B, 3), x_vector(B, 1)));
    w += scale(k, inner_wedge(x_vector(B, 2), x_vector(B, 0)));
    scalar_entry("Omega^{-1}_{-2}", 1, 0, w);
  }
  // Omega^i_{col} = lambda^3 X^i ^ alpha + sign * coeff * X^j ^ alpha'.
  struct Row {
    int i, col, alpha, j, sign, alpha2;
  };
  const std::vector<Row> rows = {
      {0, 0, 1, 2, 1, 3},  {0, 1, 3, 2, -1, 1}, {1, 0, 1, 3, 1, 3},  {1, 1, 3, 3, -1, 1},
      {2, 0, 1, 0, -1, 3}, {2, 1, 3, 0, 1, 1},  {3, 0, 1, 1, -1, 3}, {3, 1, 3, 1, 1, 1},
  };
  for (const auto& r : rows) {
    std::string name = "Omega^" + std::to_string(r.i) + "_{" + (r.col == 0 ? "-2" : "-1") + "}";
    bool listed_typo = r.i == 2 && r.col == 1;
    auto build = [&](const Coeff& k) {
      bool ok = true;
      for (int a = 0; a < n; ++a) {
        TwoForm w = scale(l3, wedge(e(B.x(r.i, a)), e(B.alpha(r.alpha))));
        w += scale(k.scaled(r.sign), wedge(e(B.x(r.j, a)), e(B.alpha(r.alpha2))));
        if (!(M.curvature(xpos(B, r.i, a), r.col) == w)) ok = false;
      }
      return ok;
    };
    if (listed_typo) {
      bool literal = build(typo);
      bool corrected = build(m);
      out.push_back({name, literal,
                     corrected && !literal ? "listed coefficient 2L - L^2 is a misprint; engine gives 2L - L^3" : ""});
    } else {
      out.push_back({name, build(m), ""});
    }
  }
  // Diagonal base blocks: Omega^0_0 = Omega^2_2 and Omega^1_1 = Omega^3_3.
  auto diag_block = [&](int i, int p, int q) {
    bool ok = true;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        TwoForm w;
        for (int k = 0; k < 4; ++k) w += wedge(e(B.x(k, a)), e(B.x(k, b)));
        w -= scale(l2, wedge(e(B.x(p, a)), e(B.x(p, b))));
        w -= scale(l2, wedge(e(B.x(q, a)), e(B.x(q, b))));
        if (!(M.curvature(xpos(B, i, a), xpos(B, i, b)) == w)) ok = false;
      }
    return ok;
  };
  out.push_back({"Omega^0_0", diag_block(0, 1, 3), ""});
  out.push_back({"Omega^2_2", diag_block(2, 1, 3), ""});
  out.push_back({"Omega^1_1", diag_block(1, 0, 2), ""});
  out.push_back({"Omega^3_3", diag_block(3, 0, 2), ""});
  return out;
}

/// Closed-form Ricci coefficients with ratio s: fiber 4/L^2 + 4n s^2 L^2, base s(4n+8) - 4 s^2 L^2.
inline RicciDiag expected_ricci_canonical(int n, const Coeff& s = 1) {
  RicciDiag r;
  Coeff s2 = Coeff::mul(s, s);
  r.fiber = Coeff::lambda(-2, 4) + Coeff::mul(s2, Coeff::lambda(2, 4 * n));
  r.base = s.scaled(4 * n + 8) - Coeff::mul(s2, Coeff::lambda(2, 4));
  r.off_diagonal_zero = true;
  r.blocks_uniform = true;
  return r;
}

inline RicciDiag ricci_canonical_symbolic(const CanonicalModel& M) {
  return ricci_diag(ricci_matrix(M.frame, M.curvature), 2);
}

inline RicciDiag ricci_canonical_symbolic(int n, const Coeff& ratio = 1) {
  return ricci_canonical_symbolic(canonical_model(n, ratio));
}

inline RicciValues ricci_canonical(const MetricParams& p) {
  p.validate();
  return evaluate(ricci_canonical_symbolic(p.n, Coeff(p.s_ratio)), p.lambda2);
}

/// Positive roots mu of fiber - base = 0, from the symbolic Ricci coefficients.
///
/// (fiber - base) * L^2 must be a polynomial of degree at most 2 in mu = L^2.
inline std::vector<Rational> einstein_roots(const RicciDiag& r) {
  Coeff d = Coeff::mul(r.fiber - r.base, Coeff::lambda(2));
  std::array<Rational, 3> c{0, 0, 0};
  for (const auto& [k, v] : d.terms()) {
    if (!k.second.empty() || k.first < 0 || k.first % 2 != 0 || k.first > 4)
      throw std::domain_error("einstein_roots: unexpected term " + d.str());
    c[k.first / 2] += v;
  }
  std::vector<Rational> roots;
  if (c[2] == 0) {
    if (c[1] != 0) roots.push_back(-c[0] / c[1]);
  } else {
    Rational disc = c[1] * c[1] - 4 * c[2] * c[0], sq;
    if (disc >= 0) {
      if (!rational_sqrt(disc, sq)) throw std::domain_error("einstein_roots: irrational roots");
      roots.push_back((-c[1] - sq) / (2 * c[2]));
      if (sq != 0) roots.push_back((-c[1] + sq) / (2 * c[2]));
    }
  }
  std::vector<Rational> pos;
  for (auto& x : roots)
    if (x > 0) pos.push_back(x);
  std::sort(pos.begin(), pos.end());
  return pos;
}

inline std::vector<Rational> einstein_solve_canonical(int n) { return einstein_roots(ricci_canonical_symbolic(n)); }

/// Pairs of coframe positions (p, q) combined into p + i q.
inline std::vector<std::pair<int, int>> complex_pairs(const Basis& B) {
  std::vector<std::pair<int, int>> P{{0, 1}};
  for (int a = 0; a < B.n(); ++a) P.push_back({xpos(B, 0, a), xpos(B, 2, a)});
  for (int a = 0; a < B.n(); ++a) P.push_back({xpos(B, 1, a), xpos(B, 3, a)});
  return P;
}

inline bool vanishes_at(const OneForm& f, const Rational& mu) {
  for (const auto& [k, c] : f.coeffs())
    if (!c.vanishes_at_mu(mu)) return false;
  return true;
}

/// Whether the connection, rewritten in the complex coframe, is skew-Hermitian at lambda^2 = mu.
///
/// For pair rows (p, q) and pair columns (p', q') the complex entry is
/// A = (w_pp' + w_qq')/2 + i (w_qp' - w_pq')/2 and the antilinear part is
/// B = (w_pp' - w_qq')/2 + i (w_qp' + w_pq')/2.
inline bool skew_hermitian_at(const Basis& B, const FormMatrix<OneForm>& w, const Rational& mu) {
  auto P = complex_pairs(B);
  const int m = static_cast<int>(P.size());
  auto half = Rational(1, 2);
  std::vector<std::vector<std::pair<OneForm, OneForm>>> A(m, std::vector<std::pair<OneForm, OneForm>>(m));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      auto [p, q] = P[r];
      auto [p2, q2] = P[c];
      OneForm bre = (w(p, p2) - w(q, q2)).scaled(half);
      OneForm bim = (w(q, p2) + w(p, q2)).scaled(half);
      if (!vanishes_at(bre, mu) || !vanishes_at(bim, mu)) return false;
      A[r][c] = {(w(p, p2) + w(q, q2)).scaled(half), (w(q, p2) - w(p, q2)).scaled(half)};
    }
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      if (!vanishes_at(A[r][c].first + A[c][r].first, mu)) return false;
      if (!vanishes_at(A[r][c].second - A[c][r].second, mu)) return false;
    }
  return true;
}

inline bool kahler_criterion(const MetricParams& p) {
  p.validate();
  CanonicalModel M = canonical_model(p.n, Coeff(p.s_ratio));
  return skew_hermitian_at(M.basis, M.connection, p.lambda2);
}

/// Complex 1- and 2-forms as (real, imaginary) pairs.
using ComplexOne = std::pair<OneForm, OneForm>;
using ComplexTwo = std::pair<TwoForm, TwoForm>;

inline ComplexTwo cwedge(const ComplexOne& x, const ComplexOne& y) {
  return {wedge(x.first, y.first) - wedge(x.second, y.second), wedge(x.first, y.second) + wedge(x.second, y.first)};
}

struct ContactReport {
  bool zeta_identity = false;     // d zeta^0 = -2i alpha_2 ^ zeta^0 + s (tZ^2 ^ Z^1 - tZ^1 ^ Z^2)
  bool alpha_identities = false;  // d alpha_mu - 2 alpha_eta ^ alpha_nu = 2 s (tX^mu ^ X^0 + tX^eta ^ X^nu)
  bool unit_ratio_form = false;   // the same identity with s = 1 substituted
  bool recombined = false;        // real/imaginary parts agree with d alpha_1, d alpha_3
  bool all() const { return zeta_identity && alpha_identities && unit_ratio_form && recombined; }
};

inline ContactReport contact_check(int n, const Coeff& ratio = Coeff::symbol(Symbol::ratio())) {
  Basis B(n);
  DerivativeRules R = mc_rules(structure_constants(build_sp_basis(n)), B, ratio);
  auto e = [](int k) { return OneForm::basis(k); };
  auto zvec = [&](int re, int im) {
    std::vector<ComplexOne> v;
    for (int a = 0; a < n; ++a) v.push_back({e(B.x(re, a)), e(B.x(im, a))});
    return v;
  };
  auto Z1 = zvec(0, 2), Z2 = zvec(1, 3);
  ComplexOne zeta{e(B.a1()), e(B.a3())};
  ComplexOne i_a2{OneForm{}, e(B.a2())};

  auto rhs_for = [&](const Coeff& s) {
    ComplexTwo t = cwedge(i_a2, zeta);
    ComplexTwo rhs{t.first.scaled(-2), t.second.scaled(-2)};
    for (int a = 0; a < n; ++a) {
      ComplexTwo p = cwedge(Z2[a], Z1[a]), q = cwedge(Z1[a], Z2[a]);
      rhs.first += scale(s, p.first - q.first);
      rhs.second += scale(s, p.second - q.second);
    }
    return rhs;
  };
  ComplexTwo lhs{exterior_derivative(zeta.first, R), exterior_derivative(zeta.second, R)};
  ContactReport rep;
  ComplexTwo rhs = rhs_for(ratio);
  rep.zeta_identity = lhs == rhs;

  bool ok = true;
  for (const auto& [mu, eta, nu] : kCyclic) {
    TwoForm l = exterior_derivative(e(B.alpha(mu)), R) - wedge(e(B.alpha(eta)), e(B.alpha(nu))).scaled(2);
    TwoForm r = inner_wedge(x_vector(B, mu), x_vector(B, 0)) + inner_wedge(x_vector(B, eta), x_vector(B, nu));
    if (!(l == scale(ratio.scaled(2), r))) ok = false;
  }
  rep.alpha_identities = ok;

  auto at_one = [&](const TwoForm& w) {
    TwoForm out;
    for (const auto& [k, c] : w.coeffs()) out.add(k.first, k.second, c.substitute(Symbol::ratio(), 1));
    return out;
  };
  ComplexTwo one = rhs_for(1);
  rep.unit_ratio_form = at_one(lhs.first) == one.first && at_one(lhs.second) == one.second;

  // Real part: d alpha_1 = 2 alpha_2 ^ alpha_3 + 2s(...); imaginary part: d alpha_3 = 2 alpha_1 ^ alpha_2 + ...
  TwoForm re = wedge(e(B.a2()), e(B.a3())).scaled(2) +
               scale(ratio.scaled(2), inner_wedge(x_vector(B, 1), x_vector(B, 0)) +
                                          inner_wedge(x_vector(B, 2), x_vector(B, 3)));
  TwoForm im = wedge(e(B.a1()), e(B.a2())).scaled(2) +
               scale(ratio.scaled(2), inner_wedge(x_vector(B, 3), x_vector(B, 0)) +
                                          inner_wedge(x_vector(B, 1), x_vector(B, 2)));
  rep.recombined = rhs.first == re && rhs.second == im;
  return rep;
}

/// Ricci map: Ric(g) = base * (lambda'^2 fiber form + base form) with lambda'^2 = fiber mu / base.
inline MetricParams ricci_map_from(const MetricParams& p, const RicciValues& r) {
  if (r.base <= 0) throw OutOfDomain("Ricci map leaves the family: base coefficient is not positive");
  MetricParams q = p;
  q.rho = r.base;
  q.lambda2 = r.fiber * p.lambda2 / r.base;
  return q;
}

inline MetricParams ricci_map_canonical(const MetricParams& p) {
  p.validate();
  if (p.lambda2 >= p.n + 2) throw OutOfDomain("canonical Ricci map requires lambda^2 < n + 2");
  return ricci_map_from(p, ricci_canonical(p));
}

}  // namespace twistor
