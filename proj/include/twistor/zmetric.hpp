#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistor/canonical.hpp"

namespace twistor {

/// Switches for the jet model of the Z-metric.
struct ZOptions {
  bool unknowns = false;         // add U(k) alpha_1 + U(k') alpha_3 to every jet derivative
  bool connection_part = true;   // include the connection terms A_ik omega^k_j in d(A_ij)
  bool drop_leibniz_x0 = false;  // omit the A_i0 dX^0 term of d(hat alpha_i)
  bool completion = false;       // add the first-order hat alpha terms that make d(d A_ij) vanish
  int cut = kDefaultCut;
};

/// Jet model of the Z-metric at a point: rules for d on the coframe (hat alpha_1, alpha_2,
/// hat alpha_3, X, Gamma), point values of the isotropy forms, connection and curvature.
struct ZModel {
  Basis basis;
  ZOptions options;
  std::vector<TwoForm> base_d;            // d of the untwisted coframe (structure constants)
  std::map<int, OneForm> point_values;    // isotropy form -> value at the point
  std::map<std::uint32_t, OneForm> raw_jet_rules;  // d(A_ij) before substitution and reduction
  DerivativeRules rules;
  Coframe frame;
  FormMatrix<OneForm> connection;
  FormMatrix<TwoForm> curvature;
  std::vector<Symbol> unknowns;
};

namespace detail {

// d(A_ij) = sign * X^xi for (i, j) -> (xi, sign).
inline std::pair<int, int> jet_table(int i, int j) {
  static const std::map<std::pair<int, int>, std::pair<int, int>> t = {
      {{1, 0}, {1, 1}},  {{1, 1}, {0, -1}}, {{1, 2}, {3, -1}}, {{1, 3}, {2, 1}},
      {{3, 0}, {3, 1}},  {{3, 1}, {2, -1}}, {{3, 2}, {1, 1}},  {{3, 3}, {0, -1}},
  };
  return t.at({i, j});
}

inline Coeff jet(int i, int j, int a) { return Coeff::symbol(Symbol::jet(i, j, a)); }

}  // namespace detail

/// Point value of every isotropy 1-form: Gamma_0 = P X^1 + Q X^3, Gamma_2 = R X^1 + S X^3,
/// Gamma_1 = Gamma_3 = alpha_2 = 0.
inline std::map<int, OneForm> z_point_values(const Basis& B) {
  std::map<int, OneForm> hv;
  hv[B.a2()] = OneForm{};
  for (int k = 0; k < B.size(); ++k) {
    if (!B.is_gamma(k)) continue;
    const auto& l = B.label(k);
    int g = B.gamma_kind(k);
    OneForm v;
    if (g == 0 || g == 2) {
      SymbolKind s1 = g == 0 ? SymbolKind::P : SymbolKind::R;
      SymbolKind s3 = g == 0 ? SymbolKind::Q : SymbolKind::S;
      for (int c = 0; c < B.n(); ++c) {
        v.add(B.x(1, c), Coeff::symbol(Symbol::gamma(s1, l.a, l.b, c)));
        v.add(B.x(3, c), Coeff::symbol(Symbol::gamma(s3, l.a, l.b, c)));
      }
    }
    hv[k] = v;
  }
  return hv;
}

namespace detail {

inline OneForm point_image(const std::map<int, OneForm>& hv, int k) {
  auto it = hv.find(k);
  return it == hv.end() ? OneForm::basis(k) : it->second;
}

inline OneForm point_one(const OneForm& f, const std::map<int, OneForm>& hv, int cut) {
  OneForm out;
  for (const auto& [k, c] : f.coeffs()) out += scale(c, point_image(hv, k), cut);
  return out;
}

// Keep grade-0 terms; in higher-grade terms replace isotropy forms by their point values.
inline OneForm reduce_one(const OneForm& f, const std::map<int, OneForm>& hv, int cut) {
  OneForm out;
  for (const auto& [k, c] : f.coeffs()) {
    Coeff g0 = c.grade_part(0);
    Coeff hi = c - g0;
    out.add(k, g0);
    if (!hi.is_zero()) out += scale(hi, point_image(hv, k), cut);
  }
  return out;
}

inline TwoForm reduce_two(const TwoForm& w, const std::map<int, OneForm>& hv, int cut) {
  TwoForm out;
  for (const auto& [key, c] : w.coeffs()) {
    Coeff g0 = c.grade_part(0);
    Coeff hi = c - g0;
    out.add(key.first, key.second, g0);
    if (!hi.is_zero())
      out += scale(hi, wedge(point_image(hv, key.first), point_image(hv, key.second), cut), cut);
  }
  return out;
}

}  // namespace detail

/// Grade-0 part with every isotropy form replaced by its point value.
inline TwoForm z_eval_point(const TwoForm& w, const std::map<int, OneForm>& hv, int cut = kDefaultCut) {
  TwoForm out;
  for (const auto& [key, c] : w.coeffs()) {
    Coeff g0 = c.grade_part(0);
    if (g0.is_zero()) continue;
    out += scale(g0, wedge(detail::point_image(hv, key.first), detail::point_image(hv, key.second), cut), cut);
  }
  return out;
}

/// Connection 1-forms of the base coframe read off d(X) = -omega^X_Y ^ Y; keys (X index, Y index).
inline std::map<std::pair<int, int>, OneForm> base_connection(const Basis& B, const std::vector<TwoForm>& d) {
  std::map<std::pair<int, int>, OneForm> om;
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < B.n(); ++a) {
      int x = B.x(i, a);
      for (const auto& [key, c] : d[x].coeffs()) {
        auto [p, q] = key;
        if (B.is_x(q) && !B.is_x(p))
          om[{x, q}] += OneForm::basis(p, -c);
        else if (B.is_x(p) && !B.is_x(q))
          om[{x, p}] += OneForm::basis(q, c);
        else
          throw std::logic_error("d(X) has a term without exactly one X factor");
      }
    }
  return om;
}

namespace detail {

inline ZModel build_z_model(int n, const ZOptions& opt, const std::map<std::uint32_t, OneForm>& extra) {
  ZModel M{Basis(n), opt, {}, {}, {}, {}, {}, {}, {}, {}};
  const Basis& B = M.basis;
  const int cut = opt.cut;
  M.base_d = mc_rules(structure_constants(build_sp_basis(n)), B).basis_d;
  M.point_values = z_point_values(B);
  const auto& hv = M.point_values;

  // Raw jet rules.
  auto omX = base_connection(B, M.base_d);
  unsigned next_unknown = 0;
  for (int i : {1, 3})
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < n; ++a) {
        auto [xi, s] = detail::jet_table(i, j);
        OneForm f = OneForm::basis(B.x(xi, a), s);
        if (opt.unknowns) {
          Symbol u1 = Symbol::unknown(next_unknown++), u3 = Symbol::unknown(next_unknown++);
          M.unknowns.push_back(u1);
          M.unknowns.push_back(u3);
          f.add(B.a1(), Coeff::symbol(u1));
          f.add(B.a3(), Coeff::symbol(u3));
        }
        if (opt.connection_part)
          for (const auto& [xy, w] : omX) {
            if (xy.second != B.x(j, a)) continue;
            const auto& lx = B.label(xy.first);
            f += scale(detail::jet(i, lx.i, lx.a), w, cut);
          }
        auto code = Symbol::jet(i, j, a).code;
        if (auto it = extra.find(code); it != extra.end()) f += it->second;
        M.raw_jet_rules[code] = f;
      }

  // alpha_i -> hat alpha_i + sum_j A_ij X^j; the A1/A3 slots now denote hat alpha.
  auto image = [&](int k) {
    OneForm f = OneForm::basis(k);
    int i = k == B.a1() ? 1 : k == B.a3() ? 3 : 0;
    if (i != 0)
      for (int j = 0; j < 4; ++j)
        for (int a = 0; a < n; ++a) f.add(B.x(j, a), detail::jet(i, j, a));
    return f;
  };
  auto subst1 = [&](const OneForm& f) {
    OneForm out;
    for (const auto& [k, c] : f.coeffs()) out += scale(c, image(k), cut);
    return out;
  };

  DerivativeRules& R = M.rules;
  R.cut = cut;
  R.reduce = [hv, cut](const TwoForm& w) { return detail::reduce_two(w, hv, cut); };
  for (const auto& [code, f] : M.raw_jet_rules) R.jet_rules[code] = detail::reduce_one(subst1(f), hv, cut);

  R.basis_d.assign(B.size(), TwoForm{});
  for (int e = 0; e < B.size(); ++e) {
    TwoForm w = pullback(M.base_d[e], image, cut);
    int i = e == B.a1() ? 1 : e == B.a3() ? 3 : 0;
    if (i != 0)
      for (int j = 0; j < 4; ++j)
        for (int a = 0; a < n; ++a) {
          int x = B.x(j, a);
          w -= wedge(R.jet_rules.at(Symbol::jet(i, j, a).code), OneForm::basis(x), cut);
          if (!(opt.drop_leibniz_x0 && j == 0)) w -= scale(detail::jet(i, j, a), pullback(M.base_d[x], image, cut), cut);
        }
    R.basis_d[e] = R.reduce(w);
  }

  M.frame = twistor_coframe(B);
  M.connection = levi_civita(M.frame, R);
  M.curvature = curvature(M.connection, R);
  return M;
}

}  // namespace detail

/// Grade-0 part of d(d A_ij) at the point, per jet.
inline std::map<std::uint32_t, TwoForm> jet_d2(const ZModel& M) {
  std::map<std::uint32_t, TwoForm> out;
  for (const auto& [code, f] : M.rules.jet_rules) {
    TwoForm r = z_eval_point(exterior_derivative(f, M.rules), M.point_values, M.options.cut);
    if (!r.coeffs().empty()) out[code] = r;
  }
  return out;
}

inline ZModel z_model(int n, const ZOptions& opt = {}) {
  if (n < 2) throw InvalidParams("n must be at least 2");
  ZModel M = detail::build_z_model(n, opt, {});
  if (!opt.completion) return M;
  // A residual c hat alpha_m ^ X(xi, a) in d(d A_ij) is cancelled by adding c s A(i, j', a) hat alpha_m
  // to d A_ij, where d A(i, j', a) = s X(xi, a) + ...
  const Basis& B = M.basis;
  std::map<std::uint32_t, OneForm> extra;
  for (const auto& [code, r] : jet_d2(M)) {
    int i = static_cast<int>(Symbol{code}.field(0));
    for (const auto& [key, c] : r.coeffs()) {
      int m = key.first, x = key.second;
      if (!(m == B.a1() || m == B.a3()) || !B.is_x(x) || !c.is_pure_lambda())
        throw std::logic_error("jet d^2 residual is not of the form hat alpha ^ X");
      const auto& lx = B.label(x);
      for (int jp = 0; jp < 4; ++jp) {
        auto [xi, s] = detail::jet_table(i, jp);
        if (xi == lx.i) extra[code] += OneForm::basis(m, Coeff::mul(c.scaled(s), detail::jet(i, jp, lx.a), opt.cut));
      }
    }
  }
  return detail::build_z_model(n, opt, extra);
}

inline std::vector<std::vector<Coeff>> ricci_matrix_z(const ZModel& M) {
  const auto& hv = M.point_values;
  int cut = M.options.cut;
  return ricci_matrix(M.frame, M.curvature, [&hv, cut](const TwoForm& w) { return z_eval_point(w, hv, cut); }, cut);
}

inline RicciDiag ricci_z_symbolic(const ZModel& M) { return ricci_diag(ricci_matrix_z(M), 2); }

inline RicciDiag ricci_z_symbolic(int n, const ZOptions& opt = {}) { return ricci_z_symbolic(z_model(n, opt)); }

inline bool has_formal_symbols(const Coeff& c) {
  return c.depends_on([](Symbol s) { return s.kind() != SymbolKind::Ratio && s.kind() != SymbolKind::Jet; });
}

/// Whether any Ricci entry involves P, Q, R, S or U(k).
inline bool ricci_has_formal_symbols(const std::vector<std::vector<Coeff>>& ric) {
  for (const auto& row : ric)
    for (const auto& c : row)
      if (has_formal_symbols(c)) return true;
  return false;
}

inline RicciDiag expected_ricci_z(int n) {
  RicciDiag r;
  r.fiber = Coeff::lambda(-2, 4);
  r.base = Coeff(4 * n + 8);
  r.off_diagonal_zero = true;
  r.blocks_uniform = true;
  return r;
}

inline RicciValues ricci_z(const MetricParams& p) {
  p.validate();
  return evaluate(ricci_z_symbolic(p.n), p.lambda2);
}

inline Rational einstein_solve_z(int n) {
  auto roots = einstein_roots(ricci_z_symbolic(n));
  if (roots.size() != 1) throw std::logic_error("Z family: expected a single Einstein root");
  return roots.front();
}

/// Ricci map of the Z family; Ricci is homothety invariant, so rho plays no role.
inline MetricParams ricci_map_z(const MetricParams& p) {
  p.validate();
  return ricci_map_from(p, ricci_z(p));
}

inline FormMatrix<OneForm> connection_z(const MetricParams& p) {
  p.validate();
  return z_model(p.n).connection;
}

/// d(hat alpha_1), d(hat alpha_3) against 2 alpha_2 ^ hat alpha_3 (resp. -2 alpha_2 ^ hat alpha_1)
/// plus the jet-weighted Gamma terms -A_i0 Gamma_0 X^0 - A_i2 Gamma_2 X^0 - A_i2 Gamma_0 X^2 - A_i0 Gamma_2 X^2.
struct HatAlphaReport {
  struct Entry {
    int i = 1;
    bool grade0_match = false;
    bool full_match = false;
    bool without_gamma_terms = false;  // engine equals the leading term alone
    std::string engine;
    std::string listed;
  };
  std::array<Entry, 2> entries;
  bool control_differs = false;  // dropping A_i0 dX^0 changes the engine result
};

inline TwoForm listed_hat_alpha_derivative(const ZModel& M, int i, bool with_gamma_terms) {
  const Basis& B = M.basis;
  const int n = B.n();
  TwoForm w = i == 1 ? wedge(OneForm::basis(B.a2()), OneForm::basis(B.a3())).scaled(2)
                     : wedge(OneForm::basis(B.a2()), OneForm::basis(B.a1())).scaled(-2);
  if (with_gamma_terms) {
    FormMatrix<OneForm> G0 = gamma_matrix(B, 0), G2 = gamma_matrix(B, 2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Coeff A0 = detail::jet(i, 0, a), A2 = detail::jet(i, 2, a);
        OneForm X0 = OneForm::basis(B.x(0, b)), X2 = OneForm::basis(B.x(2, b));
        w -= scale(A0, wedge(G0(a, b), X0), M.options.cut);
        w -= scale(A2, wedge(G2(a, b), X0), M.options.cut);
        w -= scale(A2, wedge(G0(a, b), X2), M.options.cut);
        w -= scale(A0, wedge(G2(a, b), X2), M.options.cut);
      }
  }
  return M.rules.reduce(w);
}

inline TwoForm grade_part(const TwoForm& w, int g) {
  TwoForm out;
  for (const auto& [k, c] : w.coeffs()) out.add(k.first, k.second, c.grade_part(g));
  return out;
}

inline HatAlphaReport hat_alpha_derivatives(int n) {
  ZModel M = z_model(n);
  ZOptions ctl;
  ctl.drop_leibniz_x0 = true;
  ZModel C = z_model(n, ctl);
  HatAlphaReport rep;
  for (int t = 0; t < 2; ++t) {
    int i = t == 0 ? 1 : 3;
    int slot = i == 1 ? M.basis.a1() : M.basis.a3();
    const TwoForm& eng = M.rules.basis_d[slot];
    TwoForm listed = listed_hat_alpha_derivative(M, i, true);
    auto& e = rep.entries[t];
    e.i = i;
    e.grade0_match = grade_part(eng, 0) == grade_part(listed, 0);
    e.full_match = eng == listed;
    e.without_gamma_terms = eng == listed_hat_alpha_derivative(M, i, false);
    e.engine = format(eng, M.basis);
    e.listed = format(listed, M.basis);
    if (!(C.rules.basis_d[slot] == eng)) rep.control_differs = true;
  }
  return rep;
}

/// Role of the unknowns U(k) (the hat alpha components of d A_ij at the point).
struct UnknownProbe {
  bool ricci_free_of_unknowns = false;      // Ricci computed with U(k) present
  bool completed_d2_zero = false;            // U = 0 plus first-order hat alpha terms gives d(d A) = 0
  bool completed_ricci_unchanged = false;    // and the Ricci tensor is unchanged by that completion
  bool d2_forces_zero = false;               // d(d A_ij) has an X ^ X coefficient c U(k) for every k
};

inline UnknownProbe probe_unknowns(int n) {
  UnknownProbe p;
  ZOptions u;
  u.unknowns = true;
  ZModel MU = z_model(n, u);
  auto ric = ricci_matrix_z(MU);
  bool dep = false;
  for (const auto& row : ric)
    for (const auto& c : row)
      if (c.depends_on([](Symbol s) { return s.kind() == SymbolKind::U; })) dep = true;
  p.ricci_free_of_unknowns = !dep;

  ZOptions comp;
  comp.completion = true;
  ZModel MC = z_model(n, comp);
  p.completed_d2_zero = jet_d2(MC).empty();
  auto r0 = ricci_matrix_z(z_model(n)), r1 = ricci_matrix_z(MC);
  p.completed_ricci_unchanged = r0 == r1;

  std::vector<bool> pinned(MU.unknowns.size(), false);
  for (const auto& [code, r] : jet_d2(MU))
    for (const auto& [key, c] : r.coeffs()) {
      if (!MU.basis.is_x(key.first) || !MU.basis.is_x(key.second)) continue;
      if (c.terms().size() != 1) continue;
      const auto& [k, v] = *c.terms().begin();
      if (k.first != 0 || k.second.size() != 1) continue;
      Symbol s{k.second.front()};
      if (s.kind() != SymbolKind::U) continue;
      for (std::size_t j = 0; j < MU.unknowns.size(); ++j)
        if (MU.unknowns[j].code == s.code) pinned[j] = true;
    }
  p.d2_forces_zero = std::all_of(pinned.begin(), pinned.end(), [](bool b) { return b; });
  return p;
}

/// Every term of d(X^i) from the first structure equation contains an X factor.
inline bool distribution_integrable(const ZModel& M) {
  const Basis& B = M.basis;
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < B.n(); ++a) {
      int x = B.x(i, a);
      TwoForm d;
      for (int c = 0; c < M.frame.size(); ++c) d -= wedge(M.connection(xpos(B, i, a), c), M.frame.theta(c), M.options.cut);
      d = M.rules.reduce(d);
      if (!(d == M.rules.basis_d[x])) return false;
      for (const auto& [k, c] : d.coeffs())
        if (!B.is_x(k.first) && !B.is_x(k.second)) return false;
    }
  return true;
}

/// Grade-0 parts of the Ricci entries agree between cutoffs 2 and 3.
inline bool truncation_sound(int n) {
  ZOptions c3;
  c3.cut = 3;
  auto r2 = ricci_matrix_z(z_model(n));
  auto r3 = ricci_matrix_z(z_model(n, c3));
  for (std::size_t b = 0; b < r2.size(); ++b)
    for (std::size_t d = 0; d < r2.size(); ++d)
      if (!(r2[b][d].grade_part(0) == r3[b][d].grade_part(0))) return false;
  return true;
}

}  // namespace twistor

namespace twistor {

/// Jet blocks a_i, b_i, c_i, d_i as n x n coefficient matrices, (a_i)_{ac} = 1/2 sum_b (A_i0b P_bac + A_i2b R_bac).
struct JetBlocks {
  using Mat = std::vector<std::vector<Coeff>>;
  Mat a, b, c, d;
};

inline JetBlocks jet_blocks(const ZModel& M, int i) {
  const Basis& B = M.basis;
  const int n = B.n(), cut = M.options.cut;
  FormMatrix<OneForm> G0 = gamma_matrix(B, 0), G2 = gamma_matrix(B, 2);
  JetBlocks J;
  J.a = J.b = J.c = J.d = JetBlocks::Mat(n, std::vector<Coeff>(n));
  for (int a = 0; a < n; ++a) {
    OneForm ab, cd;
    for (int b = 0; b < n; ++b) {
      Coeff A0 = detail::jet(i, 0, b), A2 = detail::jet(i, 2, b);
      // Gamma(b, a) at the point, weighted by the grade-1 jets.
      OneForm g0 = detail::point_one(G0(b, a), M.point_values, cut);
      OneForm g2 = detail::point_one(G2(b, a), M.point_values, cut);
      ab += scale(A0, g0, cut) + scale(A2, g2, cut);
      cd += scale(A2, g0, cut) + scale(A0, g2, cut);
    }
    for (int c = 0; c < n; ++c) {
      J.a[a][c] = ab.at(B.x(1, c)).scaled(Rational(1, 2));
      J.b[a][c] = ab.at(B.x(3, c)).scaled(Rational(1, 2));
      J.c[a][c] = cd.at(B.x(1, c)).scaled(Rational(1, 2));
      J.d[a][c] = cd.at(B.x(3, c)).scaled(Rational(1, 2));
    }
  }
  return J;
}

/// The displayed Levi-Civita connection of the Z-metric, transcribed block by block. Entries written
/// with alpha_i mean hat alpha_i + sum A_ij X^j; grade-2 products are dropped. With `literal` the
/// (X^0, X^2) block keeps its printed -Gamma_2 + alpha_2.
inline FormMatrix<OneForm> connection_z_display(const ZModel& M, bool literal = false) {
  const Basis& B = M.basis;
  const int n = B.n(), cut = M.options.cut;
  FormMatrix<OneForm> W(M.frame.size(), M.frame.blocks);
  Coeff L = Coeff::lambda(1), L2 = Coeff::lambda(2);
  auto alpha = [&](int i) {
    int slot = i == 1 ? B.a1() : i == 2 ? B.a2() : B.a3();
    OneForm f = OneForm::basis(slot);
    if (i != 2)
      for (int j = 0; j < 4; ++j)
        for (int a = 0; a < n; ++a) f.add(B.x(j, a), detail::jet(i, j, a));
    return f;
  };
  FormMatrix<OneForm> G[4] = {gamma_matrix(B, 0), gamma_matrix(B, 1), gamma_matrix(B, 2), gamma_matrix(B, 3)};
  JetBlocks J1 = jet_blocks(M, 1), J3 = jet_blocks(M, 3);
  auto blk = [&](char w, int a, int c, int i) -> const Coeff& {
    const JetBlocks& J = i == 1 ? J1 : J3;
    const auto& m = w == 'a' ? J.a : w == 'b' ? J.b : w == 'c' ? J.c : J.d;
    return m[a][c];
  };
  auto X = [&](int k, int c) { return OneForm::basis(B.x(k, c)); };

  W(0, 1) = OneForm::basis(B.a2(), -2);
  W(1, 0) = OneForm::basis(B.a2(), 2);

  // Fiber row i: columns X^0..X^3 carry (sign, first block, its X, second block, its X).
  struct FB {
    int sign;
    char p;
    int px;
    char q;
    int qx;
  };
  const FB fb[4] = {{1, 'a', 1, 'b', 3}, {-1, 'a', 0, 'c', 2}, {1, 'c', 1, 'd', 3}, {-1, 'b', 0, 'd', 2}};
  for (int r = 0; r < 2; ++r) {
    int i = r == 0 ? 1 : 3;
    for (int k = 0; k < 4; ++k)
      for (int a = 0; a < n; ++a) {
        OneForm f;
        for (int c = 0; c < n; ++c) {
          f += scale(blk(fb[k].p, a, c, i), X(fb[k].px, c), cut);
          f += scale(blk(fb[k].q, a, c, i), X(fb[k].qx, c), cut);
        }
        f = scale(Coeff::mul(L, Coeff(fb[k].sign), cut), f, cut);
        int col = xpos(B, k, a);
        W(r, col) = f;
        W(col, r) = f.scaled(-1);
      }
  }

  // Base blocks: Gamma_g + s alpha_m + t lambda^2 (w_1 alpha_1 + w_3 alpha_3).
  struct XX {
    int row, col, g, gs, m, ms, ts;
    char w;
  };
  const XX xx[] = {
      {0, 1, 1, -1, 1, -1, -1, 'a'}, {0, 2, 2, -1, 2, literal ? 1 : -1, 0, 'a'}, {0, 3, 3, -1, 3, -1, -1, 'b'},
      {1, 0, 1, 1, 1, 1, 1, 'a'},    {1, 2, 3, -1, 3, 1, 1, 'c'},                 {1, 3, 2, 1, 2, -1, 0, 'a'},
      {2, 0, 2, 1, 2, 1, 0, 'a'},    {2, 1, 3, 1, 3, -1, -1, 'c'},                {2, 3, 1, -1, 1, 1, -1, 'd'},
      {3, 0, 3, 1, 3, 1, 1, 'b'},    {3, 1, 2, -1, 2, 1, 0, 'a'},                 {3, 2, 1, 1, 1, -1, 1, 'd'},
  };
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) W(xpos(B, k, a), xpos(B, k, b)) = G[0](a, b);
  for (const auto& e : xx)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        OneForm f = G[e.g](a, b).scaled(e.gs);
        if (a == b) f += alpha(e.m).scaled(e.ms);
        if (e.ts != 0) {
          OneForm h = scale(blk(e.w, a, b, 1), OneForm::basis(B.a1()), cut) +
                      scale(blk(e.w, a, b, 3), OneForm::basis(B.a3()), cut);
          f += scale(Coeff::mul(L2, Coeff(e.ts), cut), h, cut);
        }
        W(xpos(B, e.row, a), xpos(B, e.col, b)) = f;
      }
  return W;
}

/// Block-by-block comparison of the engine connection against the display.
struct DisplayEntry {
  std::string name;
  bool match = false;
  std::string note;
};

inline std::vector<DisplayEntry> compare_connection_z_display(const ZModel& M) {
  const Basis& B = M.basis;
  const auto& E = M.connection;
  FormMatrix<OneForm> D = connection_z_display(M), Dlit = connection_z_display(M, true);
  std::vector<DisplayEntry> out;
  out.push_back({"entry (1,2) = -2 alpha_2", E(0, 1) == OneForm::basis(B.a2(), -2), ""});
  out.push_back({"engine connection skew", E.is_skew(), ""});

  bool lit_skew = Dlit.is_skew();
  out.push_back({"displayed matrix skew as printed", lit_skew,
                 lit_skew ? "" : "(X^0, X^2) block reads -Gamma_2 + alpha_2; skew partner Gamma_2 + alpha_2 forces -Gamma_2 - alpha_2"});

  // Gamma +- alpha part of the base blocks: drop the lambda^2 jet blocks from the display.
  auto strip = [&](const OneForm& f) {
    OneForm g;
    for (const auto& [k, c] : f.coeffs()) g.add(k, k == B.a1() || k == B.a3() ? c.grade_part(0) : c);
    return g;
  };
  bool gamma_alpha = true, fb_zero = true, fb_display_zero = true, l2_absent = true, l2_display_zero = true;
  const int m = M.frame.size();
  for (int r = 2; r < m; ++r)
    for (int c = 2; c < m; ++c) {
      if (!(strip(E(r, c)) == strip(D(r, c)))) gamma_alpha = false;
      if (!(strip(E(r, c)) == E(r, c))) l2_absent = false;
      if (!(strip(D(r, c)) == D(r, c))) l2_display_zero = false;
    }
  for (int r = 0; r < 2; ++r)
    for (int c = 2; c < m; ++c) {
      if (!E(r, c).coeffs().empty()) fb_zero = false;
      if (!D(r, c).coeffs().empty()) fb_display_zero = false;
    }
  out.push_back({"base blocks Gamma +- alpha", gamma_alpha, "alpha_i read as hat alpha_i + sum_j A_ij X^j"});
  out.push_back({"fiber-base jet blocks lambda(a X + b X)", fb_zero == fb_display_zero,
                 fb_zero ? "engine: every fiber-base entry vanishes to first order" : "engine fiber-base entries nonzero"});
  out.push_back({"base lambda^2 (a alpha) jet blocks", l2_absent == l2_display_zero,
                 l2_absent ? "engine: no grade-1 hat alpha terms in the base blocks" : "engine has grade-1 hat alpha terms"});
  return out;
}

namespace detail {

inline Rational at_unit_lambda(const Coeff& c) {
  Rational s = 0;
  for (const auto& [k, v] : c.terms()) {
    if (!k.second.empty()) throw std::domain_error("coefficient has symbols");
    s += v;
  }
  return s;
}

}  // namespace detail

/// Grade-0 difference between the Z and canonical connections at lambda = 1.
struct ZCanonicalDiff {
  std::vector<int> base_support;   // basis indices carried by differing base-base entries
  bool fiber_fiber_differs = false;
  bool fiber_base_differs = false;
};

inline ZCanonicalDiff z_canonical_difference(int n) {
  ZModel Z = z_model(n);
  CanonicalModel C = canonical_model(n, Rational(1));
  ZCanonicalDiff out;
  const int m = Z.frame.size();
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      OneForm d;
      for (const auto& [k, v] : Z.connection(r, c).coeffs()) d.add(k, Coeff(detail::at_unit_lambda(v.grade_part(0))));
      for (const auto& [k, v] : C.connection(r, c).coeffs()) d.add(k, Coeff(-detail::at_unit_lambda(v)));
      if (d.coeffs().empty()) continue;
      if (r < 2 && c < 2) {
        out.fiber_fiber_differs = true;
      } else if (r < 2 || c < 2) {
        out.fiber_base_differs = true;
      } else {
        for (const auto& [k, v] : d.coeffs())
          if (std::find(out.base_support.begin(), out.base_support.end(), k) == out.base_support.end())
            out.base_support.push_back(k);
      }
    }
  std::sort(out.base_support.begin(), out.base_support.end());
  return out;
}

}  // namespace twistor
