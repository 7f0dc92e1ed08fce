#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "twistor/forms.hpp"
#include "twistor/moving_frame.hpp"

namespace twistor {

/// Dense square matrix over the rationals.
class RatMatrix {
 public:
  RatMatrix() = default;
  explicit RatMatrix(int size) : n_(size), v_(static_cast<std::size_t>(size) * size) {}

  int size() const { return n_; }
  Rational& operator()(int i, int j) { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const Rational& operator()(int i, int j) const { return v_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Rational>& data() const { return v_; }

  bool is_zero() const {
    for (const auto& x : v_)
      if (x != 0) return false;
    return true;
  }
  RatMatrix transpose() const {
    RatMatrix t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix product");
    RatMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const Rational& x = a(i, k);
        if (x == 0) continue;
        for (int j = 0; j < a.n_; ++j)
          if (b(k, j) != 0) c(i, j) += x * b(k, j);
      }
    return c;
  }
  friend RatMatrix operator+(RatMatrix a, const RatMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix sum");
    for (std::size_t k = 0; k < a.v_.size(); ++k) a.v_[k] += b.v_[k];
    return a;
  }
  friend RatMatrix operator-(RatMatrix a, const RatMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("matrix difference");
    for (std::size_t k = 0; k < a.v_.size(); ++k) a.v_[k] -= b.v_[k];
    return a;
  }
  friend bool operator==(const RatMatrix& a, const RatMatrix& b) { return a.n_ == b.n_ && a.v_ == b.v_; }

 private:
  int n_ = 0;
  std::vector<Rational> v_;
};

inline RatMatrix bracket(const RatMatrix& a, const RatMatrix& b) { return a * b - b * a; }

struct LieAlgebraSpec {
  std::string name;
  int n = 0;
  std::vector<RatMatrix> basis;
  std::vector<BasisIndex> labels;

  int dim() const { return static_cast<int>(basis.size()); }
};

namespace detail {

// (X-slot or Gamma-slot, sign) at block position (row, col) of the quaternionic pattern
// [[0,-1,3,-2],[1,0,-2,-3],[-3,2,0,-1],[2,3,1,0]].
inline constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kLowPattern{{
    {{{0, 1}, {1, -1}, {3, 1}, {2, -1}}},
    {{{1, 1}, {0, 1}, {2, -1}, {3, -1}}},
    {{{3, -1}, {2, 1}, {0, 1}, {1, -1}}},
    {{{2, 1}, {3, 1}, {1, 1}, {0, 1}}},
}};

inline constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kUpPattern{{
    {{{0, -1}, {1, -1}, {3, 1}, {2, -1}}},
    {{{1, 1}, {0, -1}, {2, -1}, {3, -1}}},
    {{{3, -1}, {2, 1}, {0, -1}, {1, -1}}},
    {{{2, 1}, {3, 1}, {1, 1}, {0, -1}}},
}};

// Entries (row, col, sign) of the alpha_1, alpha_2, alpha_3 generators in the 4x4 scalar block.
inline constexpr std::array<std::array<std::array<int, 3>, 4>, 3> kAlphaPattern{{
    {{{0, 1, 1}, {1, 0, -1}, {2, 3, 1}, {3, 2, -1}}},
    {{{0, 3, 1}, {1, 2, 1}, {2, 1, -1}, {3, 0, -1}}},
    {{{0, 2, -1}, {1, 3, 1}, {2, 0, 1}, {3, 1, -1}}},
}};

// sp(n)+sp(1) pattern: (A-slot, sign) and (a-slot or -1, sign) at block (P, Q).
inline constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kSpnA{{
    {{{0, 1}, {1, -1}, {2, -1}, {3, -1}}},
    {{{1, 1}, {0, 1}, {3, -1}, {2, 1}}},
    {{{2, 1}, {3, 1}, {0, 1}, {1, -1}}},
    {{{3, 1}, {2, -1}, {1, 1}, {0, 1}}},
}};
inline constexpr std::array<std::array<std::pair<int, int>, 4>, 4> kSpnSmallA{{
    {{{-1, 0}, {1, -1}, {2, -1}, {3, -1}}},
    {{{1, 1}, {-1, 0}, {3, 1}, {2, -1}}},
    {{{2, 1}, {3, -1}, {-1, 0}, {1, 1}}},
    {{{3, 1}, {2, 1}, {1, -1}, {-1, 0}}},
}};

// Place a Gamma-type generator (slot g, entry (a, b)) into 4n blocks starting at `offset`.
inline void place_gamma(RatMatrix& M, int n, int offset, const std::array<std::array<std::pair<int, int>, 4>, 4>& pat,
                        int g, int a, int b) {
  for (int K = 0; K < 4; ++K)
    for (int L = 0; L < 4; ++L) {
      auto [slot, s] = pat[K][L];
      if (slot != g) continue;
      if (g == 0) {
        M(offset + K * n + a, offset + L * n + b) += s;
        M(offset + K * n + b, offset + L * n + a) -= s;
      } else {
        M(offset + K * n + a, offset + L * n + b) += s;
        if (a != b) M(offset + K * n + b, offset + L * n + a) += s;
      }
    }
}

}  // namespace detail

/// sp(n+1) realized in so(4(n+1)), labels in Basis declaration order.
inline LieAlgebraSpec build_sp_basis(int n) {
  if (n < 2) throw std::invalid_argument("sp(n+1) basis requires n >= 2");
  const Basis B(n);
  const int N = 4 * (n + 1);
  auto blk = [n](int k, int a) { return 4 + k * n + a; };
  LieAlgebraSpec L{"sp(" + std::to_string(n + 1) + ")", n, {}, B.labels()};
  for (const auto& lab : B.labels()) {
    RatMatrix M(N);
    using K = BasisIndex::Kind;
    if (lab.kind <= K::A3) {
      for (const auto& e : detail::kAlphaPattern[static_cast<int>(lab.kind)]) M(e[0], e[1]) = e[2];
    } else if (lab.kind == K::X) {
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) {
          if (detail::kLowPattern[k][j].first == lab.i) M(blk(k, lab.a), j) += detail::kLowPattern[k][j].second;
          if (detail::kUpPattern[j][k].first == lab.i) M(j, blk(k, lab.a)) += detail::kUpPattern[j][k].second;
        }
    } else {
      int g = static_cast<int>(lab.kind) - static_cast<int>(K::G0);
      detail::place_gamma(M, n, 4, detail::kLowPattern, g, lab.a, lab.b);
    }
    L.basis.push_back(std::move(M));
  }
  return L;
}

/// sp(n) + sp(1) in so(4n): A_0 antisymmetric, A_1..A_3 symmetric, a_1..a_3 scalar.
inline LieAlgebraSpec build_spn_sp1(int n) {
  if (n < 1) throw std::invalid_argument("sp(n)+sp(1) requires n >= 1");
  const int N = 4 * n;
  LieAlgebraSpec L{"sp(" + std::to_string(n) + ")+sp(1)", n, {}, {}};
  using K = BasisIndex::Kind;
  for (int mu = 1; mu <= 3; ++mu) {
    RatMatrix M(N);
    for (int P = 0; P < 4; ++P)
      for (int Q = 0; Q < 4; ++Q) {
        auto [slot, s] = detail::kSpnSmallA[P][Q];
        if (slot != mu) continue;
        for (int a = 0; a < n; ++a) M(P * n + a, Q * n + a) += s;
      }
    L.basis.push_back(std::move(M));
    L.labels.push_back({static_cast<K>(mu - 1)});
  }
  for (int g = 0; g < 4; ++g)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        if (g == 0 && a == b) continue;
        RatMatrix M(N);
        detail::place_gamma(M, n, 0, detail::kSpnA, g, a, b);
        L.basis.push_back(std::move(M));
        L.labels.push_back({static_cast<K>(static_cast<int>(K::G0) + g), 0, a, b});
      }
  return L;
}

/// Right multiplication by the quaternion unit i (q = 1) or j (q = 2) on R^{4(n+1)}.
inline RatMatrix right_action(int n, int q) {
  static constexpr int kI[4][4] = {{0, -1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, -1, 0}};
  static constexpr int kJ[4][4] = {{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
  if (q != 1 && q != 2) throw std::invalid_argument("right_action: q must be 1 (i) or 2 (j)");
  const auto& P = q == 1 ? kI : kJ;
  RatMatrix M(4 * (n + 1));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (P[r][c] == 0) continue;
      M(r, c) = P[r][c];
      for (int a = 0; a < n; ++a) M(4 + r * n + a, 4 + c * n + a) = P[r][c];
    }
  return M;
}

inline bool commutes_with_right_action(const LieAlgebraSpec& L) {
  const RatMatrix I = right_action(L.n, 1), J = right_action(L.n, 2);
  for (const auto& M : L.basis)
    if (!bracket(M, I).is_zero() || !bracket(M, J).is_zero()) return false;
  return true;
}

inline bool is_skew_basis(const LieAlgebraSpec& L) {
  for (const auto& M : L.basis)
    if (!(M + M.transpose()).is_zero()) return false;
  return true;
}

struct NotClosed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct JacobiFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exact coordinates in a list of matrices by sparse row echelon elimination.
class SpanSolver {
 public:
  explicit SpanSolver(const std::vector<RatMatrix>& basis) : dim_(static_cast<int>(basis.size())) {
    for (int k = 0; k < dim_; ++k) {
      Sparse v = flatten(basis[k]);
      Sparse comb{{k, 1}};
      reduce(v, comb);
      if (v.empty()) {
        dependent_ = true;
        continue;
      }
      int p = v.begin()->first;
      Rational lead = v.begin()->second;
      for (auto& [i, x] : v) x /= lead;
      for (auto& [i, x] : comb) x /= lead;
      rows_.push_back({p, std::move(v), std::move(comb)});
    }
  }

  int rank() const { return static_cast<int>(rows_.size()); }
  bool independent() const { return !dependent_; }

  /// Coordinates of M; returns false if M is outside the span.
  bool solve(const RatMatrix& M, std::map<int, Rational>& coords) const {
    Sparse v = flatten(M);
    Sparse comb;
    reduce(v, comb);
    if (!v.empty()) return false;
    coords.clear();
    for (const auto& [k, x] : comb)
      if (x != 0) coords[k] = -x;
    return true;
  }

 private:
  using Sparse = std::map<int, Rational>;
  struct Row {
    int pivot;
    Sparse v;
    Sparse comb;
  };

  static Sparse flatten(const RatMatrix& M) {
    Sparse v;
    const auto& d = M.data();
    for (std::size_t i = 0; i < d.size(); ++i)
      if (d[i] != 0) v[static_cast<int>(i)] = d[i];
    return v;
  }

  static void axpy(Sparse& y, const Rational& a, const Sparse& x) {
    for (const auto& [i, xi] : x) {
      Rational& t = y[i];
      t += a * xi;
      if (t == 0) y.erase(i);
    }
  }

  void reduce(Sparse& v, Sparse& comb) const {
    for (const auto& r : rows_) {
      auto it = v.find(r.pivot);
      if (it == v.end()) continue;
      Rational f = it->second;
      axpy(v, -f, r.v);
      axpy(comb, -f, r.comb);
    }
  }

  int dim_;
  bool dependent_ = false;
  std::vector<Row> rows_;
};

/// Bracket table [e_i, e_j] = sum_k c^k_ij e_k for i < j.
struct StructureConstants {
  int dim = 0;
  std::map<std::tuple<int, int, int>, Rational> c;

  Rational at(int i, int j, int k) const {
    if (i == j) return 0;
    int sign = 1;
    if (i > j) {
      std::swap(i, j);
      sign = -1;
    }
    auto it = c.find({i, j, k});
    return it == c.end() ? Rational(0) : Rational(sign * it->second);
  }

  /// Sparse [e_i, e_j] for any ordered pair.
  std::map<int, Rational> bracket_of(int i, int j) const {
    std::map<int, Rational> out;
    if (i == j) return out;
    int sign = i < j ? 1 : -1;
    auto lo = c.lower_bound({std::min(i, j), std::max(i, j), -1});
    for (auto it = lo; it != c.end(); ++it) {
      auto [a, b, k] = it->first;
      if (a != std::min(i, j) || b != std::max(i, j)) break;
      out[k] = sign * it->second;
    }
    return out;
  }
};

/// Number of (i < j < l, m) components where the Jacobi identity fails.
inline int jacobi_violations(const StructureConstants& sc) {
  const int d = sc.dim;
  std::vector<std::map<int, Rational>> br(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) br[static_cast<std::size_t>(i) * d + j] = sc.bracket_of(i, j);
  auto get = [&](int i, int j) -> const std::map<int, Rational>& { return br[static_cast<std::size_t>(i) * d + j]; };
  int bad = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int l = j + 1; l < d; ++l) {
        std::map<int, Rational> acc;
        auto add = [&](int x, int y, int z) {
          for (const auto& [k, c1] : get(x, y))
            for (const auto& [m, c2] : get(k, z)) acc[m] += c1 * c2;
        };
        add(i, j, l);
        add(j, l, i);
        add(l, i, j);
        for (const auto& [m, v] : acc)
          if (v != 0) ++bad;
      }
  return bad;
}

inline StructureConstants structure_constants(const LieAlgebraSpec& L) {
  SpanSolver solver(L.basis);
  if (!solver.independent()) throw NotClosed(L.name + ": basis is linearly dependent");
  StructureConstants sc;
  sc.dim = L.dim();
  std::map<int, Rational> coords;
  for (int i = 0; i < L.dim(); ++i)
    for (int j = i + 1; j < L.dim(); ++j) {
      RatMatrix b = bracket(L.basis[i], L.basis[j]);
      if (b.is_zero()) continue;
      if (!solver.solve(b, coords)) throw NotClosed(L.name + ": bracket leaves the span");
      for (const auto& [k, v] : coords) sc.c[{i, j, k}] = v;
    }
  if (jacobi_violations(sc) != 0) throw JacobiFailure(L.name + ": Jacobi identity fails");
  return sc;
}

/// Maurer-Cartan derivative rules: d e^k = -sum_{i<j} c^k_ij e^i ^ e^j.
///
/// `ratio` multiplies the isotropy part of [X, X]; ratio = 1 is the symmetric space itself.
inline DerivativeRules mc_rules(const StructureConstants& sc, const Basis& B, const Coeff& ratio = 1) {
  DerivativeRules r;
  r.basis_d.assign(sc.dim, TwoForm{});
  for (const auto& [key, v] : sc.c) {
    auto [i, j, k] = key;
    Coeff w(-v);
    if (B.is_x(i) && B.is_x(j) && !B.is_x(k)) w = Coeff::mul(w, ratio);
    r.basis_d[k].add(i, j, w);
  }
  return r;
}

/// Column vector X^i of 1-forms.
inline std::vector<OneForm> x_vector(const Basis& B, int i) {
  std::vector<OneForm> v;
  for (int a = 0; a < B.n(); ++a) v.push_back(OneForm::basis(B.x(i, a)));
  return v;
}

/// n x n matrix Gamma_g: antisymmetric for g = 0, symmetric otherwise.
inline FormMatrix<OneForm> gamma_matrix(const Basis& B, int g) {
  FormMatrix<OneForm> G(B.n());
  for (int a = 0; a < B.n(); ++a)
    for (int b = 0; b < B.n(); ++b) {
      if (g == 0 && a == b) continue;
      int k = B.g(g, a, b);
      G(a, b) = OneForm::basis(k, g == 0 && a > b ? Coeff(-1) : Coeff(1));
    }
  return G;
}

/// Matrix of 2-forms with entries X_a ^ Y_b.
inline FormMatrix<TwoForm> outer_wedge(const std::vector<OneForm>& X, const std::vector<OneForm>& Y) {
  FormMatrix<TwoForm> M(static_cast<int>(X.size()));
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < Y.size(); ++b) M(static_cast<int>(a), static_cast<int>(b)) = wedge(X[a], Y[b]);
  return M;
}

/// The 2-form sum_a X_a ^ Y_a.
inline TwoForm inner_wedge(const std::vector<OneForm>& X, const std::vector<OneForm>& Y) {
  TwoForm w;
  for (std::size_t a = 0; a < X.size(); ++a) w += wedge(X[a], Y[a]);
  return w;
}

/// The 4n x 4n sp(n)sp(1) connection matrix in Gamma_g and alpha_mu, frame order X^0, X^1, X^2, X^3.
inline FormMatrix<OneForm> spnsp1_connection(const Basis& B) {
  const int n = B.n();
  std::vector<std::string> blocks;
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < n; ++a) blocks.push_back("X" + std::to_string(i));
  FormMatrix<OneForm> C(4 * n, blocks);
  std::array<FormMatrix<OneForm>, 4> G{gamma_matrix(B, 0), gamma_matrix(B, 1), gamma_matrix(B, 2),
                                       gamma_matrix(B, 3)};
  for (int P = 0; P < 4; ++P)
    for (int Q = 0; Q < 4; ++Q) {
      auto [g, s] = detail::kSpnA[P][Q];
      auto [mu, t] = detail::kSpnSmallA[P][Q];
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          OneForm e = G[g](a, b).scaled(s);
          if (mu > 0 && a == b) e += OneForm::basis(B.alpha(mu), t);
          C(P * n + a, Q * n + b) = e;
        }
    }
  return C;
}

struct BlockCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct BlockReport {
  std::vector<BlockCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Cyclic triples (mu, eta, nu) of {1, 2, 3}.
inline constexpr std::array<std::array<int, 3>, 3> kCyclic{{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}};

/// The Maurer-Cartan block equations of sp(n+1), recomputed from `sc`.
inline BlockReport verify_block_equations(const Basis& B, const StructureConstants& sc) {
  const DerivativeRules R = mc_rules(sc, B);
  const int n = B.n();
  BlockReport rep;
  std::array<std::vector<OneForm>, 4> X;
  std::array<FormMatrix<OneForm>, 4> G;
  for (int i = 0; i < 4; ++i) {
    X[i] = x_vector(B, i);
    G[i] = gamma_matrix(B, i);
  }
  auto residual_size = [](const FormMatrix<TwoForm>& M) {
    int bad = 0;
    for (int i = 0; i < M.dim(); ++i)
      for (int j = 0; j < M.dim(); ++j) bad += static_cast<int>(M(i, j).coeffs().size());
    return bad;
  };
  auto record = [&](const std::string& name, int bad) {
    rep.checks.push_back({name, bad == 0, bad == 0 ? "exact" : std::to_string(bad) + " nonzero residual terms"});
  };

  {
    FormMatrix<TwoForm> E = exterior_derivative(G[0], R);
    for (int i = 0; i < 4; ++i) E = E - outer_wedge(X[i], X[i]);
    E = E + mat_wedge(G[0], G[0]);
    for (int mu = 1; mu <= 3; ++mu) E = E - mat_wedge(G[mu], G[mu]);
    record("dGamma0", residual_size(E));
  }
  for (const auto& [mu, eta, nu] : kCyclic) {
    TwoForm e = exterior_derivative(OneForm::basis(B.alpha(mu)), R);
    e -= wedge(OneForm::basis(B.alpha(eta)), OneForm::basis(B.alpha(nu))).scaled(2);
    e -= inner_wedge(X[mu], X[0]);
    e += inner_wedge(X[0], X[mu]);
    e += inner_wedge(X[nu], X[eta]);
    e -= inner_wedge(X[eta], X[nu]);
    record("dalpha" + std::to_string(mu), static_cast<int>(e.coeffs().size()));
  }
  for (const auto& [mu, eta, nu] : kCyclic) {
    FormMatrix<TwoForm> E = exterior_derivative(G[mu], R);
    E = E + mat_wedge(G[mu], G[0]) + mat_wedge(G[0], G[mu]);
    E = E - mat_wedge(G[nu], G[eta]) + mat_wedge(G[eta], G[nu]);
    E = E - outer_wedge(X[mu], X[0]) + outer_wedge(X[0], X[mu]);
    E = E - outer_wedge(X[nu], X[eta]) + outer_wedge(X[eta], X[nu]);
    record("dGamma" + std::to_string(mu), residual_size(E));
  }
  {
    FormMatrix<OneForm> C = spnsp1_connection(B);
    std::vector<OneForm> theta;
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < n; ++a) theta.push_back(OneForm::basis(B.x(i, a)));
    int bad = 0;
    for (int A = 0; A < 4 * n; ++A) {
      TwoForm r = exterior_derivative(theta[A], R);
      for (int Bi = 0; Bi < 4 * n; ++Bi) r += wedge(C(A, Bi), theta[Bi]);
      bad += static_cast<int>(r.coeffs().size());
    }
    record("dX+Gamma^X", bad);
  }
  {
    int bad = 0;
    for (int k = 0; k < B.size(); ++k) {
      TwoForm w = exterior_derivative(OneForm::basis(k), R);
      // d(d e^k) as a 3-form: sum over terms c e^i ^ e^j of c (de^i ^ e^j - e^i ^ de^j).
      std::map<std::array<int, 3>, Rational> three;
      auto put = [&](int a, int b, int c, const Rational& v) {
        std::array<int, 3> idx{a, b, c};
        if (a == b || b == c || a == c) return;
        int sign = 1;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 2; ++q)
            if (idx[q] > idx[q + 1]) {
              std::swap(idx[q], idx[q + 1]);
              sign = -sign;
            }
        three[idx] += sign * v;
      };
      for (const auto& [key, c] : w.coeffs()) {
        Rational cv = c.at_mu(1);
        for (const auto& [k2, c2] : R.basis_d[key.first].coeffs()) put(k2.first, k2.second, key.second, cv * c2.at_mu(1));
        for (const auto& [k2, c2] : R.basis_d[key.second].coeffs())
          put(key.first, k2.first, k2.second, -cv * c2.at_mu(1));
      }
      for (const auto& [idx, v] : three)
        if (v != 0) ++bad;
    }
    record("d^2=0", bad);
  }
  return rep;
}

inline BlockReport verify_block_equations(int n) {
  if (n < 2) throw std::invalid_argument("block equations require n >= 2");
  return verify_block_equations(Basis(n), structure_constants(build_sp_basis(n)));
}

/// Riemann tensor R(A, B, C, D) = Omega^A_B(e_C, e_D) on a 4n-dimensional frame.
struct CurvatureTensor {
  int n = 0;
  std::vector<Rational> comp;
  int foreign_terms = 0;  // curvature terms outside X ^ X (must be zero)

  explicit CurvatureTensor(int n_ = 0) : n(n_), comp(static_cast<std::size_t>(dim()) * dim() * dim() * dim()) {}
  int dim() const { return 4 * n; }
  Rational& operator()(int A, int B, int C, int D) { return comp[idx(A, B, C, D)]; }
  const Rational& operator()(int A, int B, int C, int D) const { return comp[idx(A, B, C, D)]; }
  friend bool operator==(const CurvatureTensor& a, const CurvatureTensor& b) {
    return a.n == b.n && a.comp == b.comp;
  }

 private:
  std::size_t idx(int A, int B, int C, int D) const {
    const std::size_t d = static_cast<std::size_t>(dim());
    return ((static_cast<std::size_t>(A) * d + B) * d + C) * d + D;
  }
};

inline CurvatureTensor tensor_from_forms(const Basis& B, const FormMatrix<TwoForm>& Omega) {
  CurvatureTensor T(B.n());
  const int d = T.dim();
  auto frame = [&](int k) { return B.is_x(k) ? k - 3 : -1; };
  for (int A = 0; A < d; ++A)
    for (int Bi = 0; Bi < d; ++Bi)
      for (const auto& [key, c] : Omega(A, Bi).coeffs()) {
        int C = frame(key.first), D = frame(key.second);
        if (C < 0 || D < 0 || !c.is_pure_lambda()) {
          ++T.foreign_terms;
          continue;
        }
        Rational v = c.at_mu(1);
        T(A, Bi, C, D) += v;
        T(A, Bi, D, C) -= v;
      }
  return T;
}

/// HP^n curvature 2-forms assembled from the closed-form blocks.
inline FormMatrix<TwoForm> hpn_curvature_forms(const Basis& B) {
  const int n = B.n();
  std::array<std::vector<OneForm>, 4> X;
  for (int i = 0; i < 4; ++i) X[i] = x_vector(B, i);

  auto outer_add = [&](FormMatrix<TwoForm>& T, int p, int q, int s) {
    FormMatrix<TwoForm> O = outer_wedge(X[p], X[q]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) T(a, b) += O(a, b).scaled(s);
  };
  auto inner_add = [&](FormMatrix<TwoForm>& T, int p, int q, int s) {
    TwoForm w = inner_wedge(X[p], X[q]).scaled(s);
    for (int a = 0; a < n; ++a) T(a, a) += w;
  };

  FormMatrix<TwoForm> O00(n);
  for (int i = 0; i < 4; ++i) outer_add(O00, i, i, 1);

  std::map<std::pair<int, int>, FormMatrix<TwoForm>> blocks;
  blocks[{0, 0}] = O00;
  for (int i = 1; i < 4; ++i) blocks[{i, i}] = O00;
  for (const auto& [mu, eta, nu] : kCyclic) {
    FormMatrix<TwoForm> T(n);
    outer_add(T, mu, 0, 1);
    outer_add(T, 0, mu, -1);
    outer_add(T, nu, eta, 1);
    outer_add(T, eta, nu, -1);
    inner_add(T, mu, 0, 2);
    inner_add(T, eta, nu, 2);
    blocks[{mu, 0}] = T;

    FormMatrix<TwoForm> U(n);
    outer_add(U, mu, 0, -1);
    outer_add(U, 0, mu, 1);
    outer_add(U, nu, eta, -1);
    outer_add(U, eta, nu, 1);
    inner_add(U, mu, 0, 2);
    inner_add(U, eta, nu, 2);
    blocks[{eta, nu}] = U;
  }
  for (const auto& [mu, eta, nu] : kCyclic) {
    for (auto [p, q] : {std::pair{mu, 0}, std::pair{eta, nu}}) {
      const auto& T = blocks.at({p, q});
      FormMatrix<TwoForm> Tt(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) Tt(a, b) = -T(b, a);
      blocks[{q, p}] = Tt;
    }
  }
  FormMatrix<TwoForm> Omega(4 * n);
  for (const auto& [pq, T] : blocks)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) Omega(pq.first * n + a, pq.second * n + b) = T(a, b);
  return Omega;
}

/// HP^n Riemann tensor from the closed-form curvature blocks.
inline CurvatureTensor hpn_curvature(int n) {
  if (n < 2) throw std::invalid_argument("hpn_curvature requires n >= 2");
  Basis B(n);
  return tensor_from_forms(B, hpn_curvature_forms(B));
}

/// HP^n Riemann tensor recomputed from the structure equations of Sp(n+1)/Sp(n)Sp(1).
inline CurvatureTensor hpn_curvature_mc(int n, const StructureConstants& sc) {
  Basis B(n);
  DerivativeRules R = mc_rules(sc, B);
  Coframe F;
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < n; ++a) {
      F.index.push_back(B.x(i, a));
      F.scale.push_back(1);
      F.blocks.push_back("X" + std::to_string(i));
    }
  FormMatrix<TwoForm> Omega = curvature(levi_civita(F, R), R);
  return tensor_from_forms(B, Omega);
}

inline CurvatureTensor hpn_curvature_mc(int n) { return hpn_curvature_mc(n, structure_constants(build_sp_basis(n))); }

struct EqualIndices : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// K(e_A, e_B) = g(R(e_A, e_B) e_B, e_A) = Omega^A_B(e_A, e_B).
inline Rational sectional(const CurvatureTensor& T, int A, int B) {
  if (A == B) throw EqualIndices("sectional curvature needs distinct frame indices");
  return T(A, B, A, B);
}

/// Ric(e_B, e_D) = sum_A R(A, B, A, D).
inline std::vector<std::vector<Rational>> ricci(const CurvatureTensor& T) {
  const int d = T.dim();
  std::vector<std::vector<Rational>> out(d, std::vector<Rational>(d));
  for (int B = 0; B < d; ++B)
    for (int D = 0; D < d; ++D)
      for (int A = 0; A < d; ++A) out[B][D] += T(A, B, A, D);
  return out;
}

inline Rational scalar(const CurvatureTensor& T) {
  Rational s;
  auto ric = ricci(T);
  for (int A = 0; A < T.dim(); ++A) s += ric[A][A];
  return s;
}

struct CurvatureSymmetries {
  bool antisym_first = true;
  bool antisym_second = true;
  bool pair = true;
  bool bianchi = true;
  bool all() const { return antisym_first && antisym_second && pair && bianchi; }
};

inline CurvatureSymmetries check_symmetries(const CurvatureTensor& T) {
  CurvatureSymmetries s;
  const int d = T.dim();
  for (int A = 0; A < d; ++A)
    for (int B = 0; B < d; ++B)
      for (int C = 0; C < d; ++C)
        for (int D = 0; D < d; ++D) {
          const Rational& v = T(A, B, C, D);
          if (v + T(B, A, C, D) != 0) s.antisym_first = false;
          if (v + T(A, B, D, C) != 0) s.antisym_second = false;
          if (v != T(C, D, A, B)) s.pair = false;
          if (v + T(A, C, D, B) + T(A, D, B, C) != 0) s.bianchi = false;
        }
  return s;
}

}  // namespace twistor
