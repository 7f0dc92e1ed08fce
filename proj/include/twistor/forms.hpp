#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistor/coeff.hpp"

namespace twistor {

/// Coframe symbol of sp(n+1): alpha_1..3, X^i_a, and the sp(n)-part forms.
struct BasisIndex {
  enum class Kind { A1, A2, A3, X, G0, G1, G2, G3 };
  Kind kind = Kind::A1;
  int i = 0;  // X: quaternionic slot 0..3
  int a = 0;  // X: component; G: row
  int b = 0;  // G: column, a < b for G0 and a <= b otherwise

  std::string str() const {
    switch (kind) {
      case Kind::A1: return "a1";
      case Kind::A2: return "a2";
      case Kind::A3: return "a3";
      case Kind::X: return "X" + std::to_string(i) + "_" + std::to_string(a + 1);
      default:
        return "G" + std::to_string(static_cast<int>(kind) - static_cast<int>(Kind::G0)) + "_" +
               std::to_string(a + 1) + std::to_string(b + 1);
    }
  }
};

/// Indexed coframe of sp(n+1) in declaration order A1 < A2 < A3 < X(0,1) < ... < G3(n,n).
class Basis {
 public:
  explicit Basis(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("basis needs n >= 1");
    using K = BasisIndex::Kind;
    labels_.push_back({K::A1});
    labels_.push_back({K::A2});
    labels_.push_back({K::A3});
    for (int i = 0; i < 4; ++i)
      for (int a = 0; a < n; ++a) labels_.push_back({K::X, i, a});
    for (int g = 0; g < 4; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          if (g == 0 && a == b) continue;
          labels_.push_back({static_cast<K>(static_cast<int>(K::G0) + g), 0, a, b});
        }
    for (int k = 0; k < size(); ++k)
      if (labels_[k].kind >= K::G0) gindex_[key(labels_[k])] = k;
  }

  int n() const { return n_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const BasisIndex& label(int k) const { return labels_.at(k); }
  const std::vector<BasisIndex>& labels() const { return labels_; }

  int a1() const { return 0; }
  int a2() const { return 1; }
  int a3() const { return 2; }
  /// alpha_mu for mu = 1, 2, 3.
  int alpha(int mu) const { return mu - 1; }
  int x(int i, int a) const { return 3 + i * n_ + a; }
  /// Index of G_g(a, b) with a, b already ordered; -1 for the G0 diagonal.
  int g(int gi, int a, int b) const {
    if (a > b) std::swap(a, b);
    if (gi == 0 && a == b) return -1;
    BasisIndex l{static_cast<BasisIndex::Kind>(static_cast<int>(BasisIndex::Kind::G0) + gi), 0, a, b};
    return gindex_.at(key(l));
  }
  bool is_x(int k) const { return labels_.at(k).kind == BasisIndex::Kind::X; }
  bool is_alpha(int k) const { return k < 3; }
  bool is_gamma(int k) const { return labels_.at(k).kind >= BasisIndex::Kind::G0; }
  int gamma_kind(int k) const {
    return static_cast<int>(labels_.at(k).kind) - static_cast<int>(BasisIndex::Kind::G0);
  }

 private:
  static long key(const BasisIndex& l) { return (static_cast<long>(l.kind) * 128 + l.a) * 128 + l.b; }
  int n_;
  std::vector<BasisIndex> labels_;
  std::map<long, int> gindex_;
};

/// Invariant 1-form: finitely supported map basis index -> coefficient.
class OneForm {
 public:
  using Map = std::map<int, Coeff>;
  OneForm() = default;
  static OneForm basis(int k, const Coeff& c = 1) {
    OneForm f;
    f.add(k, c);
    return f;
  }

  const Map& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  Coeff at(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? Coeff{} : it->second;
  }

  void add(int k, const Coeff& v) {
    if (v.is_zero()) return;
    auto [it, inserted] = c_.try_emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  OneForm& operator+=(const OneForm& o) {
    for (const auto& [k, v] : o.c_) add(k, v);
    return *this;
  }
  OneForm& operator-=(const OneForm& o) {
    for (const auto& [k, v] : o.c_) add(k, -v);
    return *this;
  }
  friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
  friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
  OneForm operator-() const { return scaled(-1); }
  OneForm scaled(const Rational& r) const {
    OneForm out;
    for (const auto& [k, v] : c_) out.add(k, v.scaled(r));
    return out;
  }
  friend bool operator==(const OneForm& a, const OneForm& b) { return a.c_ == b.c_; }

 private:
  Map c_;
};

/// Invariant 2-form stored on ordered pairs (i, j) with i < j.
class TwoForm {
 public:
  using Map = std::map<std::pair<int, int>, Coeff>;
  TwoForm() = default;

  const Map& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }

  /// Coefficient of e^i ^ e^j for any order of i, j.
  Coeff at(int i, int j) const {
    if (i == j) return {};
    auto it = c_.find({std::min(i, j), std::max(i, j)});
    if (it == c_.end()) return {};
    return i < j ? it->second : -it->second;
  }

  /// Add v * e^i ^ e^j, normalizing the order.
  void add(int i, int j, const Coeff& v) {
    if (i == j || v.is_zero()) return;
    std::pair<int, int> key{i, j};
    Coeff val = v;
    if (i > j) {
      key = {j, i};
      val = -v;
    }
    auto [it, inserted] = c_.try_emplace(key, val);
    if (!inserted) {
      it->second += val;
      if (it->second.is_zero()) c_.erase(it);
    }
  }
  TwoForm& operator+=(const TwoForm& o) {
    for (const auto& [k, v] : o.c_) add(k.first, k.second, v);
    return *this;
  }
  TwoForm& operator-=(const TwoForm& o) {
    for (const auto& [k, v] : o.c_) add(k.first, k.second, -v);
    return *this;
  }
  friend TwoForm operator+(TwoForm a, const TwoForm& b) { return a += b; }
  friend TwoForm operator-(TwoForm a, const TwoForm& b) { return a -= b; }
  TwoForm operator-() const { return scaled(-1); }
  TwoForm scaled(const Rational& r) const {
    TwoForm out;
    for (const auto& [k, v] : c_) out.add(k.first, k.second, v.scaled(r));
    return out;
  }
  friend bool operator==(const TwoForm& a, const TwoForm& b) { return a.c_ == b.c_; }

 private:
  Map c_;
};

inline OneForm scale(const Coeff& c, const OneForm& f, int cut = kDefaultCut) {
  OneForm out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : f.coeffs()) out.add(k, Coeff::mul(c, v, cut));
  return out;
}

inline TwoForm scale(const Coeff& c, const TwoForm& w, int cut = kDefaultCut) {
  TwoForm out;
  if (c.is_zero()) return out;
  for (const auto& [k, v] : w.coeffs()) out.add(k.first, k.second, Coeff::mul(c, v, cut));
  return out;
}

inline TwoForm wedge(const OneForm& a, const OneForm& b, int cut = kDefaultCut) {
  TwoForm out;
  for (const auto& [i, x] : a.coeffs())
    for (const auto& [j, y] : b.coeffs())
      if (i != j) out.add(i, j, Coeff::mul(x, y, cut));
  return out;
}

/// Map each basis 1-form to a 1-form and extend bilinearly.
inline TwoForm pullback(const TwoForm& w, const std::function<OneForm(int)>& image, int cut = kDefaultCut) {
  TwoForm out;
  for (const auto& [k, v] : w.coeffs()) out += scale(v, wedge(image(k.first), image(k.second), cut), cut);
  return out;
}

/// Tangent vector named in the dual frame, e.g. lambda^{-1} xi_{alpha_1}.
using DualVector = std::map<int, Coeff>;

inline DualVector dual(int k, const Coeff& c = 1) { return {{k, c}}; }

inline Coeff eval(const OneForm& f, const DualVector& u, int cut = kDefaultCut) {
  Coeff out;
  for (const auto& [k, c] : u) out += Coeff::mul(f.at(k), c, cut);
  return out;
}

/// Antisymmetric pairing: eval_pair(e^i ^ e^j, xi_i, xi_j) = 1.
inline Coeff eval_pair(const TwoForm& w, const DualVector& u, const DualVector& v, int cut = kDefaultCut) {
  Coeff out;
  for (const auto& [k, c] : w.coeffs()) {
    auto [i, j] = k;
    Coeff ui, uj, vi, vj;
    if (auto it = u.find(i); it != u.end()) ui = it->second;
    if (auto it = u.find(j); it != u.end()) uj = it->second;
    if (auto it = v.find(i); it != v.end()) vi = it->second;
    if (auto it = v.find(j); it != v.end()) vj = it->second;
    Coeff det = Coeff::mul(ui, vj, cut) - Coeff::mul(uj, vi, cut);
    out += Coeff::mul(c, det, cut);
  }
  return out;
}

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Square matrix of forms with named row/column blocks.
template <class Form>
class FormMatrix {
 public:
  FormMatrix() = default;
  explicit FormMatrix(int dim, std::vector<std::string> blocks = {})
      : dim_(dim), entries_(static_cast<std::size_t>(dim) * dim), blocks_(std::move(blocks)) {
    if (blocks_.empty()) blocks_.assign(dim, "");
    if (static_cast<int>(blocks_.size()) != dim) throw DimensionMismatch("block map size");
  }

  int dim() const { return dim_; }
  Form& operator()(int i, int j) { return entries_.at(static_cast<std::size_t>(i) * dim_ + j); }
  const Form& operator()(int i, int j) const { return entries_.at(static_cast<std::size_t>(i) * dim_ + j); }
  const std::vector<std::string>& blocks() const { return blocks_; }
  const std::string& block(int i) const { return blocks_.at(i); }

  bool is_skew() const {
    for (int i = 0; i < dim_; ++i)
      for (int j = i; j < dim_; ++j)
        if (!((*this)(i, j) + (*this)(j, i)).is_zero()) return false;
    return true;
  }
  bool is_zero() const {
    for (const auto& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }
  friend FormMatrix operator-(FormMatrix a, const FormMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch("matrix difference");
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] -= b.entries_[k];
    return a;
  }
  friend FormMatrix operator+(FormMatrix a, const FormMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch("matrix sum");
    for (std::size_t k = 0; k < a.entries_.size(); ++k) a.entries_[k] += b.entries_[k];
    return a;
  }

 private:
  int dim_ = 0;
  std::vector<Form> entries_;
  std::vector<std::string> blocks_;
};

inline FormMatrix<TwoForm> mat_wedge(const FormMatrix<OneForm>& A, const FormMatrix<OneForm>& B,
                                     int cut = kDefaultCut) {
  if (A.dim() != B.dim()) throw DimensionMismatch("mat_wedge");
  FormMatrix<TwoForm> out(A.dim(), A.blocks());
  for (int i = 0; i < A.dim(); ++i)
    for (int k = 0; k < A.dim(); ++k) {
      if (A(i, k).is_zero()) continue;
      for (int j = 0; j < A.dim(); ++j)
        if (!B(k, j).is_zero()) out(i, j) += wedge(A(i, k), B(k, j), cut);
    }
  return out;
}

struct MissingRule : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exterior derivative data: d of each basis form, d of each jet symbol,
/// and an optional reduction applied to every result.
///
/// Grade-0 symbols are locally constant: their derivative would only ever
/// multiply a grade-1 factor that vanishes at the evaluation point.
struct DerivativeRules {
  std::vector<TwoForm> basis_d;
  std::map<std::uint32_t, OneForm> jet_rules;
  std::function<TwoForm(const TwoForm&)> reduce;
  int cut = kDefaultCut;
};

/// Differential of a coefficient: sum over jet factors of (d jet) * rest.
inline OneForm differential(const Coeff& c, const DerivativeRules& rules) {
  OneForm out;
  for (const auto& [k, v] : c.terms()) {
    const Monomial& m = k.second;
    for (std::size_t p = 0; p < m.size(); ++p) {
      Symbol s{m[p]};
      if (s.grade() == 0) continue;
      auto it = rules.jet_rules.find(s.code);
      if (it == rules.jet_rules.end()) throw MissingRule("no derivative rule for " + s.name());
      Monomial rest = m;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(p));
      Coeff factor;
      factor.add_term(k.first, rest, v);
      out += scale(factor, it->second, rules.cut);
    }
  }
  return out;
}

inline TwoForm exterior_derivative(const OneForm& a, const DerivativeRules& rules) {
  TwoForm out;
  for (const auto& [k, c] : a.coeffs()) {
    if (k < 0 || k >= static_cast<int>(rules.basis_d.size()))
      throw MissingRule("no derivative for basis index " + std::to_string(k));
    OneForm dc = differential(c, rules);
    if (!dc.is_zero()) out += wedge(dc, OneForm::basis(k), rules.cut);
    out += scale(c, rules.basis_d[k], rules.cut);
  }
  return rules.reduce ? rules.reduce(out) : out;
}

inline FormMatrix<TwoForm> exterior_derivative(const FormMatrix<OneForm>& A, const DerivativeRules& rules) {
  FormMatrix<TwoForm> out(A.dim(), A.blocks());
  for (int i = 0; i < A.dim(); ++i)
    for (int j = 0; j < A.dim(); ++j) out(i, j) = exterior_derivative(A(i, j), rules);
  return out;
}

inline std::string format(const OneForm& f, const Basis& B) {
  if (f.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : f.coeffs()) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")" + B.label(k).str();
  }
  return s;
}

inline std::string format(const TwoForm& w, const Basis& B) {
  if (w.is_zero()) return "0";
  std::string s;
  for (const auto& [k, c] : w.coeffs()) {
    if (!s.empty()) s += " + ";
    s += "(" + c.str() + ")" + B.label(k.first).str() + "^" + B.label(k.second).str();
  }
  return s;
}

}  // namespace twistor
