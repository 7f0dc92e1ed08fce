#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twistor {

using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// Parse "p/q", an integer, or a finite decimal such as "0.125" exactly.
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::string s = text;
  bool neg = false;
  if (s[0] == '-' || s[0] == '+') {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) throw std::invalid_argument("bad rational: " + text);
  Rational out;
  auto digits = [&](const std::string& d) {
    return !d.empty() && std::all_of(d.begin(), d.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw std::invalid_argument("bad rational: " + text);
    mpz_class d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    out = Rational(mpz_class(num), d);
    out.canonicalize();
  } else if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (ip.empty()) ip = "0";
    if (!digits(ip) || (!fp.empty() && !digits(fp))) throw std::invalid_argument("bad rational: " + text);
    mpz_class scale = 1;
    for (std::size_t k = 0; k < fp.size(); ++k) scale *= 10;
    out = Rational(mpz_class(ip + fp), scale);
    out.canonicalize();
  } else {
    if (!digits(s)) throw std::invalid_argument("bad rational: " + text);
    out = Rational(mpz_class(s));
  }
  return neg ? Rational(-out) : out;
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
inline bool rational_sqrt(const Rational& q, Rational& root) {
  if (q < 0) return false;
  mpz_class num = q.get_num(), den = q.get_den();
  mpz_class rn = sqrt(num), rd = sqrt(den);
  if (rn * rn != num || rd * rd != den) return false;
  root = Rational(rn, rd);
  return true;
}

enum class SymbolKind : std::uint8_t { Jet = 1, P = 2, Q = 3, R = 4, S = 5, U = 6, Ratio = 7 };

/// A formal scalar of the coefficient ring, packed into 32 bits.
///
/// Jet(i, j, a) is the grade-1 symbol alpha_i(xi_j) in component a.
/// P/Q/R/S(a, b, c) are the grade-0 coefficients of Gamma_0 and Gamma_2 at the point.
/// U(k) are grade-0 unknowns; Ratio is the scalar-curvature ratio S/S~.
struct Symbol {
  std::uint32_t code = 0;

  static Symbol pack(SymbolKind k, unsigned f0, unsigned f1 = 0, unsigned f2 = 0, unsigned f3 = 0) {
    if (f0 > 127 || f1 > 127 || f2 > 127 || f3 > 127) throw std::out_of_range("symbol field");
    return Symbol{(static_cast<std::uint32_t>(k) << 28) | f0 | (f1 << 7) | (f2 << 14) | (f3 << 21)};
  }
  static Symbol jet(int i, int j, int a) { return pack(SymbolKind::Jet, i, j, a); }
  static Symbol gamma(SymbolKind k, int a, int b, int c) { return pack(k, a, b, c); }
  static Symbol unknown(unsigned k) {
    if (k >= (1u << 28)) throw std::out_of_range("unknown index");
    return Symbol{(static_cast<std::uint32_t>(SymbolKind::U) << 28) | k};
  }
  static Symbol ratio() { return pack(SymbolKind::Ratio, 0); }

  SymbolKind kind() const { return static_cast<SymbolKind>(code >> 28); }
  unsigned field(int k) const { return (code >> (7 * k)) & 127u; }
  int grade() const { return kind() == SymbolKind::Jet ? 1 : 0; }

  std::string name() const {
    std::ostringstream os;
    switch (kind()) {
      case SymbolKind::Jet:
        os << "A" << field(0) << field(1) << "_" << field(2) + 1;
        break;
      case SymbolKind::P:
      case SymbolKind::Q:
      case SymbolKind::R:
      case SymbolKind::S:
        os << "PQRS"[static_cast<int>(kind()) - 2] << field(0) + 1 << field(1) + 1 << "_" << field(2) + 1;
        break;
      case SymbolKind::U:
        os << "U" << (code & ((1u << 28) - 1));
        break;
      case SymbolKind::Ratio:
        os << "s";
        break;
    }
    return os.str();
  }

  friend bool operator==(Symbol x, Symbol y) { return x.code == y.code; }
  friend bool operator<(Symbol x, Symbol y) { return x.code < y.code; }
};

/// Sorted product of symbols (repetition allowed).
using Monomial = std::vector<std::uint32_t>;

inline int monomial_grade(const Monomial& m) {
  int g = 0;
  for (auto c : m) g += Symbol{c}.grade();
  return g;
}

inline Monomial monomial_product(const Monomial& x, const Monomial& y) {
  Monomial out;
  out.reserve(x.size() + y.size());
  std::merge(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

/// Products whose total jet grade reaches this cutoff vanish.
inline constexpr int kDefaultCut = 2;

/// Element of Q[lambda, 1/lambda] tensored with the truncated symbol algebra.
class Coeff {
 public:
  using Key = std::pair<int, Monomial>;
  using Terms = std::map<Key, Rational>;

  Coeff() = default;
  Coeff(long v) {
    if (v != 0) terms_[{0, {}}] = v;
  }
  Coeff(const Rational& v) {
    if (v != 0) terms_[{0, {}}] = v;
  }

  static Coeff lambda(int exponent, const Rational& c = 1) {
    Coeff out;
    if (c != 0) out.terms_[{exponent, {}}] = c;
    return out;
  }
  static Coeff symbol(Symbol s, const Rational& c = 1) {
    Coeff out;
    if (c != 0) out.terms_[{0, {s.code}}] = c;
    return out;
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(int lam, const Monomial& mono, const Rational& v) {
    if (v == 0) return;
    auto [it, inserted] = terms_.try_emplace({lam, mono}, v);
    if (!inserted) {
      it->second += v;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Coeff& operator+=(const Coeff& o) {
    for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, v);
    return *this;
  }
  Coeff& operator-=(const Coeff& o) {
    for (const auto& [k, v] : o.terms_) add_term(k.first, k.second, -v);
    return *this;
  }
  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  Coeff operator-() const {
    Coeff out = *this;
    for (auto& [k, v] : out.terms_) v = -v;
    return out;
  }

  static Coeff mul(const Coeff& a, const Coeff& b, int cut = kDefaultCut) {
    Coeff out;
    for (const auto& [ka, va] : a.terms_) {
      int ga = monomial_grade(ka.second);
      if (ga >= cut) continue;
      for (const auto& [kb, vb] : b.terms_) {
        if (ga + monomial_grade(kb.second) >= cut) continue;
        out.add_term(ka.first + kb.first, monomial_product(ka.second, kb.second), va * vb);
      }
    }
    return out;
  }
  friend Coeff operator*(const Coeff& a, const Coeff& b) { return mul(a, b); }

  Coeff scaled(const Rational& c) const {
    if (c == 0) return {};
    Coeff out = *this;
    for (auto& [k, v] : out.terms_) v *= c;
    return out;
  }

  friend bool operator==(const Coeff& a, const Coeff& b) { return a.terms_ == b.terms_; }

  /// Part of exact jet grade g.
  Coeff grade_part(int g) const {
    Coeff out;
    for (const auto& [k, v] : terms_)
      if (monomial_grade(k.second) == g) out.terms_.emplace(k, v);
    return out;
  }
  int max_grade() const {
    int g = -1;
    for (const auto& [k, v] : terms_) g = std::max(g, monomial_grade(k.second));
    return g;
  }
  Coeff truncated(int cut) const {
    Coeff out;
    for (const auto& [k, v] : terms_)
      if (monomial_grade(k.second) < cut) out.terms_.emplace(k, v);
    return out;
  }

  bool depends_on(const std::function<bool(Symbol)>& pred) const {
    for (const auto& [k, v] : terms_)
      for (auto c : k.second)
        if (pred(Symbol{c})) return true;
    return false;
  }
  bool is_pure_lambda() const {
    for (const auto& [k, v] : terms_)
      if (!k.second.empty()) return false;
    return true;
  }

  /// Replace a symbol by a coefficient everywhere.
  Coeff substitute(Symbol s, const Coeff& value, int cut = kDefaultCut) const {
    Coeff out;
    for (const auto& [k, v] : terms_) {
      Coeff term = Coeff::lambda(k.first, v);
      Monomial rest;
      for (auto c : k.second) {
        if (c == s.code)
          term = mul(term, value, cut);
        else
          rest.push_back(c);
      }
      Coeff restc;
      restc.terms_[{0, rest}] = 1;
      out += mul(term, restc, cut);
    }
    return out;
  }

  /// Inverse of a single pure lambda-monomial c*lambda^k.
  Coeff inverse_monomial() const {
    if (terms_.size() != 1 || !terms_.begin()->first.second.empty())
      throw std::domain_error("inverse_monomial: not a lambda monomial");
    const auto& [k, v] = *terms_.begin();
    return Coeff::lambda(-k.first, 1 / v);
  }

  /// Value at lambda^2 = mu for an even Laurent polynomial without symbols.
  Rational at_mu(const Rational& mu) const {
    Rational out = 0;
    for (const auto& [k, v] : terms_) {
      if (!k.second.empty()) throw std::domain_error("at_mu: coefficient has symbols");
      if (k.first % 2 != 0) throw std::domain_error("at_mu: odd power of lambda");
      out += v * rational_pow(mu, k.first / 2);
    }
    return out;
  }

  /// Whether a symbol-free Laurent polynomial vanishes at lambda = sqrt(mu), exactly.
  bool vanishes_at_mu(const Rational& mu) const {
    Rational even = 0, odd = 0;
    for (const auto& [k, v] : terms_) {
      if (!k.second.empty()) throw std::domain_error("vanishes_at_mu: coefficient has symbols");
      int e = k.first;
      int h = (e >= 0 ? e : e - 1) / 2;  // floor(e/2)
      if (e - 2 * h == 0)
        even += v * rational_pow(mu, h);
      else
        odd += v * rational_pow(mu, h);
    }
    // value = even + lambda * odd
    if (odd == 0) return even == 0;
    Rational ratio = -even / odd;
    return ratio > 0 && ratio * ratio == mu;
  }

  double at(double lam) const {
    double out = 0;
    for (const auto& [k, v] : terms_) {
      if (!k.second.empty()) throw std::domain_error("at: coefficient has symbols");
      out += v.get_d() * std::pow(lam, k.first);
    }
    return out;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : terms_) {
      Rational c = v;
      if (!first) {
        os << (c < 0 ? " - " : " + ");
        if (c < 0) c = -c;
      } else if (c < 0 && (k.first != 0 || !k.second.empty()) && c == -1) {
        os << "-";
        c = 1;
      }
      first = false;
      bool bare = k.first == 0 && k.second.empty();
      if (bare || c != 1) os << c.get_str();
      bool need_star = !bare && c != 1;
      if (k.first != 0) {
        if (need_star) os << "*";
        os << "L";
        if (k.first != 1) os << "^" << k.first;
        need_star = true;
      }
      for (auto s : k.second) {
        if (need_star) os << "*";
        os << Symbol{s}.name();
        need_star = true;
      }
    }
    return os.str();
  }

  static Rational rational_pow(const Rational& x, int e) {
    Rational base = e >= 0 ? x : Rational(1 / x);
    Rational out = 1;
    for (int k = 0; k < (e >= 0 ? e : -e); ++k) out *= base;
    return out;
  }

 private:
  Terms terms_;
};

}  // namespace twistor
