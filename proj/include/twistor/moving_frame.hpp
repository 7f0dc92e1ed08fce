#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "twistor/forms.hpp"

namespace twistor {

/// Orthonormal coframe theta^a = scale[a] * e^{index[a]}, scale a lambda-monomial.
struct Coframe {
  std::vector<int> index;
  std::vector<Coeff> scale;
  std::vector<std::string> blocks;

  int size() const { return static_cast<int>(index.size()); }
  OneForm theta(int a) const { return OneForm::basis(index.at(a), scale.at(a)); }
  int position(int basis_index) const {
    for (int a = 0; a < size(); ++a)
      if (index[a] == basis_index) return a;
    return -1;
  }
};

struct LeviCivitaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Levi-Civita connection of the coframe: the unique skew omega with d(theta) + omega ^ theta = 0.
///
/// With d(theta^a) = sum_{b<c} T_abc theta^b ^ theta^c + K_abh theta^b ^ eta^h,
/// omega^a_b = sum_c (T_abc + T_bca - T_cab)/2 theta^c + K_abh eta^h, K skew in (a, b).
inline FormMatrix<OneForm> levi_civita(const Coframe& F, const DerivativeRules& rules) {
  const int M = F.size();
  std::map<int, int> pos;
  for (int a = 0; a < M; ++a) pos[F.index[a]] = a;
  std::vector<Coeff> inv(M);
  for (int a = 0; a < M; ++a) inv[a] = F.scale[a].inverse_monomial();

  std::vector<Coeff> T(static_cast<std::size_t>(M) * M * M);
  auto t = [&](int a, int b, int c) -> Coeff& { return T[(static_cast<std::size_t>(a) * M + b) * M + c]; };
  std::map<std::tuple<int, int, int>, Coeff> K;

  for (int a = 0; a < M; ++a) {
    TwoForm w = scale(F.scale[a], exterior_derivative(OneForm::basis(F.index[a]), rules), rules.cut);
    for (const auto& [key, cf] : w.coeffs()) {
      auto [i, j] = key;
      auto pi = pos.find(i), pj = pos.find(j);
      if (pi != pos.end() && pj != pos.end()) {
        Coeff v = Coeff::mul(Coeff::mul(cf, inv[pi->second], rules.cut), inv[pj->second], rules.cut);
        t(a, pi->second, pj->second) += v;
        t(a, pj->second, pi->second) -= v;
      } else if (pi != pos.end()) {
        K[{a, pi->second, j}] += Coeff::mul(cf, inv[pi->second], rules.cut);
      } else if (pj != pos.end()) {
        K[{a, pj->second, i}] -= Coeff::mul(cf, inv[pj->second], rules.cut);
      } else {
        throw LeviCivitaError("d(theta) has a term without coframe factor");
      }
    }
  }
  for (const auto& [key, v] : K) {
    auto [a, b, h] = key;
    Coeff partner;
    if (auto it = K.find({b, a, h}); it != K.end()) partner = it->second;
    if (!(v + partner).is_zero()) throw LeviCivitaError("vertical part of d(theta) is not skew");
  }

  FormMatrix<OneForm> omega(M, F.blocks.empty() ? std::vector<std::string>(M, "") : F.blocks);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) {
      OneForm f;
      for (int c = 0; c < M; ++c) {
        Coeff w = (t(a, b, c) + t(b, c, a) - t(c, a, b)).scaled(Rational(1, 2));
        if (!w.is_zero()) f.add(F.index[c], Coeff::mul(w, F.scale[c], rules.cut));
      }
      omega(a, b) = f;
    }
  for (const auto& [key, v] : K) {
    auto [a, b, h] = key;
    omega(a, b).add(h, v);
  }
  return omega;
}

/// d(theta^a) + sum_b omega^a_b ^ theta^b for each a.
inline std::vector<TwoForm> first_structure_residual(const Coframe& F, const FormMatrix<OneForm>& omega,
                                                     const DerivativeRules& rules) {
  std::vector<TwoForm> out(F.size());
  for (int a = 0; a < F.size(); ++a) {
    TwoForm r = scale(F.scale[a], exterior_derivative(OneForm::basis(F.index[a]), rules), rules.cut);
    for (int b = 0; b < F.size(); ++b) r += wedge(omega(a, b), F.theta(b), rules.cut);
    out[a] = rules.reduce ? rules.reduce(r) : r;
  }
  return out;
}

/// Second structure equation: Omega = d(omega) + omega ^ omega.
inline FormMatrix<TwoForm> curvature(const FormMatrix<OneForm>& omega, const DerivativeRules& rules) {
  FormMatrix<TwoForm> out = exterior_derivative(omega, rules);
  FormMatrix<TwoForm> sq = mat_wedge(omega, omega, rules.cut);
  for (int a = 0; a < omega.dim(); ++a)
    for (int b = 0; b < omega.dim(); ++b)
      out(a, b) += rules.reduce ? rules.reduce(sq(a, b)) : sq(a, b);
  return out;
}

/// R^a_{bcd} = Omega^a_b(e_c, e_d) in the orthonormal frame.
inline Coeff riemann(const Coframe& F, const FormMatrix<TwoForm>& Omega, int a, int b, int c, int d,
                     int cut = kDefaultCut) {
  Coeff v = Omega(a, b).at(F.index[c], F.index[d]);
  if (v.is_zero()) return v;
  return Coeff::mul(Coeff::mul(v, F.scale[c].inverse_monomial(), cut), F.scale[d].inverse_monomial(), cut);
}

/// Ric_{bd} = sum_a R^a_{bad}; `at_point` maps each curvature 2-form to its value at the point.
inline std::vector<std::vector<Coeff>> ricci_matrix(const Coframe& F, const FormMatrix<TwoForm>& Omega,
                                                    const std::function<TwoForm(const TwoForm&)>& at_point = {},
                                                    int cut = kDefaultCut) {
  const int M = F.size();
  FormMatrix<TwoForm> E(M);
  for (int a = 0; a < M; ++a)
    for (int b = 0; b < M; ++b) E(a, b) = at_point ? at_point(Omega(a, b)) : Omega(a, b);
  std::vector<std::vector<Coeff>> ric(M, std::vector<Coeff>(M));
  for (int b = 0; b < M; ++b)
    for (int d = 0; d < M; ++d)
      for (int a = 0; a < M; ++a) ric[b][d] += riemann(F, E, a, b, a, d, cut);
  return ric;
}

/// The two diagonal Ricci coefficients of a fiber/base block metric.
struct RicciDiag {
  Coeff fiber;
  Coeff base;
  bool off_diagonal_zero = false;
  bool blocks_uniform = false;
};

inline RicciDiag ricci_diag(const std::vector<std::vector<Coeff>>& ric, int fiber_dim) {
  RicciDiag out;
  const int M = static_cast<int>(ric.size());
  out.fiber = ric.at(0).at(0);
  out.base = ric.at(fiber_dim).at(fiber_dim);
  out.off_diagonal_zero = true;
  out.blocks_uniform = true;
  for (int b = 0; b < M; ++b)
    for (int d = 0; d < M; ++d) {
      if (b != d && !ric[b][d].is_zero()) out.off_diagonal_zero = false;
      if (b == d && !(ric[b][d] == (b < fiber_dim ? out.fiber : out.base))) out.blocks_uniform = false;
    }
  return out;
}

}  // namespace twistor
