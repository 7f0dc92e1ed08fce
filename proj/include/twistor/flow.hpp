#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twistor/coeff.hpp"

namespace twistor::flow {

enum class Family { Canonical, Z };

inline std::string to_string(Family f) { return f == Family::Canonical ? "canonical" : "z"; }

struct FlowState {
  double t = 0;
  double rho = 1;
  double mu = 1;
  Family family = Family::Z;
  int n = 2;

  double rho_mu() const { return rho * mu; }
  bool alive() const { return rho > 0 && mu > 0; }
};

struct Extinct : std::domain_error {
  using std::domain_error::domain_error;
};
struct OnEinsteinRay : std::domain_error {
  using std::domain_error::domain_error;
};
struct StepTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// (d(rho mu)/dt, d rho/dt), exact.
inline std::pair<Rational, Rational> rhs_exact(Family f, int n, const Rational& mu) {
  if (f == Family::Z) return {Rational(-8), Rational(-8 * (n + 2))};
  return {Rational(-8) * (1 + n * mu * mu), Rational(-8) * (n + 2 - mu)};
}

struct Rhs {
  double d_rho_mu = 0;
  double d_rho = 0;
};

inline Rhs rhs(Family f, int n, double mu) {
  if (f == Family::Z) return {-8.0, -8.0 * (n + 2)};
  return {-8.0 * (1 + n * mu * mu), -8.0 * (n + 2 - mu)};
}

inline Rhs rhs(const FlowState& s) { return rhs(s.family, s.n, s.mu); }

/// Induced d mu/dt = (d(rho mu) - mu d rho)/rho.
inline double mu_rate(const FlowState& s) {
  Rhs r = rhs(s);
  return (r.d_rho_mu - s.mu * r.d_rho) / s.rho;
}

/// Exact Z trajectory: rho = rho0 - 8(n+2)t, rho mu = rho0 mu0 - 8t.
inline std::pair<Rational, Rational> closed_form_z_exact(const Rational& rho0, const Rational& mu0, int n,
                                                         const Rational& t) {
  Rational rho = rho0 - 8 * (n + 2) * t;
  Rational rm = rho0 * mu0 - 8 * t;
  if (rho <= 0 || rm <= 0) throw Extinct("closed form evaluated past the singular time");
  return {rho, rm};
}

inline FlowState closed_form_z(double rho0, double mu0, int n, double t) {
  double rho = rho0 - 8.0 * (n + 2) * t;
  double rm = rho0 * mu0 - 8.0 * t;
  if (rho <= 0 || rm <= 0) throw Extinct("closed form evaluated past the singular time");
  return {t, rho, rm / rho, Family::Z, n};
}

/// Z: rho (mu - 1/(n+2)). Canonical:
/// log rho - ((n+1)/n) log|mu - 1| + ((n^2+3n+1)/(n(n+1))) log|(n+1)mu - 1|.
inline double invariant(const FlowState& s) {
  const double n = s.n;
  if (s.family == Family::Z) return s.rho * (s.mu - 1.0 / (n + 2));
  if (s.mu == 1.0 || s.mu * (n + 1) == 1.0) throw OnEinsteinRay("canonical invariant undefined on an Einstein ray");
  return std::log(s.rho) - (n + 1) / n * std::log(std::fabs(s.mu - 1)) +
         (n * n + 3 * n + 1) / (n * (n + 1)) * std::log(std::fabs((n + 1) * s.mu - 1));
}

struct FlowEvent {
  double time = 0;
  std::string mode;  // "rho-floor" or "rho_mu-floor"
};

struct Trajectory {
  std::vector<FlowState> samples;
  std::vector<double> invariant_series;
  std::optional<FlowEvent> event;
  double max_drift = 0;  // max |invariant - invariant(0)|, NaN when the invariant is undefined
};

struct IntegrateOptions {
  double dt = 1e-4;
  double t_end = 0;
  double floor_ratio = 1e-12;  // stop when rho or rho mu reaches this fraction of its initial value
  bool locate_events = true;   // shorten the last step onto the floor instead of throwing
  int record_every = 1;
};

namespace detail {

struct Y {
  double rm, rho;
};

inline Y deriv(Family f, int n, const Y& y) {
  Rhs r = rhs(f, n, y.rm / y.rho);
  return {r.d_rho_mu, r.d_rho};
}

inline Y rk4_step(Family f, int n, const Y& y, double h) {
  Y k1 = deriv(f, n, y);
  Y k2 = deriv(f, n, {y.rm + h / 2 * k1.rm, y.rho + h / 2 * k1.rho});
  Y k3 = deriv(f, n, {y.rm + h / 2 * k2.rm, y.rho + h / 2 * k2.rho});
  Y k4 = deriv(f, n, {y.rm + h * k3.rm, y.rho + h * k3.rho});
  return {y.rm + h / 6 * (k1.rm + 2 * k2.rm + 2 * k3.rm + k4.rm),
          y.rho + h / 6 * (k1.rho + 2 * k2.rho + 2 * k3.rho + k4.rho)};
}

inline double invariant_or_nan(const FlowState& s) {
  try {
    return invariant(s);
  } catch (const OnEinsteinRay&) {
    return std::nan("");
  }
}

}  // namespace detail

/// Fixed-step classical RK4 in (rho mu, rho); integrates backward when t_end < initial.t.
inline Trajectory integrate(const FlowState& initial, const IntegrateOptions& opt) {
  if (!(opt.dt > 0)) throw std::invalid_argument("dt must be positive");
  if (!initial.alive()) throw std::invalid_argument("initial state must have rho > 0 and mu > 0");
  const Family f = initial.family;
  const int n = initial.n;
  const double dir = opt.t_end >= initial.t ? 1.0 : -1.0;
  const double floor_rm = opt.floor_ratio * initial.rho_mu(), floor_rho = opt.floor_ratio * initial.rho;

  Trajectory tr;
  auto record = [&](const FlowState& s) {
    tr.samples.push_back(s);
    double v = detail::invariant_or_nan(s);
    tr.invariant_series.push_back(v);
    double d = std::fabs(v - tr.invariant_series.front());
    if (std::isnan(v) || std::isnan(tr.max_drift)) tr.max_drift = std::nan("");
    else if (d > tr.max_drift) tr.max_drift = d;
  };
  auto below = [&](const detail::Y& y) { return !(y.rm > floor_rm) || !(y.rho > floor_rho); };

  FlowState s = initial;
  record(s);
  detail::Y y{initial.rho_mu(), initial.rho};
  long step = 0;
  while (dir * (opt.t_end - s.t) > 1e-15 * std::max(1.0, std::fabs(opt.t_end))) {
    double h = dir * std::min(opt.dt, std::fabs(opt.t_end - s.t));
    detail::Y next = detail::rk4_step(f, n, y, h);
    if (below(next)) {
      if (!opt.locate_events) throw StepTooLarge("step crosses the rho or rho mu floor");
      double lo = 0, hi = std::fabs(h);
      for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        if (below(detail::rk4_step(f, n, y, dir * mid))) hi = mid;
        else lo = mid;
      }
      y = detail::rk4_step(f, n, y, dir * hi);
      s = {s.t + dir * hi, y.rho, y.rm / y.rho, f, n};
      record(s);
      tr.event = FlowEvent{s.t, !(y.rho > floor_rho) ? "rho-floor" : "rho_mu-floor"};
      return tr;
    }
    y = next;
    ++step;
    s = {initial.t + dir * step * opt.dt, y.rho, y.rm / y.rho, f, n};
    if (dir * (s.t - opt.t_end) > 0) s.t = opt.t_end;
    bool last = dir * (opt.t_end - s.t) <= 1e-15 * std::max(1.0, std::fabs(opt.t_end));
    if (last || step % std::max(1, opt.record_every) == 0) record(s);
  }
  return tr;
}

enum class Mode { Extinction, Collapse, EinsteinRay };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::Extinction:
      return "base-shrinks-faster";
    case Mode::Collapse:
      return "fiber-collapse";
    default:
      return "einstein-ray";
  }
}

/// Forward singularity of the Z flow.
struct Classification {
  Mode mode = Mode::Extinction;
  Rational time;       // singular time
  Rational rho_limit;  // rho at the singular time
  std::string mu_limit;
};

inline Classification classify(const Rational& rho0, const Rational& mu0, int n) {
  if (rho0 <= 0 || mu0 <= 0) throw std::invalid_argument("rho0 and mu0 must be positive");
  Rational e(1, n + 2);
  Classification c;
  if (mu0 > e) {
    c = {Mode::Extinction, rho0 / (8 * (n + 2)), Rational(0), "infinity"};
  } else if (mu0 < e) {
    c = {Mode::Collapse, rho0 * mu0 / 8, rho0 * (1 - (n + 2) * mu0), "0"};
  } else {
    c = {Mode::EinsteinRay, rho0 / (8 * (n + 2)), Rational(0), twistor::to_string(e)};
  }
  return c;
}

/// Scalar curvature of the Z metric: 8/(rho mu) + 16 n (n+2)/rho.
inline Rational scal_z_exact(const Rational& rho, const Rational& mu, int n) {
  return Rational(8) / (rho * mu) + Rational(16 * n * (n + 2)) / rho;
}

inline double scal_z(double rho, double mu, int n) { return 8.0 / (rho * mu) + 16.0 * n * (n + 2) / rho; }

struct EntropyRecord {
  double t = 0, rho = 0, mu = 0, tau = 0, scal = 0, vol_ratio = 0, u = 0, f = 0, w = 0;
};

/// tau = (1/(8(n+2))) (rho0 (mu0 - 1/(n+2))/(mu - 1/(n+2)) - rho0).
inline Rational tau_exact(const Rational& rho0, const Rational& mu0, const Rational& mu, int n) {
  Rational e(1, n + 2);
  return (rho0 * (mu0 - e) / (mu - e) - rho0) / (8 * (n + 2));
}

inline EntropyRecord entropy_at(double rho0, double mu0, int n, double t) {
  FlowState s = closed_form_z(rho0, mu0, n, t);
  const double e = 1.0 / (n + 2), dim = 4.0 * n + 2;
  EntropyRecord r;
  r.t = t;
  r.rho = s.rho;
  r.mu = s.mu;
  r.tau = (rho0 * (mu0 - e) / (s.mu - e) - rho0) / (8.0 * (n + 2));
  r.scal = scal_z(s.rho, s.mu, n);
  r.vol_ratio = std::pow(s.rho, 2 * n + 1) * s.mu;
  r.u = 1.0 / r.vol_ratio;
  r.f = -std::log(r.u) - (2 * n + 1) * std::log(4 * M_PI * r.tau);
  r.w = r.tau * r.scal + r.f - dim;
  return r;
}

/// Samples t_k = -tau_span (1 - k/N), k = 0..N-1, tau_span = rho0/(8(n+2)), along the exact Z flow.
inline std::vector<EntropyRecord> entropy_series(double rho0, double mu0, int n, int samples) {
  if (samples < 2) throw std::invalid_argument("need at least 2 samples");
  if (!(rho0 > 0)) throw std::invalid_argument("rho0 must be positive");
  if (!(mu0 > 1.0 / (n + 2))) throw std::invalid_argument("entropy series needs mu0 > 1/(n+2)");
  const double span = rho0 / (8.0 * (n + 2));
  std::vector<EntropyRecord> out;
  for (int k = 0; k < samples; ++k) out.push_back(entropy_at(rho0, mu0, n, -span * (1.0 - double(k) / samples)));
  return out;
}

inline bool nondecreasing_w(const std::vector<EntropyRecord>& rs) {
  for (std::size_t k = 1; k < rs.size(); ++k)
    if (rs[k].w < rs[k - 1].w) return false;
  return true;
}

}  // namespace twistor::flow
