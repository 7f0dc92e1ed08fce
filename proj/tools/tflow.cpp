// tflow: verification and flow driver for the canonical and Z twistor metric families.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "twistor/canonical.hpp"
#include "twistor/checks.hpp"
#include "twistor/flow.hpp"
#include "twistor/liealg.hpp"
#include "twistor/report.hpp"
#include "twistor/zmetric.hpp"

namespace {

using namespace twistor;
using nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::optional<int> n;
  std::string family = "canonical";
  std::string lambda2;
  std::string rho0 = "1";
  double dt = 1e-4;
  std::string t_end = "auto";
  int samples = 200;
  std::string out;
  std::string format = "table";
  bool sectional = false;
  bool tamper = false;
};

struct Value {
  Rational exact;
  bool decimal = false;
  double d() const { return report::to_double(exact); }
  std::string str() const { return decimal ? report::num(d()) : to_string(exact); }
};

Value parse_value(const std::string& name, const std::string& text) {
  Value v;
  try {
    v.exact = report::parse_exact(text, v.decimal);
  } catch (const std::exception& e) {
    throw InputError(fmt::format("--{}: {}", name, e.what()));
  }
  if (v.decimal)
    std::cerr << fmt::format("warning: --{} {} is decimal; using the exact value {} and reporting decimals\n", name, text,
                             to_string(v.exact));
  return v;
}

int require_n(const Config& c, int fallback = 2) {
  int n = c.n.value_or(fallback);
  if (n < 2) throw InputError("n must be at least 2");
  return n;
}

flow::Family family_of(const Config& c) {
  if (c.family == "canonical") return flow::Family::Canonical;
  if (c.family == "z") return flow::Family::Z;
  throw InputError("family must be canonical or z");
}

/// Prints a flat key/value record in the selected format.
void print_record(const Config& c, const std::vector<std::pair<std::string, std::string>>& kv) {
  if (c.format == "json") {
    // Numeric and boolean values are written as JSON literals so floats keep their 17-digit text.
    static const std::regex literal(R"(-?\d+(\.\d+)?([eE][+-]?\d+)?|true|false)");
    std::cout << "{";
    for (std::size_t i = 0; i < kv.size(); ++i) {
      const auto& [k, v] = kv[i];
      std::cout << (i ? ",\n  " : "\n  ") << ordered_json(k).dump() << ": "
                << (std::regex_match(v, literal) ? v : ordered_json(v).dump());
    }
    std::cout << "\n}\n";
  } else if (c.format == "csv") {
    for (std::size_t i = 0; i < kv.size(); ++i) std::cout << (i ? "," : "") << kv[i].first;
    std::cout << "\n";
    for (std::size_t i = 0; i < kv.size(); ++i) std::cout << (i ? "," : "") << kv[i].second;
    std::cout << "\n";
  } else {
    std::size_t w = 0;
    for (const auto& [k, v] : kv) w = std::max(w, k.size());
    for (const auto& [k, v] : kv) std::cout << fmt::format("{:<{}}  {}\n", k, w, v);
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path);
  f << text;
}

bool json_path(const std::string& p) { return p.size() >= 5 && p.compare(p.size() - 5, 5, ".json") == 0; }

int cmd_verify(const Config& c) {
  std::vector<int> ns;
  if (c.n) {
    if (*c.n < 2) throw InputError("n must be at least 2");
    ns = {*c.n};
  } else {
    ns = {2, 3, 4};
  }
  checks::Options opt;
  opt.tamper = c.tamper;
  auto results = checks::run_groups(checks::verify_groups(ns, opt), checks::thread_count_from_env());
  std::string text = c.format == "json"  ? report::checks_json(results)
                     : c.format == "csv" ? report::checks_csv(results)
                                         : report::checks_table(results);
  if (!c.out.empty()) write_file(c.out, text);
  std::cout << text;
  return checks::all_pass(results) ? kExitPass : kExitFail;
}

int cmd_ricci(const Config& c) {
  const int n = require_n(c);
  if (c.lambda2.empty()) throw InputError("--lambda2 is required");
  Value mu = parse_value("lambda2", c.lambda2);
  Value rho = parse_value("rho0", c.rho0);
  MetricParams p{n, mu.exact, rho.exact, Rational(1)};
  p.validate();
  const bool z = family_of(c) == flow::Family::Z;
  RicciValues r = z ? ricci_z(p) : ricci_canonical(p);
  MetricParams q = z ? ricci_map_z(p) : ricci_map_canonical(p);
  auto show = [&](const Rational& x) { return mu.decimal || rho.decimal ? report::num(report::to_double(x)) : to_string(x); };
  print_record(c, {{"family", c.family},
                   {"n", std::to_string(n)},
                   {"lambda2", mu.str()},
                   {"fiber", show(r.fiber)},
                   {"base", show(r.base)},
                   {"off_diagonal_zero", r.off_diagonal_zero ? "true" : "false"},
                   {"einstein", r.fiber == r.base ? "true" : "false"},
                   {"ricci_map_rho", show(q.rho)},
                   {"ricci_map_lambda2", show(q.lambda2)}});
  return kExitPass;
}

int cmd_einstein(const Config& c) {
  const int n = require_n(c);
  std::vector<Rational> roots =
      family_of(c) == flow::Family::Z ? std::vector<Rational>{einstein_solve_z(n)} : einstein_solve_canonical(n);
  std::string s = "{";
  for (std::size_t i = 0; i < roots.size(); ++i) s += (i ? ", " : "") + to_string(roots[i]);
  s += "}";
  print_record(c, {{"family", c.family}, {"n", std::to_string(n)}, {"einstein_lambda2", s}});
  return kExitPass;
}

int cmd_curvature(const Config& c) {
  const int n = require_n(c);
  CurvatureTensor T = hpn_curvature(n);
  std::vector<std::pair<std::string, std::string>> kv = {{"space", fmt::format("HP^{}", n)}, {"n", std::to_string(n)}};
  auto ric = ricci(T);
  kv.push_back({"ricci", to_string(ric[0][0]) + " id"});
  kv.push_back({"scalar", to_string(scalar(T))});
  if (c.sectional) {
    std::map<Rational, int> counts;
    for (int A = 0; A < T.dim(); ++A)
      for (int B = A + 1; B < T.dim(); ++B) ++counts[sectional(T, A, B)];
    kv.push_back({"sectional_min", to_string(counts.begin()->first)});
    kv.push_back({"sectional_max", to_string(counts.rbegin()->first)});
    std::string dist;
    for (const auto& [k, m] : counts) dist += fmt::format("{}{}:{}", dist.empty() ? "" : " ", to_string(k), m);
    kv.push_back({"sectional_counts", dist});
  }
  print_record(c, kv);
  return kExitPass;
}

int cmd_flow(const Config& c) {
  const int n = require_n(c);
  const flow::Family fam = family_of(c);
  if (c.lambda2.empty()) throw InputError("--lambda2 is required");
  Value mu = parse_value("lambda2", c.lambda2);
  Value rho = parse_value("rho0", c.rho0);
  if (mu.exact <= 0 || rho.exact <= 0) throw InputError("rho0 and lambda2 must be positive");
  if (!(c.dt > 0)) throw InputError("dt must be positive");
  if (fam == flow::Family::Canonical && mu.exact >= n + 2) throw InputError("canonical flow requires lambda2 < n + 2");

  flow::FlowState s0{0, rho.d(), mu.d(), fam, n};
  std::vector<std::pair<std::string, std::string>> kv = {
      {"family", c.family}, {"n", std::to_string(n)}, {"rho0", rho.str()}, {"lambda2", mu.str()}};

  double singular = 0;
  if (fam == flow::Family::Z) {
    flow::Classification cl = flow::classify(rho.exact, mu.exact, n);
    singular = report::to_double(cl.time);
    kv.push_back({"mode", flow::to_string(cl.mode)});
    kv.push_back({"singular_time", mu.decimal || rho.decimal ? report::num(singular) : to_string(cl.time)});
    kv.push_back({"mu_limit", cl.mu_limit});
    if (cl.mode == flow::Mode::Collapse) kv.push_back({"rho_limit", to_string(cl.rho_limit)});
  } else {
    flow::IntegrateOptions probe;
    probe.dt = c.dt;
    probe.t_end = 1e6;
    probe.record_every = 1 << 30;
    flow::Trajectory tr = flow::integrate(s0, probe);
    singular = tr.event ? tr.event->time : probe.t_end;
    kv.push_back({"mode", tr.event && tr.event->mode == "rho-floor" ? "extinction" : "fiber-collapse"});
    kv.push_back({"singular_time", report::num(singular)});
  }

  flow::IntegrateOptions io;
  io.dt = c.dt;
  if (c.t_end == "auto") {
    io.t_end = 0.99 * singular;
  } else {
    try {
      io.t_end = std::stod(c.t_end);
    } catch (const std::exception&) {
      throw InputError("--t-end must be a number or auto");
    }
  }
  flow::Trajectory tr = flow::integrate(s0, io);
  const auto& last = tr.samples.back();
  bool mono_up = true, mono_down = true;
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    if (!(tr.samples[k].mu > tr.samples[k - 1].mu)) mono_up = false;
    if (!(tr.samples[k].mu < tr.samples[k - 1].mu)) mono_down = false;
  }
  kv.push_back({"t_end", report::num(io.t_end)});
  kv.push_back({"samples", std::to_string(tr.samples.size())});
  kv.push_back({"rho_end", report::num(last.rho)});
  kv.push_back({"mu_end", report::num(last.mu)});
  kv.push_back({"mu_trend", mono_up ? "increasing" : mono_down ? "decreasing" : "mixed"});
  kv.push_back({"invariant_drift_max", report::num(tr.max_drift)});
  if (tr.event) kv.push_back({"event", fmt::format("{} at t = {}", tr.event->mode, report::num(tr.event->time))});
  if (!c.out.empty()) write_file(c.out, json_path(c.out) ? report::trajectory_json(tr) : report::trajectory_csv(tr));
  print_record(c, kv);
  return kExitPass;
}

int cmd_entropy(const Config& c) {
  const int n = require_n(c);
  if (c.lambda2.empty()) throw InputError("--lambda2 is required");
  Value mu = parse_value("lambda2", c.lambda2);
  Value rho = parse_value("rho0", c.rho0);
  if (rho.exact <= 0) throw InputError("rho0 must be positive");
  if (mu.exact <= Rational(1, n + 2)) throw InputError("entropy needs lambda2 > 1/(n+2)");
  if (c.samples < 2) throw InputError("samples must be at least 2");
  auto rs = flow::entropy_series(rho.d(), mu.d(), n, c.samples);
  if (!c.out.empty()) write_file(c.out, json_path(c.out) ? report::entropy_json(rs, n) : report::entropy_csv(rs, n));
  print_record(c, {{"n", std::to_string(n)},
                   {"rho0", rho.str()},
                   {"lambda2", mu.str()},
                   {"samples", std::to_string(rs.size())},
                   {"w_first", report::num(rs.front().w)},
                   {"w_last", report::num(rs.back().w)},
                   {"w_nondecreasing", flow::nondecreasing_w(rs) ? "true" : "false"}});
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature identities and reduced Ricci flow of twistor metric families"};
  app.require_subcommand(1);
  Config c;

  auto common = [&](CLI::App* s) {
    s->add_option("--n", c.n, "quaternionic dimension (n >= 2)");
    s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto out = [&](CLI::App* s, const char* what) { s->add_option("--out", c.out, what); };
  auto family = [&](CLI::App* s) {
    s->add_option("--family", c.family, "metric family")->check(CLI::IsMember({"canonical", "z"}));
  };

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  common(verify);
  out(verify, "also write the report to this file");
  verify->add_flag("--tamper-structure-constant", c.tamper, "perturb one structure constant (test hook)")
      ->group("");
  auto* ricci_cmd = app.add_subcommand("ricci", "Ricci coefficients and Ricci map");
  common(ricci_cmd);
  family(ricci_cmd);
  ricci_cmd->add_option("--lambda2", c.lambda2, "lambda^2 as p/q or decimal");
  ricci_cmd->add_option("--rho0", c.rho0, "scale rho");
  auto* einstein = app.add_subcommand("einstein", "Einstein values of lambda^2");
  common(einstein);
  family(einstein);
  auto* curv = app.add_subcommand("curvature", "curvature constants of HP^n");
  common(curv);
  curv->add_flag("--sectional", c.sectional, "report frame sectional curvatures");
  auto* flow_cmd = app.add_subcommand("flow", "integrate the reduced Ricci flow");
  common(flow_cmd);
  out(flow_cmd, "trajectory file (.json for JSON, else CSV)");
  family(flow_cmd);
  flow_cmd->add_option("--lambda2", c.lambda2, "initial lambda^2");
  flow_cmd->add_option("--rho0", c.rho0, "initial rho");
  flow_cmd->add_option("--dt", c.dt, "RK4 step");
  flow_cmd->add_option("--t-end", c.t_end, "end time or auto (0.99 of the singular time)");
  auto* entropy = app.add_subcommand("entropy", "entropy series along a Z trajectory");
  common(entropy);
  out(entropy, "entropy records file (.json for JSON, else CSV)");
  entropy->add_option("--lambda2", c.lambda2, "initial lambda^2");
  entropy->add_option("--rho0", c.rho0, "initial rho");
  entropy->add_option("--samples", c.samples, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*verify) return cmd_verify(c);
    if (*ricci_cmd) return cmd_ricci(c);
    if (*einstein) return cmd_einstein(c);
    if (*curv) return cmd_curvature(c);
    if (*flow_cmd) return cmd_flow(c);
    if (*entropy) return cmd_entropy(c);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InvalidParams& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const OutOfDomain& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
