#include "twistor/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <regex>
#include <stdexcept>

namespace twistor::report {

using nlohmann::ordered_json;

Format parse_format(const std::string& s) {
  if (s == "json") return Format::Json;
  if (s == "csv") return Format::Csv;
  if (s == "table") return Format::Table;
  throw std::invalid_argument("unknown format: " + s);
}

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

double to_double(const Rational& q) {
  // mpq_get_d truncates; going through a 256-bit float and strtod rounds to nearest.
  mpf_class f(q, 256);
  mp_exp_t exp = 0;
  std::string digits = f.get_str(exp, 10, 40);
  if (digits.empty()) return 0.0;
  bool neg = digits[0] == '-';
  if (neg) digits.erase(0, 1);
  std::string text = fmt::format("{}0.{}e{}", neg ? "-" : "", digits, exp);
  return std::strtod(text.c_str(), nullptr);
}

Rational parse_exact(const std::string& text, bool& was_decimal) {
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  was_decimal = false;
  if (text.find('/') != std::string::npos) return parse_rational(text);
  std::smatch m;
  if (!std::regex_match(text, m, decimal) || (m[2].length() == 0 && m[3].length() == 0))
    throw std::invalid_argument("not a number: " + text);
  was_decimal = m[3].matched || m[4].matched;
  std::string digits = m[2].str() + m[3].str();
  if (digits.empty()) digits = "0";
  long exp = m[4].matched ? std::stol(m[4].str()) : 0;
  exp -= static_cast<long>(m[3].length());
  mpz_class mant(digits, 10);
  if (m[1] == "-") mant = -mant;
  mpz_class p10;
  mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp)));
  Rational q = exp >= 0 ? Rational(mant * p10) : Rational(mant, p10);
  q.canonicalize();
  return q;
}

std::string checks_json(const std::vector<checks::CheckResult>& rs) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rs) arr.push_back({{"check", r.check}, {"status", r.status}, {"detail", r.detail}});
  return arr.dump(2) + "\n";
}

std::string checks_table(const std::vector<checks::CheckResult>& rs) {
  std::size_t w = 5;
  for (const auto& r : rs) w = std::max(w, r.check.size());
  std::string out = fmt::format("{:<{}}  {:<6}  {}\n", "check", w, "status", "detail");
  for (const auto& r : rs) out += fmt::format("{:<{}}  {:<6}  {}\n", r.check, w, r.status, r.detail);
  return out;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::string checks_csv(const std::vector<checks::CheckResult>& rs) {
  std::string out = "check,status,detail\n";
  for (const auto& r : rs) out += csv_field(r.check) + "," + r.status + "," + csv_field(r.detail) + "\n";
  return out;
}

std::string trajectory_csv(const flow::Trajectory& tr) {
  std::string out = "t,rho,mu,rho_mu,invariant\n";
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const auto& s = tr.samples[k];
    out += fmt::format("{},{},{},{},{}\n", num(s.t), num(s.rho), num(s.mu), num(s.rho_mu()), num(tr.invariant_series[k]));
  }
  return out;
}

namespace {

// Records are written by hand so numbers keep the fixed 17-digit text; non-finite values become strings.
std::string jnum(double x) { return std::isfinite(x) ? num(x) : "\"" + num(x) + "\""; }

std::string json_records(const std::vector<std::string>& keys, const std::vector<std::vector<double>>& rows) {
  std::string out = "[";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out += r ? ",\n  {" : "\n  {";
    for (std::size_t k = 0; k < keys.size(); ++k) out += fmt::format("{}\"{}\": {}", k ? ", " : "", keys[k], jnum(rows[r][k]));
    out += "}";
  }
  return out + (rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace

std::string trajectory_json(const flow::Trajectory& tr) {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tr.samples.size(); ++k) {
    const auto& s = tr.samples[k];
    rows.push_back({s.t, s.rho, s.mu, s.rho_mu(), tr.invariant_series[k]});
  }
  return json_records({"t", "rho", "mu", "rho_mu", "invariant"}, rows);
}

namespace {

std::vector<std::vector<double>> entropy_rows(const std::vector<flow::EntropyRecord>& rs, int n) {
  std::vector<std::vector<double>> rows;
  for (const auto& r : rs) {
    double inv = flow::invariant({r.t, r.rho, r.mu, flow::Family::Z, n});
    rows.push_back({r.t, r.rho, r.mu, r.rho * r.mu, inv, r.tau, r.scal, r.vol_ratio, r.u, r.f, r.w});
  }
  return rows;
}

const std::vector<std::string> kEntropyKeys = {"t", "rho", "mu", "rho_mu", "invariant", "tau", "scal", "vol_ratio", "u", "f", "w"};

}  // namespace

std::string entropy_csv(const std::vector<flow::EntropyRecord>& rs, int n) {
  std::string out;
  for (std::size_t k = 0; k < kEntropyKeys.size(); ++k) out += (k ? "," : "") + kEntropyKeys[k];
  out += "\n";
  for (const auto& row : entropy_rows(rs, n)) {
    for (std::size_t k = 0; k < row.size(); ++k) out += (k ? "," : "") + num(row[k]);
    out += "\n";
  }
  return out;
}

std::string entropy_json(const std::vector<flow::EntropyRecord>& rs, int n) {
  return json_records(kEntropyKeys, entropy_rows(rs, n));
}

}  // namespace twistor::report
