#pragma once

#include <string>
#include <vector>

#include "twistor/checks.hpp"
#include "twistor/coeff.hpp"
#include "twistor/flow.hpp"

namespace twistor::report {

enum class Format { Json, Csv, Table };

Format parse_format(const std::string& s);

/// 17 significant digits, the fixed float format of every output.
std::string num(double x);

/// Nearest double to an exact rational.
double to_double(const Rational& q);

/// Decimal or "p/q" text to an exact rational; `was_decimal` reports a decimal point or exponent.
Rational parse_exact(const std::string& text, bool& was_decimal);

std::string checks_json(const std::vector<checks::CheckResult>& rs);
std::string checks_table(const std::vector<checks::CheckResult>& rs);
std::string checks_csv(const std::vector<checks::CheckResult>& rs);

/// Columns t, rho, mu, rho_mu, invariant.
std::string trajectory_csv(const flow::Trajectory& tr);
std::string trajectory_json(const flow::Trajectory& tr);

/// Columns t, rho, mu, rho_mu, invariant, tau, scal, vol_ratio, u, f, w.
std::string entropy_csv(const std::vector<flow::EntropyRecord>& rs, int n);
std::string entropy_json(const std::vector<flow::EntropyRecord>& rs, int n);

}  // namespace twistor::report
