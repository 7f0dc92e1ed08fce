#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "twistor/report.hpp"

using namespace twistor;

TEST_CASE("parse_exact reads fractions, integers and decimals exactly") {
  bool dec = true;
  CHECK(report::parse_exact("1/4", dec) == Rational(1, 4));
  CHECK_FALSE(dec);
  CHECK(report::parse_exact("3", dec) == 3);
  CHECK_FALSE(dec);
  CHECK(report::parse_exact("0.125", dec) == Rational(1, 8));
  CHECK(dec);
  CHECK(report::parse_exact("-2.5e-1", dec) == Rational(-1, 4));
  CHECK(report::parse_exact("1e2", dec) == 100);
  CHECK(report::parse_exact(".5", dec) == Rational(1, 2));
  CHECK_THROWS(report::parse_exact("x", dec));
  CHECK_THROWS(report::parse_exact(".", dec));
}

TEST_CASE("to_double rounds to nearest") {
  CHECK(report::to_double(Rational(101, 100)) == 1.01);
  CHECK(report::to_double(Rational(1, 3)) == 1.0 / 3);
  CHECK(report::to_double(Rational(-7, 10)) == -0.7);
  CHECK(report::to_double(Rational(0)) == 0.0);
}

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(report::num(0.1) == "0.10000000000000001");
  CHECK(report::num(2) == "2");
}

TEST_CASE("check results serialize to JSON and CSV") {
  std::vector<checks::CheckResult> rs{{"a", "pass", ""}, {"b", "fail", "x, \"y\""}};
  auto j = nlohmann::json::parse(report::checks_json(rs));
  REQUIRE(j.size() == 2);
  CHECK(j[1]["status"] == "fail");
  CHECK(j[1]["detail"] == "x, \"y\"");
  CHECK(report::checks_csv(rs) == "check,status,detail\na,pass,\nb,fail,\"x, \"\"y\"\"\"\n");
}

TEST_CASE("trajectory records keep column order") {
  flow::IntegrateOptions o;
  o.t_end = 2e-4;
  auto tr = flow::integrate({0, 1, 0.5, flow::Family::Z, 2}, o);
  std::string csv = report::trajectory_csv(tr);
  CHECK(csv.rfind("t,rho,mu,rho_mu,invariant\n", 0) == 0);
  auto j = nlohmann::ordered_json::parse(report::trajectory_json(tr));
  REQUIRE(j.size() == tr.samples.size());
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"t", "rho", "mu", "rho_mu", "invariant"});
  CHECK(j[0]["mu"].get<double>() == 0.5);
}

TEST_CASE("entropy records add the diagnostic columns") {
  auto rs = flow::entropy_series(1, 0.5, 2, 4);
  std::string csv = report::entropy_csv(rs, 2);
  CHECK(csv.rfind("t,rho,mu,rho_mu,invariant,tau,scal,vol_ratio,u,f,w\n", 0) == 0);
  auto j = nlohmann::json::parse(report::entropy_json(rs, 2));
  CHECK(j.size() == 4);
}

TEST_CASE("format names") {
  CHECK(report::parse_format("json") == report::Format::Json);
  CHECK(report::parse_format("table") == report::Format::Table);
  CHECK_THROWS(report::parse_format("xml"));
}
