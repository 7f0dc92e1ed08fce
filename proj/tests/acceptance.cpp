// Acceptance runner: one pass/fail line per criterion, with the failing checks listed beneath.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "twistor/checks.hpp"

int main(int argc, char** argv) {
  using namespace twistor::checks;
  CLI::App app{"acceptance criteria"};
  int only = 0;
  bool verbose = false;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, criterion_count()));
  app.add_flag("--verbose", verbose, "print every check");
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int k = 1; k <= criterion_count(); ++k) {
    if (only != 0 && k != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    auto rs = run_groups(criterion_groups(k), thread_count_from_env());
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = all_pass(rs);
    all = all && ok;
    std::cout << fmt::format("criterion {}: {} ({}; {} checks, {:.2f} s)\n", k, ok ? "PASS" : "FAIL", criterion_title(k),
                             rs.size(), s);
    for (const auto& r : rs)
      if (verbose || r.status == "fail") std::cout << fmt::format("  [{}] {}: {}\n", r.status, r.check, r.detail);
  }
  return all ? 0 : 1;
}
