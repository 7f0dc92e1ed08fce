#pragma once

#include <functional>
#include <string>
#include <vector>

namespace twistor::checks {

/// One line of a verification report; status is "pass", "fail" or "note".
struct CheckResult {
  std::string check;
  std::string status;
  std::string detail;
};

struct Options {
  bool tamper = false;  // perturb one structure constant before the Lie algebra checks
  unsigned seed = 20260415;
};

struct Group {
  std::string name;
  std::function<std::vector<CheckResult>()> run;
};

std::vector<CheckResult> lie_algebra(int n, const Options& opt = {});
std::vector<CheckResult> hpn_constants(int n);
std::vector<CheckResult> canonical_ricci(int n);
std::vector<CheckResult> kahler(int n);
std::vector<CheckResult> contact(int n);
std::vector<CheckResult> hat_alpha(int n);
std::vector<CheckResult> z_ricci(int n);
std::vector<CheckResult> flow_rhs(int n);
std::vector<CheckResult> flow_oracle(const Options& opt = {});
std::vector<CheckResult> flow_invariants(const Options& opt = {});
std::vector<CheckResult> classification();
std::vector<CheckResult> stability();
std::vector<CheckResult> entropy();
std::vector<CheckResult> known_typos();

/// Groups of the full verification run, in report order.
std::vector<Group> verify_groups(const std::vector<int>& ns, const Options& opt = {});

/// Groups backing acceptance criterion k (1..9).
std::vector<Group> criterion_groups(int k, const Options& opt = {});
int criterion_count();
std::string criterion_title(int k);

/// Runs the groups on up to `threads` workers; output keeps group order.
std::vector<CheckResult> run_groups(const std::vector<Group>& groups, unsigned threads);

/// TFLOW_THREADS if set and positive, else the hardware concurrency.
unsigned thread_count_from_env();

bool all_pass(const std::vector<CheckResult>& rs);

}  // namespace twistor::checks
