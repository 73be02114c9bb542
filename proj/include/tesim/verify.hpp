#pragma once

#include <string>
#include <vector>

namespace tesim {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;  // the measured numbers, or the failure reason
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  std::string table() const;
};

/// Names accepted by run_verify_suite: constitutive, operators, balances,
/// relent.
std::vector<std::string> verify_suite_names();

/// Run a named invariant suite.  Independent checks may execute in parallel;
/// the TESIM_THREADS environment variable caps the worker count.  Throws
/// std::invalid_argument for an unknown suite name.
SuiteReport run_verify_suite(const std::string& suite);

}  // namespace tesim
