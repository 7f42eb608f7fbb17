#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fqfi {

struct CheckResult {
  std::string suite;
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerifyOptions {
  std::string suite = "all";  // all | fock | bogoliubov | qfi | hall
  std::uint64_t seed = 20180418;
  /// Flips the sign of the δ_{n',n+2} term of the overlap derivative (negative test).
  bool inject_fault = false;
};

bool is_known_suite(const std::string& suite);

/// Runs the oracle comparisons of the requested suite.  Throws DomainError for
/// an unknown suite name.
std::vector<CheckResult> run_verification(const VerifyOptions& options);

}  // namespace fqfi
