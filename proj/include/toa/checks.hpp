#pragma once
#include <toa/common.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace toa {

struct CheckOptions {
  double tol_scale = 1.0;          // loosen/tighten every bound by this factor
  double inject_phase_error = 0.0; // self-test hook: rotates the closed-form
                                   // eigenstate amplitude by this angle (rad);
                                   // any nonzero value must trip the symmetry
                                   // suite
  bool verbose = true;
};

struct CheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
  std::string detail;
};

// Suites: "symmetry", "covariance", "variance", "asymptotics", "sharpness",
// "grt", or "all". Unknown names throw DomainError. Results are printed to
// `out` as they complete when opts.verbose is set.
std::vector<CheckResult> run_check_suite(const std::string& suite,
                                         const CheckOptions& opts, std::ostream& out);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace toa
