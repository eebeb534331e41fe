#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opca {

struct CriterionResult {
  std::string name;
  bool pass = false;
  bool warned = false;  // hardware-sensitive criterion downgraded to warning
  std::string detail;
};

struct VerifyOptions {
  std::string filter;      // substring match on criterion names; empty = all
  std::string out_dir = "acceptance_out";
  double sigma2_override = -1.0;  // detuning knob for the bound criteria
};

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            std::ostream& log);

/// Prints one pass/fail line per criterion; returns a process exit status.
int report_acceptance(const VerifyOptions& opts, std::ostream& log);

}  // namespace opca
