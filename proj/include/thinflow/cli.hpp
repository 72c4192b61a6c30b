#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "thinflow/config.hpp"
#include "thinflow/csv.hpp"

namespace thinflow {

// args excludes the program name. Returns the process exit status; failures
// print one line "error: command=... code=... key=... line=... message=..." to err.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// Invariant suite behind `check`.
std::vector<CheckResult> run_checks(const RunConfig& cfg, std::ostream& log);

std::vector<Index> parse_levels(const std::string& text);

}  // namespace thinflow
