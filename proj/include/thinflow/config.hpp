#pragma once

#include <string>
#include <vector>

#include "thinflow/coefficients.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/saddle_solver.hpp"

namespace thinflow {

struct RunConfig {
  DomainSpec geometry;
  Index nx = 64;
  Index ny = 64;
  Index nz = 64;
  CoefficientSet coeffs;
  ForcingSet forcing;
  std::vector<double> epsilons{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  SolverOptions solver;
  std::string output_dir = "out";
  bool dump_fields = false;

  bool operator==(const RunConfig&) const = default;
};

// Parse failure pointing at one key and line (line 0 when not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::string key, int line, const std::string& message)
      : Error(code, message), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

// `section.key = value` per line, '#' starts a comment. Missing keys keep
// their defaults.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string render_config(const RunConfig& cfg);

}  // namespace thinflow
