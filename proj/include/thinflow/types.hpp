#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace thinflow {

using Index = std::int64_t;
using Vector = std::vector<double>;

// Marker for a degree of freedom removed by an essential boundary condition.
inline constexpr Index kEliminated = -1;

enum class ErrorCode {
  InvalidArgument,
  NotSymmetric,
  NotElliptic,
  UnknownPreset,
  DimensionMismatch,
  NonConvergence,
  SingularSystem,
  NonFinite,
  GridMismatch,
  OracleFailure,
  UnknownKey,
  TypeMismatch,
  ConstraintViolation,
  Io,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct IndexRange {
  Index offset = 0;
  Index size = 0;

  Index end() const { return offset + size; }
  bool contains(Index i) const { return i >= offset && i < end(); }
};

// Dense vector helpers shared by the solvers and the norm suite.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_max(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace thinflow
