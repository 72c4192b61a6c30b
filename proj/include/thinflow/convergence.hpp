#pragma once

#include <optional>
#include <string>
#include <vector>

#include "thinflow/config.hpp"
#include "thinflow/epsilon_problem.hpp"
#include "thinflow/limit_problem.hpp"
#include "thinflow/norms.hpp"

namespace thinflow {

struct SweepRow {
  double epsilon = 0.0;
  double err_v1_hdiv = 0.0;
  double err_vT = 0.0;        // |eps vT - u| + |grad_T(eps vT - u)|, u constant in z
  double err_dz_vT = 0.0;     // |dz(eps vT)|
  double err_vN_hdz = 0.0;    // |vN - xi| in H(dz)
  double err_p1 = 0.0;        // L2 + |Q dv| surrogate
  double err_p2 = 0.0;        // p2 extended constant in z
  double energy_residual = 0.0;
  double apriori_E = 0.0;
  std::optional<double> ratio_T_N;
  double vanish_dzvT = 0.0;          // |dz vT|
  double vanish_gradT_epsvN = 0.0;   // |grad_T(eps vN)|
  double kkt_residual = 0.0;
  Index outer_iterations = 0;
  std::string error;  // non-empty when the solve for this epsilon failed
};

struct RateFit {
  double rate = 0.0;  // slope of log(value) against log(eps)
  double r2 = 0.0;
};

struct RateRow {
  std::string quantity;
  RateFit fit;
};

struct ConvergenceReport {
  std::vector<SweepRow> rows;  // epsilon descending
  std::vector<RateRow> rates;
  LimitSolution limit;
  double limit_pressure_identity = 0.0;
};

// Error columns, ratio and vanishing norms. Energy residual and E are left to the caller.
SweepRow compare_to_limit(const EpsilonSolution& eps_sol, const LimitSolution& lim_sol, const NormSuite& norms);

std::optional<double> velocity_ratio(const EpsilonSolution& sol, const NormSuite& norms);

// Ordinary least squares on (log x, log y). Needs two or more points, all positive.
std::optional<RateFit> fit_rate(std::span<const double> x, std::span<const double> y);

// Quantities listed in rates.csv, in order.
const std::vector<std::string>& sweep_rate_columns();
double sweep_column(const SweepRow& row, const std::string& name);

ConvergenceReport run_sweep(const RunConfig& cfg);

// Response to a data perturbation: scaled solution norm over data norm.
struct StabilityProbe {
  double solution_norm = 0.0;
  double data_norm = 0.0;
  double ratio = 0.0;
};

// Scaled solution norm: Hdiv(v1) + |eps vT| + |grad_T(eps vT)| + |vN|_H(dz) + |p1| + |p2|.
double scaled_solution_norm(const EpsilonSolution& sol, const NormSuite& norms);

StabilityProbe stability_probe(const CoefficientSet& c, const ForcingSet& delta, const GridPair& g,
                               const DofLayout& layout, double epsilon, const SolverOptions& opt = {});

}  // namespace thinflow
