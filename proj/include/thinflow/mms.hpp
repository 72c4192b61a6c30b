#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thinflow/coefficients.hpp"
#include "thinflow/convergence.hpp"
#include "thinflow/dual.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/saddle_solver.hpp"

namespace thinflow {

enum class CaseKind {
  DarcyDirichlet,  // pressure data on the whole boundary of Ω1, Γ included
  DarcyNoFlowTop,  // drained on the outer boundary, v.n = 0 on Γ
  Limit,           // reduced Darcy-Brinkman problem
};

// Closed-form fields plus the data that makes them exact. Coordinates are
// those of Ω1 = (0,W) x (-D,0); Γ functions take x only.
struct ManufacturedCase {
  using Field2 = std::function<HyperDual(HyperDual, HyperDual)>;
  using Field1 = std::function<HyperDual(HyperDual)>;

  std::string name;
  CaseKind kind = CaseKind::DarcyDirichlet;
  CoefficientSet coeffs;
  DomainSpec domain;
  bool exact_by_scheme = false;

  Field2 p1, vx, vy, h1;
  Field1 u, p2, fbar;  // Limit only
};

std::vector<std::string> manufactured_case_names();
ManufacturedCase manufactured_case(const std::string& name);

// Largest strong-form residual (equations and boundary conditions) of the
// case on a sample grid, differentiated exactly with hyper-dual numbers.
double strong_form_residual(const ManufacturedCase& mc);

struct MmsLevel {
  Index n = 0;
  double h = 0.0;
  std::map<std::string, double> errors;  // discrete L2 errors per field
};

struct MmsTable {
  std::string name;
  std::vector<MmsLevel> levels;
  std::map<std::string, std::optional<RateFit>> orders;  // slope of log error vs log h
};

MmsLevel solve_manufactured(const ManufacturedCase& mc, Index n, const SolverOptions& opt = {});

// Aborts with OracleFailure when the strong-form residual exceeds 1e-10.
MmsTable mms_convergence(const ManufacturedCase& mc, const std::vector<Index>& levels, const SolverOptions& opt = {});

}  // namespace thinflow
