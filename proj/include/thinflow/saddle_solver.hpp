#pragma once

#include <functional>
#include <memory>
#include <string>

#include "thinflow/sparse.hpp"

namespace thinflow {

// A v - B^T p = f,  B v = h.
struct SaddleSystem {
  SparseSym A;
  SparseMatrix B;
  Vector f;
  Vector h;

  Index n() const { return A.dim(); }
  Index m() const { return B.rows(); }
};

enum class InnerSolver { Cholesky, CG };

struct SolverOptions {
  double inner_tol = 1e-13;
  double outer_tol = 1e-12;
  double inner_cap_factor = 10.0;  // cap = factor * n
  double outer_cap_factor = 5.0;   // cap = factor * m
  InnerSolver inner = InnerSolver::Cholesky;

  bool operator==(const SolverOptions&) const = default;
};

struct CgResult {
  Vector x;
  Index iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> energy;  // 1/2 x.Mx - b.x after each iteration, when logging
};

using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

// Plain conjugate gradients on an SPD operator. Stops when |r| <= tol |b|.
CgResult cg_solve(const LinearOperator& M, std::span<const double> rhs, double tol, Index cap,
                  const Vector* x0 = nullptr, bool log_energy = false);
CgResult cg_solve(const SparseSym& M, std::span<const double> rhs, double tol, Index cap,
                  const Vector* x0 = nullptr, bool log_energy = false);

// Reusable A^{-1}: sparse LDL^T factorization or inner CG.
class InnerInverse {
 public:
  InnerInverse(const SparseSym& A, const SolverOptions& opt);
  ~InnerInverse();
  InnerInverse(const InnerInverse&) = delete;
  InnerInverse& operator=(const InnerInverse&) = delete;

  Vector solve(std::span<const double> b) const;
  Index inner_iterations() const { return inner_iterations_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  mutable Index inner_iterations_ = 0;
};

struct SaddleSolution {
  Vector v;
  Vector p;
  Index outer_iterations = 0;
  Index inner_iterations = 0;
  double kkt_residual = 0.0;  // (|Av - B^T p - f| + |Bv - h|) / (1 + |f| + |h|)
};

SaddleSolution schur_solve(const SparseSym& A, const SparseMatrix& B, std::span<const double> f,
                           std::span<const double> h, const SolverOptions& opt = {}, const Vector* p0 = nullptr);
SaddleSolution schur_solve(const SaddleSystem& sys, const SolverOptions& opt = {}, const Vector* p0 = nullptr);

double kkt_residual(const SaddleSystem& sys, std::span<const double> v, std::span<const double> p);

struct InfSupReport {
  std::string problem;
  Index resolution = 0;
  double constant = 0.0;  // sqrt of the smallest generalized eigenvalue
  double eigenvalue = 0.0;
  Index iterations = 0;
  double last_change = 0.0;
};

// Smallest generalized eigenvalue of B G^{-1} B^T q = lambda M_p q by
// inverse power iteration (shift 0, cap 500, Rayleigh quotient tol 1e-8).
// pressure_mass is the diagonal of M_p.
InfSupReport estimate_inf_sup(const SparseMatrix& B, const SparseSym& gram, std::span<const double> pressure_mass);

}  // namespace thinflow
