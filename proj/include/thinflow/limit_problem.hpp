#pragma once

#include <functional>

#include "thinflow/coefficients.hpp"
#include "thinflow/darcy_block.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/saddle_solver.hpp"

namespace thinflow {

// Unknowns: porous faces (same ordering as the ε-problem), then the interior
// Γ nodes i = 1..nx-1. Pressures: porous cells, then Γ cells.
struct LimitLayout {
  PorousDofMap porous;
  std::vector<Index> nodes;  // Γ node i -> global index, ends eliminated
  CellDofMap porous_cells;
  std::vector<Index> gamma_cells;
  IndexRange porous_velocity;
  IndexRange gamma_velocity;
  IndexRange porous_pressure;
  IndexRange gamma_pressure;
  Index n_velocity = 0;
  Index n_pressure = 0;
};

LimitLayout build_limit_layout(const GridPair& g);

// Data driving the reduced problem: the z-averaged tangential load and the
// porous source.
struct LimitForcing {
  std::function<double(double)> fbar_T;         // at Γ nodes
  std::function<double(double, double)> h1;     // at porous cell centres
};

// Vertical midpoint average of f2_T over the nz channel cells, at epsilon = 0.
LimitForcing limit_forcing(const ForcingSet& fs, const GridPair& g);

struct LimitSystem {
  SaddleSystem sys;
  GridPair grid;
  LimitLayout layout;
  CoefficientSet coeffs;
};

LimitSystem assemble_limit(const CoefficientSet& c, const LimitForcing& lf, const GridPair& g);
LimitSystem assemble_limit(const CoefficientSet& c, const ForcingSet& fs, const GridPair& g);

// Γ block alone: beta (sqrt Q)_11 lumped mass + mu three-point stiffness, on
// the node vector of length nx+1 (ends eliminated).
SparseSym gamma_block(const CoefficientSet& c, const GridPair& g, const std::vector<Index>& nodes, Index dim);

struct LimitSolution {
  Vector v1;   // porous faces, local numbering
  Vector vT2;  // Γ nodes 0..nx, zero at both ends
  Vector p1;   // porous cells
  Vector p2;   // Γ cells
  Vector xi;   // channel normal faces nx(nz+1)
  Vector v;
  Vector p;
  Index outer_iterations = 0;
  double kkt_residual = 0.0;
};

LimitSolution solve_limit(const LimitSystem& ls, const SolverOptions& opt = {}, const Vector* p0 = nullptr);
LimitSolution unpack_limit(const LimitSystem& ls, Vector v, Vector p);

// Top porous normal velocity v1.n on Γ, one entry per Γ cell.
Vector interface_normal_velocity(const Vector& v1, const GridPair& g);
// Top porous cell pressures.
Vector interface_porous_pressure(const Vector& p1, const GridPair& g);

// max_i |p1_top(i) - p2(i) - (mu + alpha) vn(i)|
double pressure_identity_residual(std::span<const double> p1_top, std::span<const double> p2,
                                  std::span<const double> vn, double mu, double alpha);
double pressure_identity_residual(const LimitSolution& sol, const CoefficientSet& c, const GridPair& g);

// xi(i, k) = (1 - z_k) vn(i) on channel normal faces.
Vector reconstruct_xi(std::span<const double> vn, const GridPair& g);

// Largest |grad_T.v_T + dz xi| over channel cells, both by differences.
double xi_divergence_residual(const LimitSolution& sol, const GridPair& g);

}  // namespace thinflow
