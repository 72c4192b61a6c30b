#pragma once

#include <string>
#include <utility>
#include <vector>

#include "thinflow/channel_block.hpp"
#include "thinflow/coefficients.hpp"
#include "thinflow/darcy_block.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/saddle_solver.hpp"

namespace thinflow {

struct EpsilonSystem {
  SaddleSystem sys;
  GridPair grid;
  DofLayout layout;
  CoefficientSet coeffs;
  double epsilon = 0.0;
};

// Fields in local grid numbering; eliminated faces hold exact zeros.
struct EpsilonSolution {
  double epsilon = 0.0;
  Vector v1;   // porous faces: vertical (nx+1)ny, then horizontal nx(ny+1)
  Vector vT2;  // channel tangential faces (nx+1)nz
  Vector vN2;  // channel normal faces nx(nz+1); row 0 is the Γ unknown
  Vector p1;   // porous cells
  Vector p2;   // channel cells
  Vector v;    // raw global unknowns
  Vector p;
  Index outer_iterations = 0;
  double kkt_residual = 0.0;
};

EpsilonSystem assemble_epsilon(const CoefficientSet& c, const ForcingSet& fs, const GridPair& g,
                               const DofLayout& layout, double epsilon);

EpsilonSolution solve_epsilon(const EpsilonSystem& es, const SolverOptions& opt = {}, const Vector* p0 = nullptr);

// Scatter global unknowns into the local field arrays.
EpsilonSolution unpack_epsilon(const EpsilonSystem& es, Vector v, Vector p);

// |v.Av - (v.f + p.h)| / (1 + |v.f + p.h|)
double energy_identity_residual(const EpsilonSolution& sol, const EpsilonSystem& es);

struct AprioriQuantities {
  double v1_sq = 0.0;             // |v1|^2 on Ω1
  double gradT_eps_vT_sq = 0.0;   // |grad_T(eps vT)|^2
  double dz_vT_sq = 0.0;          // |dz vT|^2
  double eps_gradT_vN_sq = 0.0;   // |eps grad_T vN|^2
  double dz_vN_sq = 0.0;          // |dz vN|^2
  double vN_gamma_sq = 0.0;       // |vN|^2 on Γ
  double eps_vT_gamma_sq = 0.0;   // |eps vT|^2 on Γ
  double E = 0.0;

  std::vector<std::pair<std::string, double>> labeled() const;
};

AprioriQuantities apriori_quantities(const EpsilonSolution& sol, const GridPair& g);

// Largest |B v - h| entry.
double mass_conservation_residual(const EpsilonSystem& es, const EpsilonSolution& sol);

}  // namespace thinflow
