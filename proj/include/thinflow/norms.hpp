#pragma once

#include "thinflow/coefficients.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/sparse.hpp"

namespace thinflow {

// Discrete norms on local field arrays. Every norm is sqrt(x.Gx) for an SPD
// (or PSD, for seminorms) Gram matrix built from the same quadratures the
// assembly uses.
class NormSuite {
 public:
  NormSuite(const GridPair& g, const CoefficientSet& c);

  const GridPair& grid() const { return g_; }

  // Ω1, porous face arrays
  double l2_porous_velocity(std::span<const double> v1) const;
  double hdiv(std::span<const double> v1) const;
  double q_weighted_l2(std::span<const double> v1) const;  // |Q v|
  // Ω1, cell arrays
  double l2_porous_pressure(std::span<const double> p1) const;
  // L2 + |Q dv|: pressure error surrogate since grad p = -Q v
  double h1_pressure_surrogate(std::span<const double> dp1, std::span<const double> dv1) const;

  // Ω2, tangential face arrays
  double l2_tangential(std::span<const double> vT) const;
  double gradT_tangential(std::span<const double> vT) const;
  double dz_tangential(std::span<const double> vT) const;
  double trace_tangential(std::span<const double> vT) const;  // bottom row on Γ
  // Ω2, normal face arrays
  double l2_normal(std::span<const double> vN) const;
  double gradT_normal(std::span<const double> vN) const;
  double dz_normal(std::span<const double> vN) const;
  double hdz_normal(std::span<const double> vN) const;  // sqrt(|u|^2 + |dz u|^2)
  double trace_normal(std::span<const double> vN) const;  // row 0 on Γ
  // Ω2, cell arrays
  double l2_channel_pressure(std::span<const double> p2) const;

  // Γ
  double l2_gamma_cells(std::span<const double> q) const;
  double l2_gamma_nodes(std::span<const double> u) const;
  double h1_gamma_nodes(std::span<const double> u) const;  // |u'| seminorm

  const SparseSym& porous_mass() const { return porous_mass_; }
  const SparseSym& porous_hdiv_gram() const { return porous_hdiv_; }

 private:
  GridPair g_;
  SparseSym porous_mass_, porous_hdiv_, porous_q2_;
  SparseSym t_mass_, t_dx_, t_dz_, n_mass_, n_dx_, n_dz_;
};

// D^T W^{-1} D for a divergence matrix D and diagonal cell weights W; the
// discrete |div v|^2 form.
SparseSym divergence_gram(const SparseMatrix& D, std::span<const double> cell_weights);

// Gram matrices and pressure masses for the inf-sup estimates.
struct InfSupForms {
  SparseSym gram;
  Vector pressure_mass;
};
InfSupForms epsilon_infsup_forms(const GridPair& g, const DofLayout& layout);
struct LimitLayout;
InfSupForms limit_infsup_forms(const GridPair& g, const LimitLayout& layout);

}  // namespace thinflow
