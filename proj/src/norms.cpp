#include "thinflow/norms.hpp"

#include <cmath>

#include "thinflow/channel_block.hpp"
#include "thinflow/darcy_block.hpp"
#include "thinflow/limit_problem.hpp"

namespace thinflow {

namespace {

double form_norm(const SparseSym& G, std::span<const double> x, const char* what) {
  if (static_cast<Index>(x.size()) != G.dim()) throw Error(ErrorCode::GridMismatch, std::string(what) + ": wrong size");
  return std::sqrt(std::max(G.quadratic_form(x), 0.0));
}

void check_size(std::span<const double> x, Index n, const char* what) {
  if (static_cast<Index>(x.size()) != n) throw Error(ErrorCode::GridMismatch, std::string(what) + ": wrong size");
}

}  // namespace

SparseSym divergence_gram(const SparseMatrix& D, std::span<const double> cell_weights) {
  std::vector<Triplet> t;
  const auto& rp = D.row_ptr();
  const auto& ci = D.col_idx();
  const auto& va = D.values();
  for (Index r = 0; r < D.rows(); ++r) {
    const double w = cell_weights[r];
    if (w == 0.0) continue;
    for (Index a = rp[r]; a < rp[r + 1]; ++a)
      for (Index b = a; b < rp[r + 1]; ++b) t.push_back({ci[a], ci[b], va[a] * va[b] / w});
  }
  return SparseSym(D.cols(), std::move(t));
}

NormSuite::NormSuite(const GridPair& g, const CoefficientSet& c) : g_(g) {
  validate(c);
  const PorousDofMap pm = standalone_porous_map(g, false);
  porous_mass_ = assemble_weighted_mass(Tensor2::identity(), g, pm);
  const SparseMatrix D = assemble_divergence(g, pm, standalone_cell_map(g));
  const Vector w(static_cast<std::size_t>(g.n_cells()), g.cell_area());
  porous_hdiv_ = porous_mass_ + divergence_gram(D, w);
  porous_q2_ = assemble_weighted_mass(c.Q * c.Q, g, pm);

  const ChannelDofMap tm = tangential_local_map(g);
  const ChannelDofMap nm = normal_local_map(g);
  t_mass_ = tangential_mass(g, tm);
  t_dx_ = tangential_dx_form(g, tm);
  t_dz_ = tangential_dz_form(g, tm);
  n_mass_ = normal_mass(g, nm);
  n_dx_ = normal_dx_form(g, nm);
  n_dz_ = normal_dz_form(g, nm);
}

double NormSuite::l2_porous_velocity(std::span<const double> v1) const { return form_norm(porous_mass_, v1, "porous velocity"); }
double NormSuite::hdiv(std::span<const double> v1) const { return form_norm(porous_hdiv_, v1, "porous velocity"); }
double NormSuite::q_weighted_l2(std::span<const double> v1) const { return form_norm(porous_q2_, v1, "porous velocity"); }

double NormSuite::l2_porous_pressure(std::span<const double> p1) const {
  check_size(p1, g_.n_cells(), "porous pressure");
  double s = 0.0;
  for (double v : p1) s += v * v;
  return std::sqrt(s * g_.cell_area());
}

double NormSuite::h1_pressure_surrogate(std::span<const double> dp1, std::span<const double> dv1) const {
  return l2_porous_pressure(dp1) + q_weighted_l2(dv1);
}

double NormSuite::l2_tangential(std::span<const double> vT) const { return form_norm(t_mass_, vT, "tangential velocity"); }
double NormSuite::gradT_tangential(std::span<const double> vT) const { return form_norm(t_dx_, vT, "tangential velocity"); }
double NormSuite::dz_tangential(std::span<const double> vT) const { return form_norm(t_dz_, vT, "tangential velocity"); }

double NormSuite::trace_tangential(std::span<const double> vT) const {
  check_size(vT, g_.n_tfaces(), "tangential velocity");
  double s = 0.0;
  for (Index i = 0; i <= g_.nx; ++i) s += vT[g_.tface(i, 0)] * vT[g_.tface(i, 0)] * g_.dx;
  return std::sqrt(s);
}

double NormSuite::l2_normal(std::span<const double> vN) const { return form_norm(n_mass_, vN, "normal velocity"); }
double NormSuite::gradT_normal(std::span<const double> vN) const { return form_norm(n_dx_, vN, "normal velocity"); }
double NormSuite::dz_normal(std::span<const double> vN) const { return form_norm(n_dz_, vN, "normal velocity"); }

double NormSuite::hdz_normal(std::span<const double> vN) const {
  const double a = l2_normal(vN);
  const double b = dz_normal(vN);
  return std::sqrt(a * a + b * b);
}

double NormSuite::trace_normal(std::span<const double> vN) const {
  check_size(vN, g_.n_nfaces(), "normal velocity");
  double s = 0.0;
  for (Index i = 0; i < g_.nx; ++i) s += vN[g_.nface(i, 0)] * vN[g_.nface(i, 0)] * g_.dx;
  return std::sqrt(s);
}

double NormSuite::l2_channel_pressure(std::span<const double> p2) const {
  check_size(p2, g_.n_ccells(), "channel pressure");
  double s = 0.0;
  for (double v : p2) s += v * v;
  return std::sqrt(s * g_.ccell_area());
}

double NormSuite::l2_gamma_cells(std::span<const double> q) const {
  check_size(q, g_.nx, "Γ cell field");
  double s = 0.0;
  for (double v : q) s += v * v;
  return std::sqrt(s * g_.dx);
}

double NormSuite::l2_gamma_nodes(std::span<const double> u) const {
  check_size(u, g_.nx + 1, "Γ node field");
  double s = 0.0;
  for (Index i = 0; i <= g_.nx; ++i) s += ((i == 0 || i == g_.nx) ? 0.5 : 1.0) * u[i] * u[i];
  return std::sqrt(s * g_.dx);
}

double NormSuite::h1_gamma_nodes(std::span<const double> u) const {
  check_size(u, g_.nx + 1, "Γ node field");
  double s = 0.0;
  for (Index i = 0; i < g_.nx; ++i) s += (u[i + 1] - u[i]) * (u[i + 1] - u[i]);
  return std::sqrt(s / g_.dx);
}

InfSupForms epsilon_infsup_forms(const GridPair& g, const DofLayout& L) {
  InfSupForms out;
  const SparseSym mass = assemble_weighted_mass(Tensor2::identity(), g, L.porous);
  const SparseMatrix D = assemble_divergence(g, L.porous, standalone_cell_map(g));
  const Vector w(static_cast<std::size_t>(g.n_cells()), g.cell_area());
  out.gram = mass + divergence_gram(D, w) + tangential_mass(g, L.channel) + tangential_dx_form(g, L.channel) +
             tangential_dz_form(g, L.channel) + normal_mass(g, L.channel) + normal_dx_form(g, L.channel) +
             normal_dz_form(g, L.channel);
  out.pressure_mass.assign(L.n_pressure, 0.0);
  for (Index c = 0; c < g.n_cells(); ++c) out.pressure_mass[L.porous_cells.cells[c]] = g.cell_area();
  for (Index c = 0; c < g.n_ccells(); ++c) out.pressure_mass[L.channel_cells.cells[c]] = g.ccell_area();
  return out;
}

InfSupForms limit_infsup_forms(const GridPair& g, const LimitLayout& L) {
  InfSupForms out;
  const SparseSym mass = assemble_weighted_mass(Tensor2::identity(), g, L.porous);
  const SparseMatrix D = assemble_divergence(g, L.porous, standalone_cell_map(g));
  const Vector w(static_cast<std::size_t>(g.n_cells()), g.cell_area());
  SymBuilder b(L.n_velocity);
  for (Index i = 0; i < g.nx; ++i) b.add_square(L.porous.horizontal[g.hface(i, g.ny)], g.dx);  // |w.n|^2 on Γ
  for (Index i = 1; i < g.nx; ++i) b.add_square(L.nodes[i], g.dx);
  for (Index i = 0; i < g.nx; ++i) b.add_difference(L.nodes[i], L.nodes[i + 1], 1.0 / g.dx);
  out.gram = mass + divergence_gram(D, w) + std::move(b).build();
  out.pressure_mass.assign(L.n_pressure, 0.0);
  for (Index c = 0; c < g.n_cells(); ++c) out.pressure_mass[L.porous_cells.cells[c]] = g.cell_area();
  for (Index i = 0; i < g.nx; ++i) out.pressure_mass[L.gamma_cells[i]] = g.dx;
  return out;
}

}  // namespace thinflow
