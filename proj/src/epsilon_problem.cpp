#include "thinflow/epsilon_problem.hpp"

#include <cmath>

namespace thinflow {

EpsilonSystem assemble_epsilon(const CoefficientSet& c, const ForcingSet& fs, const GridPair& g,
                               const DofLayout& layout, double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  if (layout.porous.vertical.size() != static_cast<std::size_t>(g.n_vfaces()) ||
      layout.channel.normal.size() != static_cast<std::size_t>(g.n_nfaces())) {
    throw Error(ErrorCode::DimensionMismatch, "layout does not belong to this grid");
  }
  validate(c);

  const DarcyBlocks darcy = assemble_darcy(c, g, layout.porous, layout.porous_cells, c.alpha);
  const ChannelBlocks chan = assemble_channel(c, g, layout.channel, layout.channel_cells, epsilon);

  EpsilonSystem es;
  es.grid = g;
  es.layout = layout;
  es.coeffs = c;
  es.epsilon = epsilon;
  // Γ unknowns are shared, so Darcy and channel contributions land on the same rows.
  es.sys.A = darcy.M1 + darcy.Rn + chan.K_TT + chan.S_bjs + chan.K_NN;

  auto bt = darcy.D1.triplets();
  for (const auto& e : chan.D2.triplets()) bt.push_back(e);
  es.sys.B = SparseMatrix(layout.n_pressure, layout.n_velocity, std::move(bt));

  const DiscreteForcing F = forcing_at(fs, g, epsilon);
  es.sys.f.assign(layout.n_velocity, 0.0);
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i) {
      const Index d = layout.channel.tangential[g.tface(i, k)];
      if (d != kEliminated) es.sys.f[d] += epsilon * F.fT[g.tface(i, k)] * g.dx * g.dz;
    }
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) {
      const Index d = layout.channel.normal[g.nface(i, k)];
      const double h = (k == 0 || k == g.nz) ? 0.5 * g.dz : g.dz;
      if (d != kEliminated) es.sys.f[d] += epsilon * F.fN[g.nface(i, k)] * g.dx * h;
    }
  es.sys.h.assign(layout.n_pressure, 0.0);
  for (Index c2 = 0; c2 < g.n_cells(); ++c2) es.sys.h[layout.porous_cells.cells[c2]] = F.h1[c2] * g.cell_area();
  return es;
}

EpsilonSolution unpack_epsilon(const EpsilonSystem& es, Vector v, Vector p) {
  const GridPair& g = es.grid;
  const DofLayout& L = es.layout;
  EpsilonSolution s;
  s.epsilon = es.epsilon;
  auto gather = [&v](const std::vector<Index>& map) {
    Vector out(map.size(), 0.0);
    for (std::size_t k = 0; k < map.size(); ++k)
      if (map[k] != kEliminated) out[k] = v[map[k]];
    return out;
  };
  s.v1 = gather(L.porous.vertical);
  const Vector vh = gather(L.porous.horizontal);
  s.v1.insert(s.v1.end(), vh.begin(), vh.end());
  s.vT2 = gather(L.channel.tangential);
  s.vN2 = gather(L.channel.normal);
  s.p1.resize(g.n_cells());
  s.p2.resize(g.n_ccells());
  for (Index c = 0; c < g.n_cells(); ++c) s.p1[c] = p[L.porous_cells.cells[c]];
  for (Index c = 0; c < g.n_ccells(); ++c) s.p2[c] = p[L.channel_cells.cells[c]];
  s.v = std::move(v);
  s.p = std::move(p);
  return s;
}

EpsilonSolution solve_epsilon(const EpsilonSystem& es, const SolverOptions& opt, const Vector* p0) {
  SaddleSolution raw = schur_solve(es.sys, opt, p0);
  EpsilonSolution s = unpack_epsilon(es, std::move(raw.v), std::move(raw.p));
  s.outer_iterations = raw.outer_iterations;
  s.kkt_residual = raw.kkt_residual;
  return s;
}

double energy_identity_residual(const EpsilonSolution& sol, const EpsilonSystem& es) {
  if (sol.v.size() != es.sys.f.size() || sol.p.size() != es.sys.h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "energy identity: solution does not match system");
  }
  const double lhs = es.sys.A.quadratic_form(sol.v);
  const double rhs = dot(sol.v, es.sys.f) + dot(sol.p, es.sys.h);
  return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

std::vector<std::pair<std::string, double>> AprioriQuantities::labeled() const {
  return {{"v1_sq", v1_sq},
          {"gradT_eps_vT_sq", gradT_eps_vT_sq},
          {"dz_vT_sq", dz_vT_sq},
          {"eps_gradT_vN_sq", eps_gradT_vN_sq},
          {"dz_vN_sq", dz_vN_sq},
          {"vN_gamma_sq", vN_gamma_sq},
          {"eps_vT_gamma_sq", eps_vT_gamma_sq},
          {"E", E}};
}

AprioriQuantities apriori_quantities(const EpsilonSolution& sol, const GridPair& g) {
  const PorousDofMap pm = standalone_porous_map(g, false);
  const ChannelDofMap tm = tangential_local_map(g);
  const ChannelDofMap nm = normal_local_map(g);

  const double e2 = sol.epsilon * sol.epsilon;
  AprioriQuantities q;
  q.v1_sq = assemble_weighted_mass(Tensor2::identity(), g, pm).quadratic_form(sol.v1);
  q.gradT_eps_vT_sq = e2 * tangential_dx_form(g, tm).quadratic_form(sol.vT2);
  q.dz_vT_sq = tangential_dz_form(g, tm).quadratic_form(sol.vT2);
  q.eps_gradT_vN_sq = e2 * normal_dx_form(g, nm).quadratic_form(sol.vN2);
  q.dz_vN_sq = normal_dz_form(g, nm).quadratic_form(sol.vN2);
  for (Index i = 0; i < g.nx; ++i) {
    const double vn = sol.vN2[g.nface(i, 0)];
    q.vN_gamma_sq += vn * vn * g.dx;
  }
  for (Index i = 0; i <= g.nx; ++i) {
    const double vt = sol.vT2[g.tface(i, 0)];
    q.eps_vT_gamma_sq += e2 * vt * vt * g.dx;
  }
  q.E = q.v1_sq + q.gradT_eps_vT_sq + q.dz_vT_sq + q.eps_gradT_vN_sq + q.dz_vN_sq + q.vN_gamma_sq + q.eps_vT_gamma_sq;
  return q;
}

double mass_conservation_residual(const EpsilonSystem& es, const EpsilonSolution& sol) {
  Vector r = es.sys.B * sol.v;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= es.sys.h[i];
  return norm_max(r);
}

}  // namespace thinflow
