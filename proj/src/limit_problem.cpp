#include "thinflow/limit_problem.hpp"

#include <algorithm>
#include <cmath>

namespace thinflow {

LimitLayout build_limit_layout(const GridPair& g) {
  LimitLayout L;
  L.porous = standalone_porous_map(g, false);
  L.porous_velocity = {0, L.porous.dim};
  Index next = L.porous.dim;
  L.nodes.assign(g.nx + 1, kEliminated);
  L.gamma_velocity.offset = next;
  for (Index i = 1; i < g.nx; ++i) L.nodes[i] = next++;
  L.gamma_velocity.size = next - L.gamma_velocity.offset;
  L.n_velocity = next;
  L.porous.dim = next;

  L.porous_cells = standalone_cell_map(g);
  L.porous_pressure = {0, g.n_cells()};
  Index pnext = g.n_cells();
  L.gamma_pressure.offset = pnext;
  for (Index i = 0; i < g.nx; ++i) L.gamma_cells.push_back(pnext++);
  L.gamma_pressure.size = g.nx;
  L.n_pressure = pnext;
  L.porous_cells.dim = pnext;
  return L;
}

LimitForcing limit_forcing(const ForcingSet& fs, const GridPair& g) {
  if (!is_known_preset(fs.preset)) throw Error(ErrorCode::UnknownPreset, "unknown forcing preset '" + fs.preset + "'");
  LimitForcing lf;
  lf.fbar_T = [fs, g](double x) {
    double s = 0.0;
    for (Index k = 0; k < g.nz; ++k) s += forcing_fT(fs, g.spec, 0.0, x, g.z_center(k));
    return s / static_cast<double>(g.nz);
  };
  lf.h1 = [fs, spec = g.spec](double x, double y) { return forcing_h1(fs, spec, 0.0, x, y); };
  return lf;
}

SparseSym gamma_block(const CoefficientSet& c, const GridPair& g, const std::vector<Index>& nodes, Index dim) {
  const double s11 = sqrt_Q(c).a11;
  SymBuilder b(dim);
  for (Index i = 1; i < g.nx; ++i) b.add_square(nodes[i], c.beta * s11 * g.dx);
  for (Index i = 0; i < g.nx; ++i) b.add_difference(nodes[i], nodes[i + 1], c.mu / g.dx);
  return std::move(b).build();
}

LimitSystem assemble_limit(const CoefficientSet& c, const LimitForcing& lf, const GridPair& g) {
  validate(c);
  LimitSystem ls;
  ls.grid = g;
  ls.coeffs = c;
  ls.layout = build_limit_layout(g);
  const LimitLayout& L = ls.layout;

  // μ enters the normal interface weight through the linear profile ξ.
  const DarcyBlocks darcy = assemble_darcy(c, g, L.porous, L.porous_cells, c.mu + c.alpha);
  ls.sys.A = darcy.M1 + darcy.Rn + gamma_block(c, g, L.nodes, L.n_velocity);

  auto bt = darcy.D1.triplets();
  for (Index i = 0; i < g.nx; ++i) {
    const Index r = L.gamma_cells[i];
    bt.push_back({r, L.porous.horizontal[g.hface(i, g.ny)], -g.dx});
    if (L.nodes[i] != kEliminated) bt.push_back({r, L.nodes[i], -1.0});
    if (L.nodes[i + 1] != kEliminated) bt.push_back({r, L.nodes[i + 1], 1.0});
  }
  ls.sys.B = SparseMatrix(L.n_pressure, L.n_velocity, std::move(bt));

  ls.sys.f.assign(L.n_velocity, 0.0);
  for (Index i = 1; i < g.nx; ++i) ls.sys.f[L.nodes[i]] = lf.fbar_T(g.x_node(i)) * g.dx;
  ls.sys.h.assign(L.n_pressure, 0.0);
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      ls.sys.h[L.porous_cells.cells[g.cell(i, j)]] = lf.h1(g.x_center(i), g.y_center(j)) * g.cell_area();
  for (double v : ls.sys.f)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "limit forcing is not finite");
  for (double v : ls.sys.h)
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "limit source is not finite");
  return ls;
}

LimitSystem assemble_limit(const CoefficientSet& c, const ForcingSet& fs, const GridPair& g) {
  return assemble_limit(c, limit_forcing(fs, g), g);
}

Vector interface_normal_velocity(const Vector& v1, const GridPair& g) {
  Vector vn(g.nx);
  for (Index i = 0; i < g.nx; ++i) vn[i] = v1[g.n_vfaces() + g.hface(i, g.ny)];
  return vn;
}

Vector interface_porous_pressure(const Vector& p1, const GridPair& g) {
  Vector out(g.nx);
  for (Index i = 0; i < g.nx; ++i) out[i] = p1[g.cell(i, g.ny - 1)];
  return out;
}

Vector reconstruct_xi(std::span<const double> vn, const GridPair& g) {
  if (static_cast<Index>(vn.size()) != g.nx) throw Error(ErrorCode::GridMismatch, "reconstruct_xi: wrong Γ size");
  Vector xi(g.n_nfaces(), 0.0);
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) xi[g.nface(i, k)] = (k == g.nz) ? 0.0 : (1.0 - g.z_node(k)) * vn[i];
  return xi;
}

LimitSolution unpack_limit(const LimitSystem& ls, Vector v, Vector p) {
  const GridPair& g = ls.grid;
  const LimitLayout& L = ls.layout;
  LimitSolution s;
  s.v1.assign(g.n_vfaces() + g.n_hfaces(), 0.0);
  for (Index f = 0; f < g.n_vfaces(); ++f) s.v1[f] = v[L.porous.vertical[f]];
  for (Index f = 0; f < g.n_hfaces(); ++f) s.v1[g.n_vfaces() + f] = v[L.porous.horizontal[f]];
  s.vT2.assign(g.nx + 1, 0.0);
  for (Index i = 1; i < g.nx; ++i) s.vT2[i] = v[L.nodes[i]];
  s.p1.resize(g.n_cells());
  for (Index c = 0; c < g.n_cells(); ++c) s.p1[c] = p[L.porous_cells.cells[c]];
  s.p2.resize(g.nx);
  for (Index i = 0; i < g.nx; ++i) s.p2[i] = p[L.gamma_cells[i]];
  s.xi = reconstruct_xi(interface_normal_velocity(s.v1, g), g);
  s.v = std::move(v);
  s.p = std::move(p);
  return s;
}

LimitSolution solve_limit(const LimitSystem& ls, const SolverOptions& opt, const Vector* p0) {
  SaddleSolution raw = schur_solve(ls.sys, opt, p0);
  LimitSolution s = unpack_limit(ls, std::move(raw.v), std::move(raw.p));
  s.outer_iterations = raw.outer_iterations;
  s.kkt_residual = raw.kkt_residual;
  return s;
}

double pressure_identity_residual(std::span<const double> p1_top, std::span<const double> p2,
                                  std::span<const double> vn, double mu, double alpha) {
  if (p1_top.size() != p2.size() || p2.size() != vn.size()) {
    throw Error(ErrorCode::DimensionMismatch, "pressure identity: sizes differ");
  }
  double r = 0.0;
  for (std::size_t i = 0; i < vn.size(); ++i) r = std::max(r, std::abs(p1_top[i] - p2[i] - (mu + alpha) * vn[i]));
  return r;
}

double pressure_identity_residual(const LimitSolution& sol, const CoefficientSet& c, const GridPair& g) {
  return pressure_identity_residual(interface_porous_pressure(sol.p1, g), sol.p2,
                                    interface_normal_velocity(sol.v1, g), c.mu, c.alpha);
}

double xi_divergence_residual(const LimitSolution& sol, const GridPair& g) {
  double r = 0.0;
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) {
      const double divT = (sol.vT2[i + 1] - sol.vT2[i]) / g.dx;
      const double dzxi = (sol.xi[g.nface(i, k + 1)] - sol.xi[g.nface(i, k)]) / g.dz;
      r = std::max(r, std::abs(divT + dzxi));
    }
  return r;
}

}  // namespace thinflow
