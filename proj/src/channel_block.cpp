#include "thinflow/channel_block.hpp"

#include <cmath>

namespace thinflow {

namespace {

void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
}

// vertical extent of the control volume around normal face row k
double normal_height(const GridPair& g, Index k) { return (k == 0 || k == g.nz) ? 0.5 * g.dz : g.dz; }

}  // namespace

SparseSym tangential_dx_form(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  const double w = g.dz / g.dx;
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i)
      b.add_difference(map.tangential[g.tface(i, k)], map.tangential[g.tface(i + 1, k)], w);
  return std::move(b).build();
}

SparseSym tangential_dz_form(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  const double w = g.dx / g.dz;
  for (Index k = 0; k + 1 < g.nz; ++k) {
    for (Index i = 0; i <= g.nx; ++i) {
      // wall columns are boundary faces with half width
      const double s = (i == 0 || i == g.nx) ? 0.5 : 1.0;
      b.add_difference(map.tangential[g.tface(i, k)], map.tangential[g.tface(i, k + 1)], s * w);
    }
  }
  return std::move(b).build();
}

SparseSym normal_dx_form(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  for (Index k = 0; k <= g.nz; ++k) {
    const double h = normal_height(g, k);
    b.add_difference(kEliminated, map.normal[g.nface(0, k)], 2.0 * h / g.dx);
    for (Index i = 0; i + 1 < g.nx; ++i)
      b.add_difference(map.normal[g.nface(i, k)], map.normal[g.nface(i + 1, k)], h / g.dx);
    b.add_difference(map.normal[g.nface(g.nx - 1, k)], kEliminated, 2.0 * h / g.dx);
  }
  return std::move(b).build();
}

SparseSym normal_dz_form(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  const double w = g.dx / g.dz;
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i)
      b.add_difference(map.normal[g.nface(i, k)], map.normal[g.nface(i, k + 1)], w);
  return std::move(b).build();
}

SparseSym tangential_mass(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i) {
      const double s = (i == 0 || i == g.nx) ? 0.5 : 1.0;
      b.add_square(map.tangential[g.tface(i, k)], s * g.dx * g.dz);
    }
  return std::move(b).build();
}

SparseSym normal_mass(const GridPair& g, const ChannelDofMap& map) {
  SymBuilder b(map.dim);
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) b.add_square(map.normal[g.nface(i, k)], g.dx * normal_height(g, k));
  return std::move(b).build();
}

ViscousPair assemble_viscous(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map, double epsilon) {
  check_epsilon(epsilon);
  validate(c);
  const double e2mu = epsilon * epsilon * c.mu;
  return {tangential_dx_form(g, map).scaled(e2mu) + tangential_dz_form(g, map).scaled(c.mu),
          normal_dx_form(g, map).scaled(e2mu) + normal_dz_form(g, map).scaled(c.mu)};
}

SparseSym assemble_bjs(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map, double epsilon) {
  check_epsilon(epsilon);
  const double s11 = sqrt_Q(c).a11;
  SymBuilder b(map.dim);
  const double w = epsilon * epsilon * c.beta * s11 * g.dx;
  // the Γ trace of v_T is read from the nearest row
  for (Index i = 1; i < g.nx; ++i) b.add_square(map.tangential[g.tface(i, 0)], w);
  return std::move(b).build();
}

SparseMatrix assemble_channel_divergence(const GridPair& g, const ChannelDofMap& map, const CellDofMap& cells,
                                         double epsilon) {
  check_epsilon(epsilon);
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(4 * g.n_ccells()));
  auto push = [&t](Index row, Index col, double v) {
    if (col != kEliminated) t.push_back({row, col, v});
  };
  for (Index k = 0; k < g.nz; ++k) {
    for (Index i = 0; i < g.nx; ++i) {
      const Index r = cells.cells[g.ccell(i, k)];
      push(r, map.tangential[g.tface(i, k)], -epsilon * g.dz);
      push(r, map.tangential[g.tface(i + 1, k)], epsilon * g.dz);
      push(r, map.normal[g.nface(i, k)], -g.dx);
      push(r, map.normal[g.nface(i, k + 1)], g.dx);
    }
  }
  return SparseMatrix(cells.dim, map.dim, std::move(t));
}

ChannelBlocks assemble_channel(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map,
                               const CellDofMap& cells, double epsilon) {
  auto [ktt, knn] = assemble_viscous(c, g, map, epsilon);
  return {std::move(ktt), std::move(knn), assemble_bjs(c, g, map, epsilon),
          assemble_channel_divergence(g, map, cells, epsilon)};
}

}  // namespace thinflow
