#include "thinflow/darcy_block.hpp"

#include <cmath>

namespace thinflow {

SparseSym assemble_weighted_mass(const Tensor2& T, const GridPair& g, const PorousDofMap& map) {
  SymBuilder b(map.dim);
  const double area = g.cell_area();
  for (Index j = 0; j < g.ny; ++j) {
    for (Index i = 0; i < g.nx; ++i) {
      const Index w = map.vertical[g.vface(i, j)];
      const Index e = map.vertical[g.vface(i + 1, j)];
      const Index s = map.horizontal[g.hface(i, j)];
      const Index n = map.horizontal[g.hface(i, j + 1)];
      // each face owns half of each adjacent cell
      b.add_square(w, 0.5 * T.a11 * area);
      b.add_square(e, 0.5 * T.a11 * area);
      b.add_square(s, 0.5 * T.a22 * area);
      b.add_square(n, 0.5 * T.a22 * area);
      const double off = 0.5 * (T.a12 + T.a21);
      if (off != 0.0) {
        const double c = 0.25 * off * area;
        for (Index vf : {w, e})
          for (Index hf : {s, n}) b.add(vf, hf, c);
      }
    }
  }
  return std::move(b).build();
}

SparseSym assemble_darcy_mass(const CoefficientSet& c, const GridPair& g, const PorousDofMap& map) {
  validate(c);
  return assemble_weighted_mass(c.Q, g, map);
}

SparseMatrix assemble_divergence(const GridPair& g, const PorousDofMap& map, const CellDofMap& cells) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(4 * g.n_cells()));
  auto push = [&t](Index row, Index col, double v) {
    if (col != kEliminated) t.push_back({row, col, v});
  };
  for (Index j = 0; j < g.ny; ++j) {
    for (Index i = 0; i < g.nx; ++i) {
      const Index r = cells.cells[g.cell(i, j)];
      push(r, map.vertical[g.vface(i, j)], -g.dy);
      push(r, map.vertical[g.vface(i + 1, j)], g.dy);
      push(r, map.horizontal[g.hface(i, j)], -g.dx);
      push(r, map.horizontal[g.hface(i, j + 1)], g.dx);
    }
  }
  return SparseMatrix(cells.dim, map.dim, std::move(t));
}

SparseSym assemble_interface_robin(double weight, const GridPair& g, const PorousDofMap& map) {
  if (!(weight >= 0.0) || !std::isfinite(weight)) {
    throw Error(ErrorCode::InvalidArgument, "interface weight must be non-negative");
  }
  SymBuilder b(map.dim);
  for (Index i = 0; i < g.nx; ++i) b.add_square(map.horizontal[g.hface(i, g.ny)], weight * g.dx);
  return std::move(b).build();
}

DarcyBlocks assemble_darcy(const CoefficientSet& c, const GridPair& g, const PorousDofMap& map,
                           const CellDofMap& cells, double robin_weight) {
  return {assemble_darcy_mass(c, g, map), assemble_divergence(g, map, cells),
          assemble_interface_robin(robin_weight, g, map)};
}

}  // namespace thinflow
