#include "thinflow/geometry.hpp"

#include <cmath>
#include <string>

namespace thinflow {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

}  // namespace

std::pair<GridPair, DofLayout> build_grids(const DomainSpec& spec, Index nx, Index ny, Index nz) {
  require(nx >= 2 && ny >= 2 && nz >= 2, "grid: nx, ny, nz must be at least 2");
  require(std::isfinite(spec.porous_width) && spec.porous_width > 0.0, "grid: porous_width must be positive");
  require(std::isfinite(spec.porous_depth) && spec.porous_depth > 0.0, "grid: porous_depth must be positive");
  require(spec.channel_reference_height == 1.0, "grid: reference channel height is fixed to 1");

  GridPair g;
  g.spec = spec;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.dx = spec.porous_width / static_cast<double>(nx);
  g.dy = spec.porous_depth / static_cast<double>(ny);
  g.dz = 1.0 / static_cast<double>(nz);
  for (Index i = 0; i < nx; ++i) g.interface_map.emplace_back(g.hface(i, ny), g.nface(i, 0));

  DofLayout L;
  Index next = 0;
  L.porous.vertical.assign(g.n_vfaces(), kEliminated);
  L.porous.horizontal.assign(g.n_hfaces(), kEliminated);
  L.channel.tangential.assign(g.n_tfaces(), kEliminated);
  L.channel.normal.assign(g.n_nfaces(), kEliminated);

  L.porous_vertical.offset = next;
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i <= nx; ++i) L.porous.vertical[g.vface(i, j)] = next++;
  L.porous_vertical.size = next - L.porous_vertical.offset;

  L.porous_horizontal.offset = next;
  for (Index j = 0; j <= ny; ++j)
    for (Index i = 0; i < nx; ++i) L.porous.horizontal[g.hface(i, j)] = next++;
  L.porous_horizontal.size = next - L.porous_horizontal.offset;

  L.channel_tangential.offset = next;
  for (Index k = 0; k < nz; ++k)
    for (Index i = 1; i < nx; ++i) L.channel.tangential[g.tface(i, k)] = next++;
  L.channel_tangential.size = next - L.channel_tangential.offset;

  for (const auto& [ph, cn] : g.interface_map) {
    L.channel.normal[cn] = L.porous.horizontal[ph];
    L.interface_dofs.push_back(L.porous.horizontal[ph]);
  }
  L.channel_normal.offset = next;
  for (Index k = 1; k < nz; ++k)
    for (Index i = 0; i < nx; ++i) L.channel.normal[g.nface(i, k)] = next++;
  L.channel_normal.size = next - L.channel_normal.offset;

  L.n_velocity = next;
  L.porous.dim = next;
  L.channel.dim = next;

  Index pnext = 0;
  L.porous_cells.cells.resize(g.n_cells());
  L.channel_cells.cells.resize(g.n_ccells());
  L.porous_pressure.offset = pnext;
  for (Index c = 0; c < g.n_cells(); ++c) L.porous_cells.cells[c] = pnext++;
  L.porous_pressure.size = pnext;
  L.channel_pressure.offset = pnext;
  for (Index c = 0; c < g.n_ccells(); ++c) L.channel_cells.cells[c] = pnext++;
  L.channel_pressure.size = pnext - L.channel_pressure.offset;
  L.n_pressure = pnext;
  L.porous_cells.dim = pnext;
  L.channel_cells.dim = pnext;

  return {std::move(g), std::move(L)};
}

PorousDofMap standalone_porous_map(const GridPair& g, bool eliminate_top) {
  PorousDofMap m;
  m.vertical.assign(g.n_vfaces(), kEliminated);
  m.horizontal.assign(g.n_hfaces(), kEliminated);
  Index next = 0;
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i <= g.nx; ++i) m.vertical[g.vface(i, j)] = next++;
  for (Index j = 0; j <= g.ny; ++j) {
    if (eliminate_top && j == g.ny) continue;
    for (Index i = 0; i < g.nx; ++i) m.horizontal[g.hface(i, j)] = next++;
  }
  m.dim = next;
  return m;
}

CellDofMap standalone_cell_map(const GridPair& g) {
  CellDofMap m;
  m.cells.resize(g.n_cells());
  for (Index c = 0; c < g.n_cells(); ++c) m.cells[c] = c;
  m.dim = g.n_cells();
  return m;
}

ChannelDofMap full_channel_map(const GridPair& g) {
  ChannelDofMap m;
  m.tangential.resize(g.n_tfaces());
  m.normal.resize(g.n_nfaces());
  Index next = 0;
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i) m.tangential[g.tface(i, k)] = next++;
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) m.normal[g.nface(i, k)] = next++;
  m.dim = next;
  return m;
}

ChannelDofMap tangential_local_map(const GridPair& g) {
  ChannelDofMap m;
  m.tangential.resize(g.n_tfaces());
  for (Index k = 0; k < g.n_tfaces(); ++k) m.tangential[k] = k;
  m.normal.assign(g.n_nfaces(), kEliminated);
  m.dim = g.n_tfaces();
  return m;
}

ChannelDofMap normal_local_map(const GridPair& g) {
  ChannelDofMap m;
  m.tangential.assign(g.n_tfaces(), kEliminated);
  m.normal.resize(g.n_nfaces());
  for (Index k = 0; k < g.n_nfaces(); ++k) m.normal[k] = k;
  m.dim = g.n_nfaces();
  return m;
}

DivergencePair reference_transform_check(const ChannelField& w, double epsilon, double x, double z) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "reference_transform_check: epsilon must be positive");
  const double xn = epsilon * z;

  DivergencePair out;
  out.physical = w.wT(HyperDual(x, 1, 0, 0), HyperDual(xn)).d1 + w.wN(HyperDual(x), HyperDual(xn, 1, 0, 0)).d1;

  // Reference fields W(x, z) = w(x, eps z), differentiated in z.
  const HyperDual zd(z, 1, 0, 0);
  const HyperDual dWT = w.wT(HyperDual(x, 1, 0, 0), HyperDual(xn));
  const HyperDual dWN = w.wN(HyperDual(x), HyperDual(epsilon) * zd);
  out.reference = dWT.d1 + dWN.d1 / epsilon;
  return out;
}

}  // namespace thinflow
