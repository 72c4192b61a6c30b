#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "thinflow/dual.hpp"
#include "thinflow/types.hpp"

namespace thinflow {

struct DomainSpec {
  double porous_width = 1.0;
  double porous_depth = 1.0;
  double channel_reference_height = 1.0;  // fixed; the rescaled channel is (0,W) x (0,1)

  bool operator==(const DomainSpec&) const = default;
};

// Two uniform tensor grids. Porous cells (i, j) cover (0,W) x (-D,0), channel
// cells (i, k) cover (0,W) x (0,1). Face numbering is local and lexicographic:
// the second index is the slow one.
struct GridPair {
  DomainSpec spec;
  Index nx = 0;
  Index ny = 0;
  Index nz = 0;
  double dx = 0.0;
  double dy = 0.0;
  double dz = 0.0;

  // porous
  Index cell(Index i, Index j) const { return j * nx + i; }
  Index vface(Index i, Index j) const { return j * (nx + 1) + i; }  // i in [0,nx], j in [0,ny)
  Index hface(Index i, Index j) const { return j * nx + i; }        // i in [0,nx), j in [0,ny]
  Index n_cells() const { return nx * ny; }
  Index n_vfaces() const { return (nx + 1) * ny; }
  Index n_hfaces() const { return nx * (ny + 1); }

  // channel
  Index ccell(Index i, Index k) const { return k * nx + i; }
  Index tface(Index i, Index k) const { return k * (nx + 1) + i; }  // i in [0,nx], k in [0,nz)
  Index nface(Index i, Index k) const { return k * nx + i; }        // i in [0,nx), k in [0,nz]
  Index n_ccells() const { return nx * nz; }
  Index n_tfaces() const { return (nx + 1) * nz; }
  Index n_nfaces() const { return nx * (nz + 1); }

  double x_center(Index i) const { return (static_cast<double>(i) + 0.5) * dx; }
  double x_node(Index i) const { return static_cast<double>(i) * dx; }
  double y_center(Index j) const { return -spec.porous_depth + (static_cast<double>(j) + 0.5) * dy; }
  double y_node(Index j) const { return -spec.porous_depth + static_cast<double>(j) * dy; }
  double z_center(Index k) const { return (static_cast<double>(k) + 0.5) * dz; }
  double z_node(Index k) const { return static_cast<double>(k) * dz; }

  double cell_area() const { return dx * dy; }
  double ccell_area() const { return dx * dz; }

  // Porous top face i and channel bottom face i carry the same normal velocity.
  std::vector<std::pair<Index, Index>> interface_map;  // (porous hface, channel nface)
};

// Local-face to global-unknown maps. kEliminated marks faces with an
// essential zero value.
struct PorousDofMap {
  std::vector<Index> vertical;
  std::vector<Index> horizontal;
  Index dim = 0;  // size of the global velocity vector
};

struct ChannelDofMap {
  std::vector<Index> tangential;
  std::vector<Index> normal;
  Index dim = 0;
};

struct CellDofMap {
  std::vector<Index> cells;
  Index dim = 0;  // size of the global pressure vector
};

struct DofLayout {
  IndexRange porous_vertical;
  IndexRange porous_horizontal;  // includes the interface row j = ny
  IndexRange channel_tangential;
  IndexRange channel_normal;     // rows k = 1 .. nz-1; k = 0 is shared
  IndexRange porous_pressure;
  IndexRange channel_pressure;
  Index n_velocity = 0;
  Index n_pressure = 0;

  PorousDofMap porous;
  ChannelDofMap channel;
  CellDofMap porous_cells;
  CellDofMap channel_cells;
  std::vector<Index> interface_dofs;  // global index of Γ face i
};

std::pair<GridPair, DofLayout> build_grids(const DomainSpec& spec, Index nx, Index ny, Index nz);

// Porous map on its own (Darcy-only problems); optionally removes the top row.
PorousDofMap standalone_porous_map(const GridPair& g, bool eliminate_top);
CellDofMap standalone_cell_map(const GridPair& g);
// Every channel face kept, walls and lid included; used to check that
// elimination commutes with assembly.
ChannelDofMap full_channel_map(const GridPair& g);
// Maps acting on one local component array only (the other is eliminated).
ChannelDofMap tangential_local_map(const GridPair& g);
ChannelDofMap normal_local_map(const GridPair& g);

// Physical channel field w(x, x_N) on (0,W) x (0,eps).
struct ChannelField {
  std::function<HyperDual(HyperDual, HyperDual)> wT;
  std::function<HyperDual(HyperDual, HyperDual)> wN;
};

struct DivergencePair {
  double physical = 0.0;
  double reference = 0.0;
};

// Divergence at reference point (x, z), computed once in physical
// coordinates and once through the rescaled operator grad_T + (1/eps) d_z.
DivergencePair reference_transform_check(const ChannelField& w, double epsilon, double x, double z);

}  // namespace thinflow
