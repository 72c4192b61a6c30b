#pragma once

#include "thinflow/coefficients.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/sparse.hpp"

namespace thinflow {

// Unweighted difference forms on the reference channel. Eliminated faces
// (walls, lid) enter as zeros.
//   tangential_dx: sum (dvT/dx)^2 dx dz, wall differences over dx
//   tangential_dz: sum (dvT/dz)^2 dx dz between rows; nothing at z = 0 or z = 1
//   normal_dx:     sum (dvN/dx)^2 dx h_k, wall differences over dx/2
//   normal_dz:     sum (dvN/dz)^2 dx dz, lid included
SparseSym tangential_dx_form(const GridPair& g, const ChannelDofMap& map);
SparseSym tangential_dz_form(const GridPair& g, const ChannelDofMap& map);
SparseSym normal_dx_form(const GridPair& g, const ChannelDofMap& map);
SparseSym normal_dz_form(const GridPair& g, const ChannelDofMap& map);

// L2 masses on the face control volumes.
SparseSym tangential_mass(const GridPair& g, const ChannelDofMap& map);
SparseSym normal_mass(const GridPair& g, const ChannelDofMap& map);

struct ViscousPair {
  SparseSym K_TT;  // eps^2 mu grad_T.grad_T + mu dz.dz on tangential faces
  SparseSym K_NN;  // same on normal faces
};

ViscousPair assemble_viscous(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map, double epsilon);

// eps^2 beta (sqrt Q)_11 dx on the bottom tangential row.
SparseSym assemble_bjs(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map, double epsilon);

// Row (i,k): eps dz (vT(i+1,k) - vT(i,k)) + dx (vN(i,k+1) - vN(i,k)).
SparseMatrix assemble_channel_divergence(const GridPair& g, const ChannelDofMap& map, const CellDofMap& cells,
                                         double epsilon);

struct ChannelBlocks {
  SparseSym K_TT;
  SparseSym K_NN;
  SparseSym S_bjs;
  SparseMatrix D2;
};

ChannelBlocks assemble_channel(const CoefficientSet& c, const GridPair& g, const ChannelDofMap& map,
                               const CellDofMap& cells, double epsilon);

}  // namespace thinflow
