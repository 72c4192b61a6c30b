#pragma once

#include "thinflow/coefficients.hpp"
#include "thinflow/geometry.hpp"
#include "thinflow/sparse.hpp"

namespace thinflow {

struct DarcyBlocks {
  SparseSym M1;    // int Q v.w
  SparseMatrix D1; // cell flux sums, pressure rows
  SparseSym Rn;    // weight * int_Gamma (v.n)(w.n)
};

// Face-lumped mass weighted by an arbitrary symmetric tensor T. Diagonal
// entries are T_ii times the face control volume (half a cell on the outer
// boundary and on Γ). Off-diagonal T12 couples the two vertical and two
// horizontal faces of each cell with weight T12 |c| / 4.
SparseSym assemble_weighted_mass(const Tensor2& T, const GridPair& g, const PorousDofMap& map);

SparseSym assemble_darcy_mass(const CoefficientSet& c, const GridPair& g, const PorousDofMap& map);

// (D1 v)_cell = outward flux through the cell boundary.
SparseMatrix assemble_divergence(const GridPair& g, const PorousDofMap& map, const CellDofMap& cells);

// weight * dx on every Γ face.
SparseSym assemble_interface_robin(double weight, const GridPair& g, const PorousDofMap& map);

DarcyBlocks assemble_darcy(const CoefficientSet& c, const GridPair& g, const PorousDofMap& map,
                           const CellDofMap& cells, double robin_weight);

}  // namespace thinflow
