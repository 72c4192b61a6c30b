#pragma once

#include <span>
#include <vector>

#include "thinflow/types.hpp"

namespace thinflow {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// General sparse matrix in compressed row storage.
//
// Duplicate coordinates passed to the constructor are summed; columns are
// sorted within each row so that two matrices built from the same entries in
// any order compare equal bit for bit.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols, std::vector<Triplet> entries);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nnz() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  double coeff(Index r, Index c) const;

  // y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  // y = M^T x
  void multiply_transpose(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;

  SparseMatrix transpose() const;
  std::vector<Triplet> triplets() const;

  // Stacks `top` above `bottom`; column counts must agree.
  static SparseMatrix vstack(const SparseMatrix& top, const SparseMatrix& bottom);
  // Maps column j to column `map[j]` of a matrix with `new_cols` columns.
  // Entries mapped to kEliminated are dropped; collisions are summed.
  SparseMatrix remap_columns(Index new_cols, std::span<const Index> map) const;

  bool operator==(const SparseMatrix&) const = default;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

// Symmetric sparse matrix storing each unordered pair once (upper triangle,
// row <= col). Symmetry holds by construction.
class SparseSym {
 public:
  SparseSym() = default;
  // Entries may be given in either triangle; (i, j) and (j, i) refer to the
  // same stored coefficient and are summed.
  SparseSym(Index dim, std::vector<Triplet> entries);

  static SparseSym identity(Index dim);
  static SparseSym diagonal(std::span<const double> d);

  Index dim() const { return dim_; }
  Index nnz_stored() const { return static_cast<Index>(values_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }

  double coeff(Index r, Index c) const;
  Vector diagonal_values() const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  double quadratic_form(std::span<const double> x) const;

  SparseSym scaled(double s) const;
  SparseSym operator+(const SparseSym& other) const;

  // Maps index i to `map[i]` in a matrix of dimension `new_dim`; entries
  // touching kEliminated indices are dropped, collisions summed.
  SparseSym remap(Index new_dim, std::span<const Index> map) const;
  // Keeps rows/columns listed in `keep`, renumbered in that order.
  SparseSym submatrix(std::span<const Index> keep) const;

  // Upper-triangle triplets.
  std::vector<Triplet> triplets() const;
  // Full (both triangles) general matrix.
  SparseMatrix to_general() const;

  bool operator==(const SparseSym&) const = default;

 private:
  Index dim_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> col_idx_;
  std::vector<double> values_;
};

// Accumulates symmetric contributions expressed as weighted quadratic forms.
class SymBuilder {
 public:
  explicit SymBuilder(Index dim) : dim_(dim) {}

  Index dim() const { return dim_; }

  // Adds value to M(i, j) and, for i != j, to M(j, i).
  void add(Index i, Index j, double value);
  // Adds weight * x_i^2.
  void add_square(Index i, double weight);
  // Adds weight * (x_a - x_b)^2; an eliminated index stands for a zero value.
  void add_difference(Index a, Index b, double weight);

  SparseSym build() &&;

 private:
  Index dim_;
  std::vector<Triplet> entries_;
};

}  // namespace thinflow
