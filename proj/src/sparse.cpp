#include "thinflow/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace thinflow {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotElliptic: return "NotElliptic";
    case ErrorCode::UnknownPreset: return "UnknownPreset";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::OracleFailure: return "OracleFailure";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_max(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

namespace {

void check_finite(const std::vector<Triplet>& entries) {
  for (const auto& t : entries) {
    if (!std::isfinite(t.value)) {
      throw Error(ErrorCode::NonFinite, "non-finite matrix entry at (" + std::to_string(t.row) +
                                            ", " + std::to_string(t.col) + ")");
    }
  }
}

// Sorts row-major, sums duplicates, and fills CSR arrays.
void compress(Index rows, std::vector<Triplet>& entries, std::vector<Index>& row_ptr,
              std::vector<Index>& col_idx, std::vector<double>& values) {
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  col_idx.clear();
  values.clear();
  for (std::size_t k = 0; k < entries.size();) {
    const Index r = entries[k].row;
    const Index c = entries[k].col;
    double sum = 0.0;
    while (k < entries.size() && entries[k].row == r && entries[k].col == c) {
      sum += entries[k].value;
      ++k;
    }
    col_idx.push_back(c);
    values.push_back(sum);
    ++row_ptr[static_cast<std::size_t>(r) + 1];
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(rows); ++r) row_ptr[r + 1] += row_ptr[r];
}

double lookup(const std::vector<Index>& row_ptr, const std::vector<Index>& col_idx,
              const std::vector<double>& values, Index r, Index c) {
  const auto begin = col_idx.begin() + row_ptr[r];
  const auto end = col_idx.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return 0.0;
  return values[static_cast<std::size_t>(it - col_idx.begin())];
}

}  // namespace

// ---------------------------------------------------------------- SparseMatrix

SparseMatrix::SparseMatrix(Index rows, Index cols, std::vector<Triplet> entries)
    : rows_(rows), cols_(cols) {
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw Error(ErrorCode::DimensionMismatch, "sparse entry out of range");
    }
  }
  check_finite(entries);
  compress(rows, entries, row_ptr_, col_idx_, values_);
}

double SparseMatrix::coeff(Index r, Index c) const {
  return lookup(row_ptr_, col_idx_, values_, r, c);
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (Index r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (Index r = 0; r < rows_; ++r) {
    const double xr = x[r];
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) y[col_idx_[k]] += values_[k] * xr;
  }
}

Vector SparseMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_idx_[k], values_[k]});
  return out;
}

SparseMatrix SparseMatrix::transpose() const {
  auto t = triplets();
  for (auto& e : t) std::swap(e.row, e.col);
  return SparseMatrix(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::vstack(const SparseMatrix& top, const SparseMatrix& bottom) {
  if (top.cols() != bottom.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "vstack: column counts differ");
  }
  auto t = top.triplets();
  for (auto e : bottom.triplets()) {
    e.row += top.rows();
    t.push_back(e);
  }
  return SparseMatrix(top.rows() + bottom.rows(), top.cols(), std::move(t));
}

SparseMatrix SparseMatrix::remap_columns(Index new_cols, std::span<const Index> map) const {
  if (static_cast<Index>(map.size()) != cols_) {
    throw Error(ErrorCode::DimensionMismatch, "remap_columns: map size differs from column count");
  }
  std::vector<Triplet> t;
  for (const auto& e : triplets()) {
    const Index c = map[e.col];
    if (c == kEliminated) continue;
    t.push_back({e.row, c, e.value});
  }
  return SparseMatrix(rows_, new_cols, std::move(t));
}

// ------------------------------------------------------------------- SparseSym

SparseSym::SparseSym(Index dim, std::vector<Triplet> entries) : dim_(dim) {
  for (auto& t : entries) {
    if (t.row < 0 || t.row >= dim || t.col < 0 || t.col >= dim) {
      throw Error(ErrorCode::DimensionMismatch, "symmetric entry out of range");
    }
    if (t.row > t.col) std::swap(t.row, t.col);
  }
  check_finite(entries);
  compress(dim, entries, row_ptr_, col_idx_, values_);
}

SparseSym SparseSym::identity(Index dim) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(dim));
  for (Index i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
  return SparseSym(dim, std::move(t));
}

SparseSym SparseSym::diagonal(std::span<const double> d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) t.push_back({Index(i), Index(i), d[i]});
  return SparseSym(static_cast<Index>(d.size()), std::move(t));
}

double SparseSym::coeff(Index r, Index c) const {
  if (r > c) std::swap(r, c);
  return lookup(row_ptr_, col_idx_, values_, r, c);
}

Vector SparseSym::diagonal_values() const {
  Vector d(static_cast<std::size_t>(dim_), 0.0);
  for (Index r = 0; r < dim_; ++r) d[r] = coeff(r, r);
  return d;
}

void SparseSym::multiply(std::span<const double> x, std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (Index r = 0; r < dim_; ++r) {
    const double xr = x[r];
    double s = 0.0;
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const Index c = col_idx_[k];
      s += values_[k] * x[c];
      if (c != r) y[c] += values_[k] * xr;
    }
    y[r] += s;
  }
}

Vector SparseSym::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(dim_));
  multiply(x, y);
  return y;
}

double SparseSym::quadratic_form(std::span<const double> x) const {
  double s = 0.0;
  for (Index r = 0; r < dim_; ++r) {
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const Index c = col_idx_[k];
      s += (c == r ? 1.0 : 2.0) * values_[k] * x[r] * x[c];
    }
  }
  return s;
}

SparseSym SparseSym::scaled(double s) const {
  SparseSym out = *this;
  for (auto& v : out.values_) v *= s;
  return out;
}

SparseSym SparseSym::operator+(const SparseSym& other) const {
  if (other.dim_ != dim_) throw Error(ErrorCode::DimensionMismatch, "SparseSym sum: dimensions differ");
  auto t = triplets();
  auto o = other.triplets();
  t.insert(t.end(), o.begin(), o.end());
  return SparseSym(dim_, std::move(t));
}

SparseSym SparseSym::remap(Index new_dim, std::span<const Index> map) const {
  if (static_cast<Index>(map.size()) != dim_) {
    throw Error(ErrorCode::DimensionMismatch, "remap: map size differs from dimension");
  }
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (const auto& e : triplets()) {
    const Index r = map[e.row];
    const Index c = map[e.col];
    if (r == kEliminated || c == kEliminated) continue;
    // Two distinct indices collapsing onto one new index contribute twice.
    const double v = (e.row != e.col && r == c) ? 2.0 * e.value : e.value;
    t.push_back({r, c, v});
  }
  return SparseSym(new_dim, std::move(t));
}

SparseSym SparseSym::submatrix(std::span<const Index> keep) const {
  std::vector<Index> map(static_cast<std::size_t>(dim_), kEliminated);
  for (std::size_t k = 0; k < keep.size(); ++k) map[keep[k]] = static_cast<Index>(k);
  return remap(static_cast<Index>(keep.size()), map);
}

std::vector<Triplet> SparseSym::triplets() const {
  std::vector<Triplet> out;
  out.reserve(values_.size());
  for (Index r = 0; r < dim_; ++r)
    for (Index k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) out.push_back({r, col_idx_[k], values_[k]});
  return out;
}

SparseMatrix SparseSym::to_general() const {
  std::vector<Triplet> t;
  t.reserve(2 * values_.size());
  for (const auto& e : triplets()) {
    t.push_back(e);
    if (e.row != e.col) t.push_back({e.col, e.row, e.value});
  }
  return SparseMatrix(dim_, dim_, std::move(t));
}

// ------------------------------------------------------------------ SymBuilder

void SymBuilder::add(Index i, Index j, double value) {
  if (i == kEliminated || j == kEliminated) return;
  entries_.push_back({i, j, value});
}

void SymBuilder::add_square(Index i, double weight) { add(i, i, weight); }

void SymBuilder::add_difference(Index a, Index b, double weight) {
  add(a, a, weight);
  add(b, b, weight);
  add(a, b, -weight);
}

SparseSym SymBuilder::build() && { return SparseSym(dim_, std::move(entries_)); }

}  // namespace thinflow
