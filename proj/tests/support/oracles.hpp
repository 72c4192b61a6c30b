#pragma once

// Independent reference computations for the unit tests. Everything here is
// dense and brute force on purpose: small grids only.

#include <Eigen/Dense>
#include <cstdint>

#include "thinflow/geometry.hpp"
#include "thinflow/sparse.hpp"

namespace oracle {

using thinflow::Index;
using thinflow::Vector;

Eigen::MatrixXd dense(const thinflow::SparseSym& m);
Eigen::MatrixXd dense(const thinflow::SparseMatrix& m);
Eigen::VectorXd to_eigen(const Vector& v);
Vector from_eigen(const Eigen::VectorXd& v);

// uniform(-1, 1), fixed seed
Vector random_vector(Index n, std::uint32_t seed);

Vector dense_solve(const Eigen::MatrixXd& A, const Vector& b);

struct DenseKkt {
  Vector v, p;
};
// [A -B^T; B 0][v; p] = [f; h] by full-pivot LU
DenseKkt dense_kkt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Vector& f, const Vector& h);

// sqrt of the smallest generalized eigenvalue of B G^-1 B^T x = l M x
double dense_infsup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G, const Vector& mass_diag);

double smallest_eigenvalue(const Eigen::MatrixXd& S);

// Outward flux of each porous cell, walking its four faces. v1 is the local
// porous face array (vertical then horizontal).
Vector cell_fluxes(const thinflow::GridPair& g, const Vector& v1);

// int Q v.v with v reconstructed per cell quadrant from the nearest
// vertical and horizontal face values.
double quadrant_mass(const thinflow::GridPair& g, double q11, double q12, double q22, const Vector& v1);

// Retained velocity unknowns counted from face coordinates.
Index count_velocity_faces(const thinflow::GridPair& g);

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace oracle
