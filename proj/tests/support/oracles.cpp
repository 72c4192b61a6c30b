#include "support/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <random>

namespace oracle {

Eigen::MatrixXd dense(const thinflow::SparseSym& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.dim(), m.dim());
  for (const auto& t : m.triplets()) {
    d(t.row, t.col) += t.value;
    if (t.row != t.col) d(t.col, t.row) += t.value;
  }
  return d;
}

Eigen::MatrixXd dense(const thinflow::SparseMatrix& m) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (const auto& t : m.triplets()) d(t.row, t.col) += t.value;
  return d;
}

Eigen::VectorXd to_eigen(const Vector& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), Index(v.size())); }

Vector from_eigen(const Eigen::VectorXd& v) { return Vector(v.data(), v.data() + v.size()); }

Vector random_vector(Index n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector out(static_cast<std::size_t>(n));
  for (double& x : out) x = u(rng);
  return out;
}

Vector dense_solve(const Eigen::MatrixXd& A, const Vector& b) {
  return from_eigen(A.fullPivLu().solve(to_eigen(b)));
}

DenseKkt dense_kkt(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const Vector& f, const Vector& h) {
  const Index n = A.rows(), m = B.rows();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = A;
  K.topRightCorner(n, m) = -B.transpose();
  K.bottomLeftCorner(m, n) = B;
  Eigen::VectorXd rhs(n + m);
  rhs << to_eigen(f), to_eigen(h);
  const Eigen::VectorXd x = K.fullPivLu().solve(rhs);
  return {from_eigen(x.head(n)), from_eigen(x.tail(m))};
}

double dense_infsup(const Eigen::MatrixXd& B, const Eigen::MatrixXd& G, const Vector& mass_diag) {
  const Eigen::MatrixXd S = B * G.ldlt().solve(B.transpose());
  const Eigen::MatrixXd M = to_eigen(mass_diag).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()), M);
  return std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
}

double smallest_eigenvalue(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
  return es.eigenvalues().minCoeff();
}

Vector cell_fluxes(const thinflow::GridPair& g, const Vector& v1) {
  Vector out(static_cast<std::size_t>(g.n_cells()));
  const Index nv = g.n_vfaces();
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const double west = v1[j * (g.nx + 1) + i];
      const double east = v1[j * (g.nx + 1) + i + 1];
      const double south = v1[nv + j * g.nx + i];
      const double north = v1[nv + (j + 1) * g.nx + i];
      out[j * g.nx + i] = (east - west) * g.dy + (north - south) * g.dx;
    }
  return out;
}

double quadrant_mass(const thinflow::GridPair& g, double q11, double q12, double q22, const Vector& v1) {
  const Index nv = g.n_vfaces();
  const double quarter = 0.25 * g.dx * g.dy;
  double total = 0.0;
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const double vx = v1[j * (g.nx + 1) + i + a];
          const double vy = v1[nv + (j + b) * g.nx + i];
          total += quarter * (q11 * vx * vx + 2.0 * q12 * vx * vy + q22 * vy * vy);
        }
  return total;
}

Index count_velocity_faces(const thinflow::GridPair& g) {
  const double W = g.spec.porous_width;
  Index count = 0;
  // porous: drained boundary, every face carries an unknown
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i <= g.nx; ++i) ++count;
  for (Index j = 0; j <= g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) ++count;
  // channel tangential: no-slip side walls at x = 0, W
  for (Index k = 0; k < g.nz; ++k)
    for (Index i = 0; i <= g.nx; ++i) {
      const double x = i * g.dx;
      if (std::abs(x) > 1e-12 && std::abs(x - W) > 1e-12) ++count;
    }
  // channel normal: lid z = 1 is zero, z = 0 is the porous top face already counted
  for (Index k = 0; k <= g.nz; ++k)
    for (Index i = 0; i < g.nx; ++i) {
      const double z = k * g.dz;
      if (z > 1e-12 && z < 1.0 - 1e-12) ++count;
    }
  return count;
}

}  // namespace oracle
