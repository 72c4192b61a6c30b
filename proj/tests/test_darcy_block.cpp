#include <doctest.h>

#include <cmath>

#include "support/oracles.hpp"
#include "thinflow/darcy_block.hpp"
#include "thinflow/epsilon_problem.hpp"
#include "thinflow/saddle_solver.hpp"

using namespace thinflow;

namespace {

CoefficientSet withQ(Tensor2 q) {
  CoefficientSet c;
  c.Q = q;
  return c;
}

}  // namespace

TEST_CASE("identity mass is the diagonal of face volumes") {
  const auto [g, L] = build_grids(DomainSpec{}, 2, 2, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  const SparseSym M = assemble_darcy_mass(CoefficientSet{}, g, m);
  CHECK(M.nnz_stored() == M.dim());
  const Vector ones(M.dim(), 1.0);
  // every cell hands half its area to each of its four faces
  CHECK(M.quadratic_form(ones) == doctest::Approx(2.0).epsilon(1e-15));
  const double half = 0.5 * g.cell_area();
  CHECK(M.coeff(m.vertical[g.vface(0, 0)], m.vertical[g.vface(0, 0)]) == doctest::Approx(half));
  CHECK(M.coeff(m.vertical[g.vface(1, 0)], m.vertical[g.vface(1, 0)]) == doctest::Approx(2 * half));
}

TEST_CASE("Q11 scales the x-velocity faces only") {
  const auto [g, L] = build_grids(DomainSpec{}, 3, 3, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  const SparseSym I = assemble_darcy_mass(CoefficientSet{}, g, m);
  const SparseSym D = assemble_darcy_mass(withQ(Tensor2::diag(4, 1)), g, m);
  for (Index f = 0; f < g.n_vfaces(); ++f) CHECK(D.coeff(m.vertical[f], m.vertical[f]) == 4.0 * I.coeff(m.vertical[f], m.vertical[f]));
  for (Index f = 0; f < g.n_hfaces(); ++f)
    CHECK(D.coeff(m.horizontal[f], m.horizontal[f]) == I.coeff(m.horizontal[f], m.horizontal[f]));
}

TEST_CASE("full tensor mass matches quadrant quadrature") {
  const auto [g, L] = build_grids(DomainSpec{1.5, 0.75}, 5, 4, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  const SparseSym M = assemble_darcy_mass(withQ({2, 1, 1, 2}), g, m);
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    const Vector w = oracle::random_vector(M.dim(), seed);
    CHECK(M.quadratic_form(w) == doctest::Approx(oracle::quadrant_mass(g, 2, 1, 2, w)).epsilon(1e-13));
  }
}

TEST_CASE("mass is symmetric with eigenvalues above C_Q times the smallest face volume") {
  const auto [g, L] = build_grids(DomainSpec{}, 4, 4, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  for (Tensor2 q : {Tensor2::identity(), Tensor2{2, 1, 1, 2}, Tensor2{3, -1, -1, 1.5}}) {
    const SparseSym M = assemble_darcy_mass(withQ(q), g, m);
    const Eigen::MatrixXd d = oracle::dense(M);
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const double cq = validate(withQ(q));
    CHECK(oracle::smallest_eigenvalue(d) >= cq * 0.5 * g.cell_area() * (1 - 1e-12));
  }
}

TEST_CASE("divergence") {
  const auto [g, L] = build_grids(DomainSpec{}, 3, 3, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  const SparseMatrix D = assemble_divergence(g, m, standalone_cell_map(g));

  SUBCASE("uniform rightward field") {
    Vector v(m.dim, 0.0);
    for (Index f = 0; f < g.n_vfaces(); ++f) v[m.vertical[f]] = 1.0;
    const Vector d = D * v;
    CHECK(d[g.cell(1, 1)] == 0.0);
  }
  SUBCASE("position field") {
    Vector v(m.dim, 0.0);
    for (Index j = 0; j < g.ny; ++j)
      for (Index i = 0; i <= g.nx; ++i) v[m.vertical[g.vface(i, j)]] = g.x_node(i);
    for (Index j = 0; j <= g.ny; ++j)
      for (Index i = 0; i < g.nx; ++i) v[m.horizontal[g.hface(i, j)]] = g.y_node(j);
    for (double d : D * v) CHECK(d == doctest::Approx(2.0 * g.cell_area()).epsilon(1e-14));
  }
  SUBCASE("random field against flux enumeration") {
    const Vector v = oracle::random_vector(m.dim, 17);
    const Vector ref = oracle::cell_fluxes(g, v);  // same ordering as the standalone map
    const Vector d = D * v;
    for (std::size_t c = 0; c < d.size(); ++c) CHECK(d[c] == doctest::Approx(ref[c]).epsilon(1e-14));
  }
}

TEST_CASE("interface Robin term") {
  const auto [g, L] = build_grids(DomainSpec{}, 4, 2, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  CHECK(assemble_interface_robin(0.0, g, m).quadratic_form(oracle::random_vector(m.dim, 3)) == 0.0);
  const SparseSym R = assemble_interface_robin(2.0, g, m);
  CHECK(R.nnz_stored() == 4);
  for (Index i = 0; i < 4; ++i) CHECK(R.coeff(m.horizontal[g.hface(i, g.ny)], m.horizontal[g.hface(i, g.ny)]) == 0.5);
  CHECK_THROWS_AS(assemble_interface_robin(-1.0, g, m), Error);

  // v.n = x on Γ: midpoint rule error O(dx^2)
  double prev = 0.0;
  for (Index n : {8, 16, 32}) {
    const auto [gg, LL] = build_grids(DomainSpec{}, n, 2, 2);
    const PorousDofMap mm = standalone_porous_map(gg, false);
    Vector v(mm.dim, 0.0);
    for (Index i = 0; i < n; ++i) v[mm.horizontal[gg.hface(i, gg.ny)]] = gg.x_center(i);
    const double err = std::abs(assemble_interface_robin(3.0, gg, mm).quadratic_form(v) - 1.0);
    CHECK(err <= 3.0 * gg.dx * gg.dx);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("saddle system uses the divergence and its exact transpose") {
  const auto [g, L] = build_grids(DomainSpec{}, 4, 3, 3);
  const EpsilonSystem es = assemble_epsilon(CoefficientSet{}, ForcingSet{}, g, L, 0.5);
  const SparseMatrix D1 = assemble_divergence(g, L.porous, L.porous_cells);
  for (Index r = 0; r < g.n_cells(); ++r)
    for (Index c = 0; c < L.n_velocity; ++c) CHECK(es.sys.B.coeff(r, c) == D1.coeff(r, c));
  // B^T products agree bit for bit with the explicit transpose
  const Vector q = oracle::random_vector(L.n_pressure, 4);
  Vector a(L.n_velocity);
  es.sys.B.multiply_transpose(q, a);
  const Vector b = es.sys.B.transpose() * q;
  CHECK(a == b);
}

TEST_CASE("drained Darcy with no sources is quiescent") {
  const auto [g, L] = build_grids(DomainSpec{}, 6, 6, 2);
  const PorousDofMap m = standalone_porous_map(g, false);
  const DarcyBlocks d = assemble_darcy(CoefficientSet{}, g, m, standalone_cell_map(g), 0.0);
  const Vector f(m.dim, 0.0), h(g.n_cells(), 0.0);
  const SaddleSolution s = schur_solve(d.M1, d.D1, f, h);
  CHECK(norm_max(s.v) == 0.0);
  CHECK(norm_max(s.p) == 0.0);
}
