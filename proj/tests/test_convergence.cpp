#include <doctest.h>

#include <cmath>
#include <functional>

#include "support/oracles.hpp"
#include "thinflow/convergence.hpp"
#include "thinflow/mms.hpp"
#include "thinflow/norms.hpp"

using namespace thinflow;

namespace {

using NormFn = std::function<double(const NormSuite&, std::span<const double>)>;

struct NamedNorm {
  const char* name;
  NormFn f;
  Index (*size)(const GridPair&);
};

std::vector<NamedNorm> all_norms() {
  auto porous = [](const GridPair& g) { return g.n_vfaces() + g.n_hfaces(); };
  auto cells = [](const GridPair& g) { return g.n_cells(); };
  auto tan = [](const GridPair& g) { return g.n_tfaces(); };
  auto nor = [](const GridPair& g) { return g.n_nfaces(); };
  auto cc = [](const GridPair& g) { return g.n_ccells(); };
  auto gc = [](const GridPair& g) { return g.nx; };
  auto gn = [](const GridPair& g) { return g.nx + 1; };
  return {
      {"l2_porous_velocity", &NormSuite::l2_porous_velocity, porous},
      {"hdiv", &NormSuite::hdiv, porous},
      {"q_weighted_l2", &NormSuite::q_weighted_l2, porous},
      {"l2_porous_pressure", &NormSuite::l2_porous_pressure, cells},
      {"l2_tangential", &NormSuite::l2_tangential, tan},
      {"gradT_tangential", &NormSuite::gradT_tangential, tan},
      {"dz_tangential", &NormSuite::dz_tangential, tan},
      {"trace_tangential", &NormSuite::trace_tangential, tan},
      {"l2_normal", &NormSuite::l2_normal, nor},
      {"gradT_normal", &NormSuite::gradT_normal, nor},
      {"dz_normal", &NormSuite::dz_normal, nor},
      {"hdz_normal", &NormSuite::hdz_normal, nor},
      {"trace_normal", &NormSuite::trace_normal, nor},
      {"l2_channel_pressure", &NormSuite::l2_channel_pressure, cc},
      {"l2_gamma_cells", &NormSuite::l2_gamma_cells, gc},
      {"l2_gamma_nodes", &NormSuite::l2_gamma_nodes, gn},
      {"h1_gamma_nodes", &NormSuite::h1_gamma_nodes, gn},
  };
}

}  // namespace

TEST_CASE("norm axioms on random triples") {
  const auto [g, L] = build_grids(DomainSpec{1.3, 0.8}, 6, 5, 7);
  CoefficientSet c;
  c.Q = {2, 1, 1, 2};
  const NormSuite N(g, c);
  for (const auto& nn : all_norms()) {
    CAPTURE(nn.name);
    const Index n = nn.size(g);
    for (std::uint32_t s = 0; s < 10; ++s) {
      const Vector a = oracle::random_vector(n, 3 * s), b = oracle::random_vector(n, 3 * s + 1);
      Vector ab(n), ka(n);
      for (Index i = 0; i < n; ++i) {
        ab[i] = a[i] + b[i];
        ka[i] = -2.5 * a[i];
      }
      const double na = nn.f(N, a), nb = nn.f(N, b);
      CHECK(na >= 0.0);
      CHECK(std::abs(nn.f(N, ka) - 2.5 * na) <= 1e-12 * (1 + na));
      CHECK(nn.f(N, ab) <= na + nb + 1e-12);
    }
    CHECK(nn.f(N, Vector(n, 0.0)) == 0.0);
  }
}

TEST_CASE("H(dz) trace inequalities on random fields") {
  const auto [g, L] = build_grids(DomainSpec{}, 8, 4, 8);
  const NormSuite N(g, CoefficientSet{});
  const double r2 = std::sqrt(2.0);
  for (std::uint32_t s = 0; s < 100; ++s) {
    // alternate rough and smooth-in-z samples
    Vector vn = oracle::random_vector(g.n_nfaces(), 1000 + s);
    Vector vt = oracle::random_vector(g.n_tfaces(), 2000 + s);
    if (s % 2) {
      for (Index k = 0; k <= g.nz; ++k)
        for (Index i = 0; i < g.nx; ++i) vn[g.nface(i, k)] = vn[g.nface(i, 0)] * std::cos(1.3 * g.z_node(k));
      for (Index k = 0; k < g.nz; ++k)
        for (Index i = 0; i <= g.nx; ++i) vt[g.tface(i, k)] = vt[g.tface(i, 0)] * (1 + g.z_center(k));
    }
    for (Index k = 0; k < g.nz; ++k) {
      vt[g.tface(0, k)] = 0.0;
      vt[g.tface(g.nx, k)] = 0.0;
    }
    for (Index i = 0; i < g.nx; ++i) vn[g.nface(i, g.nz)] = 0.0;
    CHECK(N.trace_normal(vn) <= r2 * (N.l2_normal(vn) + N.dz_normal(vn)));
    CHECK(N.l2_normal(vn) <= r2 * (N.dz_normal(vn) + N.trace_normal(vn)));
    CHECK(N.trace_tangential(vt) <= r2 * (N.l2_tangential(vt) + N.dz_tangential(vt)));
    CHECK(N.l2_tangential(vt) <= r2 * (N.dz_tangential(vt) + N.trace_tangential(vt)));
  }
}

TEST_CASE("rate fits") {
  const Vector x{0.25, 0.0625}, y{1.0, 0.25};
  const auto f = fit_rate(x, y);
  REQUIRE(f);
  CHECK(f->rate == doctest::Approx(1.0));
  CHECK(f->r2 == doctest::Approx(1.0));
  CHECK_FALSE(fit_rate(Vector{0.5}, Vector{1.0}));
  CHECK_FALSE(fit_rate(Vector{0.5, 0.25}, Vector{1.0, 0.0}));
  const auto flat = fit_rate(Vector{0.5, 0.25, 0.125}, Vector{2.0, 2.0, 2.0});
  REQUIRE(flat);
  CHECK(flat->rate == 0.0);
}

TEST_CASE("comparison of identical and of zero fields") {
  const auto [g, L] = build_grids(DomainSpec{}, 6, 6, 4);
  const NormSuite N(g, CoefficientSet{});
  const LimitSolution lim = solve_limit(assemble_limit(CoefficientSet{}, ForcingSet{}, g));

  // lift the limit fields into an ε-solution, undoing the tangential scaling
  const double eps = 0.125;
  EpsilonSolution es;
  es.epsilon = eps;
  es.v1 = lim.v1;
  es.p1 = lim.p1;
  es.vN2 = lim.xi;
  es.vT2.assign(g.n_tfaces(), 0.0);
  es.p2.assign(g.n_ccells(), 0.0);
  for (Index k = 0; k < g.nz; ++k) {
    for (Index i = 0; i <= g.nx; ++i) es.vT2[g.tface(i, k)] = lim.vT2[i] / eps;
    for (Index i = 0; i < g.nx; ++i) es.p2[g.ccell(i, k)] = lim.p2[i];
  }
  const SweepRow r = compare_to_limit(es, lim, N);
  CHECK(r.err_v1_hdiv == 0.0);
  CHECK(r.err_vT <= 1e-14);
  CHECK(r.err_vN_hdz == 0.0);
  CHECK(r.err_p1 == 0.0);
  CHECK(r.err_p2 == 0.0);
  CHECK(r.err_dz_vT <= 1e-14);

  const auto [g2, L2] = build_grids(DomainSpec{}, 6, 6, 4);
  const EpsilonSystem zs = assemble_epsilon(CoefficientSet{}, ForcingSet{"zero"}, g2, L2, 0.25);
  const EpsilonSolution z = solve_epsilon(zs);
  const LimitSolution zl = solve_limit(assemble_limit(CoefficientSet{}, ForcingSet{"zero"}, g2));
  const SweepRow zr = compare_to_limit(z, zl, N);
  CHECK(zr.err_v1_hdiv == 0.0);
  CHECK(zr.err_p2 == 0.0);
  CHECK_FALSE(zr.ratio_T_N.has_value());

  const auto [g3, L3] = build_grids(DomainSpec{}, 5, 6, 4);
  const NormSuite N3(g3, CoefficientSet{});
  try {
    compare_to_limit(z, zl, N3);
    FAIL("expected GridMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::GridMismatch);
  }
}

TEST_CASE("velocity ratio") {
  const auto [g, L] = build_grids(DomainSpec{}, 32, 32, 32);
  const NormSuite N(g, CoefficientSet{});
  std::vector<double> ratios;
  for (double eps : {0.125, 0.0625, 0.03125}) {
    EpsilonSolution s = solve_epsilon(assemble_epsilon(CoefficientSet{}, ForcingSet{}, g, L, eps));
    const auto r = velocity_ratio(s, N);
    REQUIRE(r);
    ratios.push_back(*r);
    for (double& v : s.vT2) v *= 3.0;
    for (double& v : s.vN2) v *= 3.0;
    CHECK(*velocity_ratio(s, N) == doctest::Approx(*r).epsilon(1e-14));
  }
  CHECK(ratios[1] >= 2.0 * ratios[0]);
  CHECK(ratios[2] >= 2.0 * ratios[1]);
}

TEST_CASE("small sweeps") {
  RunConfig cfg;
  cfg.nx = cfg.ny = cfg.nz = 16;
  cfg.epsilons = {0.5};
  const ConvergenceReport one = run_sweep(cfg);
  CHECK(one.rows.size() == 1);
  CHECK(one.rates.empty());

  cfg.epsilons = {0.125, 0.0625, 0.03125, 0.015625};
  const ConvergenceReport rep = run_sweep(cfg);
  REQUIRE(rep.rows.size() == 4);
  for (const char* col : {"err_v1_hdiv", "err_vT", "err_dz_vT", "err_vN_hdz", "err_p1", "err_p2"}) {
    CAPTURE(col);
    CHECK(sweep_column(rep.rows.back(), col) < sweep_column(rep.rows.front(), col));
  }
  for (const auto& r : rep.rates)
    if (r.quantity.rfind("err_", 0) == 0) CHECK(r.fit.rate > 0.0);
  CHECK(rep.rates.size() == sweep_rate_columns().size());

  cfg.epsilons = {0.25, 0.5};
  CHECK_THROWS_AS(run_sweep(cfg), Error);
}

TEST_CASE("manufactured fields solve their strong forms") {
  for (const auto& name : manufactured_case_names()) {
    CAPTURE(name);
    CHECK(strong_form_residual(manufactured_case(name)) <= 1e-10);
  }
  CHECK_THROWS_AS(manufactured_case("nope"), Error);
}

TEST_CASE("a wrong source is caught before any solve") {
  ManufacturedCase mc = manufactured_case("darcy-sin");
  mc.h1 = [](HyperDual x, HyperDual y) { return x * y; };
  try {
    mms_convergence(mc, {4, 8});
    FAIL("expected OracleFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OracleFailure);
  }
}

TEST_CASE("linear cases are reproduced exactly") {
  for (const char* name : {"darcy-linear", "darcy-linear-fullq"}) {
    const MmsTable t = mms_convergence(manufactured_case(name), {4, 8, 16});
    for (const auto& l : t.levels)
      for (const auto& [field, e] : l.errors) CHECK(e <= 1e-12);
  }
}

TEST_CASE("manufactured convergence orders") {
  for (const char* name : {"darcy-sin", "limit-sin", "limit-sin-general"}) {
    CAPTURE(name);
    const MmsTable t = mms_convergence(manufactured_case(name), {8, 16, 32});
    for (const auto& [field, fit] : t.orders) {
      CAPTURE(field);
      REQUIRE(fit);
      CHECK(fit->rate >= 0.9);
    }
  }
}
