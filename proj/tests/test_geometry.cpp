#include <doctest.h>

#include "support/oracles.hpp"
#include "thinflow/geometry.hpp"

using namespace thinflow;

TEST_CASE("2x2x2 layout: two shared interface unknowns, 4 + 4 pressures") {
  const auto [g, L] = build_grids(DomainSpec{}, 2, 2, 2);
  CHECK(L.interface_dofs.size() == 2);
  CHECK(L.porous_pressure.size == 4);
  CHECK(L.channel_pressure.size == 4);
  CHECK(L.n_pressure == 8);
}

TEST_CASE("velocity count matches face enumeration") {
  for (Index n : {2, 3, 4, 7}) {
    const auto [g, L] = build_grids(DomainSpec{}, n, n + 1, n + 2);
    CHECK(L.n_velocity == oracle::count_velocity_faces(g));
  }
}

TEST_CASE("face counts have the closed forms") {
  const auto [g, L] = build_grids(DomainSpec{2.0, 0.5}, 5, 3, 4);
  CHECK(g.n_vfaces() == 6 * 3);
  CHECK(g.n_hfaces() == 5 * 4);
  CHECK(g.n_tfaces() == 6 * 4);
  CHECK(g.n_nfaces() == 5 * 5);
  CHECK(L.channel_tangential.size == 4 * 4);
  CHECK(L.channel_normal.size == 5 * 3);
  CHECK(g.dx == doctest::Approx(0.4));
  CHECK(g.dy == doctest::Approx(0.5 / 3));
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(build_grids(DomainSpec{}, 1, 4, 4), Error);
  CHECK_THROWS_AS(build_grids(DomainSpec{}, 4, 1, 4), Error);
  CHECK_THROWS_AS(build_grids(DomainSpec{0.0, 1.0}, 4, 4, 4), Error);
}

TEST_CASE("Γ faces are one unknown") {
  const auto [g, L] = build_grids(DomainSpec{}, 6, 3, 5);
  for (Index i = 0; i < g.nx; ++i) {
    CHECK(L.porous.horizontal[g.hface(i, g.ny)] == L.channel.normal[g.nface(i, 0)]);
    CHECK(L.interface_dofs[i] == L.channel.normal[g.nface(i, 0)]);
  }
  // walls and lid eliminated
  for (Index k = 0; k < g.nz; ++k) {
    CHECK(L.channel.tangential[g.tface(0, k)] == kEliminated);
    CHECK(L.channel.tangential[g.tface(g.nx, k)] == kEliminated);
  }
  for (Index i = 0; i < g.nx; ++i) CHECK(L.channel.normal[g.nface(i, g.nz)] == kEliminated);
}

TEST_CASE("rescaled divergence") {
  SUBCASE("w = (0, x_N)") {
    ChannelField w{[](HyperDual, HyperDual) { return HyperDual(0.0); }, [](HyperDual, HyperDual xn) { return xn; }};
    const auto d = reference_transform_check(w, 0.5, 0.3, 0.7);
    CHECK(d.physical == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.reference == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("tangential only") {
    ChannelField w{[](HyperDual x, HyperDual) { return x; }, [](HyperDual, HyperDual) { return HyperDual(0.0); }};
    for (double eps : {0.9, 0.1, 1e-3}) {
      const auto d = reference_transform_check(w, eps, 0.4, 0.2);
      CHECK(d.physical == doctest::Approx(1.0));
      CHECK(d.reference == doctest::Approx(1.0));
    }
  }
  SUBCASE("w = (x z, eps z^2) at (0.5, 0.5), eps = 0.25") {
    // physical: w = (x x_N / eps, x_N^2 / eps); div = x_N/eps + 2 x_N/eps = 3z
    const double eps = 0.25;
    ChannelField w{[eps](HyperDual x, HyperDual xn) { return x * xn / HyperDual(eps); },
                   [eps](HyperDual, HyperDual xn) { return xn * xn / HyperDual(eps); }};
    const auto d = reference_transform_check(w, eps, 0.5, 0.5);
    CHECK(d.physical == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(d.reference == doctest::Approx(1.5).epsilon(1e-14));
  }
  SUBCASE("random polynomial fields") {
    const Vector c = oracle::random_vector(6 * 40, 11);
    for (int f = 0; f < 40; ++f) {
      const double* a = &c[6 * f];
      ChannelField w{[a](HyperDual x, HyperDual xn) { return HyperDual(a[0]) + HyperDual(a[1]) * x * x + HyperDual(a[2]) * x * xn; },
                     [a](HyperDual x, HyperDual xn) {
                       return HyperDual(a[3]) * xn + HyperDual(a[4]) * x * xn * xn + HyperDual(a[5]) * x * x * x;
                     }};
      const double eps = 0.05 + 0.9 * std::abs(a[0]);
      const auto d = reference_transform_check(w, eps, 0.5 + 0.4 * a[1], 0.5 + 0.4 * a[2]);
      CHECK(std::abs(d.physical - d.reference) <= 1e-12 * (1.0 + std::abs(d.physical)));
    }
  }
  CHECK_THROWS_AS(reference_transform_check({}, 0.0, 0.5, 0.5), Error);
}
