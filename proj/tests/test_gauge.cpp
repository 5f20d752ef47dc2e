#include <doctest.h>

#include <cmath>

#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;

namespace {

const SchwarzschildParams P{1.0, 3.0};

ShellGrid gauge_grid(int n_r = 13, int band = 8) { return {RadialGrid::uniform(P.r0, 6.0, n_r), SphereGrid::for_band(band)}; }

double max_abs(const GaugeVectorField& X) {
  double m = 0;
  for (std::size_t i = 0; i < X.x_perp.size(); ++i)
    m = std::fmax(m, std::fmax(std::fabs(X.x_perp[i]), std::fmax(std::fabs(X.x_tan[i][0]), std::fabs(X.x_tan[i][1]))));
  return m;
}

}  // namespace

TEST_CASE("parallel frame is orthonormal and scales like rho2^-1/2") {
  const auto grid = gauge_grid();
  const auto f = parallel_frame(P, grid);
  const double rho2_0 = background_at(P, P.r0).rho2;
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double ratio = std::sqrt(rho2_0 / background_at(P, grid.radial[ir]).rho2);
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      const std::size_t i = grid.index(ir, ia);
      CHECK((f.gram(i) - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() <= 1e-13);
      const auto& c0 = f.coords[grid.index(0, ia)];
      CHECK(std::fabs(f.coords[i][0] / c0[0] - ratio) <= 1e-12 * ratio);
      CHECK(std::fabs(f.coords[i][3] / c0[3] - ratio) <= 1e-12 * ratio);
      CHECK(f.coords[i][1] == 0.0);
      CHECK(f.coords[i][2] == 0.0);
    }
  }
}

TEST_CASE("constant radial-radial deformation") {
  const auto grid = gauge_grid(9, 4);
  const int n = grid.n_ang();
  const DeformationSampler drdr = [n](double) {
    return DeformationSlice{std::vector<Sym3>(static_cast<std::size_t>(n), Sym3::diag(1, 0, 0)),
                            std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  };
  const auto X = build_gauge_field(drdr, P, grid);
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < n; ++ia) {
      const std::size_t i = grid.index(ir, ia);
      CHECK(std::fabs(X.x_perp[i] + 0.5 * (grid.radial[ir] - P.r0)) <= 1e-14);
      CHECK(X.dx_perp[i] == -0.5);
      CHECK(std::fabs(X.x_tan[i][0]) <= 1e-12);
      CHECK(std::fabs(X.x_tan[i][1]) <= 1e-12);
    }
}

TEST_CASE("tangential deformation needs no gauge") {
  const auto grid = gauge_grid(9, 8);
  const RandomDeformation g(P, grid.sphere, 3, {.L = 4, .tangential = true});
  const auto X = build_gauge_field(g.sampler(), P, grid);
  CHECK(max_abs(X) == 0.0);
  const auto d = sample_deformation(g.sampler(), grid);
  CHECK(d.max_radial() == 0.0);
}

TEST_CASE("zero gauge field leaves the pair unchanged") {
  const auto grid = gauge_grid(7, 6);
  const RandomDeformation g(P, grid.sphere, 4, {.L = 3});
  const auto d = sample_deformation(g.sampler(), grid);
  GaugeVectorField X{grid,
                     std::vector<double>(grid.size(), 0.0),
                     std::vector<double>(grid.size(), 0.0),
                     std::vector<std::array<double, 2>>(grid.size(), {0.0, 0.0}),
                     std::vector<std::array<double, 2>>(grid.size(), {0.0, 0.0})};
  const auto res = apply_gauge(d, X, P);
  CHECK_FALSE(res.ok);
  CHECK_FALSE(res.pair.global_geodesic_gauge);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK((res.pair.g[i] - d.g[i]).max_abs() == 0.0);
    CHECK(res.pair.u[i] == d.u[i]);
  }
}

TEST_CASE("gauge annihilates radial components") {
  const auto grid = gauge_grid(13, 8);
  for (std::uint64_t seed : {21u, 22u, 23u}) {
    const RandomDeformation g(P, grid.sphere, seed, {.L = 4});
    const auto d = sample_deformation(g.sampler(), grid);
    REQUIRE(d.max_radial() > 0.1);
    const auto X = build_gauge_field(g.sampler(), P, grid);
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      CHECK(X.x_perp[grid.index(0, ia)] == 0.0);
      CHECK(X.x_tan[grid.index(0, ia)][0] == 0.0);
    }
    const auto res = apply_gauge(d, X, P);
    MESSAGE("seed " << seed << " max radial " << res.max_radial);
    CHECK(res.ok);
    CHECK(res.pair.global_geodesic_gauge);
    CHECK(res.max_radial <= 1e-8);
  }
}

TEST_CASE("build_gauge_field is linear") {
  const auto grid = gauge_grid(7, 6);
  const RandomDeformation a(P, grid.sphere, 31, {.L = 3}), b(P, grid.sphere, 32, {.L = 3});
  const DeformationSampler comb = [&](double r) {
    auto sa = a(r);
    const auto sb = b(r);
    for (std::size_t j = 0; j < sa.g.size(); ++j) {
      sa.g[j] = 2.0 * sa.g[j] + (-0.5) * sb.g[j];
      sa.u[j] = 2.0 * sa.u[j] - 0.5 * sb.u[j];
    }
    return sa;
  };
  const auto Xa = build_gauge_field(a.sampler(), P, grid), Xb = build_gauge_field(b.sampler(), P, grid),
             Xc = build_gauge_field(comb, P, grid);
  double err = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::fmax(err, std::fabs(Xc.x_perp[i] - (2 * Xa.x_perp[i] - 0.5 * Xb.x_perp[i])));
    for (std::size_t A = 0; A < 2; ++A)
      err = std::fmax(err, std::fabs(Xc.x_tan[i][A] - (2 * Xa.x_tan[i][A] - 0.5 * Xb.x_tan[i][A])));
  }
  CHECK(err <= 1e-9 * max_abs(Xc));
}

TEST_CASE("Lie derivative of g_sc: apply_gauge matches the flow and the gauge recovers -Y") {
  const auto grid = gauge_grid(9, 6);
  const auto Y = random_boundary_vanishing_field(P, 41);
  const auto sampler = lie_derivative_sampler(Y, P, grid.sphere);
  const auto lie = sample_deformation(sampler, grid);
  const auto XY = gauge_field_from_vector(Y, P, grid);

  DeformationPair zero{grid, std::vector<Sym3>(grid.size(), Sym3{}), std::vector<double>(grid.size(), 0.0)};
  const auto pushed = apply_gauge(zero, XY, P).pair;
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::fmax(err, (pushed.g[i] - lie.g[i]).max_abs());
    err = std::fmax(err, std::fabs(pushed.u[i] - lie.u[i]));
    scale = std::fmax(scale, lie.g[i].max_abs());
  }
  MESSAGE("flow oracle error " << err << " scale " << scale);
  CHECK(scale > 1e-2);
  CHECK(err <= 1e-6);

  const auto X = build_gauge_field(sampler, P, grid);
  double rec = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    rec = std::fmax(rec, std::fabs(X.x_perp[i] + XY.x_perp[i]));
    for (std::size_t A = 0; A < 2; ++A) rec = std::fmax(rec, std::fabs(X.x_tan[i][A] + XY.x_tan[i][A]));
  }
  MESSAGE("recovery error " << rec << " |Y| " << max_abs(XY));
  CHECK(rec <= 1e-6 * max_abs(XY));
}
