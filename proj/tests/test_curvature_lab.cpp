#include <doctest.h>

#include <cmath>

#include "schwarzstatic/curvature_lab.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;

namespace {

ShellGrid shell(double r_in, double r_out, int n_r, int band) {
  return {RadialGrid::uniform(r_in, r_out, n_r), SphereGrid::for_band(band)};
}

double max_tensor(const std::vector<Sym3>& t) {
  double m = 0;
  for (const auto& s : t) m = std::fmax(m, s.max_abs());
  return m;
}

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

// Ricci of dr^2 + phi(r)^2 gamma_S2 written out for phi^2 = r^2 - 2 m r:
// Ric_rr = -2 phi''/phi, Ric_thth = 1 - phi'^2 - phi phi''.
struct WarpedRicci {
  double rr, thth;
};
WarpedRicci warped_ricci(double m, double r) {
  const double phi = std::sqrt(r * r - 2 * m * r);
  const double dphi = (r - m) / phi;
  const double ddphi = (phi * phi - (r - m) * (r - m)) / (phi * phi * phi);
  return {-2 * ddphi / phi, 1 - dphi * dphi - phi * ddphi};
}

const SchwarzschildParams P{1.0, 3.0};

}  // namespace

TEST_CASE("flat metric with constant potential has zero residual") {
  const auto grid = shell(2.0, 4.0, 12, 6);
  const auto res = conformal_static_residual(flat_metric(grid), std::vector<double>(grid.size(), 0.0));
  CHECK(res.max_tensor() <= 1e-11);
  CHECK(res.max_scalar() <= 1e-11);
}

TEST_CASE("Schwarzschild residual vanishes at fourth order") {
  auto run = [](int n) {
    const auto grid = shell(3.0, 6.0, n, 6);
    const auto res = conformal_static_residual(schwarzschild_conformal_metric(P, grid),
                                               schwarzschild_log_potential(P, grid));
    return std::fmax(res.max_tensor(), res.max_scalar());
  };
  // boundary closures are still pre-asymptotic below h ~ 0.05
  const double coarse = run(61), fine = run(121);
  MESSAGE("coarse " << coarse << " fine " << fine << " ratio " << coarse / fine);
  CHECK(coarse <= 1e-3);
  CHECK(fine <= 2e-5);
  CHECK(coarse / fine >= 11.3);
  CHECK(coarse / fine <= 22.6);
}

TEST_CASE("g_sc with u = 0 reproduces the warped-product Ricci tensor") {
  const auto grid = shell(3.0, 5.0, 81, 6);
  const auto res = conformal_static_residual(schwarzschild_conformal_metric(P, grid),
                                             std::vector<double>(grid.size(), 0.0));
  double err = 0, peak = 0;
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double r = grid.radial[ir];
    const auto w = warped_ricci(P.m, r);
    const double rho2 = r * (r - 2 * P.m);
    CHECK(std::fabs(w.rr - 2 * P.m * P.m / (rho2 * rho2)) <= 1e-14);
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      const Sym3& T = res.tensor[grid.index(ir, ia)];
      const double s2 = std::pow(std::sin(grid.sphere.theta(ia)), 2);
      err = std::fmax(err, std::fabs(T(0, 0) - w.rr));
      err = std::fmax(err, std::fabs(T(1, 1) - w.thth));
      err = std::fmax(err, std::fabs(T(2, 2) - w.thth * s2));
      err = std::fmax(err, std::fmax(std::fabs(T(0, 1)), std::fmax(std::fabs(T(0, 2)), std::fabs(T(1, 2)))));
      peak = std::fmax(peak, T(0, 0));
    }
  }
  CHECK(peak >= 0.05);
  CHECK(err <= 1e-6);
}

TEST_CASE("degenerate metric is rejected") {
  const auto grid = shell(2.0, 4.0, 8, 3);
  MetricField g{grid, std::vector<Sym3>(grid.size(), Sym3{})};
  CHECK_THROWS_AS(conformal_static_residual(g, std::vector<double>(grid.size(), 0.0)), std::domain_error);
}

TEST_CASE("linearization: zero, mass variation, scaling") {
  const auto grid = shell(P.r0, 4.0, 101, 6);

  DeformationPair zero{grid, std::vector<Sym3>(grid.size(), Sym3{}), std::vector<double>(grid.size(), 0.0)};
  const auto z = linearize_at_schwarzschild(zero, P);
  CHECK(max_tensor(z.tensor) == 0.0);
  CHECK(max_abs(z.scalar) == 0.0);
  CHECK(max_abs(z.boundary_mean_curvature) == 0.0);

  const auto mass = linearize_at_schwarzschild(sample_deformation(mass_variation(P, grid.sphere), grid), P);
  CHECK(max_tensor(mass.tensor) <= 1e-6);
  CHECK(max_abs(mass.scalar) <= 1e-5);  // boundary-ring truncation of u'' dominates
  // bulk kernel but not a boundary kernel element
  CHECK(max_abs(mass.boundary_mean_curvature) >= 0.1);

  DeformationPair scale{grid, std::vector<Sym3>(grid.size(), Sym3::diag(1, 1, 1)),
                        std::vector<double>(grid.size(), 0.0)};
  const auto s = linearize_at_schwarzschild(scale, P);
  CHECK(max_tensor(s.tensor) <= 1e-6);
  CHECK_THROWS_AS(linearize_at_schwarzschild(zero, P, -1.0), std::invalid_argument);
}

TEST_CASE("linearization is linear in the direction") {
  const auto grid = shell(P.r0, 5.0, 33, 8);
  const RandomDeformation X(P, grid.sphere, 11, {.L = 3}), Y(P, grid.sphere, 12, {.L = 3});
  const auto dx = sample_deformation(X.sampler(), grid), dy = sample_deformation(Y.sampler(), grid);
  const double a = 0.7, b = -1.3;
  DeformationPair comb{grid, {}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    comb.g.push_back(a * dx.g[i] + b * dy.g[i]);
    comb.u.push_back(a * dx.u[i] + b * dy.u[i]);
  }
  const auto lx = linearize_at_schwarzschild(dx, P), ly = linearize_at_schwarzschild(dy, P),
             lc = linearize_at_schwarzschild(comb, P);
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Sym3 expect = a * lx.tensor[i] + b * ly.tensor[i];
    err = std::fmax(err, (lc.tensor[i] - expect).max_abs());
    err = std::fmax(err, std::fabs(lc.scalar[i] - (a * lx.scalar[i] + b * ly.scalar[i])));
    scale = std::fmax(scale, expect.max_abs());
  }
  for (int ia = 0; ia < grid.n_ang(); ++ia) {
    const auto k = static_cast<std::size_t>(ia);
    err = std::fmax(err, std::fabs(lc.boundary_mean_curvature[k] -
                                   (a * lx.boundary_mean_curvature[k] + b * ly.boundary_mean_curvature[k])));
    for (int c = 0; c < 3; ++c)
      err = std::fmax(err, std::fabs(lc.boundary_metric[k][c] -
                                     (a * lx.boundary_metric[k][c] + b * ly.boundary_metric[k][c])));
  }
  CHECK(scale > 1e-3);
  CHECK(err <= 1e-6 * scale);
}
