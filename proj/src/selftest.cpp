#include "schwarzstatic/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/harmonics.hpp"
#include "schwarzstatic/structure.hpp"
#include "schwarzstatic/synthetic.hpp"

namespace schwarzstatic {

namespace {

const SchwarzschildParams P{1.0, 3.0};

/// n - 1 intervals halved `refine` times.
int refined(int n, int refine) { return (n - 1) * (1 << refine) + 1; }

ShellGrid shell(double width, int n_r, int band) {
  return {RadialGrid::uniform(P.r0, P.r0 + width, n_r), SphereGrid::for_band(band)};
}

SuiteResult verdict(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured, tol, std::isfinite(measured) && measured <= tol, std::move(detail)};
}

SuiteResult harmonics_suite(std::uint64_t seed) {
  const int L = 8;
  const auto g = SphereGrid::for_band(L);
  const SphereTransform tr(g, L);
  const Eigen::MatrixXd Y = harmonic_matrix(g, L);
  Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), g.size());
  const Eigen::MatrixXd G = Y.transpose() * w.asDiagonal() * Y;
  const double gram = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  HarmonicCoefficients c(L);
  for (double& v : c.c) v = U(rng);
  const auto back = tr.analyze(tr.synthesize(c));
  double rt = 0;
  for (std::size_t i = 0; i < c.c.size(); ++i) rt = std::max(rt, std::fabs(back.c[i] - c.c[i]));

  std::ostringstream d;
  d << "gram " << gram << ", round trip " << rt;
  return verdict("harmonics", std::max(gram, rt), 1e-12, d.str());
}

SuiteResult gauge_annihilation_suite(const SelftestOptions& o) {
  const ShellGrid grid{RadialGrid::uniform(P.r0, 6.0, refined(13, o.refine)), SphereGrid::for_band(8)};
  double worst = 0;
  for (std::uint64_t k = 0; k < 3; ++k) {
    const RandomDeformation g(P, grid.sphere, o.seed + k, {.L = 4});
    const auto d = sample_deformation(g.sampler(), grid);
    const auto res = apply_gauge(d, build_gauge_field(g.sampler(), P, grid, {}, o.exec), P, 1e-8, o.exec);
    worst = std::max(worst, res.max_radial);
  }
  return verdict("gauge-annihilation", worst, 1e-8, "max radial component after the gauge, 3 random directions");
}

SuiteResult gauge_recovery_suite(const SelftestOptions& o) {
  const ShellGrid grid{RadialGrid::uniform(P.r0, 6.0, refined(9, o.refine)), SphereGrid::for_band(6)};
  const auto Y = random_boundary_vanishing_field(P, o.seed);
  const auto XY = gauge_field_from_vector(Y, P, grid);
  const auto X = build_gauge_field(lie_derivative_sampler(Y, P, grid.sphere), P, grid, {}, o.exec);
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    err = std::max(err, std::fabs(X.x_perp[i] + XY.x_perp[i]));
    scale = std::max(scale, std::fabs(XY.x_perp[i]));
    for (std::size_t A = 0; A < 2; ++A) {
      err = std::max(err, std::fabs(X.x_tan[i][A] + XY.x_tan[i][A]));
      scale = std::max(scale, std::fabs(XY.x_tan[i][A]));
    }
  }
  return verdict("gauge-recovery", err / scale, 1e-6, "relative error of -Y recovered from L_Y g_sc");
}

SuiteResult structure_oracle_suite(const SelftestOptions& o) {
  const auto g = shell(0.5, refined(101, o.refine), 8);
  double worst = 0;
  std::ostringstream d;
  for (std::uint64_t k = 0; k < 2; ++k) {
    const RandomDeformation X(P, g.sphere, o.seed + 100 + k, {.L = 3});
    const auto raw = sample_deformation(X.sampler(), g);
    const auto gauged = apply_gauge(raw, build_gauge_field(X.sampler(), P, g, {}, o.exec), P, 1e-8, o.exec);
    const auto f = foliation_from_gauge_fixed(gauged.pair, P, o.exec);
    const auto lin = linearize_at_schwarzschild(gauged.pair, P, 1e-4, o.exec);
    const auto s = structure_residuals(f, P, {.flip_dg4_sign = o.flip_dg4_sign}, o.exec);
    const auto c = compare_with_oracle(s, boundary_residuals(f, P, o.exec), lin, P);
    worst = std::max(worst, c.max());
    if (!gauged.ok) worst = std::numeric_limits<double>::infinity();
  }
  d << "max discrepancy over (dg2, dg4, dg5, dg3, dg1) and boundary rows, 2 random directions";
  if (o.flip_dg4_sign) d << " [dg4 sign flipped]";
  return verdict("structure-oracle", worst, 1e-6, d.str());
}

double mass_variation_residual(int n, Exec exec) {
  const auto s = structure_residuals(mass_variation_foliation(P, shell(1.0, n, 4)), P, {}, exec).max_abs();
  return *std::max_element(s.begin(), s.end());
}

SuiteResult mass_variation_suite(const SelftestOptions& o) {
  const int n = refined(51, o.refine);
  const double h = 1.0 / (n - 1);
  const double res = mass_variation_residual(n, o.exec);
  std::ostringstream d;
  d << n << " radial nodes, tolerance 1000 h^4";
  return verdict("structure-mass-variation", res, 1e3 * std::pow(h, 4), d.str());
}

SuiteResult convergence_suite(const SelftestOptions& o) {
  const int n = refined(51, o.refine);
  const double coarse = mass_variation_residual(n, o.exec), fine = mass_variation_residual(2 * n - 1, o.exec);
  const double ratio = coarse / fine;
  std::ostringstream d;
  d << "mass-variation residual " << coarse << " -> " << fine << " under radial halving, expected ratio in [11.3, 22.6]";
  SuiteResult r{"structure-convergence", ratio, 16.0, ratio >= 11.3 && ratio <= 22.6, d.str()};
  return r;
}

}  // namespace

bool SelftestReport::all_pass() const {
  return std::all_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.pass; });
}

SelftestReport run_selftest(const SelftestOptions& o) {
  SelftestReport rep;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      rep.suites.push_back(fn());
    } catch (const std::exception& e) {
      rep.suites.push_back({name, std::numeric_limits<double>::quiet_NaN(), 0, false, e.what()});
    }
  };
  guarded("harmonics", [&] { return harmonics_suite(o.seed); });
  guarded("gauge-annihilation", [&] { return gauge_annihilation_suite(o); });
  guarded("gauge-recovery", [&] { return gauge_recovery_suite(o); });
  guarded("structure-oracle", [&] { return structure_oracle_suite(o); });
  guarded("structure-mass-variation", [&] { return mass_variation_suite(o); });
  guarded("structure-convergence", [&] { return convergence_suite(o); });
  return rep;
}

}  // namespace schwarzstatic
