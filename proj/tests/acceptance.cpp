// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [--jobs N] [--seed S] [--allow-fail 3,...]
// Exit code 0 iff every criterion passes or is listed in --allow-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "schwarzstatic/background.hpp"
#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/harmonics.hpp"
#include "schwarzstatic/modes.hpp"
#include "schwarzstatic/structure.hpp"
#include "schwarzstatic/sweep.hpp"
#include "schwarzstatic/synthetic.hpp"

using namespace schwarzstatic;

namespace {

const SchwarzschildParams P{1.0, 3.0};

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

ModeOptions tight() {
  ModeOptions o;
  o.ode = {1e-12, 1e-14};
  return o;
}

ShellGrid shell(double width, int n_r, int band) {
  return {RadialGrid::uniform(P.r0, P.r0 + width, n_r), SphereGrid::for_band(band)};
}

std::vector<double> harmonic(const SphereGrid& s, int l, int k) {
  std::vector<double> y(static_cast<std::size_t>(s.size()));
  for (int j = 0; j < s.size(); ++j) y[static_cast<std::size_t>(j)] = sh_eval({l, k}, s.theta(j), s.phi(j));
  return y;
}

Outcome kernel_sweep(int jobs) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rep = run_sweep(SweepConfig{}, {jobs, true});
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream d;
  d << rep.summary.passed << "/" << rep.summary.records << " non-decaying, " << rep.summary.undetermined
    << " undetermined, " << fmt(dt) << " s with " << jobs << " workers";
  return {rep.summary.records == 108 && rep.summary.passed == 108 && dt < 60.0, d.str()};
}

Outcome ell0_limits(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> um(0.1, 2.0), ud(0.1, 10.0);
  std::bernoulli_distribution sign(0.5);
  double worst_A = 0, worst_a = 0;
  for (int t = 0; t < 10; ++t) {
    const double m = sign(rng) ? um(rng) : -um(rng);
    const SchwarzschildParams q{m, 2 * std::max(0.0, m) + ud(rng)};
    const auto sol = integrate_mode(make_ivp(q, 0, 1.0), 1e6 * q.r0);
    const double lim = classify(sol).fitted_limit;
    const double expect_A = q.r0 / (2 * m) - 0.5;
    worst_A = std::max(worst_A, std::fabs(lim - sol.alpha0() - expect_A) / std::fabs(expect_A));
    worst_a = std::max(worst_a, std::fabs(lim - 1.0));
  }
  return {worst_A <= 1e-6 && worst_a <= 1e-6,
          "10 random (m, r0): lim A rel err " + fmt(worst_A) + ", lim a - a0 " + fmt(worst_a)};
}

Outcome ell1_Phi() {
  const auto ivp = make_ivp(P, 1, 1.0);
  const auto sol = integrate_mode(ivp, 1e4 * P.r0, tight());
  const double m = P.m, r0 = P.r0, alpha0 = *ivp.alpha0;
  auto stated = [&](double r) {
    return alpha0 / (2 * m) * (std::log((r - 2 * m) / r) - std::log((r0 - 2 * m) / r0));
  };
  double sup_stated = 0, sup_corrected = 0;
  for (std::size_t i = 0; i < sol.radii.size(); ++i) {
    sup_stated = std::max(sup_stated, std::fabs(sol.Phi(i) - stated(sol.radii[i])));
    sup_corrected = std::max(sup_corrected, std::fabs(sol.Phi(i) - ell1_Phi_closed_form(ivp, sol.radii[i])));
  }
  const double at_r0 = std::fabs(sol.Phi(0));
  return {sup_stated <= 1e-8 && at_r0 <= 1e-12,
          "sup |Phi - (alpha0/(2m))[...]| = " + fmt(sup_stated) + " on [r0, 1e4 r0]; |Phi(r0)| = " + fmt(at_r0) +
              "; with factor alpha0/m the sup is " + fmt(sup_corrected)};
}

Outcome flat_exactness() {
  ModeOptions o = tight();
  o.branch = ModeBranch::ForceNumeric;
  double worst = 0, zero = 0;
  for (double r0 : {1.0, 2.5}) {
    o.extra_radii = {10 * r0};
    for (int l = 0; l <= 8; ++l) {
      const auto ivp = make_ivp({0.0, r0}, l, 1.0);
      const auto c = flat_coefficients(l, r0, ivp.a0, ivp.da0);
      const auto sol = integrate_mode(ivp, 100 * r0, o);
      const std::size_t k = sol.nearest(10 * r0);
      const double r = sol.radii[k];
      const double exact = c.c1 * std::pow(r, -l - 1.0) + c.c2 * std::pow(r, double(l));
      worst = std::max(worst, std::fabs(sol.a[k] - exact) / std::fabs(exact));
      const auto z = integrate_mode(make_ivp({0.0, r0}, l, 0.0), 100 * r0, o);
      for (std::size_t i = 0; i < z.a.size(); ++i) zero = std::max({zero, std::fabs(z.a[i]), std::fabs(z.da[i])});
    }
  }
  return {worst <= 1e-8 && zero <= 1e-12,
          "l = 0..8, r0 in {1, 2.5}: rel err at 10 r0 " + fmt(worst) + "; a0 = 0 gives max |a| " + fmt(zero)};
}

Outcome gauge(std::uint64_t seed) {
  const ShellGrid grid{RadialGrid::uniform(P.r0, 6.0, 13), SphereGrid::for_band(8)};
  double worst = 0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const RandomDeformation g(P, grid.sphere, seed + k, {.L = 4});
    const auto res = apply_gauge(sample_deformation(g.sampler(), grid), build_gauge_field(g.sampler(), P, grid), P);
    worst = std::max(worst, res.max_radial);
  }
  const ShellGrid rg{RadialGrid::uniform(P.r0, 6.0, 9), SphereGrid::for_band(6)};
  const auto Y = random_boundary_vanishing_field(P, seed);
  const auto XY = gauge_field_from_vector(Y, P, rg);
  const auto X = build_gauge_field(lie_derivative_sampler(Y, P, rg.sphere), P, rg);
  double err = 0, scale = 0;
  for (std::size_t i = 0; i < rg.size(); ++i) {
    err = std::max(err, std::fabs(X.x_perp[i] + XY.x_perp[i]));
    scale = std::max(scale, std::fabs(XY.x_perp[i]));
    for (std::size_t A = 0; A < 2; ++A) {
      err = std::max(err, std::fabs(X.x_tan[i][A] + XY.x_tan[i][A]));
      scale = std::max(scale, std::fabs(XY.x_tan[i][A]));
    }
  }
  return {worst <= 1e-8 && err <= 1e-6 * scale,
          "5 random L = 4 deformations: max radial " + fmt(worst) + "; -Y recovery rel err " + fmt(err / scale)};
}

double mass_variation(int n) {
  const auto s = structure_residuals(mass_variation_foliation(P, shell(1.0, n, 4)), P).max_abs();
  return *std::max_element(s.begin(), s.end());
}

Outcome structure_oracle(std::uint64_t seed) {
  const auto g = shell(0.5, 101, 8);
  double worst = 0;
  bool gauged_ok = true;
  for (std::uint64_t k = 0; k < 5; ++k) {
    const RandomDeformation X(P, g.sphere, seed + 100 + k, {.L = 3});
    const auto gauged = apply_gauge(sample_deformation(X.sampler(), g), build_gauge_field(X.sampler(), P, g), P);
    gauged_ok = gauged_ok && gauged.ok;
    const auto f = foliation_from_gauge_fixed(gauged.pair, P);
    const auto c = compare_with_oracle(structure_residuals(f, P), boundary_residuals(f, P),
                                       linearize_at_schwarzschild(gauged.pair, P), P);
    worst = std::max(worst, c.max());
  }
  const double coarse = mass_variation(51), fine = mass_variation(101);
  const double ratio = coarse / fine;
  // grid tolerance 1000 h^4 on [r0, r0 + 1]
  const bool grid_ok = coarse <= 1e3 * std::pow(0.02, 4) && fine <= 1e3 * std::pow(0.01, 4);
  return {gauged_ok && worst <= 1e-6 && grid_ok && ratio >= 11.3 && ratio <= 22.6,
          "5 random directions: oracle discrepancy " + fmt(worst) + "; mass variation " + fmt(coarse) + " -> " +
              fmt(fine) + " (ratio " + fmt(ratio) + ")"};
}

Outcome mode_pde() {
  const auto g = shell(2.0, 201, 6);
  ModeOptions mo;
  mo.ode = {1e-13, 1e-15};
  mo.extra_radii = g.radial.nodes();
  double worst = 0;
  for (int l : {0, 1, 2, 5}) {
    const auto sol = integrate_mode(make_ivp(P, l, 1.0), g.radial.back(), mo);
    const auto y = harmonic(g.sphere, l, l / 2);
    std::vector<double> samples, slopes;
    for (int ir = 0; ir < g.n_r(); ++ir) {
      const std::size_t k = sol.nearest(g.radial[ir]);
      for (double yy : y) {
        samples.push_back(sol.a[k] * yy);
        slopes.push_back(sol.da[k] * yy);
      }
    }
    for (double v : decoupled_residual(radial_jet(g, samples, slopes), P)) worst = std::max(worst, std::fabs(v));
  }
  return {worst <= 1e-7, "l in {0, 1, 2, 5}: max decoupled residual " + fmt(worst)};
}

Outcome conservation() {
  std::vector<double> radii;
  for (int k = 0; k <= 400; ++k) radii.push_back(P.r0 * std::pow(1e3, k / 400.0));
  double worst = 0;
  std::vector<std::function<double(double)>> us{
      [](double r) { return std::pow(P.r0 / r, 2) * std::cos(r); },
      [](double r) { return std::exp(-r / 7) - 0.3 / r; },
      [](double r) { return 0.5 * r / (r + 5); },
  };
  std::vector<std::function<double(double)>> dus{
      [](double r) { return -2 * P.r0 * P.r0 / (r * r * r) * std::cos(r) - std::pow(P.r0 / r, 2) * std::sin(r); },
      [](double r) { return -std::exp(-r / 7) / 7 + 0.3 / (r * r); },
      [](double r) { return 2.5 / ((r + 5) * (r + 5)); },
  };
  for (std::size_t c = 0; c < us.size(); ++c) {
    const double H0 = 0.7;
    // H~ ~ 1/r^2 needs a tiny atol; the step cap keeps the cos(r) source resolved between sparse outputs
    const auto H =
        solve_mean_curvature_variation(P, H0, dus[c], radii, {.rtol = 1e-12, .atol = 1e-20, .max_step = 0.5});
    const double c0 = P.r0 * (P.r0 - 2 * P.m) * H0 + 4 * P.m * us[c](P.r0);
    for (std::size_t k = 0; k < radii.size(); ++k) {
      const double r = radii[k];
      worst = std::max(worst, std::fabs(r * (r - 2 * P.m) * H[k] + 4 * P.m * us[c](r) - c0) / std::fabs(c0));
    }
  }
  return {worst <= 1e-9, "r(r-2m) H~ + 4m u~ relative drift " + fmt(worst) + " on [r0, 1e3 r0]"};
}

Outcome harmonics(std::uint64_t seed) {
  const int L = 8;
  const auto g = SphereGrid::for_band(L);
  const SphereTransform tr(g, L);
  const Eigen::MatrixXd Y = harmonic_matrix(g, L);
  Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), g.size());
  const double gram =
      (Y.transpose() * w.asDiagonal() * Y - Eigen::MatrixXd::Identity(Y.cols(), Y.cols())).cwiseAbs().maxCoeff();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  double rt = 0;
  for (int t = 0; t < 10; ++t) {
    HarmonicCoefficients c(L);
    for (double& v : c.c) v = U(rng);
    const auto f = tr.synthesize(c);
    const auto back = tr.analyze(f);
    const auto f2 = tr.synthesize(back);
    for (std::size_t i = 0; i < c.c.size(); ++i) rt = std::max(rt, std::fabs(back.c[i] - c.c[i]));
    for (std::size_t j = 0; j < f.size(); ++j) rt = std::max(rt, std::fabs(f2[j] - f[j]));
  }
  return {gram <= 1e-12 && rt <= 1e-12, "L = 8: Gram " + fmt(gram) + ", round trip " + fmt(rt)};
}

Outcome round_data(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> urho(0.1, 10.0), ux(0.1, 2.0);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    const double rho = urho(rng), h = 2 * ux(rng) / rho;
    const auto mt = match_round_data({rho, h});
    if (!mt.valid) return {false, "match_round_data rejected a valid pair"};
    const auto back = bartnik_data(mt.params());
    worst = std::max({worst, std::fabs(back.rho - rho) / rho, std::fabs(back.h - h) / h});
  }
  const auto e = match_round_data({1.0, 2.0});
  return {worst <= 1e-12 && e.m == 0.0,
          "100 random pairs: rel err " + fmt(worst) + "; (rho, h) = (1, 2) gives m = " + fmt(e.m)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int jobs = 4;
  std::uint64_t seed = 20240607;
  std::vector<int> allow;
  app.add_option("--jobs", jobs, "sweep workers")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for random cases");
  app.add_option("--allow-fail", allow, "criteria whose failure is documented and tolerated")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> allowed(allow.begin(), allow.end());

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"kernel triviality sweep", [&] { return kernel_sweep(jobs); }},
      {"l = 0 closed-form limits", [&] { return ell0_limits(seed); }},
      {"l = 1 Phi closed form", [] { return ell1_Phi(); }},
      {"m = 0 exactness", [] { return flat_exactness(); }},
      {"gauge annihilation and recovery", [&] { return gauge(seed); }},
      {"structure vs oracle, 4th-order convergence", [&] { return structure_oracle(seed); }},
      {"mode <-> PDE consistency", [] { return mode_pde(); }},
      {"conservation law", [] { return conservation(); }},
      {"harmonic round trip and Gram", [&] { return harmonics(seed); }},
      {"round-data matcher", [&] { return round_data(seed); }},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool tolerated = !o.pass && allowed.count(id);
    if (!o.pass && !tolerated) ++unexpected;
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str(),
                tolerated ? " [allowed]" : "");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 2;
}
