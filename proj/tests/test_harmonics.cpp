#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "schwarzstatic/harmonics.hpp"

using namespace schwarzstatic;

namespace {

// Unnormalized associated Legendre P_l^k(x) (no Condon-Shortley phase) by the textbook
// three-term recurrence, independent of the normalized recurrence in the library.
double legendre_plain(int l, int k, double x) {
  double pmm = 1.0;
  const double s = std::sqrt(1 - x * x);
  for (int i = 1; i <= k; ++i) pmm *= (2 * i - 1) * s;
  if (l == k) return pmm;
  double pmmp1 = x * (2 * k + 1) * pmm;
  if (l == k + 1) return pmmp1;
  double pll = 0;
  for (int ll = k + 2; ll <= l; ++ll) {
    pll = ((2 * ll - 1) * x * pmmp1 - (ll + k - 1) * pmm) / (ll - k);
    pmm = pmmp1;
    pmmp1 = pll;
  }
  return pll;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double reference_harmonic(int l, int k, double th, double ph) {
  const int a = std::abs(k);
  const double norm = std::sqrt((2 * l + 1) / (4 * std::numbers::pi) * factorial(l - a) / factorial(l + a));
  const double p = norm * legendre_plain(l, a, std::cos(th));
  if (k == 0) return p;
  return std::numbers::sqrt2 * p * (k > 0 ? std::cos(a * ph) : std::sin(a * ph));
}

}  // namespace

TEST_CASE("harmonic anchors") {
  CHECK(sh_eval({0, 0}, 0.3, 1.0) == doctest::Approx(0.28209479177387814).epsilon(1e-15));
  CHECK(sh_eval({1, 0}, 0.0, 0.0) == doctest::Approx(std::sqrt(3 / (4 * std::numbers::pi))).epsilon(1e-15));
  CHECK_THROWS_AS(sh_eval({2, 3}, 0.1, 0.1), std::out_of_range);
  CHECK_THROWS_AS(sh_eval({1, -2}, 0.1, 0.1), std::out_of_range);
}

TEST_CASE("normalized recurrence matches factorial-normalized reference") {
  for (int l = 0; l <= 10; ++l)
    for (int k = -l; k <= l; ++k)
      for (double th : {0.1, 0.9, 2.0, 3.0}) {
        const double ph = 0.37 + th;
        CHECK(sh_eval({l, k}, th, ph) == doctest::Approx(reference_harmonic(l, k, th, ph)).epsilon(1e-12));
      }
}

TEST_CASE("angular derivatives match central differences") {
  const double th = 1.1, ph = 0.6, h = 1e-5;
  for (int l = 0; l <= 6; ++l)
    for (int k = -l; k <= l; ++k) {
      const auto v = sh_eval_with_derivatives({l, k}, th, ph);
      const double dt = (sh_eval({l, k}, th + h, ph) - sh_eval({l, k}, th - h, ph)) / (2 * h);
      const double dp = (sh_eval({l, k}, th, ph + h) - sh_eval({l, k}, th, ph - h)) / (2 * h);
      CHECK(std::fabs(v.d_theta - dt) <= 1e-8);
      CHECK(std::fabs(v.d_phi - dp) <= 1e-8);
    }
}

TEST_CASE("grid weights and quadrature") {
  const auto g = SphereGrid::for_band(8);
  CHECK(g.band() == 8);
  double w = 0;
  for (int j = 0; j < g.size(); ++j) w += g.weight(j);
  CHECK(std::fabs(w - 4 * std::numbers::pi) <= 1e-12 * 4 * std::numbers::pi);
  double q = 0;
  for (int j = 0; j < g.size(); ++j) q += g.weight(j) * std::pow(sh_eval({2, 1}, g.theta(j), g.phi(j)), 2);
  CHECK(std::fabs(q - 1.0) <= 1e-12);
}

TEST_CASE("Gram matrix is the identity") {
  for (int L : {0, 3, 8, 12}) {
    const auto g = SphereGrid::for_band(L);
    const Eigen::MatrixXd Y = harmonic_matrix(g, L);
    Eigen::Map<const Eigen::VectorXd> w(g.weights().data(), g.size());
    const Eigen::MatrixXd G = Y.transpose() * w.asDiagonal() * Y;
    CHECK((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("analysis and synthesis") {
  const auto g = SphereGrid::for_band(8);
  const SphereTransform tr(g, 8);

  std::vector<double> y32(g.size()), one(g.size(), 1.0);
  for (int j = 0; j < g.size(); ++j) y32[j] = sh_eval({3, 2}, g.theta(j), g.phi(j));
  const auto c = tr.analyze(y32);
  for (int l = 0; l <= 8; ++l)
    for (int k = -l; k <= l; ++k) CHECK(std::fabs(c.at(l, k) - (l == 3 && k == 2 ? 1.0 : 0.0)) <= 1e-12);
  const auto c1 = analyze(one, g, 8);
  CHECK(std::fabs(c1.at(0, 0) - std::sqrt(4 * std::numbers::pi)) <= 1e-12);

  const auto zero = synthesize(HarmonicCoefficients(8), g);
  for (double v : zero) CHECK(v == 0.0);
  HarmonicCoefficients k0(8);
  k0.at(0, 0) = std::sqrt(4 * std::numbers::pi);
  for (double v : tr.synthesize(k0)) CHECK(std::fabs(v - 1.0) <= 1e-14);

  CHECK_THROWS_AS(tr.analyze(std::vector<double>(3)), std::invalid_argument);
}

TEST_CASE("round trips and Parseval on random band-limited data") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  const int L = 5;
  const auto g = SphereGrid::for_band(8);
  const SphereTransform tr(g, 8);
  HarmonicCoefficients c(8);
  for (int l = 0; l <= L; ++l)
    for (int k = -l; k <= l; ++k) c.at(l, k) = U(rng);
  const auto f = tr.synthesize(c);
  const auto back = tr.analyze(f);
  double err = 0, sum_c = 0, sum_f = 0;
  for (std::size_t i = 0; i < c.c.size(); ++i) {
    err = std::fmax(err, std::fabs(back.c[i] - c.c[i]));
    sum_c += c.c[i] * c.c[i];
  }
  CHECK(err <= 1e-12);
  const auto f2 = tr.synthesize(back);
  double ferr = 0;
  for (int j = 0; j < g.size(); ++j) {
    ferr = std::fmax(ferr, std::fabs(f2[j] - f[j]));
    sum_f += g.weight(j) * f[j] * f[j];
  }
  CHECK(ferr <= 1e-12);
  CHECK(std::fabs(sum_c - sum_f) <= 1e-12 * sum_c);
}

TEST_CASE("Laplacian eigenvalues through div grad") {
  const int L = 8;
  const auto g = SphereGrid::for_band(L + 2);
  const SphereCalculus calc(g);
  for (int l = 0; l <= L; ++l)
    for (int k = -l; k <= l; ++k) {
      std::vector<double> y(g.size());
      for (int j = 0; j < g.size(); ++j) y[j] = sh_eval({l, k}, g.theta(j), g.phi(j));
      const auto lap = calc.laplacian(y);
      double e = 0;
      for (int j = 0; j < g.size(); ++j) e = std::fmax(e, std::fabs(lap[j] + l * (l + 1.0) * y[j]));
      CHECK(e <= 1e-10);
    }
}

TEST_CASE("gradient of a harmonic in frame components") {
  const auto g = SphereGrid::for_band(6);
  const SphereCalculus calc(g);
  std::vector<double> y(g.size());
  for (int j = 0; j < g.size(); ++j) y[j] = sh_eval({3, -2}, g.theta(j), g.phi(j));
  const auto gr = calc.gradient_frame(y);
  for (int j = 0; j < g.size(); ++j) {
    const auto v = sh_eval_with_derivatives({3, -2}, g.theta(j), g.phi(j));
    CHECK(std::fabs(gr[0][j] - v.d_theta) <= 1e-11);
    CHECK(std::fabs(gr[1][j] - v.d_phi / std::sin(g.theta(j))) <= 1e-11);
  }
}

TEST_CASE("tensor identities on the unit sphere") {
  const auto g = SphereGrid::for_band(10);
  const SphereCalculus calc(g);
  const int n = g.size();
  std::vector<double> f(n), zero(n, 0.0);
  for (int j = 0; j < n; ++j) f[j] = sh_eval({2, 1}, g.theta(j), g.phi(j)) + 0.5 * sh_eval({3, -3}, g.theta(j), g.phi(j));
  const auto lap = calc.laplacian(f);

  // Div(f gamma) = df, DivDiv(f gamma) = Lap f
  const auto dv = calc.tensor_divergence(f, zero, f);
  const auto gr = calc.gradient_frame(f);
  const auto dd = calc.double_divergence(f, zero, f);
  // Hessian of f: covariant derivative of grad f; its trace is Lap f and it is symmetric
  const auto H = calc.covariant_derivative(gr[0], gr[1]);
  for (int j = 0; j < n; ++j) {
    CHECK(std::fabs(dv[0][j] - gr[0][j]) <= 1e-10);
    CHECK(std::fabs(dv[1][j] - gr[1][j]) <= 1e-10);
    CHECK(std::fabs(dd[j] - lap[j]) <= 1e-9);
    CHECK(std::fabs(H[0][0][j] + H[1][1][j] - lap[j]) <= 1e-9);
    CHECK(std::fabs(H[0][1][j] - H[1][0][j]) <= 1e-9);
  }
  // DivDiv(Hess f) = Lap Lap f + Lap f on S^2 (Bochner with Ric = gamma)
  const auto ddh = calc.double_divergence(H[0][0], H[0][1], H[1][1]);
  const auto laplap = calc.laplacian(lap);
  for (int j = 0; j < n; ++j) CHECK(std::fabs(ddh[j] - (laplap[j] + lap[j])) <= 1e-8);
}
