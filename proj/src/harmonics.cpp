#include "schwarzstatic/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace schwarzstatic {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t tri(int l, int k) { return static_cast<std::size_t>(l * (l + 1) / 2 + k); }

/// Gauss-Legendre nodes (descending) and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // one more evaluation at the converged node for the weight
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

/// Fill values (and optionally derivatives) of all harmonics with ell <= L at a point.
void harmonics_at(int L, double theta, double phi, double* y, double* y_t, double* y_p) {
  const LegendreTable P = normalized_legendre(L, theta);
  const double r2 = std::numbers::sqrt2;
  for (int l = 0; l <= L; ++l) {
    y[coefficient_slot(l, 0)] = P.value(l, 0);
    if (y_t) {
      y_t[coefficient_slot(l, 0)] = P.d_theta(l, 0);
      y_p[coefficient_slot(l, 0)] = 0.0;
    }
    for (int k = 1; k <= l; ++k) {
      const double c = std::cos(k * phi), s = std::sin(k * phi);
      y[coefficient_slot(l, k)] = r2 * P.value(l, k) * c;
      y[coefficient_slot(l, -k)] = r2 * P.value(l, k) * s;
      if (y_t) {
        y_t[coefficient_slot(l, k)] = r2 * P.d_theta(l, k) * c;
        y_t[coefficient_slot(l, -k)] = r2 * P.d_theta(l, k) * s;
        y_p[coefficient_slot(l, k)] = -k * r2 * P.value(l, k) * s;
        y_p[coefficient_slot(l, -k)] = k * r2 * P.value(l, k) * c;
      }
    }
  }
}

}  // namespace

void validate(const ModeIndex& idx) {
  if (idx.ell < 0 || idx.k < -idx.ell || idx.k > idx.ell)
    throw std::out_of_range("ModeIndex: invalid (ell=" + std::to_string(idx.ell) +
                            ", k=" + std::to_string(idx.k) + ")");
}

LegendreTable normalized_legendre(int L, double theta) {
  if (L < 0) throw std::invalid_argument("normalized_legendre: L < 0");
  LegendreTable t;
  t.L = L;
  const std::size_t n = tri(L, L) + 1;
  t.p.assign(n, 0.0);
  t.dp.assign(n, 0.0);
  const double x = std::cos(theta), s = std::sin(theta);

  t.p[0] = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= L; ++k)
    t.p[tri(k, k)] = std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s * t.p[tri(k - 1, k - 1)];
  for (int k = 0; k < L; ++k) t.p[tri(k + 1, k)] = std::sqrt(2.0 * k + 3.0) * x * t.p[tri(k, k)];
  for (int k = 0; k <= L; ++k) {
    for (int l = k + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(k) * k));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(k) * k) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      t.p[tri(l, k)] = a * (x * t.p[tri(l - 1, k)] - b * t.p[tri(l - 2, k)]);
    }
  }
  for (int l = 0; l <= L; ++l) {
    for (int k = 0; k <= l; ++k) {
      if (s == 0.0) {
        t.dp[tri(l, k)] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const double prev = l > k ? t.p[tri(l - 1, k)] : 0.0;
      const double c = l > 0 ? std::sqrt((2.0 * l + 1.0) * (l - k) * (l + k) / (2.0 * l - 1.0)) : 0.0;
      t.dp[tri(l, k)] = (l * x * t.p[tri(l, k)] - c * prev) / s;
    }
  }
  return t;
}

double sh_eval(const ModeIndex& idx, double theta, double phi) {
  validate(idx);
  const LegendreTable P = normalized_legendre(idx.ell, theta);
  const int k = std::abs(idx.k);
  if (idx.k == 0) return P.value(idx.ell, 0);
  const double trig = idx.k > 0 ? std::cos(k * phi) : std::sin(k * phi);
  return std::numbers::sqrt2 * P.value(idx.ell, k) * trig;
}

HarmonicValue sh_eval_with_derivatives(const ModeIndex& idx, double theta, double phi) {
  validate(idx);
  const LegendreTable P = normalized_legendre(idx.ell, theta);
  const int l = idx.ell, k = std::abs(idx.k);
  if (idx.k == 0) return {P.value(l, 0), P.d_theta(l, 0), 0.0};
  const double r2 = std::numbers::sqrt2, c = std::cos(k * phi), s = std::sin(k * phi);
  if (idx.k > 0) return {r2 * P.value(l, k) * c, r2 * P.d_theta(l, k) * c, -k * r2 * P.value(l, k) * s};
  return {r2 * P.value(l, k) * s, r2 * P.d_theta(l, k) * s, k * r2 * P.value(l, k) * c};
}

SphereGrid::SphereGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("SphereGrid: empty grid");
  std::vector<double> x, w;
  gauss_legendre(n_theta, x, w);
  theta_.resize(static_cast<std::size_t>(n_theta));
  for (int i = 0; i < n_theta; ++i) theta_[static_cast<std::size_t>(i)] = std::acos(x[static_cast<std::size_t>(i)]);
  phi_.resize(static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_phi; ++i) phi_[static_cast<std::size_t>(i)] = 2.0 * kPi * i / n_phi;

  weight_.resize(static_cast<std::size_t>(size()));
  frame_.resize(static_cast<std::size_t>(size()));
  for (int it = 0; it < n_theta; ++it) {
    const double th = theta_[static_cast<std::size_t>(it)];
    const double ct = std::cos(th), st = std::sin(th);
    for (int ip = 0; ip < n_phi; ++ip) {
      const std::size_t j = static_cast<std::size_t>(it * n_phi + ip);
      const double ph = phi_[static_cast<std::size_t>(ip)];
      const double cp = std::cos(ph), sp = std::sin(ph);
      weight_[j] = w[static_cast<std::size_t>(it)] * 2.0 * kPi / n_phi;
      frame_[j][0] = Vec3(st * cp, st * sp, ct);
      frame_[j][1] = Vec3(ct * cp, ct * sp, -st);
      frame_[j][2] = Vec3(-sp, cp, 0.0);
    }
  }
}

int SphereGrid::band() const { return std::min(n_theta_ - 1, (n_phi_ - 1) / 2); }

Eigen::MatrixXd harmonic_matrix(const SphereGrid& grid, int L_max) {
  const int nc = coefficient_count(L_max);
  Eigen::MatrixXd Y(grid.size(), nc);
  std::vector<double> row(static_cast<std::size_t>(nc));
  for (int j = 0; j < grid.size(); ++j) {
    harmonics_at(L_max, grid.theta(j), grid.phi(j), row.data(), nullptr, nullptr);
    for (int c = 0; c < nc; ++c) Y(j, c) = row[static_cast<std::size_t>(c)];
  }
  return Y;
}

SphereTransform::SphereTransform(const SphereGrid& grid, int L_max) : grid_(grid), L_(L_max) {
  if (L_max < 0) throw std::invalid_argument("SphereTransform: L_max < 0");
  synthesis_ = harmonic_matrix(grid, L_max);
  Eigen::Map<const Eigen::VectorXd> w(grid.weights().data(), grid.size());
  analysis_ = synthesis_.transpose() * w.asDiagonal();
}

HarmonicCoefficients SphereTransform::analyze(std::span<const double> field) const {
  if (static_cast<int>(field.size()) != grid_.size())
    throw std::invalid_argument("analyze: field has " + std::to_string(field.size()) +
                                " samples, grid has " + std::to_string(grid_.size()));
  Eigen::Map<const Eigen::VectorXd> f(field.data(), grid_.size());
  HarmonicCoefficients out(L_);
  Eigen::Map<Eigen::VectorXd>(out.c.data(), static_cast<Eigen::Index>(out.c.size())) = analysis_ * f;
  return out;
}

std::vector<double> SphereTransform::synthesize(const HarmonicCoefficients& coeffs) const {
  if (coeffs.L_max != L_) throw std::invalid_argument("synthesize: band limit mismatch");
  Eigen::Map<const Eigen::VectorXd> c(coeffs.c.data(), static_cast<Eigen::Index>(coeffs.c.size()));
  std::vector<double> out(static_cast<std::size_t>(grid_.size()));
  Eigen::Map<Eigen::VectorXd>(out.data(), grid_.size()) = synthesis_ * c;
  return out;
}

HarmonicCoefficients analyze(std::span<const double> field, const SphereGrid& grid, int L_max) {
  return SphereTransform(grid, L_max).analyze(field);
}

std::vector<double> synthesize(const HarmonicCoefficients& coeffs, const SphereGrid& grid) {
  return SphereTransform(grid, coeffs.L_max).synthesize(coeffs);
}

SphereCalculus::SphereCalculus(const SphereGrid& grid) : grid_(grid) {
  const int L = grid.band();
  const int nc = coefficient_count(L);
  const int n = grid.size();
  std::array<Eigen::MatrixXd, 3> G;
  for (auto& g : G) g.resize(n, nc);
  std::vector<double> y(static_cast<std::size_t>(nc)), yt(y.size()), yp(y.size());
  for (int j = 0; j < n; ++j) {
    harmonics_at(L, grid.theta(j), grid.phi(j), y.data(), yt.data(), yp.data());
    const double st = std::sin(grid.theta(j));
    for (int c = 0; c < nc; ++c) {
      const double gt = yt[static_cast<std::size_t>(c)];
      const double gp = yp[static_cast<std::size_t>(c)] / st;
      for (int a = 0; a < 3; ++a) G[static_cast<std::size_t>(a)](j, c) = gt * grid.e_theta(j)[a] + gp * grid.e_phi(j)[a];
    }
  }
  Eigen::Map<const Eigen::VectorXd> w(grid.weights().data(), n);
  const Eigen::MatrixXd analysis = harmonic_matrix(grid, L).transpose() * w.asDiagonal();
  for (int a = 0; a < 3; ++a) d_[static_cast<std::size_t>(a)] = G[static_cast<std::size_t>(a)] * analysis;
}

std::vector<double> SphereCalculus::apply(int axis, std::span<const double> f) const {
  if (static_cast<int>(f.size()) != grid_.size()) throw std::invalid_argument("SphereCalculus: size mismatch");
  Eigen::Map<const Eigen::VectorXd> in(f.data(), grid_.size());
  std::vector<double> out(f.size());
  Eigen::Map<Eigen::VectorXd>(out.data(), grid_.size()) = d_[static_cast<std::size_t>(axis)] * in;
  return out;
}

SphereCalculus::Ambient SphereCalculus::gradient(std::span<const double> f) const {
  return {apply(0, f), apply(1, f), apply(2, f)};
}

std::vector<double> SphereCalculus::divergence(const Ambient& v) const {
  std::vector<double> out(static_cast<std::size_t>(grid_.size()), 0.0);
  for (int a = 0; a < 3; ++a) {
    const auto da = apply(a, v[static_cast<std::size_t>(a)]);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += da[j];
  }
  return out;
}

std::vector<double> SphereCalculus::laplacian(std::span<const double> f) const {
  return divergence(gradient(f));
}

std::array<std::vector<double>, 2> SphereCalculus::to_frame(const Ambient& v) const {
  const int n = grid_.size();
  std::array<std::vector<double>, 2> out{std::vector<double>(static_cast<std::size_t>(n)),
                                         std::vector<double>(static_cast<std::size_t>(n))};
  for (int j = 0; j < n; ++j) {
    const std::size_t s = static_cast<std::size_t>(j);
    const Vec3 w(v[0][s], v[1][s], v[2][s]);
    out[0][s] = w.dot(grid_.e_theta(j));
    out[1][s] = w.dot(grid_.e_phi(j));
  }
  return out;
}

SphereCalculus::Ambient SphereCalculus::from_frame(std::span<const double> v1,
                                                   std::span<const double> v2) const {
  const int n = grid_.size();
  Ambient out;
  for (auto& c : out) c.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const std::size_t s = static_cast<std::size_t>(j);
    const Vec3 w = v1[s] * grid_.e_theta(j) + v2[s] * grid_.e_phi(j);
    for (int a = 0; a < 3; ++a) out[static_cast<std::size_t>(a)][s] = w[a];
  }
  return out;
}

std::array<std::vector<double>, 2> SphereCalculus::gradient_frame(std::span<const double> f) const {
  return to_frame(gradient(f));
}

std::array<std::vector<double>, 2> SphereCalculus::tensor_divergence(
    std::span<const double> t11, std::span<const double> t12, std::span<const double> t22) const {
  const int n = grid_.size();
  // ambient components T_ab = t_AB eA_a eB_b
  std::array<std::vector<double>, 6> T;
  for (auto& c : T) c.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const std::size_t s = static_cast<std::size_t>(j);
    const Vec3& e1 = grid_.e_theta(j);
    const Vec3& e2 = grid_.e_phi(j);
    const Mat3 t = t11[s] * e1 * e1.transpose() + t12[s] * (e1 * e2.transpose() + e2 * e1.transpose()) +
                   t22[s] * e2 * e2.transpose();
    for (int a = 0; a < 3; ++a)
      for (int b = a; b < 3; ++b) T[static_cast<std::size_t>(Sym3::slot(a, b))][s] = t(a, b);
  }
  // (div T)_b = sum_a D_a T_ab, then project onto the frame
  Ambient div;
  for (auto& c : div) c.assign(static_cast<std::size_t>(n), 0.0);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      const auto d = apply(a, T[static_cast<std::size_t>(Sym3::slot(a, b))]);
      for (std::size_t s = 0; s < d.size(); ++s) div[static_cast<std::size_t>(b)][s] += d[s];
    }
  }
  return to_frame(div);
}

std::vector<double> SphereCalculus::double_divergence(std::span<const double> t11,
                                                      std::span<const double> t12,
                                                      std::span<const double> t22) const {
  const auto v = tensor_divergence(t11, t12, t22);
  return divergence(from_frame(v[0], v[1]));
}

std::array<std::array<std::vector<double>, 2>, 2> SphereCalculus::covariant_derivative(
    std::span<const double> w1, std::span<const double> w2) const {
  const Ambient W = from_frame(w1, w2);
  // DW[a][b] = D_a W_b
  std::array<std::array<std::vector<double>, 3>, 3> DW;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) DW[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = apply(a, W[static_cast<std::size_t>(b)]);
  const int n = grid_.size();
  std::array<std::array<std::vector<double>, 2>, 2> out;
  for (auto& row : out)
    for (auto& c : row) c.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const std::size_t s = static_cast<std::size_t>(j);
    Mat3 m;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) m(a, b) = DW[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)][s];
    const Vec3 e[2] = {grid_.e_theta(j), grid_.e_phi(j)};
    for (int A = 0; A < 2; ++A)
      for (int B = 0; B < 2; ++B) out[static_cast<std::size_t>(A)][static_cast<std::size_t>(B)][s] = e[A].dot(m * e[B]);
  }
  return out;
}

}  // namespace schwarzstatic
