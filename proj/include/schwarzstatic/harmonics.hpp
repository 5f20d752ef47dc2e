#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schwarzstatic/exec.hpp"
#include "schwarzstatic/tensor.hpp"

namespace schwarzstatic {

/// Real spherical harmonic index: degree ell >= 0, order |k| <= ell.
struct ModeIndex {
  int ell = 0;
  int k = 0;
};

/// Throws std::out_of_range for an invalid index.
void validate(const ModeIndex& idx);

constexpr int coefficient_count(int L_max) { return (L_max + 1) * (L_max + 1); }
constexpr int coefficient_slot(int ell, int k) { return ell * ell + ell + k; }

/// L2-orthonormal real harmonic. k > 0 carries cos(k phi), k < 0 carries sin(|k| phi);
/// no Condon-Shortley phase.
double sh_eval(const ModeIndex& idx, double theta, double phi);

struct HarmonicValue {
  double value = 0;
  double d_theta = 0;
  double d_phi = 0;
};
/// Value and angular derivatives. Away from the poles only (d_theta uses 1/sin theta).
HarmonicValue sh_eval_with_derivatives(const ModeIndex& idx, double theta, double phi);

/// Normalized associated Legendre functions Pbar_l^k(cos theta) for 0 <= k <= l <= L,
/// with d/dtheta; Y_l0 = Pbar_l^0.
struct LegendreTable {
  int L = 0;
  std::vector<double> p, dp;
  double value(int l, int k) const { return p[static_cast<std::size_t>(l * (l + 1) / 2 + k)]; }
  double d_theta(int l, int k) const { return dp[static_cast<std::size_t>(l * (l + 1) / 2 + k)]; }
};
LegendreTable normalized_legendre(int L, double theta);

/// Gauss-Legendre nodes in cos(theta) x uniform longitudes. Node j = it * n_phi + ip.
class SphereGrid {
 public:
  SphereGrid() = default;
  SphereGrid(int n_theta, int n_phi);
  /// Smallest grid integrating degree-2L products exactly.
  static SphereGrid for_band(int L) { return SphereGrid(L + 1, 2 * L + 1); }

  int n_theta() const { return n_theta_; }
  int n_phi() const { return n_phi_; }
  int size() const { return n_theta_ * n_phi_; }
  /// Largest L for which analysis of band-L fields is exact.
  int band() const;

  double theta(int j) const { return theta_[static_cast<std::size_t>(j / n_phi_)]; }
  double phi(int j) const { return phi_[static_cast<std::size_t>(j % n_phi_)]; }
  double weight(int j) const { return weight_[static_cast<std::size_t>(j)]; }
  std::span<const double> weights() const { return weight_; }

  const Vec3& normal(int j) const { return frame_[static_cast<std::size_t>(j)][0]; }
  const Vec3& e_theta(int j) const { return frame_[static_cast<std::size_t>(j)][1]; }
  const Vec3& e_phi(int j) const { return frame_[static_cast<std::size_t>(j)][2]; }

 private:
  int n_theta_ = 0, n_phi_ = 0;
  std::vector<double> theta_, phi_, weight_;
  std::vector<std::array<Vec3, 3>> frame_;
};

/// Coefficients c(ell, k) for ell <= L_max, stored at coefficient_slot(ell, k).
struct HarmonicCoefficients {
  int L_max = 0;
  std::vector<double> c;

  explicit HarmonicCoefficients(int L = 0) : L_max(L), c(static_cast<std::size_t>(coefficient_count(L)), 0.0) {}
  double& at(int ell, int k) { return c[static_cast<std::size_t>(coefficient_slot(ell, k))]; }
  double at(int ell, int k) const { return c[static_cast<std::size_t>(coefficient_slot(ell, k))]; }
};

/// Sampled harmonics on a grid: Y(j, slot).
Eigen::MatrixXd harmonic_matrix(const SphereGrid& grid, int L_max);

/// Direct O(L^4) transforms with precomputed sampled harmonics.
class SphereTransform {
 public:
  SphereTransform(const SphereGrid& grid, int L_max);

  int L_max() const { return L_; }
  const SphereGrid& grid() const { return grid_; }

  HarmonicCoefficients analyze(std::span<const double> field) const;
  std::vector<double> synthesize(const HarmonicCoefficients& coeffs) const;

  /// Batched: columns are fields.
  Eigen::MatrixXd analyze(const Eigen::MatrixXd& fields) const { return analysis_ * fields; }
  Eigen::MatrixXd synthesize(const Eigen::MatrixXd& coeffs) const { return synthesis_ * coeffs; }

 private:
  SphereGrid grid_;
  int L_ = 0;
  Eigen::MatrixXd synthesis_;  // n_nodes x n_coef
  Eigen::MatrixXd analysis_;   // n_coef x n_nodes
};

HarmonicCoefficients analyze(std::span<const double> field, const SphereGrid& grid, int L_max);
std::vector<double> synthesize(const HarmonicCoefficients& coeffs, const SphereGrid& grid);

/// Spectral calculus on the unit sphere. Vectors and tensors are handled through their
/// ambient Cartesian components, which are smooth on S^2; results are exact for
/// band-limited inputs whose derivatives stay within grid.band().
class SphereCalculus {
 public:
  explicit SphereCalculus(const SphereGrid& grid);

  const SphereGrid& grid() const { return grid_; }
  /// Node-space matrix for the i-th ambient component of the surface gradient.
  const Eigen::MatrixXd& d(int axis) const { return d_[static_cast<std::size_t>(axis)]; }

  using Ambient = std::array<std::vector<double>, 3>;

  Ambient gradient(std::span<const double> f) const;
  /// Divergence of a tangential field given by ambient components.
  std::vector<double> divergence(const Ambient& v) const;
  std::vector<double> laplacian(std::span<const double> f) const;

  /// Frame (e_theta, e_phi) components of a tangent field.
  std::array<std::vector<double>, 2> to_frame(const Ambient& v) const;
  Ambient from_frame(std::span<const double> v1, std::span<const double> v2) const;

  /// Sphere gradient in frame components.
  std::array<std::vector<double>, 2> gradient_frame(std::span<const double> f) const;
  /// Divergence of a symmetric tangential 2-tensor with frame components (11, 12, 22);
  /// returns frame components of the covector.
  std::array<std::vector<double>, 2> tensor_divergence(std::span<const double> t11,
                                                       std::span<const double> t12,
                                                       std::span<const double> t22) const;
  /// Double divergence of a symmetric tangential 2-tensor.
  std::vector<double> double_divergence(std::span<const double> t11, std::span<const double> t12,
                                        std::span<const double> t22) const;
  /// Covariant derivative (nabla_A W_B) of a tangent field in frame components; returns [A][B].
  std::array<std::array<std::vector<double>, 2>, 2> covariant_derivative(
      std::span<const double> w1, std::span<const double> w2) const;

 private:
  std::vector<double> apply(int axis, std::span<const double> f) const;

  SphereGrid grid_;
  std::array<Eigen::MatrixXd, 3> d_;
};

}  // namespace schwarzstatic
