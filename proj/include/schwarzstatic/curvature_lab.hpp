#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schwarzstatic/exec.hpp"
#include "schwarzstatic/shell.hpp"

namespace schwarzstatic {

/// Metric on a shell grid, (r, theta, phi) chart components.
struct MetricField {
  ShellGrid grid;
  std::vector<Sym3> chart;
};

MetricField schwarzschild_conformal_metric(const SchwarzschildParams& p, const ShellGrid& grid);
MetricField flat_metric(const ShellGrid& grid);
std::vector<double> schwarzschild_log_potential(const SchwarzschildParams& p, const ShellGrid& grid);

/// Cartesian gradient D_k F = n_k dF/dr + (1/r) (grad_S F)_k of field blocks
/// (rows = shell nodes, columns = fields).
class ShellDifferentiator {
 public:
  explicit ShellDifferentiator(const ShellGrid& grid);
  const ShellGrid& grid() const { return grid_; }
  std::array<Eigen::MatrixXd, 3> gradient(const Eigen::MatrixXd& f, Exec exec) const;
  /// D_k D_l F packed by Sym3::slot(k, l).
  std::array<Eigen::MatrixXd, 6> hessian(const Eigen::MatrixXd& f, Exec exec) const;

 private:
  ShellGrid grid_;
  RadialStencils radial_;
  SphereCalculus sphere_;
  Eigen::MatrixXd normals_;  // n_ang x 3
};

/// (Ric_g - 2 du (x) du, Delta_g u); tensor part in chart components.
struct StaticResidual {
  std::vector<Sym3> tensor;
  std::vector<double> scalar;
  double max_tensor() const;
  double max_scalar() const;
};

/// Throws std::domain_error if g is not positive-definite at some node.
StaticResidual conformal_static_residual(const MetricField& g, std::span<const double> u,
                                         Exec exec = Exec::Parallel);

/// Directional derivative of the conformal static operator at (g_sc, u_sc).
/// Bulk tensor and boundary metric are in the frame (d_r, e_1, e_2); boundary rows live
/// on the first radial ring, which must be r0.
struct LinearizedOperator {
  ShellGrid grid;
  std::vector<Sym3> tensor;
  std::vector<double> scalar;
  std::vector<std::array<double, 3>> boundary_metric;  // (11, 12, 22)
  std::vector<double> boundary_mean_curvature;
  double epsilon = 0;  ///< absolute step used
};

/// epsilon is relative to the largest direction component. Throws std::domain_error if a
/// perturbed metric loses positive-definiteness.
LinearizedOperator linearize_at_schwarzschild(const DeformationPair& direction,
                                              const SchwarzschildParams& p, double epsilon = 1e-4,
                                              Exec exec = Exec::Parallel);

}  // namespace schwarzstatic
