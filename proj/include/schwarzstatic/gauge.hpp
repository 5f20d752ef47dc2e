#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "schwarzstatic/exec.hpp"
#include "schwarzstatic/ode.hpp"
#include "schwarzstatic/shell.hpp"

namespace schwarzstatic {

/// Radially parallel g_sc-orthonormal frame on each S_r, (theta, phi) coordinate components:
/// e_1 = d_theta / sqrt(rho2), e_2 = d_phi / (sin(theta) sqrt(rho2)).
struct ParallelFrame {
  ShellGrid grid;
  SchwarzschildParams params;
  std::vector<std::array<double, 4>> coords;  // e1^theta, e1^phi, e2^theta, e2^phi

  /// Gram matrix g_sc(e_A, e_B) at a node.
  Eigen::Matrix2d gram(std::size_t node) const;
};

ParallelFrame parallel_frame(const SchwarzschildParams& p, const ShellGrid& grid);

/// X = x_perp d_r + x_tan^A e_A with radial derivatives, vanishing on r0.
struct GaugeVectorField {
  ShellGrid grid;
  std::vector<double> x_perp, dx_perp;
  std::vector<std::array<double, 2>> x_tan, dx_tan;
};

struct GaugeOptions {
  OdeOptions ode{1e-12, 1e-14};
};

/// Builds X with g~ + L_X g_sc radially transverse. g~ is sampled on demand so the
/// radial quadrature (composite 4-point Gauss per cell) and the tangential ODE can
/// evaluate between grid radii. The first radial node must be r0.
GaugeVectorField build_gauge_field(const DeformationSampler& g, const SchwarzschildParams& p,
                                   const ShellGrid& grid, const GaugeOptions& opts = {},
                                   Exec exec = Exec::Parallel);

struct GaugeResult {
  DeformationPair pair;
  double max_radial = 0;  ///< max |g~(d_r, .)| after the gauge transformation
  bool ok = false;        ///< max_radial <= tolerance
};

/// (g~ + L_X g_sc, u~ + X(u_sc)). The flag global_geodesic_gauge is set iff ok.
GaugeResult apply_gauge(const DeformationPair& d, const GaugeVectorField& X,
                        const SchwarzschildParams& p, double tolerance = 1e-8,
                        Exec exec = Exec::Parallel);

}  // namespace schwarzstatic
