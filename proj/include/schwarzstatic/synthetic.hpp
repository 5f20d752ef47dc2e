#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "schwarzstatic/gauge.hpp"
#include "schwarzstatic/shell.hpp"

namespace schwarzstatic {

/// Synthetic inputs for property tests and the self-test suites.

struct RandomFieldOptions {
  int L = 4;                ///< angular band of the Cartesian components
  double amplitude = 1.0;
  double decay_min = 1.0;   ///< radial profiles (r0/r)^q with q in [decay_min, decay_max]
  double decay_max = 3.0;
  bool tangential = false;  ///< project onto S_r (global geodesic gauge)
};

/// Random deformation whose Cartesian components are band-limited in angle and decay in r.
class RandomDeformation {
 public:
  RandomDeformation(const SchwarzschildParams& p, const SphereGrid& sphere, std::uint64_t seed,
                    const RandomFieldOptions& opts = {});

  DeformationSlice operator()(double r) const;
  DeformationSampler sampler() const {
    return [self = *this](double r) { return self(r); };
  }

 private:
  struct Term {
    int slot;
    double coef, q;
  };
  SchwarzschildParams p_;
  SphereGrid sphere_;
  RandomFieldOptions opts_;
  Eigen::MatrixXd Y_;
  std::vector<std::vector<Term>> terms_;  // 6 Cartesian components, then u
};

/// Cartesian components of g_sc = n n + (rho2/r^2)(I - n n) at x.
Mat3 conformal_metric_cartesian(const SchwarzschildParams& p, const Vec3& x);

using VectorField = std::function<Vec3(const Vec3&)>;
using CartesianMetric = std::function<Mat3(const Vec3&)>;

/// L_Y g at x from the flow of Y: d/dt of the pullback Phi_t^* g, with Phi_t by RK4,
/// its Jacobian by 4th-order differences, and a Richardson-extrapolated central difference in t.
Mat3 lie_derivative_by_flow(const VectorField& Y, const CartesianMetric& g, const Vec3& x, double t = 5e-3,
                            double dx = 5e-3);

/// Y(x) = (|x| - r0) (r0/|x|)^3 (a + B x) with random a, B; vanishes on |x| = r0.
VectorField random_boundary_vanishing_field(const SchwarzschildParams& p, std::uint64_t seed,
                                            double amplitude = 0.2);

/// (L_Y g_sc, Y(u_sc)) in frame components, via lie_derivative_by_flow.
DeformationSampler lie_derivative_sampler(const VectorField& Y, const SchwarzschildParams& p,
                                          const SphereGrid& sphere);

/// Gauge vector field of Y: x_perp = g_sc(Y, d_r), x_tan_A = g_sc(Y, e_A), radial derivatives
/// by 4th-order differences.
GaugeVectorField gauge_field_from_vector(const VectorField& Y, const SchwarzschildParams& p,
                                         const ShellGrid& grid);

}  // namespace schwarzstatic
