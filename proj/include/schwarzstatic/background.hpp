#pragma once

#include <span>
#include <vector>

#include "schwarzstatic/tensor.hpp"

namespace schwarzstatic {

/// Schwarzschild exterior {r >= r0}. The mass may be negative.
struct SchwarzschildParams {
  double m = 0.0;
  double r0 = 1.0;

  /// Validating constructor; throws std::domain_error unless r0 > 2 max(0, m).
  static SchwarzschildParams make(double m, double r0);

  double m0() const { return m > 0.0 ? m : 0.0; }
  void validate() const;
};

/// Background quantities on the sphere S_r.
struct BackgroundAt {
  double r = 0;
  double f_sc = 0;     ///< sqrt(1 - 2m/r)
  double u_sc = 0;     ///< ln f_sc
  double du_sc = 0;    ///< m / rho2
  double H_sc = 0;     ///< 2(r - m) / rho2
  double rho2 = 0;     ///< r (r - 2m)
  double R_gamma = 0;  ///< 2 / rho2
};

BackgroundAt background_at(const SchwarzschildParams& p, double r);

/// Chart (r, theta, phi) components of the conformal metric g_sc = dr^2 + rho2 gamma_S2.
Sym3 conformal_metric_chart(const SchwarzschildParams& p, double r, double theta);
/// Chart components of the physical metric: (1 - 2m/r)^{-1} dr^2 + r^2 gamma_S2.
Sym3 physical_metric_chart(const SchwarzschildParams& p, double r, double theta);

struct ConformalPair {
  std::vector<Sym3> g;
  std::vector<double> u;
};
struct StaticPair {
  std::vector<Sym3> metric;
  std::vector<double> f;
};

/// (f, metric) -> (f^2 metric, ln f). Throws std::domain_error if some f <= 0.
ConformalPair conformal_forward(std::span<const double> f, std::span<const Sym3> metric);
/// (g, u) -> (e^{-2u} g, e^u).
StaticPair conformal_inverse(std::span<const Sym3> g, std::span<const double> u);

/// Boundary data of the static metric from conformal data:
/// induced metric e^{-2u} g^T and mean curvature e^u (H_g - 2 nu_g(u)).
double static_mean_curvature(double H_g, double nu_u, double u);

/// Deformation of the conformal pair induced by a static deformation at radius r.
/// Tensors are in the chart; theta enters through the g_sc angular block.
struct DeformationPoint {
  Sym3 g;
  double u = 0;
};
struct StaticDeformationPoint {
  Sym3 gamma;
  double f = 0;
};
DeformationPoint deformation_forward(const Sym3& gamma_t, double f_t, const SchwarzschildParams& p,
                                     double r, double theta);
StaticDeformationPoint deformation_inverse(const Sym3& g_t, double u_t,
                                           const SchwarzschildParams& p, double r, double theta);

/// Round Bartnik data (area radius, constant mean curvature).
struct RoundData {
  double rho = 1.0;
  double h = 2.0;
};

RoundData bartnik_data(const SchwarzschildParams& p);

struct RoundMatch {
  double m = 0;
  double r0 = 0;
  bool horizon_degenerate = false;  ///< h == 0: m = rho/2, boundary of the valid set
  bool valid = false;               ///< r0 > 2 max(0, m)
  SchwarzschildParams params() const { return SchwarzschildParams::make(m, r0); }
};

/// Closed-form Schwarzschild pair with the given round data. Throws for h < 0 or rho <= 0.
RoundMatch match_round_data(const RoundData& d);

}  // namespace schwarzstatic
