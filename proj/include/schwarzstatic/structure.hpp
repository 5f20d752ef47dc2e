#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "schwarzstatic/curvature_lab.hpp"
#include "schwarzstatic/exec.hpp"
#include "schwarzstatic/ode.hpp"
#include "schwarzstatic/shell.hpp"

namespace schwarzstatic {

/// Linearized foliation data; tangential tensors in the parallel frame, packed (11, 12, 22).
struct FoliationDeformation {
  ShellGrid grid;
  std::vector<std::array<double, 3>> gamma;
  std::vector<double> H;
  std::vector<std::array<double, 3>> K;  ///< traceless part of the second fundamental form
  std::vector<double> u;

  double max_trace_K() const;
  void validate() const;
};

/// From a deformation in global geodesic gauge: gamma~ = g~^T, H~ = 1/2 d_r tr gamma~,
/// K~ = 1/2 (d_r gamma~)^traceless (radial derivatives by 4th-order differences).
FoliationDeformation foliation_from_gauge_fixed(const DeformationPair& d, const SchwarzschildParams& p,
                                                Exec exec = Exec::Parallel);

/// d/dm of the Schwarzschild family, with exact H~ = 2/(r-2m)^2 and K~ = 0.
FoliationDeformation mass_variation_foliation(const SchwarzschildParams& p, const ShellGrid& grid);

struct StructureOptions {
  bool flip_dg4_sign = false;  ///< mutation hook for testing the oracle comparison
};

/// Left-minus-right sides of the five structure equations at every node:
///   dg2 = d_r H~ + H H~ + 4 u_r d_r u~
///   dg4 = -4 u_r d_r u~ + H H~ - R'_gamma(gamma~)
///   dg5 = 2 u_r e_A(u~) - Div K~ + 1/2 e_A(H~)
///   dg3 = L_{d_r} K~ (frame components d_r K~ + H K~)
///   dg1 = d_r^2 u~ + H d_r u~ + Delta_gamma u~ + u_r H~
struct StructureResiduals {
  std::vector<double> dg2, dg4;
  std::vector<std::array<double, 2>> dg5;
  std::vector<std::array<double, 3>> dg3;
  std::vector<double> dg1;

  /// Per-equation max abs, ordered (dg2, dg4, dg5, dg3, dg1).
  std::array<double, 5> max_abs() const;
};

StructureResiduals structure_residuals(const FoliationDeformation& d, const SchwarzschildParams& p,
                                       const StructureOptions& opts = {}, Exec exec = Exec::Parallel);

/// At r0: gamma~ - 2 u~ gamma_sc (frame (11,12,22)) and H~ - 2 d_r u~ + (2/r0) u~.
struct BoundaryResiduals {
  std::vector<std::array<double, 3>> metric;
  std::vector<double> mean_curvature;
};
BoundaryResiduals boundary_residuals(const FoliationDeformation& d, const SchwarzschildParams& p,
                                     Exec exec = Exec::Parallel);

/// Linearized scalar curvature of S_r in the frame: (-Delta tr + DivDiv - tr) / rho2.
std::vector<double> scalar_curvature_variation(const SphereCalculus& calc, double rho2,
                                               std::span<const std::array<double, 3>> gamma);

/// Scalar field with two radial derivatives on a shell grid.
struct RadialJet {
  ShellGrid grid;
  std::vector<double> value, d1, d2;
};
/// Radial derivatives by 4th-order differences.
RadialJet radial_jet(const ShellGrid& grid, std::vector<double> samples, Exec exec = Exec::Parallel);
/// Jet from values and known first derivatives; d2 by 8th-order differences of the slopes.
RadialJet radial_jet(const ShellGrid& grid, std::vector<double> samples, std::vector<double> slopes,
                     Exec exec = Exec::Parallel);

/// Residual of the decoupled equation for u~, including the boundary source built from
/// u~(r0, .) and d_r u~(r0, .) on the first ring (which must be r0).
std::vector<double> decoupled_residual(const RadialJet& u, const SchwarzschildParams& p);

/// 2 r0 (r0-2m) a' - r0 l(l+1) a + 2 m a for one mode at r0.
double boundary_identity_residual(const SchwarzschildParams& p, int ell, double a, double da);
/// The same for every mode of boundary data sampled on a sphere grid.
HarmonicCoefficients boundary_identity_residual(std::span<const double> u_r0, std::span<const double> du_r0,
                                                const SphereGrid& grid, const SchwarzschildParams& p,
                                                int L_max);

/// Solves d_r H~ + H H~ + 4 u_r d_r u~ = 0 from H~(r0) along the given radii.
std::vector<double> solve_mean_curvature_variation(const SchwarzschildParams& p, double H0,
                                                   const std::function<double(double)>& du_dr,
                                                   std::span<const double> radii,
                                                   const OdeOptions& opts = {1e-12, 1e-14});

/// Solves d_r K~ + H K~ = 0 from K~(r0) along the given radii (frame components).
std::vector<std::array<double, 3>> solve_traceless_curvature(const SchwarzschildParams& p,
                                                             const std::array<double, 3>& K0,
                                                             std::span<const double> radii,
                                                             const OdeOptions& opts = {1e-12, 1e-14});

/// Max abs discrepancy between structure residuals and the oracle combinations
///   dg2 ~ -T_rr, dg4 ~ T_rr - T_11 - T_22, dg5 ~ -T_rA, dg3 ~ -(T^T)^traceless, dg1 ~ S,
/// boundary: oracle metric row ~ e^{-2u} x metric residual, oracle mean row ~ e^{u} x mean residual.
struct OracleComparison {
  std::array<double, 5> bulk{};      ///< (dg2, dg4, dg5, dg3, dg1)
  std::array<double, 2> boundary{};  ///< (metric, mean curvature)
  double max() const;
};
OracleComparison compare_with_oracle(const StructureResiduals& s, const BoundaryResiduals& b,
                                     const LinearizedOperator& lin, const SchwarzschildParams& p);

}  // namespace schwarzstatic
