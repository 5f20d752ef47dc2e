#pragma once

#include <functional>
#include <vector>

#include "schwarzstatic/background.hpp"
#include "schwarzstatic/harmonics.hpp"
#include "schwarzstatic/radial.hpp"
#include "schwarzstatic/tensor.hpp"

namespace schwarzstatic {

/// Radial nodes x sphere grid. Node index = ir * n_ang + ia.
struct ShellGrid {
  RadialGrid radial;
  SphereGrid sphere;

  int n_r() const { return radial.size(); }
  int n_ang() const { return sphere.size(); }
  std::size_t size() const { return static_cast<std::size_t>(n_r()) * static_cast<std::size_t>(n_ang()); }
  std::size_t index(int ir, int ia) const {
    return static_cast<std::size_t>(ir) * static_cast<std::size_t>(n_ang()) + static_cast<std::size_t>(ia);
  }
};

/// Cartesian coordinate components of the g_sc-orthonormal frame (d_r, e_1, e_2) at
/// radius r over sphere node j, as columns. e_A = r/sqrt(rho2) * (e_theta, e_phi).
Mat3 shell_frame(const SchwarzschildParams& p, double r, const SphereGrid& s, int j);
/// Dual coframe: rows are the Cartesian components of the covectors dual to shell_frame.
Mat3 shell_coframe(const SchwarzschildParams& p, double r, const SphereGrid& s, int j);
/// Coordinate basis (d_r, d_theta, d_phi) in Cartesian components, as columns.
Mat3 chart_frame(double r, const SphereGrid& s, int j);

Sym3 frame_to_cartesian(const Sym3& t_frame, const SchwarzschildParams& p, double r,
                        const SphereGrid& s, int j);
Sym3 cartesian_to_frame(const Sym3& t_cart, const SchwarzschildParams& p, double r,
                        const SphereGrid& s, int j);
Sym3 chart_to_cartesian(const Sym3& t_chart, double r, const SphereGrid& s, int j);
Sym3 cartesian_to_chart(const Sym3& t_cart, double r, const SphereGrid& s, int j);

/// One sphere of a deformation: tensor components in the frame (d_r, e_1, e_2).
struct DeformationSlice {
  std::vector<Sym3> g;
  std::vector<double> u;
};

/// Deformation evaluated on demand at any radius, over a fixed sphere grid.
using DeformationSampler = std::function<DeformationSlice(double r)>;

/// (g~, u~) on a shell grid; g~ components in the frame (d_r, e_1, e_2).
struct DeformationPair {
  ShellGrid grid;
  std::vector<Sym3> g;
  std::vector<double> u;
  bool global_geodesic_gauge = false;

  /// max over nodes of |g~(d_r, .)|.
  double max_radial() const;
  /// Throws std::invalid_argument on size mismatch or non-finite entries.
  void validate() const;
};

DeformationPair sample_deformation(const DeformationSampler& sampler, const ShellGrid& grid);

/// Mass variation d/dm of (g_sc, u_sc): g~ = -2r gamma_S2, u~ = -1/(r - 2m).
DeformationSampler mass_variation(const SchwarzschildParams& p, const SphereGrid& sphere);

}  // namespace schwarzstatic
