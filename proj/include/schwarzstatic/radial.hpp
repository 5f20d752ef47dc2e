#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "schwarzstatic/exec.hpp"

namespace schwarzstatic {

/// Increasing radial nodes, first node is the boundary sphere.
class RadialGrid {
 public:
  RadialGrid() = default;
  explicit RadialGrid(std::vector<double> nodes);
  static RadialGrid uniform(double r_in, double r_out, int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  double operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  double max_spacing() const;

 private:
  std::vector<double> nodes_;
};

/// Finite-difference weights (Fornberg). Returns w[j][d] for derivative orders d = 0..max_order
/// at z from the given nodes.
std::vector<std::vector<double>> fd_weights(double z, std::span<const double> nodes, int max_order);

/// Radial differentiation of the given even accuracy (default 4): central stencils inside,
/// one-sided closures at both ends (accuracy+1 points for d/dr, accuracy+2 for d2/dr2).
class RadialStencils {
 public:
  explicit RadialStencils(const RadialGrid& grid, int accuracy = 4);

  struct Stencil {
    int first = 0;
    std::vector<double> w;
  };
  const Stencil& first(int i) const { return d1_[static_cast<std::size_t>(i)]; }
  const Stencil& second(int i) const { return d2_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(d1_.size()); }

  /// Field blocks have rows ordered radius-major: row = ir * n_ang + ia, one column per field.
  Eigen::MatrixXd derivative(const Eigen::MatrixXd& f, int n_ang, int order, Exec exec) const;
  std::vector<double> derivative(std::span<const double> f, int n_ang, int order, Exec exec) const;

 private:
  std::vector<Stencil> d1_, d2_;
};

}  // namespace schwarzstatic
