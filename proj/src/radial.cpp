#include "schwarzstatic/radial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schwarzstatic {

RadialGrid::RadialGrid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 6) throw std::invalid_argument("RadialGrid: need at least 6 nodes");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1])) throw std::invalid_argument("RadialGrid: nodes must increase");
}

RadialGrid RadialGrid::uniform(double r_in, double r_out, int n) {
  if (n < 6 || !(r_out > r_in)) throw std::invalid_argument("RadialGrid::uniform: bad range");
  std::vector<double> x(static_cast<std::size_t>(n));
  const double h = (r_out - r_in) / (n - 1);
  for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = r_in + h * i;
  x.back() = r_out;
  return RadialGrid(std::move(x));
}

double RadialGrid::max_spacing() const {
  double h = 0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) h = std::max(h, nodes_[i] - nodes_[i - 1]);
  return h;
}

std::vector<std::vector<double>> fd_weights(double z, std::span<const double> x, int m) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> c(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(m + 1), 0.0));
  double c1 = 1.0, c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

RadialStencils::Stencil make_stencil(const RadialGrid& g, int i, int order, int half, int width_edge) {
  const int n = g.size();
  int first, width;
  if (i >= half && i <= n - 1 - half) {
    first = i - half;
    width = 2 * half + 1;
  } else {
    width = width_edge;
    first = i < half ? 0 : n - width;
  }
  std::vector<double> pts(static_cast<std::size_t>(width));
  for (int j = 0; j < width; ++j) pts[static_cast<std::size_t>(j)] = g[first + j];
  auto w = fd_weights(g[i], pts, order);
  RadialStencils::Stencil s;
  s.first = first;
  for (auto& row : w) s.w.push_back(row[static_cast<std::size_t>(order)]);
  return s;
}

}  // namespace

RadialStencils::RadialStencils(const RadialGrid& grid, int accuracy) {
  if (accuracy < 2 || accuracy % 2 != 0 || grid.size() < accuracy + 2)
    throw std::invalid_argument("RadialStencils: accuracy must be even and fit the grid");
  const int half = accuracy / 2;
  for (int i = 0; i < grid.size(); ++i) {
    d1_.push_back(make_stencil(grid, i, 1, half, accuracy + 1));
    d2_.push_back(make_stencil(grid, i, 2, half, accuracy + 2));
  }
}

Eigen::MatrixXd RadialStencils::derivative(const Eigen::MatrixXd& f, int n_ang, int order,
                                           Exec exec) const {
  if (order != 1 && order != 2) throw std::invalid_argument("RadialStencils: order must be 1 or 2");
  const int n_r = size();
  if (f.rows() != static_cast<Eigen::Index>(n_r) * n_ang)
    throw std::invalid_argument("RadialStencils: block size does not match grid");
  Eigen::MatrixXd out(f.rows(), f.cols());
  const auto& table = order == 1 ? d1_ : d2_;
  detail::for_each_index(exec, n_r, [&](std::ptrdiff_t ir) {
    const Stencil& s = table[static_cast<std::size_t>(ir)];
    auto dst = out.middleRows(ir * n_ang, n_ang);
    dst.setZero();
    for (std::size_t j = 0; j < s.w.size(); ++j)
      dst += s.w[j] * f.middleRows((s.first + static_cast<Eigen::Index>(j)) * n_ang, n_ang);
  });
  return out;
}

std::vector<double> RadialStencils::derivative(std::span<const double> f, int n_ang, int order,
                                               Exec exec) const {
  Eigen::Map<const Eigen::VectorXd> in(f.data(), static_cast<Eigen::Index>(f.size()));
  Eigen::MatrixXd out = derivative(Eigen::MatrixXd(in), n_ang, order, exec);
  return std::vector<double>(out.data(), out.data() + out.size());
}

}  // namespace schwarzstatic
