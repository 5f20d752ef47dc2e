#include "schwarzstatic/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace schwarzstatic {

namespace {

void check_boundary(const ShellGrid& grid, const SchwarzschildParams& p) {
  p.validate();
  if (std::fabs(grid.radial.front() - p.r0) > 1e-12 * p.r0)
    throw std::invalid_argument("gauge: first radial node must be r0");
}

constexpr double kGaussX[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                               0.8611363115940526};
constexpr double kGaussW[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                               0.3478548451374538};

}  // namespace

Eigen::Matrix2d ParallelFrame::gram(std::size_t node) const {
  const int ir = static_cast<int>(node / static_cast<std::size_t>(grid.n_ang()));
  const int ia = static_cast<int>(node % static_cast<std::size_t>(grid.n_ang()));
  const double rho2 = background_at(params, grid.radial[ir]).rho2;
  const double s = std::sin(grid.sphere.theta(ia));
  Eigen::Matrix2d gamma;
  gamma << rho2, 0.0, 0.0, rho2 * s * s;
  const auto& c = coords[node];
  Eigen::Matrix2d e;
  e << c[0], c[2], c[1], c[3];
  return e.transpose() * gamma * e;
}

ParallelFrame parallel_frame(const SchwarzschildParams& p, const ShellGrid& grid) {
  ParallelFrame f{grid, p, std::vector<std::array<double, 4>>(grid.size())};
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double inv = 1.0 / std::sqrt(background_at(p, grid.radial[ir]).rho2);
    for (int ia = 0; ia < grid.n_ang(); ++ia)
      f.coords[grid.index(ir, ia)] = {inv, 0.0, 0.0, inv / std::sin(grid.sphere.theta(ia))};
  }
  return f;
}

GaugeVectorField build_gauge_field(const DeformationSampler& sampler, const SchwarzschildParams& p,
                                   const ShellGrid& grid, const GaugeOptions& opts, Exec exec) {
  check_boundary(grid, p);
  const int n_ang = grid.n_ang();
  const auto n = static_cast<std::size_t>(n_ang);
  const SphereCalculus calc(grid.sphere);

  auto slice = [&](double r) {
    DeformationSlice s = sampler(r);
    if (s.g.size() != n) throw std::invalid_argument("build_gauge_field: sampler slice size mismatch");
    return s;
  };

  GaugeVectorField X;
  X.grid = grid;
  X.x_perp.assign(grid.size(), 0.0);
  X.dx_perp.assign(grid.size(), 0.0);
  X.x_tan.assign(grid.size(), {0.0, 0.0});
  X.dx_tan.assign(grid.size(), {0.0, 0.0});

  // x_perp = -1/2 int_{r0}^r g~_rr
  std::vector<double> acc(n, 0.0);
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    if (ir > 0) {
      const double a = grid.radial[ir - 1], b = grid.radial[ir];
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (int q = 0; q < 4; ++q) {
        const DeformationSlice s = slice(mid + half * kGaussX[q]);
        const double w = -0.5 * half * kGaussW[q];
        detail::for_each_index(exec, n_ang, [&](std::ptrdiff_t j) {
          acc[static_cast<std::size_t>(j)] += w * s.g[static_cast<std::size_t>(j)](0, 0);
        });
      }
    }
    const DeformationSlice s = slice(grid.radial[ir]);
    for (int ia = 0; ia < n_ang; ++ia) {
      X.x_perp[grid.index(ir, ia)] = acc[static_cast<std::size_t>(ia)];
      X.dx_perp[grid.index(ir, ia)] = -0.5 * s.g[static_cast<std::size_t>(ia)](0, 0);
    }
  }

  // Tangential part. State: [G_1, G_2, X_1, X_2] per node, G_A = e^_A(x_perp) on the unit sphere.
  auto rhs = [&](const OdeState& y, OdeState& dy, double r) {
    const DeformationSlice s = slice(r);
    const BackgroundAt b = background_at(p, r);
    const double inv_rho = 1.0 / std::sqrt(b.rho2);
    std::vector<double> grr(n);
    for (std::size_t j = 0; j < n; ++j) grr[j] = s.g[j](0, 0);
    const auto dg = calc.gradient_frame(grr);
    for (std::size_t j = 0; j < n; ++j) {
      for (int A = 0; A < 2; ++A) {
        const std::size_t iG = static_cast<std::size_t>(A) * n + j;
        const std::size_t iX = (2 + static_cast<std::size_t>(A)) * n + j;
        dy[iG] = -0.5 * dg[static_cast<std::size_t>(A)][j];
        dy[iX] = 0.5 * b.H_sc * y[iX] - s.g[j](0, 1 + A) - y[iG] * inv_rho;
      }
    }
  };

  OdeState y(4 * n, 0.0), dy(4 * n, 0.0);
  integrate_to_times(rhs, y, grid.radial.front(), grid.radial.nodes(), opts.ode,
                     [&](std::size_t k, double r, const OdeState& state) {
                       rhs(state, dy, r);
                       for (std::size_t j = 0; j < n; ++j) {
                         const std::size_t node = grid.index(static_cast<int>(k), static_cast<int>(j));
                         X.x_tan[node] = {state[2 * n + j], state[3 * n + j]};
                         X.dx_tan[node] = {dy[2 * n + j], dy[3 * n + j]};
                       }
                     });
  return X;
}

GaugeResult apply_gauge(const DeformationPair& d, const GaugeVectorField& X, const SchwarzschildParams& p,
                        double tolerance, Exec exec) {
  d.validate();
  p.validate();
  const ShellGrid& grid = d.grid;
  if (X.grid.size() != grid.size() || X.grid.n_ang() != grid.n_ang() || X.x_perp.size() != grid.size())
    throw std::invalid_argument("apply_gauge: grids differ");
  const SphereCalculus calc(grid.sphere);
  const int n_ang = grid.n_ang();

  GaugeResult res;
  res.pair = d;
  res.pair.global_geodesic_gauge = false;
  detail::for_each_index(exec, grid.n_r(), [&](std::ptrdiff_t irp) {
    const int ir = static_cast<int>(irp);
    const BackgroundAt b = background_at(p, grid.radial[ir]);
    const double inv_rho = 1.0 / std::sqrt(b.rho2);
    const std::size_t o = grid.index(ir, 0);
    const std::span<const double> xp(X.x_perp.data() + o, static_cast<std::size_t>(n_ang));
    std::vector<double> x1(static_cast<std::size_t>(n_ang)), x2(x1.size());
    for (std::size_t j = 0; j < x1.size(); ++j) {
      x1[j] = X.x_tan[o + j][0];
      x2[j] = X.x_tan[o + j][1];
    }
    const auto grad = calc.gradient_frame(xp);
    const auto cov = calc.covariant_derivative(x1, x2);
    for (std::size_t j = 0; j < x1.size(); ++j) {
      const std::size_t i = o + j;
      Sym3& g = res.pair.g[i];
      g(0, 0) += 2.0 * X.dx_perp[i];
      for (int A = 0; A < 2; ++A) {
        const auto a = static_cast<std::size_t>(A);
        g(0, 1 + A) += X.dx_tan[i][a] + grad[a][j] * inv_rho - 0.5 * b.H_sc * X.x_tan[i][a];
      }
      for (int A = 0; A < 2; ++A)
        for (int B = A; B < 2; ++B) {
          const auto a = static_cast<std::size_t>(A), c = static_cast<std::size_t>(B);
          double v = (cov[a][c][j] + cov[c][a][j]) * inv_rho;
          if (A == B) v += X.x_perp[i] * b.H_sc;
          g(1 + A, 1 + B) += v;
        }
      res.pair.u[i] += X.x_perp[i] * b.du_sc;
    }
  });
  res.max_radial = res.pair.max_radial();
  res.ok = res.max_radial <= tolerance;
  res.pair.global_geodesic_gauge = res.ok;
  return res;
}

}  // namespace schwarzstatic
