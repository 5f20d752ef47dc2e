#include "schwarzstatic/synthetic.hpp"

#include <cmath>
#include <random>

namespace schwarzstatic {

RandomDeformation::RandomDeformation(const SchwarzschildParams& p, const SphereGrid& sphere, std::uint64_t seed,
                                     const RandomFieldOptions& opts)
    : p_(p), sphere_(sphere), opts_(opts), Y_(harmonic_matrix(sphere, opts.L)), terms_(7) {
  p.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), decay(opts.decay_min, opts.decay_max);
  for (auto& field : terms_)
    for (int l = 0; l <= opts.L; ++l)
      for (int k = -l; k <= l; ++k) {
        const double c = opts.amplitude * unit(rng) / (1.0 + l);
        field.push_back({coefficient_slot(l, k), c, decay(rng)});
      }
}

DeformationSlice RandomDeformation::operator()(double r) const {
  const int nc = coefficient_count(opts_.L);
  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(nc, 7);
  for (std::size_t f = 0; f < terms_.size(); ++f)
    for (const Term& t : terms_[f]) coef(t.slot, static_cast<Eigen::Index>(f)) += t.coef * std::pow(p_.r0 / r, t.q);
  const Eigen::MatrixXd vals = Y_ * coef;

  DeformationSlice s;
  const int n = sphere_.size();
  s.g.resize(static_cast<std::size_t>(n));
  s.u.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Sym3 C;
    for (int c = 0; c < 6; ++c) C.c[static_cast<std::size_t>(c)] = vals(j, c);
    if (opts_.tangential) {
      const Vec3& nn = sphere_.normal(j);
      const Mat3 P = Mat3::Identity() - nn * nn.transpose();
      C = Sym3::from(P * C.matrix() * P);
    }
    Sym3 g = cartesian_to_frame(C, p_, r, sphere_, j);
    if (opts_.tangential) g(0, 0) = g(0, 1) = g(0, 2) = 0.0;
    s.g[static_cast<std::size_t>(j)] = g;
    s.u[static_cast<std::size_t>(j)] = vals(j, 6);
  }
  return s;
}

Mat3 conformal_metric_cartesian(const SchwarzschildParams& p, const Vec3& x) {
  const double r = x.norm();
  const Vec3 n = x / r;
  const double rho2 = r * (r - 2.0 * p.m);
  const Mat3 nn = n * n.transpose();
  return nn + (rho2 / (r * r)) * (Mat3::Identity() - nn);
}

Mat3 lie_derivative_by_flow(const VectorField& Y, const CartesianMetric& g, const Vec3& x, double t, double dx) {
  auto flow = [&](Vec3 y, double time) {
    const int steps = 2;
    const double h = time / steps;
    for (int s = 0; s < steps; ++s) {
      const Vec3 k1 = Y(y), k2 = Y(y + 0.5 * h * k1), k3 = Y(y + 0.5 * h * k2), k4 = Y(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
  };
  auto pullback = [&](double time) {
    Mat3 J;  // J(a, i) = d_i Phi^a
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = dx;
      J.col(i) = (-flow(x + 2 * e, time) + 8.0 * flow(x + e, time) - 8.0 * flow(x - e, time) + flow(x - 2 * e, time)) /
                 (12.0 * dx);
    }
    return Mat3(J.transpose() * g(flow(x, time)) * J);
  };
  auto central = [&](double time) { return Mat3((pullback(time) - pullback(-time)) / (2.0 * time)); };
  const Mat3 L = (4.0 * central(0.5 * t) - central(t)) / 3.0;
  return 0.5 * (L + L.transpose());
}

VectorField random_boundary_vanishing_field(const SchwarzschildParams& p, std::uint64_t seed, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec3 a;
  Mat3 B;
  for (int i = 0; i < 3; ++i) a[i] = amplitude * unit(rng);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = amplitude * unit(rng) / p.r0;
  const double r0 = p.r0;
  return [a, B, r0](const Vec3& x) {
    const double r = x.norm();
    const double s = (r - r0) * std::pow(r0 / r, 3);
    return Vec3(s * (a + B * x));
  };
}

DeformationSampler lie_derivative_sampler(const VectorField& Y, const SchwarzschildParams& p, const SphereGrid& sphere) {
  return [Y, p, sphere](double r) {
    const CartesianMetric g = [p](const Vec3& x) { return conformal_metric_cartesian(p, x); };
    const BackgroundAt b = background_at(p, r);
    DeformationSlice s;
    s.g.resize(static_cast<std::size_t>(sphere.size()));
    s.u.resize(s.g.size());
    for (int j = 0; j < sphere.size(); ++j) {
      const Vec3 x = r * sphere.normal(j);
      s.g[static_cast<std::size_t>(j)] = cartesian_to_frame(Sym3::from(lie_derivative_by_flow(Y, g, x)), p, r, sphere, j);
      s.u[static_cast<std::size_t>(j)] = Y(x).dot(sphere.normal(j)) * b.du_sc;
    }
    return s;
  };
}

GaugeVectorField gauge_field_from_vector(const VectorField& Y, const SchwarzschildParams& p, const ShellGrid& grid) {
  auto comps = [&](double r, int j) {
    const Vec3 y = Y(r * grid.sphere.normal(j));
    const double s = std::sqrt(background_at(p, r).rho2) / r;
    return Eigen::Vector3d(y.dot(grid.sphere.normal(j)), s * y.dot(grid.sphere.e_theta(j)),
                           s * y.dot(grid.sphere.e_phi(j)));
  };
  const double h = 1e-3 * (p.r0 - 2.0 * p.m0());
  GaugeVectorField X;
  X.grid = grid;
  X.x_perp.resize(grid.size());
  X.dx_perp.resize(grid.size());
  X.x_tan.resize(grid.size());
  X.dx_tan.resize(grid.size());
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double r = grid.radial[ir];
    for (int j = 0; j < grid.n_ang(); ++j) {
      const std::size_t i = grid.index(ir, j);
      const Eigen::Vector3d v = comps(r, j);
      const Eigen::Vector3d dv =
          (-comps(r + 2 * h, j) + 8.0 * comps(r + h, j) - 8.0 * comps(r - h, j) + comps(r - 2 * h, j)) / (12.0 * h);
      X.x_perp[i] = v[0];
      X.dx_perp[i] = dv[0];
      X.x_tan[i] = {v[1], v[2]};
      X.dx_tan[i] = {dv[1], dv[2]};
    }
  }
  return X;
}

}  // namespace schwarzstatic
