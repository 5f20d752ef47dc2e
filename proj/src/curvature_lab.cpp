#include "schwarzstatic/curvature_lab.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace schwarzstatic {

namespace {

constexpr int kFields = 7;  // six metric components then u

struct Jet {
  Eigen::MatrixXd f;
  std::array<Eigen::MatrixXd, 3> d1;
  std::array<Eigen::MatrixXd, 6> d2;  // Sym3::slot(k, l)
};

Jet make_jet(const ShellDifferentiator& D, Eigen::MatrixXd f, Exec exec) {
  Jet J;
  J.f = std::move(f);
  J.d1 = D.gradient(J.f, exec);
  J.d2 = D.hessian(J.f, exec);
  return J;
}

struct PointJet {
  Mat3 g;
  std::array<Mat3, 3> dg;
  std::array<std::array<Mat3, 3>, 3> ddg;
  double u;
  Vec3 du;
  Mat3 ddu;
};

Mat3 unpack(const Eigen::MatrixXd& m, Eigen::Index row) {
  Mat3 t;
  t << m(row, 0), m(row, 1), m(row, 2), m(row, 1), m(row, 3), m(row, 4), m(row, 2), m(row, 4), m(row, 5);
  return t;
}

PointJet point_jet(const Jet& J, Eigen::Index row) {
  PointJet p;
  p.g = unpack(J.f, row);
  p.u = J.f(row, 6);
  for (int k = 0; k < 3; ++k) {
    p.dg[static_cast<std::size_t>(k)] = unpack(J.d1[static_cast<std::size_t>(k)], row);
    p.du[k] = J.d1[static_cast<std::size_t>(k)](row, 6);
    for (int l = 0; l < 3; ++l) {
      const auto& m = J.d2[static_cast<std::size_t>(Sym3::slot(k, l))];
      p.ddg[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = unpack(m, row);
      p.ddu(k, l) = m(row, 6);
    }
  }
  return p;
}

PointJet axpy(const PointJet& a, double e, const PointJet& b) {
  PointJet p;
  p.g = a.g + e * b.g;
  p.u = a.u + e * b.u;
  p.du = a.du + e * b.du;
  p.ddu = a.ddu + e * b.ddu;
  for (std::size_t k = 0; k < 3; ++k) {
    p.dg[k] = a.dg[k] + e * b.dg[k];
    for (std::size_t l = 0; l < 3; ++l) p.ddg[k][l] = a.ddg[k][l] + e * b.ddg[k][l];
  }
  return p;
}

struct PointValue {
  Mat3 T;
  double lap = 0;
  double mean_curvature = 0;  // H_g of the level sets of r
  double nu_u = 0;
};

/// Ricci, Laplacian and level-set mean curvature from a pointwise jet in Cartesian
/// coordinates. n is the unit radial direction, r the radius.
PointValue evaluate(const PointJet& P, const Vec3& n, double r, std::size_t node) {
  Eigen::LLT<Mat3> llt(P.g);
  if (llt.info() != Eigen::Success || !P.g.allFinite())
    throw std::domain_error("metric not positive-definite at node " + std::to_string(node));
  const Mat3 gi = P.g.inverse();

  std::array<Mat3, 3> Gl, Gu;  // Gamma_{l,ij}, Gamma^k_{ij}
  for (int l = 0; l < 3; ++l)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        Gl[static_cast<std::size_t>(l)](i, j) =
            0.5 * (P.dg[static_cast<std::size_t>(i)](j, l) + P.dg[static_cast<std::size_t>(j)](i, l) -
                   P.dg[static_cast<std::size_t>(l)](i, j));
  for (int k = 0; k < 3; ++k) {
    Gu[static_cast<std::size_t>(k)].setZero();
    for (int l = 0; l < 3; ++l) Gu[static_cast<std::size_t>(k)] += gi(k, l) * Gl[static_cast<std::size_t>(l)];
  }

  // dGu[m][k] = d_m Gamma^k
  std::array<std::array<Mat3, 3>, 3> dGu;
  for (int m = 0; m < 3; ++m) {
    const auto sm = static_cast<std::size_t>(m);
    const Mat3 dgi = -gi * P.dg[sm] * gi;
    std::array<Mat3, 3> dGl;
    for (int l = 0; l < 3; ++l)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          dGl[static_cast<std::size_t>(l)](i, j) =
              0.5 * (P.ddg[sm][static_cast<std::size_t>(i)](j, l) + P.ddg[sm][static_cast<std::size_t>(j)](i, l) -
                     P.ddg[sm][static_cast<std::size_t>(l)](i, j));
    for (int k = 0; k < 3; ++k) {
      Mat3 acc = Mat3::Zero();
      for (int l = 0; l < 3; ++l)
        acc += dgi(k, l) * Gl[static_cast<std::size_t>(l)] + gi(k, l) * dGl[static_cast<std::size_t>(l)];
      dGu[sm][static_cast<std::size_t>(k)] = acc;
    }
  }

  Mat3 ric = Mat3::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0;
      for (int k = 0; k < 3; ++k) {
        const auto sk = static_cast<std::size_t>(k);
        s += dGu[sk][sk](i, j) - dGu[static_cast<std::size_t>(j)][sk](i, k);
        for (int l = 0; l < 3; ++l) {
          const auto sl = static_cast<std::size_t>(l);
          s += Gu[sk](k, l) * Gu[sl](i, j) - Gu[sk](j, l) * Gu[sl](i, k);
        }
      }
      ric(i, j) = s;
    }
  }

  PointValue out;
  out.T = 0.5 * (ric + ric.transpose()) - 2.0 * P.du * P.du.transpose();
  double lap = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double hess = P.ddu(i, j);
      for (int k = 0; k < 3; ++k) hess -= Gu[static_cast<std::size_t>(k)](i, j) * P.du[k];
      lap += gi(i, j) * hess;
    }
  out.lap = lap;

  // unit normal to the spheres |x| = r: nu_i = n_i / N, N^2 = g^{kl} n_k n_l
  const Mat3 dn = (Mat3::Identity() - n * n.transpose()) / r;  // dn(i, j) = d_i n_j
  const Vec3 gin = gi * n;
  const double N = std::sqrt(n.dot(gin));
  Vec3 dN;
  for (int i = 0; i < 3; ++i) {
    const auto si = static_cast<std::size_t>(i);
    const Mat3 dgi = -gi * P.dg[si] * gi;
    dN[i] = (n.dot(dgi * n) + 2.0 * dn.row(i).dot(gin)) / (2.0 * N);
  }
  const Vec3 nu = n / N;
  double H = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double cov = dn(i, j) / N - n[j] * dN[i] / (N * N);
      for (int k = 0; k < 3; ++k) cov -= Gu[static_cast<std::size_t>(k)](i, j) * nu[k];
      H += gi(i, j) * cov;
    }
  out.mean_curvature = H;
  out.nu_u = (gi * nu).dot(P.du);
  return out;
}

Eigen::MatrixXd cartesian_block(const ShellGrid& grid, const std::vector<Sym3>& cart,
                                std::span<const double> u) {
  Eigen::MatrixXd f(static_cast<Eigen::Index>(grid.size()), kFields);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (int c = 0; c < 6; ++c) f(static_cast<Eigen::Index>(i), c) = cart[i].c[static_cast<std::size_t>(c)];
    f(static_cast<Eigen::Index>(i), 6) = u[i];
  }
  return f;
}

}  // namespace

MetricField schwarzschild_conformal_metric(const SchwarzschildParams& p, const ShellGrid& grid) {
  MetricField g{grid, std::vector<Sym3>(grid.size())};
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < grid.n_ang(); ++ia)
      g.chart[grid.index(ir, ia)] = conformal_metric_chart(p, grid.radial[ir], grid.sphere.theta(ia));
  return g;
}

MetricField flat_metric(const ShellGrid& grid) {
  MetricField g{grid, std::vector<Sym3>(grid.size())};
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      const double r = grid.radial[ir], s = std::sin(grid.sphere.theta(ia));
      g.chart[grid.index(ir, ia)] = Sym3::diag(1.0, r * r, r * r * s * s);
    }
  return g;
}

std::vector<double> schwarzschild_log_potential(const SchwarzschildParams& p, const ShellGrid& grid) {
  std::vector<double> u(grid.size());
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double v = background_at(p, grid.radial[ir]).u_sc;
    for (int ia = 0; ia < grid.n_ang(); ++ia) u[grid.index(ir, ia)] = v;
  }
  return u;
}

ShellDifferentiator::ShellDifferentiator(const ShellGrid& grid)
    : grid_(grid), radial_(grid.radial), sphere_(grid.sphere), normals_(grid.n_ang(), 3) {
  for (int j = 0; j < grid.n_ang(); ++j) normals_.row(j) = grid.sphere.normal(j).transpose();
}

std::array<Eigen::MatrixXd, 3> ShellDifferentiator::gradient(const Eigen::MatrixXd& f, Exec exec) const {
  const int n_ang = grid_.n_ang();
  const Eigen::MatrixXd dr = radial_.derivative(f, n_ang, 1, exec);
  std::array<Eigen::MatrixXd, 3> out;
  for (auto& o : out) o.resize(f.rows(), f.cols());
  detail::for_each_index(exec, grid_.n_r(), [&](std::ptrdiff_t ir) {
    const double inv_r = 1.0 / grid_.radial[static_cast<int>(ir)];
    const auto fr = f.middleRows(ir * n_ang, n_ang);
    const auto rr = dr.middleRows(ir * n_ang, n_ang);
    for (int a = 0; a < 3; ++a) {
      auto dst = out[static_cast<std::size_t>(a)].middleRows(ir * n_ang, n_ang);
      dst.noalias() = sphere_.d(a) * fr;
      dst *= inv_r;
      dst.noalias() += normals_.col(a).asDiagonal() * rr;
    }
  });
  return out;
}

std::array<Eigen::MatrixXd, 6> ShellDifferentiator::hessian(const Eigen::MatrixXd& f, Exec exec) const {
  // D_l D_k F = n_l n_k F'' + n_l (S_k F' / r - S_k F / r^2) + S_l(n_k F' + S_k F / r) / r
  // with S the surface gradient; the radial second derivative uses its own stencil.
  const int n_ang = grid_.n_ang();
  const Eigen::MatrixXd d1 = radial_.derivative(f, n_ang, 1, exec);
  const Eigen::MatrixXd d2 = radial_.derivative(f, n_ang, 2, exec);
  std::array<Eigen::MatrixXd, 6> out;
  for (auto& o : out) o.resize(f.rows(), f.cols());
  detail::for_each_index(exec, grid_.n_r(), [&](std::ptrdiff_t ir) {
    const double inv_r = 1.0 / grid_.radial[static_cast<int>(ir)];
    const auto F = f.middleRows(ir * n_ang, n_ang);
    const auto Fr = d1.middleRows(ir * n_ang, n_ang);
    const auto Frr = d2.middleRows(ir * n_ang, n_ang);
    std::array<Eigen::MatrixXd, 3> SF, SFr, DkF;
    for (std::size_t a = 0; a < 3; ++a) {
      SF[a] = sphere_.d(static_cast<int>(a)) * F;
      SFr[a] = sphere_.d(static_cast<int>(a)) * Fr;
      DkF[a] = normals_.col(static_cast<Eigen::Index>(a)).asDiagonal() * Fr + inv_r * SF[a];
    }
    std::array<std::array<Eigen::MatrixXd, 3>, 3> full;  // full[k][l] = D_l D_k F
    for (std::size_t k = 0; k < 3; ++k) {
      const Eigen::MatrixXd radial = normals_.col(static_cast<Eigen::Index>(k)).asDiagonal() * Frr +
                                     inv_r * SFr[k] - (inv_r * inv_r) * SF[k];
      for (std::size_t l = 0; l < 3; ++l)
        full[k][l] = normals_.col(static_cast<Eigen::Index>(l)).asDiagonal() * radial +
                     inv_r * (sphere_.d(static_cast<int>(l)) * DkF[k]);
    }
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l)
        out[static_cast<std::size_t>(Sym3::slot(k, l))].middleRows(ir * n_ang, n_ang) =
            0.5 * (full[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] +
                   full[static_cast<std::size_t>(l)][static_cast<std::size_t>(k)]);
  });
  return out;
}

double StaticResidual::max_tensor() const {
  double m = 0;
  for (const auto& t : tensor) m = std::fmax(m, t.max_abs());
  return m;
}

double StaticResidual::max_scalar() const {
  double m = 0;
  for (double v : scalar) m = std::fmax(m, std::fabs(v));
  return m;
}

StaticResidual conformal_static_residual(const MetricField& g, std::span<const double> u, Exec exec) {
  const ShellGrid& grid = g.grid;
  if (g.chart.size() != grid.size() || u.size() != grid.size())
    throw std::invalid_argument("conformal_static_residual: sample count does not match grid");
  std::vector<Sym3> cart(grid.size());
  for (int ir = 0; ir < grid.n_r(); ++ir)
    for (int ia = 0; ia < grid.n_ang(); ++ia)
      cart[grid.index(ir, ia)] = chart_to_cartesian(g.chart[grid.index(ir, ia)], grid.radial[ir], grid.sphere, ia);

  const ShellDifferentiator D(grid);
  const Jet J = make_jet(D, cartesian_block(grid, cart, u), exec);
  StaticResidual out{std::vector<Sym3>(grid.size()), std::vector<double>(grid.size())};
  const int n_ang = grid.n_ang();
  detail::for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t i) {
    const int ir = static_cast<int>(i / n_ang), ia = static_cast<int>(i % n_ang);
    const double r = grid.radial[ir];
    const PointValue v = evaluate(point_jet(J, i), grid.sphere.normal(ia), r, static_cast<std::size_t>(i));
    out.tensor[static_cast<std::size_t>(i)] = cartesian_to_chart(Sym3::from(v.T), r, grid.sphere, ia);
    out.scalar[static_cast<std::size_t>(i)] = v.lap;
  });
  return out;
}

LinearizedOperator linearize_at_schwarzschild(const DeformationPair& dir, const SchwarzschildParams& p,
                                              double epsilon, Exec exec) {
  dir.validate();
  p.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("linearize_at_schwarzschild: epsilon must be positive");
  const ShellGrid& grid = dir.grid;
  if (std::fabs(grid.radial.front() - p.r0) > 1e-12 * p.r0)
    throw std::invalid_argument("linearize_at_schwarzschild: first radial node must be r0");

  const int n_ang = grid.n_ang();
  std::vector<Sym3> base(grid.size()), pert(grid.size());
  double scale = 0;
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double r = grid.radial[ir];
    for (int ia = 0; ia < n_ang; ++ia) {
      const std::size_t i = grid.index(ir, ia);
      base[i] = chart_to_cartesian(conformal_metric_chart(p, r, grid.sphere.theta(ia)), r, grid.sphere, ia);
      pert[i] = frame_to_cartesian(dir.g[i], p, r, grid.sphere, ia);
      scale = std::fmax(scale, std::fmax(dir.g[i].max_abs(), std::fabs(dir.u[i])));
    }
  }

  LinearizedOperator out;
  out.grid = grid;
  out.tensor.assign(grid.size(), Sym3{});
  out.scalar.assign(grid.size(), 0.0);
  out.boundary_metric.assign(static_cast<std::size_t>(n_ang), {0.0, 0.0, 0.0});
  out.boundary_mean_curvature.assign(static_cast<std::size_t>(n_ang), 0.0);
  if (scale == 0.0) return out;
  const double eps = epsilon / scale;
  out.epsilon = eps;

  const ShellDifferentiator D(grid);
  const Jet Jb = make_jet(D, cartesian_block(grid, base, schwarzschild_log_potential(p, grid)), exec);
  const Jet Jd = make_jet(D, cartesian_block(grid, pert, dir.u), exec);

  detail::for_each_index(exec, static_cast<std::ptrdiff_t>(grid.size()), [&](std::ptrdiff_t i) {
    const int ir = static_cast<int>(i / n_ang), ia = static_cast<int>(i % n_ang);
    const double r = grid.radial[ir];
    const Vec3& n = grid.sphere.normal(ia);
    const PointJet b = point_jet(Jb, i), d = point_jet(Jd, i);
    const std::size_t node = static_cast<std::size_t>(i);
    const Mat3 E = shell_frame(p, r, grid.sphere, ia);

    struct Rows {
      Mat3 T;
      double lap, bm[3], bh;
    };
    auto rows = [&](double e) {
      const PointValue v = evaluate(axpy(b, e, d), n, r, node);
      Rows out_r{v.T, v.lap, {0, 0, 0}, 0};
      if (ir == 0) {
        const PointJet q = axpy(b, e, d);
        const double w = std::exp(-2.0 * q.u);
        out_r.bm[0] = w * E.col(1).dot(q.g * E.col(1));
        out_r.bm[1] = w * E.col(1).dot(q.g * E.col(2));
        out_r.bm[2] = w * E.col(2).dot(q.g * E.col(2));
        out_r.bh = static_mean_curvature(v.mean_curvature, v.nu_u, q.u);
      }
      return out_r;
    };
    auto central = [&](double e) {
      const Rows a = rows(e), c = rows(-e);
      Rows o{(a.T - c.T) / (2 * e), (a.lap - c.lap) / (2 * e), {0, 0, 0}, (a.bh - c.bh) / (2 * e)};
      for (int k = 0; k < 3; ++k) o.bm[k] = (a.bm[k] - c.bm[k]) / (2 * e);
      return o;
    };
    const Rows c1 = central(eps), c2 = central(0.5 * eps);
    const Mat3 T = (4.0 * c2.T - c1.T) / 3.0;
    out.tensor[node] = cartesian_to_frame(Sym3::from(T), p, r, grid.sphere, ia);
    out.scalar[node] = (4.0 * c2.lap - c1.lap) / 3.0;
    if (ir == 0) {
      for (int k = 0; k < 3; ++k)
        out.boundary_metric[static_cast<std::size_t>(ia)][static_cast<std::size_t>(k)] = (4.0 * c2.bm[k] - c1.bm[k]) / 3.0;
      out.boundary_mean_curvature[static_cast<std::size_t>(ia)] = (4.0 * c2.bh - c1.bh) / 3.0;
    }
  });
  return out;
}

}  // namespace schwarzstatic
