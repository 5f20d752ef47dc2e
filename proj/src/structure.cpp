#include "schwarzstatic/structure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace schwarzstatic {

namespace {

void check_boundary(const ShellGrid& grid, const SchwarzschildParams& p) {
  p.validate();
  if (std::fabs(grid.radial.front() - p.r0) > 1e-12 * p.r0)
    throw std::invalid_argument("structure: first radial node must be r0");
}

Eigen::MatrixXd columns(std::size_t n, std::initializer_list<std::function<double(std::size_t)>> cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  Eigen::Index c = 0;
  for (const auto& f : cols) {
    for (std::size_t i = 0; i < n; ++i) m(static_cast<Eigen::Index>(i), c) = f(i);
    ++c;
  }
  return m;
}

double amax(double a, double b) { return std::fmax(a, std::fabs(b)); }

}  // namespace

double FoliationDeformation::max_trace_K() const {
  double m = 0;
  for (const auto& k : K) m = amax(m, k[0] + k[2]);
  return m;
}

void FoliationDeformation::validate() const {
  const std::size_t n = grid.size();
  if (gamma.size() != n || H.size() != n || K.size() != n || u.size() != n)
    throw std::invalid_argument("FoliationDeformation: sample count does not match grid");
}

FoliationDeformation foliation_from_gauge_fixed(const DeformationPair& d, const SchwarzschildParams& p,
                                                Exec exec) {
  d.validate();
  check_boundary(d.grid, p);
  const std::size_t n = d.grid.size();
  // H~ and K~ get differentiated again by the structure residuals; composing two one-sided
  // 4th-order closures would leave a 3rd-order boundary error, so use 8th order here.
  const RadialStencils st(d.grid.radial, std::min(8, (d.grid.n_r() - 2) / 2 * 2));
  const Eigen::MatrixXd g = columns(n, {[&](std::size_t i) { return d.g[i](1, 1); },
                                        [&](std::size_t i) { return d.g[i](1, 2); },
                                        [&](std::size_t i) { return d.g[i](2, 2); }});
  const Eigen::MatrixXd dg = st.derivative(g, d.grid.n_ang(), 1, exec);
  FoliationDeformation f;
  f.grid = d.grid;
  f.gamma.resize(n);
  f.H.resize(n);
  f.K.resize(n);
  f.u = d.u;
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    f.gamma[i] = {g(r, 0), g(r, 1), g(r, 2)};
    f.H[i] = 0.5 * (dg(r, 0) + dg(r, 2));
    const double k11 = 0.25 * (dg(r, 0) - dg(r, 2));
    f.K[i] = {k11, 0.5 * dg(r, 1), -k11};
  }
  return f;
}

FoliationDeformation mass_variation_foliation(const SchwarzschildParams& p, const ShellGrid& grid) {
  check_boundary(grid, p);
  FoliationDeformation f;
  f.grid = grid;
  const std::size_t n = grid.size();
  f.gamma.resize(n);
  f.H.resize(n);
  f.K.assign(n, {0.0, 0.0, 0.0});
  f.u.resize(n);
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double r = grid.radial[ir];
    const double t = -2.0 * r / background_at(p, r).rho2, x = r - 2.0 * p.m;
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      const std::size_t i = grid.index(ir, ia);
      f.gamma[i] = {t, 0.0, t};
      f.H[i] = 2.0 / (x * x);
      f.u[i] = -1.0 / x;
    }
  }
  return f;
}

std::vector<double> scalar_curvature_variation(const SphereCalculus& calc, double rho2,
                                               std::span<const std::array<double, 3>> gamma) {
  const std::size_t n = gamma.size();
  std::vector<double> tau(n), g11(n), g12(n), g22(n);
  for (std::size_t j = 0; j < n; ++j) {
    g11[j] = gamma[j][0];
    g12[j] = gamma[j][1];
    g22[j] = gamma[j][2];
    tau[j] = g11[j] + g22[j];
  }
  const auto lap = calc.laplacian(tau);
  const auto dd = calc.double_divergence(g11, g12, g22);
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = (-lap[j] + dd[j] - tau[j]) / rho2;
  return out;
}

std::array<double, 5> StructureResiduals::max_abs() const {
  std::array<double, 5> m{};
  for (double v : dg2) m[0] = amax(m[0], v);
  for (double v : dg4) m[1] = amax(m[1], v);
  for (const auto& v : dg5) m[2] = amax(amax(m[2], v[0]), v[1]);
  for (const auto& v : dg3) m[3] = amax(amax(amax(m[3], v[0]), v[1]), v[2]);
  for (double v : dg1) m[4] = amax(m[4], v);
  return m;
}

StructureResiduals structure_residuals(const FoliationDeformation& d, const SchwarzschildParams& p,
                                       const StructureOptions& opts, Exec exec) {
  d.validate();
  check_boundary(d.grid, p);
  const ShellGrid& grid = d.grid;
  const std::size_t n = grid.size();
  const int n_ang = grid.n_ang();
  const RadialStencils st(grid.radial);
  const Eigen::MatrixXd f = columns(n, {[&](std::size_t i) { return d.H[i]; },
                                        [&](std::size_t i) { return d.u[i]; },
                                        [&](std::size_t i) { return d.K[i][0]; },
                                        [&](std::size_t i) { return d.K[i][1]; },
                                        [&](std::size_t i) { return d.K[i][2]; }});
  const Eigen::MatrixXd df = st.derivative(f, n_ang, 1, exec);
  const Eigen::MatrixXd d2u = st.derivative(Eigen::MatrixXd(f.col(1)), n_ang, 2, exec);
  const SphereCalculus calc(grid.sphere);

  StructureResiduals out;
  out.dg2.resize(n);
  out.dg4.resize(n);
  out.dg5.resize(n);
  out.dg3.resize(n);
  out.dg1.resize(n);
  detail::for_each_index(exec, grid.n_r(), [&](std::ptrdiff_t irp) {
    const int ir = static_cast<int>(irp);
    const BackgroundAt b = background_at(p, grid.radial[ir]);
    const double inv_rho = 1.0 / std::sqrt(b.rho2);
    const std::size_t o = grid.index(ir, 0);
    const auto m = static_cast<std::size_t>(n_ang);
    std::vector<double> u(d.u.begin() + static_cast<std::ptrdiff_t>(o), d.u.begin() + static_cast<std::ptrdiff_t>(o + m));
    std::vector<double> H(d.H.begin() + static_cast<std::ptrdiff_t>(o), d.H.begin() + static_cast<std::ptrdiff_t>(o + m));
    std::vector<double> k11(m), k12(m), k22(m);
    for (std::size_t j = 0; j < m; ++j) {
      k11[j] = d.K[o + j][0];
      k12[j] = d.K[o + j][1];
      k22[j] = d.K[o + j][2];
    }
    const auto grad_u = calc.gradient_frame(u);
    const auto grad_H = calc.gradient_frame(H);
    const auto divK = calc.tensor_divergence(k11, k12, k22);
    const auto lap_u = calc.laplacian(u);
    const auto Rp = scalar_curvature_variation(calc, b.rho2, std::span(d.gamma.data() + o, m));
    const double sign = opts.flip_dg4_sign ? -1.0 : 1.0;
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = o + j;
      const auto row = static_cast<Eigen::Index>(i);
      const double dH = df(row, 0), du = df(row, 1);
      out.dg2[i] = dH + b.H_sc * d.H[i] + 4.0 * b.du_sc * du;
      out.dg4[i] = -4.0 * b.du_sc * du + b.H_sc * d.H[i] - sign * Rp[j];
      for (std::size_t A = 0; A < 2; ++A)
        out.dg5[i][A] = inv_rho * (2.0 * b.du_sc * grad_u[A][j] - divK[A][j] + 0.5 * grad_H[A][j]);
      for (std::size_t c = 0; c < 3; ++c) out.dg3[i][c] = df(row, 2 + static_cast<Eigen::Index>(c)) + b.H_sc * d.K[i][c];
      out.dg1[i] = d2u(row, 0) + b.H_sc * du + lap_u[j] / b.rho2 + b.du_sc * d.H[i];
    }
  });
  return out;
}

BoundaryResiduals boundary_residuals(const FoliationDeformation& d, const SchwarzschildParams& p, Exec exec) {
  d.validate();
  check_boundary(d.grid, p);
  const int n_ang = d.grid.n_ang();
  const RadialStencils st(d.grid.radial);
  const auto du = st.derivative(d.u, n_ang, 1, exec);
  BoundaryResiduals out;
  out.metric.resize(static_cast<std::size_t>(n_ang));
  out.mean_curvature.resize(static_cast<std::size_t>(n_ang));
  for (std::size_t j = 0; j < static_cast<std::size_t>(n_ang); ++j) {
    const auto& g = d.gamma[j];
    out.metric[j] = {g[0] - 2.0 * d.u[j], g[1], g[2] - 2.0 * d.u[j]};
    out.mean_curvature[j] = d.H[j] - 2.0 * du[j] + (2.0 / p.r0) * d.u[j];
  }
  return out;
}

RadialJet radial_jet(const ShellGrid& grid, std::vector<double> samples, Exec exec) {
  if (samples.size() != grid.size()) throw std::invalid_argument("radial_jet: sample count does not match grid");
  const RadialStencils st(grid.radial);
  RadialJet j;
  j.grid = grid;
  j.d1 = st.derivative(samples, grid.n_ang(), 1, exec);
  j.d2 = st.derivative(samples, grid.n_ang(), 2, exec);
  j.value = std::move(samples);
  return j;
}

RadialJet radial_jet(const ShellGrid& grid, std::vector<double> samples, std::vector<double> slopes, Exec exec) {
  if (samples.size() != grid.size() || slopes.size() != grid.size())
    throw std::invalid_argument("radial_jet: sample count does not match grid");
  const RadialStencils st(grid.radial, std::min(8, (grid.n_r() - 2) / 2 * 2));
  RadialJet j;
  j.grid = grid;
  j.d2 = st.derivative(slopes, grid.n_ang(), 1, exec);
  j.d1 = std::move(slopes);
  j.value = std::move(samples);
  return j;
}

std::vector<double> decoupled_residual(const RadialJet& u, const SchwarzschildParams& p) {
  const ShellGrid& grid = u.grid;
  check_boundary(grid, p);
  if (u.value.size() != grid.size() || u.d1.size() != grid.size() || u.d2.size() != grid.size())
    throw std::invalid_argument("decoupled_residual: sample count does not match grid");
  const SphereCalculus calc(grid.sphere);
  const auto n = static_cast<std::size_t>(grid.n_ang());
  const double m = p.m, r0 = p.r0;
  std::vector<double> src(n);
  for (std::size_t j = 0; j < n; ++j) src[j] = (4.0 * m - r0) * u.value[j] + r0 * (r0 - 2.0 * m) * u.d1[j];

  std::vector<double> out(grid.size());
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    const double r = grid.radial[ir];
    const double rho2 = background_at(p, r).rho2;
    const std::size_t o = grid.index(ir, 0);
    const auto lap = calc.laplacian(std::span(u.value.data() + o, n));
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t i = o + j;
      out[i] = rho2 * u.d2[i] + 2.0 * (r - m) * u.d1[i] + lap[j] - 4.0 * m * m * u.value[i] / rho2 +
               (2.0 * m / rho2) * src[j];
    }
  }
  return out;
}

double boundary_identity_residual(const SchwarzschildParams& p, int ell, double a, double da) {
  const double r0 = p.r0, m = p.m;
  return 2.0 * r0 * (r0 - 2.0 * m) * da - r0 * ell * (ell + 1.0) * a + 2.0 * m * a;
}

HarmonicCoefficients boundary_identity_residual(std::span<const double> u_r0, std::span<const double> du_r0,
                                                const SphereGrid& grid, const SchwarzschildParams& p,
                                                int L_max) {
  const SphereTransform tr(grid, L_max);
  const HarmonicCoefficients a = tr.analyze(u_r0), da = tr.analyze(du_r0);
  HarmonicCoefficients out(L_max);
  for (int l = 0; l <= L_max; ++l)
    for (int k = -l; k <= l; ++k) out.at(l, k) = boundary_identity_residual(p, l, a.at(l, k), da.at(l, k));
  return out;
}

std::vector<double> solve_mean_curvature_variation(const SchwarzschildParams& p, double H0,
                                                   const std::function<double(double)>& du_dr,
                                                   std::span<const double> radii, const OdeOptions& opts) {
  p.validate();
  OdeState y{H0};
  std::vector<double> out(radii.size());
  integrate_to_times(
      [&](const OdeState& s, OdeState& ds, double r) {
        const BackgroundAt b = background_at(p, r);
        ds[0] = -b.H_sc * s[0] - 4.0 * b.du_sc * du_dr(r);
      },
      y, p.r0, radii, opts, [&](std::size_t k, double, const OdeState& s) { out[k] = s[0]; });
  return out;
}

std::vector<std::array<double, 3>> solve_traceless_curvature(const SchwarzschildParams& p,
                                                             const std::array<double, 3>& K0,
                                                             std::span<const double> radii,
                                                             const OdeOptions& opts) {
  p.validate();
  OdeState y(K0.begin(), K0.end());
  std::vector<std::array<double, 3>> out(radii.size());
  integrate_to_times(
      [&](const OdeState& s, OdeState& ds, double r) {
        const double H = background_at(p, r).H_sc;
        for (std::size_t c = 0; c < 3; ++c) ds[c] = -H * s[c];
      },
      y, p.r0, radii, opts, [&](std::size_t k, double, const OdeState& s) { out[k] = {s[0], s[1], s[2]}; });
  return out;
}

double OracleComparison::max() const {
  double m = 0;
  for (double v : bulk) m = std::fmax(m, v);
  for (double v : boundary) m = std::fmax(m, v);
  return m;
}

OracleComparison compare_with_oracle(const StructureResiduals& s, const BoundaryResiduals& b,
                                     const LinearizedOperator& lin, const SchwarzschildParams& p) {
  const ShellGrid& grid = lin.grid;
  if (s.dg2.size() != grid.size() || b.metric.size() != static_cast<std::size_t>(grid.n_ang()))
    throw std::invalid_argument("compare_with_oracle: grids differ");
  OracleComparison c;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Sym3& T = lin.tensor[i];
    c.bulk[0] = amax(c.bulk[0], s.dg2[i] + T(0, 0));
    c.bulk[1] = amax(c.bulk[1], s.dg4[i] - (T(0, 0) - T(1, 1) - T(2, 2)));
    c.bulk[2] = amax(amax(c.bulk[2], s.dg5[i][0] + T(0, 1)), s.dg5[i][1] + T(0, 2));
    const double half_tr = 0.5 * (T(1, 1) + T(2, 2));
    c.bulk[3] = amax(c.bulk[3], s.dg3[i][0] + (T(1, 1) - half_tr));
    c.bulk[3] = amax(c.bulk[3], s.dg3[i][1] + T(1, 2));
    c.bulk[3] = amax(c.bulk[3], s.dg3[i][2] + (T(2, 2) - half_tr));
    c.bulk[4] = amax(c.bulk[4], s.dg1[i] - lin.scalar[i]);
  }
  const BackgroundAt bg = background_at(p, p.r0);
  const double w = std::exp(-2.0 * bg.u_sc), e = std::exp(bg.u_sc);
  for (std::size_t j = 0; j < b.metric.size(); ++j) {
    for (std::size_t k = 0; k < 3; ++k)
      c.boundary[0] = amax(c.boundary[0], lin.boundary_metric[j][k] - w * b.metric[j][k]);
    c.boundary[1] = amax(c.boundary[1], lin.boundary_mean_curvature[j] - e * b.mean_curvature[j]);
  }
  return c;
}

}  // namespace schwarzstatic
