#include "schwarzstatic/shell.hpp"

#include <cmath>
#include <stdexcept>

namespace schwarzstatic {

Mat3 shell_frame(const SchwarzschildParams& p, double r, const SphereGrid& s, int j) {
  const double scale = r / std::sqrt(background_at(p, r).rho2);
  Mat3 e;
  e.col(0) = s.normal(j);
  e.col(1) = scale * s.e_theta(j);
  e.col(2) = scale * s.e_phi(j);
  return e;
}

Mat3 shell_coframe(const SchwarzschildParams& p, double r, const SphereGrid& s, int j) {
  const double scale = std::sqrt(background_at(p, r).rho2) / r;
  Mat3 th;
  th.row(0) = s.normal(j).transpose();
  th.row(1) = scale * s.e_theta(j).transpose();
  th.row(2) = scale * s.e_phi(j).transpose();
  return th;
}

Mat3 chart_frame(double r, const SphereGrid& s, int j) {
  Mat3 e;
  e.col(0) = s.normal(j);
  e.col(1) = r * s.e_theta(j);
  e.col(2) = r * std::sin(s.theta(j)) * s.e_phi(j);
  return e;
}

Sym3 frame_to_cartesian(const Sym3& t, const SchwarzschildParams& p, double r, const SphereGrid& s,
                        int j) {
  return contract(t, shell_coframe(p, r, s, j));
}

Sym3 cartesian_to_frame(const Sym3& t, const SchwarzschildParams& p, double r, const SphereGrid& s,
                        int j) {
  return contract(t, shell_frame(p, r, s, j));
}

Sym3 chart_to_cartesian(const Sym3& t, double r, const SphereGrid& s, int j) {
  return contract(t, chart_frame(r, s, j).inverse());
}

Sym3 cartesian_to_chart(const Sym3& t, double r, const SphereGrid& s, int j) {
  return contract(t, chart_frame(r, s, j));
}

double DeformationPair::max_radial() const {
  double m = 0;
  for (const auto& t : g) m = std::fmax(m, std::fmax(std::fabs(t(0, 0)), std::fmax(std::fabs(t(0, 1)), std::fabs(t(0, 2)))));
  return m;
}

void DeformationPair::validate() const {
  if (g.size() != grid.size() || u.size() != grid.size())
    throw std::invalid_argument("DeformationPair: sample count does not match grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool ok = std::isfinite(u[i]);
    for (double v : g[i].c) ok = ok && std::isfinite(v);
    if (!ok) throw std::invalid_argument("DeformationPair: non-finite entry at node " + std::to_string(i));
  }
}

DeformationPair sample_deformation(const DeformationSampler& sampler, const ShellGrid& grid) {
  DeformationPair d;
  d.grid = grid;
  d.g.resize(grid.size());
  d.u.resize(grid.size());
  for (int ir = 0; ir < grid.n_r(); ++ir) {
    DeformationSlice s = sampler(grid.radial[ir]);
    if (static_cast<int>(s.g.size()) != grid.n_ang() || static_cast<int>(s.u.size()) != grid.n_ang())
      throw std::invalid_argument("sample_deformation: sampler returned wrong slice size");
    for (int ia = 0; ia < grid.n_ang(); ++ia) {
      d.g[grid.index(ir, ia)] = s.g[static_cast<std::size_t>(ia)];
      d.u[grid.index(ir, ia)] = s.u[static_cast<std::size_t>(ia)];
    }
  }
  d.validate();
  return d;
}

DeformationSampler mass_variation(const SchwarzschildParams& p, const SphereGrid& sphere) {
  const int n = sphere.size();
  return [p, n](double r) {
    const BackgroundAt b = background_at(p, r);
    const double t = -2.0 * r / b.rho2;
    DeformationSlice s;
    s.g.assign(static_cast<std::size_t>(n), Sym3::diag(0.0, t, t));
    s.u.assign(static_cast<std::size_t>(n), -1.0 / (r - 2.0 * p.m));
    return s;
  };
}

}  // namespace schwarzstatic
