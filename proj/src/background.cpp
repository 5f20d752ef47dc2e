#include "schwarzstatic/background.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace schwarzstatic {

SchwarzschildParams SchwarzschildParams::make(double m, double r0) {
  SchwarzschildParams p{m, r0};
  p.validate();
  return p;
}

void SchwarzschildParams::validate() const {
  if (!std::isfinite(m) || !std::isfinite(r0))
    throw std::domain_error("SchwarzschildParams: non-finite m or r0");
  if (!(r0 > 0.0) || !(r0 > 2.0 * m0()))
    throw std::domain_error("SchwarzschildParams: need r0 > 2 max(0,m), got m=" +
                            std::to_string(m) + " r0=" + std::to_string(r0));
}

BackgroundAt background_at(const SchwarzschildParams& p, double r) {
  if (!(r > 2.0 * p.m0()) || !(r > 0.0))
    throw std::domain_error("background_at: r=" + std::to_string(r) + " outside the exterior");
  BackgroundAt b;
  b.r = r;
  b.rho2 = r * (r - 2.0 * p.m);
  b.f_sc = std::sqrt(1.0 - 2.0 * p.m / r);
  b.u_sc = 0.5 * std::log1p(-2.0 * p.m / r);
  b.du_sc = p.m / b.rho2;
  b.H_sc = 2.0 * (r - p.m) / b.rho2;
  b.R_gamma = 2.0 / b.rho2;
  return b;
}

Sym3 conformal_metric_chart(const SchwarzschildParams& p, double r, double theta) {
  const double rho2 = background_at(p, r).rho2;
  const double s = std::sin(theta);
  return Sym3::diag(1.0, rho2, rho2 * s * s);
}

Sym3 physical_metric_chart(const SchwarzschildParams& p, double r, double theta) {
  (void)background_at(p, r);
  const double s = std::sin(theta);
  return Sym3::diag(1.0 / (1.0 - 2.0 * p.m / r), r * r, r * r * s * s);
}

ConformalPair conformal_forward(std::span<const double> f, std::span<const Sym3> metric) {
  if (f.size() != metric.size()) throw std::invalid_argument("conformal_forward: size mismatch");
  ConformalPair out;
  out.g.resize(f.size());
  out.u.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!(f[i] > 0.0))
      throw std::domain_error("conformal_forward: f <= 0 at sample " + std::to_string(i));
    out.g[i] = (f[i] * f[i]) * metric[i];
    out.u[i] = std::log(f[i]);
  }
  return out;
}

StaticPair conformal_inverse(std::span<const Sym3> g, std::span<const double> u) {
  if (g.size() != u.size()) throw std::invalid_argument("conformal_inverse: size mismatch");
  StaticPair out;
  out.metric.resize(g.size());
  out.f.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    out.metric[i] = std::exp(-2.0 * u[i]) * g[i];
    out.f[i] = std::exp(u[i]);
  }
  return out;
}

double static_mean_curvature(double H_g, double nu_u, double u) {
  return std::exp(u) * (H_g - 2.0 * nu_u);
}

DeformationPoint deformation_forward(const Sym3& gamma_t, double f_t, const SchwarzschildParams& p,
                                     double r, double theta) {
  const double f = background_at(p, r).f_sc;
  const Sym3 gfrak = physical_metric_chart(p, r, theta);
  return {(f * f) * gamma_t + (2.0 * f_t * f) * gfrak, f_t / f};
}

StaticDeformationPoint deformation_inverse(const Sym3& g_t, double u_t,
                                           const SchwarzschildParams& p, double r, double theta) {
  const double f = background_at(p, r).f_sc;
  const Sym3 gfrak = physical_metric_chart(p, r, theta);
  return {(1.0 / (f * f)) * g_t - (2.0 * u_t) * gfrak, f * u_t};
}

RoundData bartnik_data(const SchwarzschildParams& p) {
  p.validate();
  return {p.r0, (2.0 / p.r0) * std::sqrt(1.0 - 2.0 * p.m / p.r0)};
}

RoundMatch match_round_data(const RoundData& d) {
  if (!(d.rho > 0.0) || !std::isfinite(d.rho))
    throw std::domain_error("match_round_data: rho must be positive");
  if (!(d.h >= 0.0) || !std::isfinite(d.h))
    throw std::domain_error("match_round_data: h must be non-negative");
  const double x = 0.5 * d.h * d.rho;
  RoundMatch out;
  out.m = 0.5 * d.rho * (1.0 - x * x);
  out.r0 = d.rho;
  out.horizon_degenerate = d.h == 0.0;
  out.valid = d.h > 0.0;
  return out;
}

}  // namespace schwarzstatic
