#include "schwarzstatic/modes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace schwarzstatic {

double ModeIVP::source() const {
  const double m = params.m, r0 = params.r0;
  return (4.0 * m - r0) * a0 + r0 * (r0 - 2.0 * m) * da0;
}

ModeIVP make_ivp(const SchwarzschildParams& p, int ell, double a0) {
  p.validate();
  if (ell < 0) throw std::invalid_argument("make_ivp: ell must be >= 0");
  ModeIVP ivp;
  ivp.params = p;
  ivp.ell = ell;
  ivp.a0 = a0;
  const double m = p.m, r0 = p.r0, L = ell * (ell + 1.0);
  ivp.da0 = (L - 2.0 * m / r0) * a0 / (2.0 * (r0 - 2.0 * m));
  ivp.flat_branch = std::fabs(m) < 1e-8 * r0;
  ivp.near_flat = ivp.flat_branch && m != 0.0;
  if (!ivp.flat_branch) {
    ivp.alpha0 = (1.5 + r0 * (L - 2.0) / (4.0 * m)) * a0;
    if (ell != 1) ivp.beta0 = 4.0 * m * m * *ivp.alpha0 / (L - 2.0);
  }
  return ivp;
}

double ModeSolution::d2a(std::size_t i) const {
  const double m = ivp.params.m, r = radii[i];
  const double rho2 = r * (r - 2.0 * m);
  const double w_prime = (4.0 * m * m / rho2 + ivp.lambda()) * a[i] - (2.0 * m / rho2) * ivp.source();
  return (w_prime - 2.0 * (r - m) * da[i]) / rho2;
}

double ModeSolution::phi(std::size_t i) const {
  const double r = radii[i];
  return r * (r - 2.0 * ivp.params.m) * A(i);
}

double ModeSolution::Phi(std::size_t i) const {
  const double r = radii[i], m = ivp.params.m;
  return 2.0 * (r - m) * A(i) / (r * (r - 2.0 * m)) + da[i];
}

double ModeSolution::B(std::size_t i) const {
  if (!ivp.beta0) throw std::logic_error("B is undefined for l = 1 and on the flat branch");
  const double r = radii[i];
  return a[i] - *ivp.beta0 / (r * (r - 2.0 * ivp.params.m));
}

double ModeSolution::dB(std::size_t i) const {
  if (!ivp.beta0) throw std::logic_error("B is undefined for l = 1 and on the flat branch");
  const double r = radii[i], m = ivp.params.m, rho2 = r * (r - 2.0 * m);
  return da[i] + *ivp.beta0 * 2.0 * (r - m) / (rho2 * rho2);
}

std::size_t ModeSolution::nearest(double r) const {
  const auto it = std::lower_bound(radii.begin(), radii.end(), r);
  if (it == radii.begin()) return 0;
  if (it == radii.end()) return radii.size() - 1;
  const auto j = static_cast<std::size_t>(it - radii.begin());
  return (r - radii[j - 1] < radii[j] - r) ? j - 1 : j;
}

FlatCoefficients flat_coefficients(int ell, double r0, double a0, double da0) {
  // C1 = c1 r0^{-l-1}, C2 = c2 r0^l with C1 + C2 = a0, -(l+1) C1 + l C2 = r0 a'(r0)
  const double C2 = ((ell + 1.0) * a0 + r0 * da0) / (2.0 * ell + 1.0);
  const double C1 = a0 - C2;
  return {C1 * std::pow(r0, ell + 1.0), C2 * std::pow(r0, -double(ell))};
}

double ell1_Phi_closed_form(const ModeIVP& ivp, double r) {
  if (ivp.ell != 1 || !ivp.alpha0) throw std::invalid_argument("ell1_Phi_closed_form: needs l = 1, m != 0");
  const double m = ivp.params.m, r0 = ivp.params.r0;
  return (*ivp.alpha0 / m) * (std::log1p(-2.0 * m / r) - std::log1p(-2.0 * m / r0));
}

double ell0_phi_closed_form(const ModeIVP& ivp, double r) {
  if (ivp.ell != 0 || !ivp.alpha0) throw std::invalid_argument("ell0_phi_closed_form: needs l = 0, m != 0");
  const double m = ivp.params.m, r0 = ivp.params.r0;
  const double c0 = (r0 - m) * ivp.a0 / (2.0 * m), c1 = -r0 * ivp.a0;
  return c0 * r * r + c1 * r - c1 * m;
}

namespace {

std::vector<double> sample_radii(double r0, double r_max, int per_decade, const std::vector<double>& extra) {
  std::vector<double> r{r0};
  const double decades = std::log10(r_max / r0);
  const int n = static_cast<int>(std::ceil(decades * per_decade));
  for (int k = 1; k < n; ++k) r.push_back(r0 * std::pow(10.0, double(k) / per_decade));
  r.push_back(r_max);
  for (double x : extra) {
    if (!(x >= r0 && x <= r_max)) throw std::invalid_argument("integrate_mode: extra radius outside [r0, r_max]");
    r.push_back(x);
  }
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

}  // namespace

ModeSolution integrate_mode(const ModeIVP& ivp, double r_max, const ModeOptions& opts) {
  ivp.params.validate();
  const double r0 = ivp.params.r0, m = ivp.params.m;
  if (!(r_max > r0)) throw std::invalid_argument("integrate_mode: need r_max > r0");
  ModeSolution sol;
  sol.ivp = ivp;
  sol.radii = sample_radii(r0, r_max, std::max(opts.samples_per_decade, 1), opts.extra_radii);
  const std::size_t n = sol.radii.size();
  sol.a.resize(n);
  sol.da.resize(n);

  if (ivp.flat_branch && opts.branch == ModeBranch::Auto) {
    sol.closed_form = true;
    const int l = ivp.ell;
    const FlatCoefficients c = flat_coefficients(l, r0, ivp.a0, ivp.da0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = sol.radii[i];
      sol.a[i] = c.c1 * std::pow(r, -l - 1.0) + c.c2 * std::pow(r, double(l));
      sol.da[i] = -(l + 1.0) * c.c1 * std::pow(r, -l - 2.0) + (l > 0 ? l * c.c2 * std::pow(r, l - 1.0) : 0.0);
    }
    return sol;
  }

  const double L = ivp.lambda(), S = ivp.source();
  const double r_switch = std::min(opts.switch_factor * r0, r_max);
  // state (a, w = rho2 a')
  auto rhs_r = [&](const OdeState& y, OdeState& dy, double r) {
    const double rho2 = r * (r - 2.0 * m);
    dy[0] = y[1] / rho2;
    dy[1] = (4.0 * m * m / rho2 + L) * y[0] - (2.0 * m / rho2) * S;
  };
  auto rhs_t = [&](const OdeState& y, OdeState& dy, double t) {
    const double r = std::exp(t), x = r - 2.0 * m;
    dy[0] = y[1] / x;
    dy[1] = (4.0 * m * m / x + L * r) * y[0] - (2.0 * m / x) * S;
  };
  auto store = [&](std::size_t i, const OdeState& y) {
    const double r = sol.radii[i];
    sol.a[i] = y[0];
    sol.da[i] = y[1] / (r * (r - 2.0 * m));
  };

  OdeState y{ivp.a0, r0 * (r0 - 2.0 * m) * ivp.da0};
  std::vector<double> t1;
  std::size_t split = 0;
  while (split < n && sol.radii[split] <= r_switch) t1.push_back(sol.radii[split++]);
  const bool switch_sampled = !t1.empty() && t1.back() == r_switch;
  if (!switch_sampled) t1.push_back(r_switch);
  integrate_to_times(rhs_r, y, r0, t1, opts.ode, [&](std::size_t k, double, const OdeState& s) {
    if (k < split) store(k, s);
  });
  if (split < n) {
    std::vector<double> t2;
    for (std::size_t i = split; i < n; ++i) t2.push_back(std::log(sol.radii[i]));
    integrate_to_times(rhs_t, y, std::log(r_switch), t2, opts.ode,
                       [&](std::size_t k, double, const OdeState& s) { store(split + k, s); });
  }
  return sol;
}

std::string_view to_string(AsymptoticKind k) {
  switch (k) {
    case AsymptoticKind::DecaysToZero: return "DecaysToZero";
    case AsymptoticKind::ConvergesNonzero: return "ConvergesNonzero";
    case AsymptoticKind::DivergesPlus: return "DivergesPlus";
    case AsymptoticKind::DivergesMinus: return "DivergesMinus";
    case AsymptoticKind::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

AsymptoticClass classify(const ModeSolution& sol, double decay_q, const ClassifierOptions& o) {
  const std::size_t last = sol.radii.size() - 1;
  const double R = sol.radii[last];
  std::size_t i1 = 0;
  for (std::size_t i = 0; i < last; ++i)
    if (sol.radii[i] <= R / 10.0 * (1.0 + 1e-12)) i1 = i;
  const double r1 = sol.radii[i1], aR = sol.a[last], a1 = sol.a[i1];
  const double ref = sol.ivp.a0 != 0.0 ? std::fabs(sol.ivp.a0) : 1.0;

  AsymptoticClass c;
  const double span = std::log(R / r1);
  if (aR == 0.0)
    c.fitted_exponent = -std::numeric_limits<double>::infinity();
  else if (a1 == 0.0 || span <= 0.0)
    c.fitted_exponent = 0.0;
  else
    c.fitted_exponent = (std::log(std::fabs(aR)) - std::log(std::fabs(a1))) / span;
  const double limit = span > 0.0 ? (R * aR - r1 * a1) / (R - r1) : aR;
  c.fitted_limit = limit;

  if (std::fabs(aR) < o.eps_dec * ref && c.fitted_exponent <= -decay_q) {
    c.kind = AsymptoticKind::DecaysToZero;
  } else if (std::fabs(aR) > o.k_div * ref && std::fabs(aR) > std::fabs(a1) && aR * a1 > 0.0) {
    c.kind = aR > 0.0 ? AsymptoticKind::DivergesPlus : AsymptoticKind::DivergesMinus;
    c.fitted_limit = aR;
  } else if (std::fabs(aR - a1) <= o.cauchy_rtol * std::fabs(aR) && std::fabs(limit) > o.eps_dec * ref) {
    c.kind = AsymptoticKind::ConvergesNonzero;
  } else {
    c.kind = AsymptoticKind::Undetermined;
  }
  return c;
}

KernelVerdict verify_kernel_trivial(const SchwarzschildParams& p, int ell, double decay_q, const VerifyOptions& opts) {
  const ModeIVP ivp = make_ivp(p, ell, 1.0);
  const double r_max = opts.r_max_factor * p.r0;
  const ModeSolution sol = integrate_mode(ivp, r_max, opts.mode);
  KernelVerdict v;
  v.params = p;
  v.ell = ell;
  v.cls = classify(sol, decay_q, opts.classifier);
  v.r_max = sol.r_max();
  v.undetermined = v.cls.kind == AsymptoticKind::Undetermined;
  v.pass = v.cls.kind != AsymptoticKind::DecaysToZero && !v.undetermined;
  v.flat_branch = sol.closed_form;
  return v;
}

PositivityReport comparison_positivity(const std::function<double(double)>& h,
                                       const std::function<double(double)>& p, double r0, double B0,
                                       double dB0, double r_max, int samples, const OdeOptions& opts) {
  if (!(r_max > r0)) throw std::invalid_argument("comparison_positivity: need r_max > r0");
  std::vector<double> radii{r0, r0 + 1e-6 * std::fabs(r0 == 0.0 ? 1.0 : r0)};
  const int n = std::max(samples, 2);
  for (int k = 1; k <= n; ++k) radii.push_back(r0 * std::pow(r_max / r0, double(k) / n));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  PositivityReport rep;
  OdeState y{B0, h(r0) * dB0};
  integrate_to_times(
      [&](const OdeState& s, OdeState& ds, double r) {
        ds[0] = s[1] / h(r);
        ds[1] = p(r) * s[0];
      },
      y, r0, radii, opts, [&](std::size_t, double r, const OdeState& s) {
        const double B = s[0], dB = s[1] / h(r);
        rep.radii.push_back(r);
        rep.B.push_back(B);
        rep.dB.push_back(dB);
        if (r > r0 && !(B > 0.0 && dB > 0.0) && !rep.first_violation) {
          rep.ok = false;
          rep.first_violation = r;
        }
      });
  return rep;
}

LowerBoundCheck lower_bound_check(const ModeSolution& sol) {
  LowerBoundCheck out;
  if (!sol.ivp.beta0 || sol.ivp.ell < 2) return out;
  const double m = sol.ivp.params.m, r0 = sol.ivp.params.r0;
  const double rho2_0 = r0 * (r0 - 2.0 * m);
  const double B0 = sol.B(0), a0 = sol.a[0];
  for (std::size_t i = 0; i < sol.radii.size(); ++i) {
    const double r = sol.radii[i], rho2 = r * (r - 2.0 * m);
    const double B = sol.B(i);
    const double f_prime = 2.0 * (r - m) * B + rho2 * sol.dB(i);
    if (!(B < 0.0 && f_prime > 0.0)) break;
    ++out.samples;
    out.worst_B = std::fmin(out.worst_B, B - rho2_0 * B0 / rho2);
    out.worst_a = std::fmin(out.worst_a, sol.a[i] - rho2_0 * a0 / rho2);
  }
  return out;
}

}  // namespace schwarzstatic
