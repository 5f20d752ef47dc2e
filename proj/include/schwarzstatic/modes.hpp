#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "schwarzstatic/background.hpp"
#include "schwarzstatic/ode.hpp"

namespace schwarzstatic {

/// Initial value problem for one harmonic coefficient a(r) of u~.
struct ModeIVP {
  SchwarzschildParams params;
  int ell = 0;
  double a0 = 1.0;
  double da0 = 0.0;               ///< a'(r0) = (l(l+1) - 2m/r0) a0 / (2(r0 - 2m))
  std::optional<double> alpha0;   ///< absent on the flat branch
  std::optional<double> beta0;    ///< absent on the flat branch and for l = 1
  bool flat_branch = false;       ///< |m| < 1e-8 r0: closed form c1 r^{-l-1} + c2 r^l
  bool near_flat = false;         ///< flat branch taken with m != 0

  /// S = (4m - r0) a0 + r0 (r0 - 2m) a'(r0), the boundary source constant.
  double source() const;
  int lambda() const { return ell * (ell + 1); }
};

ModeIVP make_ivp(const SchwarzschildParams& p, int ell, double a0);

enum class ModeBranch { Auto, ForceNumeric };

struct ModeOptions {
  OdeOptions ode{1e-10, 1e-12};
  double switch_factor = 1e3;     ///< integrate in r up to switch_factor*r0, then in ln r
  int samples_per_decade = 40;
  ModeBranch branch = ModeBranch::Auto;
  std::vector<double> extra_radii;  ///< additional output radii inside [r0, r_max]
};

/// Samples of a(r) and a'(r) with the derived views A, phi, Phi, B.
struct ModeSolution {
  ModeIVP ivp;
  std::vector<double> radii, a, da;
  bool closed_form = false;

  double r_max() const { return radii.back(); }
  double alpha0() const { return ivp.alpha0.value_or(0.0); }
  /// a'' from the mode equation.
  double d2a(std::size_t i) const;
  double A(std::size_t i) const { return a[i] - alpha0(); }
  double phi(std::size_t i) const;
  double Phi(std::size_t i) const;
  /// a - beta0 / (r(r-2m)); throws std::logic_error when beta0 is absent.
  double B(std::size_t i) const;
  double dB(std::size_t i) const;
  /// Index of the sample closest to r.
  std::size_t nearest(double r) const;
};

/// Throws StepUnderflow with its location if the integrator stalls.
ModeSolution integrate_mode(const ModeIVP& ivp, double r_max, const ModeOptions& opts = {});

struct FlatCoefficients {
  double c1 = 0;  ///< of r^{-l-1}
  double c2 = 0;  ///< of r^l
};
FlatCoefficients flat_coefficients(int ell, double r0, double a0, double da0);
/// l = 1: Phi' = 2 alpha0 / (r(r-2m)), so Phi(r) = (alpha0/m) [ln((r-2m)/r) - ln((r0-2m)/r0)].
double ell1_Phi_closed_form(const ModeIVP& ivp, double r);
/// l = 0: phi(r) = c0 r^2 + c1 r - c1 m, c0 = (r0 - m) a0 / (2m), c1 = -r0 a0.
double ell0_phi_closed_form(const ModeIVP& ivp, double r);

enum class AsymptoticKind { DecaysToZero, ConvergesNonzero, DivergesPlus, DivergesMinus, Undetermined };
std::string_view to_string(AsymptoticKind k);

struct AsymptoticClass {
  AsymptoticKind kind = AsymptoticKind::Undetermined;
  double fitted_limit = 0;     ///< a + b/r extrapolation over the last decade; a(r_max) if diverging
  double fitted_exponent = 0;  ///< log-log slope of |a| over the last decade
};

struct ClassifierOptions {
  double eps_dec = 1e-4;
  double k_div = 1e3;
  double cauchy_rtol = 1e-3;  ///< relative change over the last decade counted as convergence
};

AsymptoticClass classify(const ModeSolution& sol, double decay_q = 0.75, const ClassifierOptions& opts = {});

struct VerifyOptions {
  double r_max_factor = 1e6;
  ModeOptions mode;
  ClassifierOptions classifier;
};

struct KernelVerdict {
  SchwarzschildParams params;
  int ell = 0;
  AsymptoticClass cls;
  double r_max = 0;
  bool pass = false;          ///< not decaying and not undetermined
  bool undetermined = false;  ///< failure to verify, not a counterexample
  bool flat_branch = false;
};

KernelVerdict verify_kernel_trivial(const SchwarzschildParams& p, int ell, double decay_q = 0.75,
                                    const VerifyOptions& opts = {});

struct PositivityReport {
  bool ok = true;
  std::optional<double> first_violation;  ///< radius of the first sample with B <= 0 or B' <= 0
  std::vector<double> radii, B, dB;
};

/// Integrates (h B')' = p B from r0 and checks B > 0, B' > 0 at every sample r > r0.
PositivityReport comparison_positivity(const std::function<double(double)>& h,
                                       const std::function<double(double)>& p, double r0, double B0,
                                       double dB0, double r_max, int samples = 400,
                                       const OdeOptions& opts = {1e-10, 1e-12});

/// Lower bounds on the initial run where B < 0 and f' > 0 (f = r(r-2m) B), for l >= 2:
/// B(r) >= r0(r0-2m) B(r0) / (r(r-2m)) and a(r) >= r0(r0-2m) a(r0) / (r(r-2m)).
struct LowerBoundCheck {
  std::size_t samples = 0;  ///< samples in the run
  double worst_B = 0;       ///< most negative (B - bound), 0 if none
  double worst_a = 0;
};
LowerBoundCheck lower_bound_check(const ModeSolution& sol);

}  // namespace schwarzstatic
