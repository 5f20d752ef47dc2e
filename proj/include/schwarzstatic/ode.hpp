#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwarzstatic {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;        ///< 0: pick from the first output interval
  double max_step = 0.0;            ///< 0: unlimited; bound it for oscillatory sources the error estimate can alias
  double min_step_relative = 1e-14;  ///< underflow threshold relative to max(1, |t|)
  std::size_t max_steps = 2'000'000;
};

/// Step size collapsed below the underflow threshold.
class StepUnderflow : public std::runtime_error {
 public:
  StepUnderflow(double t, const std::string& what) : std::runtime_error(what), where_(t) {}
  double where() const { return where_; }

 private:
  double where_;
};

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(const OdeState& y, OdeState& dydt, double t)>;
using OdeObserver = std::function<void(std::size_t index, double t, const OdeState& y)>;

/// Adaptive embedded Runge-Kutta (Fehlberg 7(8)) from t0 through increasing output times,
/// landing exactly on each. Output times equal to t0 are reported with the initial state.
void integrate_to_times(const OdeRhs& rhs, OdeState& y, double t0, std::span<const double> times,
                        const OdeOptions& opts, const OdeObserver& observer);

}  // namespace schwarzstatic
