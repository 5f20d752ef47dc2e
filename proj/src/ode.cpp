#include "schwarzstatic/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

namespace schwarzstatic {

namespace odeint = boost::numeric::odeint;

void integrate_to_times(const OdeRhs& rhs, OdeState& y, double t0, std::span<const double> times,
                        const OdeOptions& opts, const OdeObserver& observer) {
  auto stepper = odeint::make_controlled(opts.atol, opts.rtol, odeint::runge_kutta_fehlberg78<OdeState>());
  auto system = [&rhs](const OdeState& x, OdeState& dxdt, double t) { rhs(x, dxdt, t); };

  double t = t0;
  double dt = opts.initial_step;
  std::size_t steps = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double target = times[k];
    if (target < t) throw std::invalid_argument("integrate_to_times: output times must increase");
    if (dt <= 0.0) dt = std::max((target - t) * 1e-3, 1e-6 * std::max(1.0, std::fabs(t)));
    while (t < target) {
      if (opts.max_step > 0.0) dt = std::min(dt, opts.max_step);
      const double remaining = target - t;
      const bool truncated = dt >= remaining;
      double step = truncated ? remaining : dt;
      const double t_before = t;
      if (stepper.try_step(system, y, t, step) == odeint::success) {
        if (truncated) t = target;
        dt = truncated ? std::max(dt, step) : step;
      } else {
        dt = step;
        if (dt < opts.min_step_relative * std::max(1.0, std::fabs(t_before))) {
          std::ostringstream msg;
          msg << "step-size underflow at t=" << t_before << " (dt=" << dt << ")";
          throw StepUnderflow(t_before, msg.str());
        }
      }
      if (++steps > opts.max_steps) {
        std::ostringstream msg;
        msg << "step budget exhausted at t=" << t;
        throw StepUnderflow(t, msg.str());
      }
      for (double v : y)
        if (!std::isfinite(v)) {
          std::ostringstream msg;
          msg << "non-finite state at t=" << t;
          throw StepUnderflow(t, msg.str());
        }
    }
    observer(k, target, y);
  }
}

}  // namespace schwarzstatic
