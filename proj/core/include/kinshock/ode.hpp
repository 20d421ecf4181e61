#ifndef KINSHOCK_ODE_HPP_
#define KINSHOCK_ODE_HPP_

#include <cmath>
#include <functional>

#include "kinshock/numerics.hpp"

namespace kinshock {

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  double initial_step = 1e-3;
  double max_step = 1.0;
  long max_steps = 2'000'000;
};

/// Adaptive Dormand-Prince 5(4) step from (x, y) toward x + direction*|dx|.
/// Integrates exactly onto `x_target`; `field` is autonomous-or-not f(x, y).
class Dopri5 {
 public:
  using Field = std::function<Vector(double, const Vector&)>;

  Dopri5(Field field, OdeOptions opts = {}) : f_(std::move(field)), o_(opts) {}

  /// Advance the state from x_from to x_to (either direction).
  Vector integrate(double x_from, double x_to, Vector y) const {
    const double span = x_to - x_from;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    double x = x_from;
    double hstep = dir * std::min(o_.initial_step, std::abs(span));
    long steps = 0;
    while (dir * (x_to - x) > 0) {
      if (++steps > o_.max_steps)
        throw NonConvergence("Dopri5", static_cast<int>(steps), std::abs(x_to - x));
      if (dir * (x + hstep - x_to) > 0) hstep = x_to - x;
      Vector y5, err;
      step(x, y, hstep, y5, err);
      const double sc = o_.abs_tol + o_.rel_tol * std::max(y.norm(), y5.norm());
      const double e = err.norm() / sc;
      if (e <= 1.0) {
        x += hstep;
        y = y5;
        const double grow = (e < 1e-30) ? 5.0 : 0.9 * std::pow(e, -0.2);
        hstep *= std::min(5.0, std::max(0.2, grow));
      } else {
        hstep *= std::max(0.1, 0.9 * std::pow(e, -0.25));
      }
      if (std::abs(hstep) > o_.max_step) hstep = dir * o_.max_step;
      if (!(std::abs(hstep) > 0.0))
        throw SolverError("Dopri5: step size underflow");
      if (!y.allFinite()) throw SolverError("Dopri5: state diverged");
    }
    return y;
  }

 private:
  void step(double x, const Vector& y, double hstep, Vector& y5,
            Vector& err) const {
    // Dormand-Prince coefficients
    const Vector k1 = f_(x, y);
    const Vector k2 = f_(x + hstep * (1.0 / 5), y + hstep * (1.0 / 5) * k1);
    const Vector k3 = f_(x + hstep * (3.0 / 10),
                         y + hstep * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    const Vector k4 =
        f_(x + hstep * (4.0 / 5),
           y + hstep * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    const Vector k5 =
        f_(x + hstep * (8.0 / 9),
           y + hstep * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                        64448.0 / 6561 * k3 - 212.0 / 729 * k4));
    const Vector k6 =
        f_(x + hstep,
           y + hstep * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                        46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                        5103.0 / 18656 * k5));
    y5 = y + hstep * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                      2187.0 / 6784 * k5 + 11.0 / 84 * k6);
    const Vector k7 = f_(x + hstep, y5);
    const Vector y4 =
        y + hstep * (5179.0 / 57600 * k1 + 7571.0 / 16695 * k3 +
                     393.0 / 640 * k4 - 92097.0 / 339200 * k5 +
                     187.0 / 2100 * k6 + 1.0 / 40 * k7);
    err = y5 - y4;
  }

  Field f_;
  OdeOptions o_;
};

/// One classical RK4 step (used for short invariance probes).
inline Vector rk4_step(const std::function<Vector(const Vector&)>& f,
                       const Vector& y, double hstep) {
  const Vector k1 = f(y);
  const Vector k2 = f(y + 0.5 * hstep * k1);
  const Vector k3 = f(y + 0.5 * hstep * k2);
  const Vector k4 = f(y + hstep * k3);
  return y + hstep / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace kinshock

#endif  // KINSHOCK_ODE_HPP_
