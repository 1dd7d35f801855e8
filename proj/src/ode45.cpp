#include "ode45.hpp"

#include <algorithm>
#include <cmath>

namespace dpnls::detail {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

Dopri5Result integrate_dopri5(const Rhs& rhs, double r0, const double y0[2], double r_end,
                              const Dopri5Options& opts, const StepMonitor& monitor) {
  Dopri5Result result;
  double r = r0;
  double y[2] = {y0[0], y0[1]};
  double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2];
  rhs(r, y, k1);

  OdeNode node{r, y[0], y[1], k1[0], k1[1]};
  result.nodes.push_back(node);

  double dt = std::min(opts.initial_dt, opts.max_dt);
  const double dt_floor = 1e-15 * std::max(1.0, std::abs(r_end - r0));

  while (r < r_end) {
    if (result.steps >= opts.max_steps || dt < dt_floor) {
      result.step_failure = true;
      return result;
    }
    dt = std::min(dt, r_end - r);
    ++result.steps;

    double yt[2];
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + dt * a21 * k1[i];
    rhs(r + c2 * dt, yt, k2);
    for (int i = 0; i < 2; ++i) yt[i] = y[i] + dt * (a31 * k1[i] + a32 * k2[i]);
    rhs(r + c3 * dt, yt, k3);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + dt * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(r + c4 * dt, yt, k4);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + dt * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(r + c5 * dt, yt, k5);
    for (int i = 0; i < 2; ++i)
      yt[i] = y[i] + dt * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(r + dt, yt, k6);
    double ynew[2];
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + dt * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(r + dt, ynew, k7);  // FSAL

    double err_norm = 0.0;
    for (int i = 0; i < 2; ++i) {
      const double err =
          dt * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double ratio = err / scale;
      err_norm += 0.5 * ratio * ratio;
    }
    err_norm = std::sqrt(err_norm);

    if (err_norm <= 1.0) {
      r += dt;
      y[0] = ynew[0];
      y[1] = ynew[1];
      k1[0] = k7[0];
      k1[1] = k7[1];
      const OdeNode prev = node;
      node = OdeNode{r, y[0], y[1], k1[0], k1[1]};
      result.nodes.push_back(node);
      if (monitor) {
        const int code = monitor(prev, node);
        if (code != 0) {
          result.stop_code = code;
          return result;
        }
      }
    }
    const double factor =
        err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
    dt *= std::clamp(factor, 0.2, 5.0);
    dt = std::min(dt, opts.max_dt);
  }
  return result;
}

double hermite5(const OdeNode& a, const OdeNode& b, double r) {
  const double h = b.r - a.r;
  const double s = (r - a.r) / h;
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;

  const double h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
  const double h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
  const double h20 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
  const double h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
  const double h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
  const double h21 = 0.5 * (s3 - 2.0 * s4 + s5);

  return a.phi * h00 + h * a.psi * h10 + h * h * a.dpsi * h20 + b.phi * h01 +
         h * b.psi * h11 + h * h * b.dpsi * h21;
}

}  // namespace dpnls::detail
