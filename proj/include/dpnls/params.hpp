#pragma once

#include <limits>

namespace dpnls {

/// Model constants of i u_t = -Lap u - a|u|^{p-1}u - b|u|^{q-1}u and of the
/// stationary profile equation at frequency omega.
struct Parameters {
  int dim = 1;        // spatial dimension N, 1..3
  double a = 1.0;     // coefficient of the p-power term
  double b = 1.0;     // coefficient of the q-power term
  double p = 3.0;     // lower exponent
  double q = 7.0;     // upper exponent
  double omega = 1.0; // frequency of the standing wave

  double alpha() const { return 0.5 * dim * (p - 1.0); }
  double beta() const { return 0.5 * dim * (q - 1.0); }

  /// Largest admissible exponent: 2N/(N-2) - 1 for N >= 3, unbounded below.
  double exponent_ceiling() const {
    if (dim >= 3) return 2.0 * dim / (dim - 2.0) - 1.0;
    return std::numeric_limits<double>::infinity();
  }
};

/// Checks a > 0, b > 0, omega > 0, N in {1,2,3} and the exponent window
/// 1 < p < 1 + 4/N < q < 2*-1. Returns the parameters unchanged on success.
Parameters validate(const Parameters& params);

}  // namespace dpnls
