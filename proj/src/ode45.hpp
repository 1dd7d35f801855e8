#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace dpnls::detail {

/// Accepted integration node with enough derivative data for quintic Hermite
/// reconstruction of phi between nodes.
struct OdeNode {
  double r = 0.0;
  double phi = 0.0, psi = 0.0;    // state (phi, phi')
  double dphi = 0.0, dpsi = 0.0;  // right-hand side at the node
};

using Rhs = std::function<void(double r, const double y[2], double dy[2])>;

/// Called after every accepted step; a nonzero return stops the integration
/// and is passed through as stop_code.
using StepMonitor = std::function<int(const OdeNode& prev, const OdeNode& node)>;

struct Dopri5Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_dt = 1e-4;
  double max_dt = 0.1;
  std::size_t max_steps = 2000000;
};

struct Dopri5Result {
  std::vector<OdeNode> nodes;
  int stop_code = 0;  // 0 means r_end was reached
  std::size_t steps = 0;
  bool step_failure = false;  // step size underflow or step budget exhausted
};

Dopri5Result integrate_dopri5(const Rhs& rhs, double r0, const double y0[2], double r_end,
                              const Dopri5Options& opts, const StepMonitor& monitor);

/// phi(r) between two nodes from (phi, phi', phi'') at both ends.
double hermite5(const OdeNode& a, const OdeNode& b, double r);

}  // namespace dpnls::detail
