#include "dpnls/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpnls/errors.hpp"
#include "dpnls/parallel.hpp"
#include "dpnls/text_io.hpp"
#include "ode45.hpp"

namespace dpnls {

namespace {

using detail::Dopri5Options;
using detail::Dopri5Result;
using detail::OdeNode;

constexpr int kStopCross = 1;
constexpr int kStopUpturn = 2;
constexpr int kStopDecay = 3;
constexpr int kStopAnchor = 4;

double odd_power(double x, double exponent) {
  return std::pow(std::abs(x), exponent - 1.0) * x;
}

detail::Rhs make_rhs(const Parameters& params) {
  return [params](double r, const double y[2], double dy[2]) {
    const double force =
        params.omega * y[0] - params.a * odd_power(y[0], params.p) -
        params.b * odd_power(y[0], params.q);
    dy[0] = y[1];
    if (r == 0.0)
      dy[1] = force / params.dim;  // regular limit of force - (N-1)/r * psi
    else
      dy[1] = force - (params.dim - 1) / r * y[1];
  };
}

/// 2 V(phi0) / (omega phi0^2) where V is the 1-D potential of the phase
/// plane; zero exactly on the decaying separatrix.
double first_integral_gap(double phi0, const Parameters& params) {
  return 1.0 -
         2.0 * params.a / ((params.p + 1.0) * params.omega) * std::pow(phi0, params.p - 1.0) -
         2.0 * params.b / ((params.q + 1.0) * params.omega) * std::pow(phi0, params.q - 1.0);
}

struct TrajectoryScales {
  double sqrt_omega;
  double rmax;
  double psi_eps;  // upturn detection threshold
};

TrajectoryScales make_scales(double phi0, const Parameters& params,
                             const ShootingConfig& config) {
  TrajectoryScales s;
  s.sqrt_omega = std::sqrt(params.omega);
  s.rmax = config.rmax_scale / s.sqrt_omega;
  s.psi_eps = 1e-13 * phi0 * std::max(1.0, s.sqrt_omega);
  return s;
}

Dopri5Options make_ode_options(double phi0, const ShootingConfig& config,
                               const TrajectoryScales& scales) {
  Dopri5Options opts;
  opts.rtol = config.ode_tol;
  opts.atol = config.ode_tol * phi0 * std::max(1.0, scales.sqrt_omega);
  opts.initial_dt = 1e-4 / scales.sqrt_omega;
  opts.max_dt = 0.1 / scales.sqrt_omega;
  return opts;
}

/// Integrates a shot. anchor_phi > 0 adds a stop once phi falls below it.
Dopri5Result run_trajectory(double phi0, const Parameters& params,
                            const ShootingConfig& config, const TrajectoryScales& scales,
                            double anchor_phi) {
  const auto rhs = make_rhs(params);
  const double divergence_level = config.divergence_factor * phi0;
  const double decay_level = config.decay_threshold * phi0;
  const double psi_eps = scales.psi_eps;

  auto monitor = [&](const OdeNode&, const OdeNode& node) -> int {
    if (node.phi <= 0.0) return kStopCross;
    if (node.phi > divergence_level || node.psi > psi_eps) return kStopUpturn;
    if (anchor_phi > 0.0 && node.phi <= anchor_phi && node.psi < 0.0) return kStopAnchor;
    if (node.phi < decay_level && node.psi < 0.0) return kStopDecay;
    return 0;
  };

  double r0 = 0.0;
  double y0[2] = {phi0, 0.0};
  Dopri5Result result;
  if (params.dim >= 2) {
    // Series start clears the (N-1)/r term: phi(h) = phi0 + h^2/(2N) F0.
    const double force0 = params.omega * phi0 - params.a * odd_power(phi0, params.p) -
                          params.b * odd_power(phi0, params.q);
    const double h = 1e-3 / scales.sqrt_omega;
    OdeNode origin{0.0, phi0, 0.0, 0.0, force0 / params.dim};
    result = Dopri5Result{};
    result.nodes.push_back(origin);
    r0 = h;
    y0[0] = phi0 + 0.5 * h * h / params.dim * force0;
    y0[1] = h / params.dim * force0;
    auto rest = detail::integrate_dopri5(rhs, r0, y0, scales.rmax,
                                         make_ode_options(phi0, config, scales), monitor);
    result.nodes.insert(result.nodes.end(), rest.nodes.begin(), rest.nodes.end());
    result.stop_code = rest.stop_code;
    result.steps = rest.steps;
    result.step_failure = rest.step_failure;
    return result;
  }
  return detail::integrate_dopri5(rhs, r0, y0, scales.rmax,
                                  make_ode_options(phi0, config, scales), monitor);
}

ShotOutcome classify(const Dopri5Result& result, double phi0, const Parameters& params) {
  if (result.step_failure)
    fail(Errc::stiffness_failure, "adaptive integrator could not hold its tolerance");
  switch (result.stop_code) {
    case kStopCross: return ShotOutcome::crosses_zero;
    case kStopUpturn: return ShotOutcome::diverges;
    case kStopDecay: return ShotOutcome::decays;
    default: break;
  }
  // Reached Rmax without an event.
  if (params.dim == 1) {
    const double gap = first_integral_gap(phi0, params);
    return gap > 0.0 ? ShotOutcome::diverges : ShotOutcome::crosses_zero;
  }
  return ShotOutcome::decays;  // still positive and falling at Rmax
}

struct Bracket {
  double lo, hi;
  double decayed_at = 0.0;  // nonzero when a shot landed on the separatrix
};

double amplitude_scale(const Parameters& params) {
  double scale = 0.0;
  if (params.b > 0.0)
    scale = std::pow((params.q + 1.0) * params.omega / (2.0 * params.b),
                     1.0 / (params.q - 1.0));
  if (params.a > 0.0) {
    const double sp = std::pow((params.p + 1.0) * params.omega / (2.0 * params.a),
                               1.0 / (params.p - 1.0));
    scale = scale > 0.0 ? std::min(scale, sp) : sp;
  }
  if (scale <= 0.0)
    fail(Errc::bracketing_failure, "no focusing nonlinearity, nothing to shoot for");
  return scale;
}

Bracket establish_bracket(const Parameters& params, const ShootingConfig& config) {
  const double s0 = amplitude_scale(params);
  Bracket bracket;
  if (config.bracket_lo > 0.0 && config.bracket_hi > config.bracket_lo) {
    bracket.lo = config.bracket_lo;
    bracket.hi = config.bracket_hi;
  } else if (params.dim == 1) {
    bracket.lo = 0.2 * s0;
    bracket.hi = 1.02 * s0;
  } else {
    bracket.lo = 0.5 * s0;
    bracket.hi = 6.0 * s0;
  }

  auto outcome = [&](double phi0) {
    return classify(run_trajectory(phi0, params, config, make_scales(phi0, params, config), 0.0),
                    phi0, params);
  };

  for (int attempt = 0;; ++attempt) {
    const ShotOutcome at_lo = outcome(bracket.lo);
    if (at_lo == ShotOutcome::decays) {
      bracket.decayed_at = bracket.lo;
      return bracket;
    }
    const ShotOutcome at_hi = outcome(bracket.hi);
    if (at_hi == ShotOutcome::decays) {
      bracket.decayed_at = bracket.hi;
      return bracket;
    }
    if (at_lo == ShotOutcome::diverges && at_hi == ShotOutcome::crosses_zero) return bracket;
    if (attempt >= config.max_bracket_expansions)
      fail(Errc::bracketing_failure,
           "no diverging/crossing sign change in the amplitude bracket [" +
               format_double(bracket.lo) + ", " + format_double(bracket.hi) + "]");
    if (at_lo != ShotOutcome::diverges) bracket.lo *= 0.5;
    if (at_hi != ShotOutcome::crosses_zero) bracket.hi *= 1.7;
  }
}

/// Bisected amplitude plus the final relative bracket width.
std::pair<double, double> bisect_amplitude(const Parameters& params,
                                           const ShootingConfig& config) {
  Bracket bracket = establish_bracket(params, config);
  if (bracket.decayed_at > 0.0) return {bracket.decayed_at, config.bisect_tol};

  double lo = bracket.lo, hi = bracket.hi;
  while (hi - lo > config.bisect_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket at rounding resolution
    const auto scales = make_scales(mid, params, config);
    const ShotOutcome out =
        classify(run_trajectory(mid, params, config, scales, 0.0), mid, params);
    if (out == ShotOutcome::decays) return {mid, (hi - lo) / hi};
    if (out == ShotOutcome::crosses_zero)
      hi = mid;
    else
      lo = mid;
  }
  return {0.5 * (lo + hi), (hi - lo) / hi};
}

double tail_shape(int dim, double kappa, double r) {
  switch (dim) {
    case 1: return std::exp(-kappa * r);
    case 2: return std::cyl_bessel_k(0.0, kappa * r);
    default: return std::exp(-kappa * r) / r;
  }
}

RadialProfile build_profile(double phi0, const Parameters& params,
                            const ShootingConfig& config, double bracket_rel) {
  const auto scales = make_scales(phi0, params, config);
  const double anchor_phi =
      phi0 * std::max(config.tail_switch, 10.0 * std::sqrt(std::max(bracket_rel, 0.0)));
  const Dopri5Result traj = run_trajectory(phi0, params, config, scales, anchor_phi);
  if (traj.step_failure)
    fail(Errc::stiffness_failure, "profile integration could not hold its tolerance");

  // Anchor the asymptotic tail at the last clean manifold node.
  std::size_t anchor = traj.nodes.size();
  while (anchor > 0) {
    const OdeNode& n = traj.nodes[anchor - 1];
    if (n.phi > 0.0 && n.psi < 0.0) break;
    --anchor;
  }
  if (anchor < 2)
    fail(Errc::truncation_too_small, "trajectory left the decaying branch immediately");
  const OdeNode& last = traj.nodes[anchor - 1];

  const double kappa = scales.sqrt_omega;
  const double tail_C = last.phi / tail_shape(params.dim, kappa, last.r);

  const std::size_t m = config.points;
  const double h = scales.rmax / static_cast<double>(m - 1);
  std::vector<double> values(m);
  std::size_t seg = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = static_cast<double>(i) * h;
    if (r <= last.r) {
      while (seg + 2 < anchor && traj.nodes[seg + 1].r < r) ++seg;
      values[i] = detail::hermite5(traj.nodes[seg], traj.nodes[seg + 1], r);
    } else {
      values[i] = tail_C * tail_shape(params.dim, kappa, r);
    }
  }

  RadialProfile profile = make_radial_profile(std::move(values), scales.rmax, params.dim);
  if (profile.values.back() > 1e-8 * phi0)
    fail(Errc::truncation_too_small, "terminal profile value above 1e-8 of the amplitude");
  for (std::size_t i = 0; i + 1 < m; ++i)
    if (!(profile.values[i + 1] < profile.values[i]) || profile.values[i] <= 0.0)
      fail(Errc::invariant_violation,
           "computed profile is not positive and strictly decreasing at i=" + std::to_string(i));
  return profile;
}

}  // namespace

const char* to_string(ShotOutcome outcome) {
  switch (outcome) {
    case ShotOutcome::crosses_zero: return "CROSSES_ZERO";
    case ShotOutcome::diverges: return "DIVERGES";
    case ShotOutcome::decays: return "DECAYS";
  }
  return "?";
}

ShotResult shoot(double phi0, const Parameters& params, const ShootingConfig& config) {
  if (!(phi0 > 0.0)) fail(Errc::invalid_argument, "shooting amplitude must be positive");
  const auto scales = make_scales(phi0, params, config);

  if (params.dim == 1) {
    const double gap = first_integral_gap(phi0, params);
    if (std::abs(gap) <= config.first_integral_tol)
      return ShotResult{ShotOutcome::decays, 0.0, phi0, 0.0, 0};
  }

  const Dopri5Result result = run_trajectory(phi0, params, config, scales, 0.0);
  const ShotOutcome outcome = classify(result, phi0, params);
  const OdeNode& end = result.nodes.back();
  return ShotResult{outcome, end.r, end.phi, end.psi, result.steps};
}

GroundState solve_ground_state(const Parameters& params, const ShootingConfig& config) {
  if (!(params.omega > 0.0)) fail(Errc::non_positive_coefficient, "omega must be positive");
  const auto [phi0, bracket_rel] = bisect_amplitude(params, config);

  GroundState state;
  state.params = params;
  state.phi0 = phi0;
  state.profile = build_profile(phi0, params, config, bracket_rel);
  state.diagnostics = norms(state.profile, params);

  if (params.dim == 1) {
    state.first_integral_residual = std::abs(first_integral_gap(phi0, params));
    const double allowed = std::max(1e-8, 100.0 * config.bisect_tol);
    if (state.first_integral_residual > allowed)
      fail(Errc::invariant_violation,
           "amplitude equation residual " + format_double(state.first_integral_residual) +
               " above " + format_double(allowed));
  }

  const auto& d = state.diagnostics;
  const double nehari_scale = d.grad2 + params.omega * d.mass;
  if (std::abs(d.K_omega) > config.identity_tolerance * nehari_scale)
    fail(Errc::invariant_violation,
         "Nehari identity violated: |K|/scale = " +
             format_double(std::abs(d.K_omega) / nehari_scale));
  if (std::abs(d.P) > config.identity_tolerance * d.grad2)
    fail(Errc::invariant_violation,
         "virial identity violated: |P|/grad2 = " + format_double(std::abs(d.P) / d.grad2));
  return state;
}

std::vector<GroundState> omega_sweep(const std::vector<double>& omegas, Parameters base,
                                     const ShootingConfig& config, int threads) {
  if (omegas.empty()) return {};
  for (std::size_t i = 0; i + 1 < omegas.size(); ++i)
    if (!(omegas[i] < omegas[i + 1]))
      fail(Errc::invalid_argument, "omega sweep must be strictly increasing");
  if (!(omegas.front() > 0.0)) fail(Errc::invalid_argument, "omega sweep must be positive");

  std::vector<GroundState> states(omegas.size());
  if (threads > 1) {
    parallel_for(omegas.size(), threads, [&](std::size_t i) {
      Parameters p = base;
      p.omega = omegas[i];
      states[i] = solve_ground_state(p, config);  // cold bracket per solve
    });
    return states;
  }

  // Sequential sweep warm-starts each bracket from the previous amplitude.
  ShootingConfig warm = config;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    Parameters p = base;
    p.omega = omegas[i];
    if (i > 0) {
      const double power = 1.0 / (p.q - 1.0);
      const double guess = states[i - 1].phi0 * std::pow(omegas[i] / omegas[i - 1], power);
      warm.bracket_lo = 0.7 * guess;
      warm.bracket_hi = 1.4 * guess;
    }
    states[i] = solve_ground_state(p, warm);
  }
  return states;
}

void save_ground_state(const GroundState& state, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out << "dpnls-ground-state-v1\n";
  out << "N " << state.params.dim << "\n";
  out << "a " << format_double(state.params.a) << "\n";
  out << "b " << format_double(state.params.b) << "\n";
  out << "p " << format_double(state.params.p) << "\n";
  out << "q " << format_double(state.params.q) << "\n";
  out << "omega " << format_double(state.params.omega) << "\n";
  out << "phi0 " << format_double(state.phi0) << "\n";
  out << "rmax " << format_double(state.profile.rmax()) << "\n";
  out << "points " << state.profile.size() << "\n";
  out << "tail_rate " << format_double(state.profile.tail_rate) << "\n";
  out << "first_integral_residual " << format_double(state.first_integral_residual) << "\n";
  out << "columns r phi\n";
  for (std::size_t i = 0; i < state.profile.size(); ++i)
    out << format_double(state.profile.r[i]) << " " << format_double(state.profile.values[i])
        << "\n";
  if (!out) fail(Errc::io_failure, "write failed for " + path.string());
}

GroundState load_ground_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "dpnls-ground-state-v1")
    fail(Errc::io_failure, path.string() + " is not a dpnls ground-state file");

  GroundState state;
  std::size_t points = 0;
  double rmax = 0.0, tail_rate = 0.0;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key == "columns") break;
    if (key == "N") row >> state.params.dim;
    else if (key == "a") row >> state.params.a;
    else if (key == "b") row >> state.params.b;
    else if (key == "p") row >> state.params.p;
    else if (key == "q") row >> state.params.q;
    else if (key == "omega") row >> state.params.omega;
    else if (key == "phi0") row >> state.phi0;
    else if (key == "rmax") row >> rmax;
    else if (key == "points") row >> points;
    else if (key == "tail_rate") row >> tail_rate;
    else if (key == "first_integral_residual") row >> state.first_integral_residual;
    else fail(Errc::io_failure, "unknown header key '" + key + "' in " + path.string());
    if (row.fail()) fail(Errc::io_failure, "bad header line '" + line + "'");
  }
  if (points == 0 || !(rmax > 0.0)) fail(Errc::io_failure, "incomplete header in " + path.string());

  std::vector<double> values;
  values.reserve(points);
  double r = 0.0, v = 0.0;
  while (in >> r >> v) values.push_back(v);
  if (values.size() != points)
    fail(Errc::io_failure, "expected " + std::to_string(points) + " rows, got " +
                               std::to_string(values.size()));
  state.profile = make_radial_profile(std::move(values), rmax, state.params.dim);
  state.profile.tail_rate = tail_rate;
  state.diagnostics = norms(state.profile, state.params);
  return state;
}

}  // namespace dpnls
