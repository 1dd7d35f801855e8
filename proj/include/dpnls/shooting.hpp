#pragma once

#include <filesystem>
#include <vector>

#include "dpnls/functionals.hpp"
#include "dpnls/params.hpp"
#include "dpnls/radial_profile.hpp"

namespace dpnls {

/// A computed solution of the profile equation
///   phi'' + (N-1)/r phi' = omega phi - a phi^p - b phi^q,  phi'(0) = 0,
/// positive and decaying.
struct GroundState {
  Parameters params;
  RadialProfile profile;
  double phi0 = 0.0;  // shooting amplitude phi(0)
  FunctionalReport diagnostics;
  /// Residual of omega phi0^2 = 2a/(p+1) phi0^{p+1} + 2b/(q+1) phi0^{q+1},
  /// relative; meaningful for N = 1 only.
  double first_integral_residual = 0.0;
};

struct ShootingConfig {
  double bracket_lo = 0.0;  // 0 => bracket derived from the amplitude equation
  double bracket_hi = 0.0;
  double ode_tol = 1e-10;         // local error tolerance of the RK5(4) pair
  double bisect_tol = 1e-14;      // relative amplitude bracket width
  double rmax_scale = 30.0;       // Rmax = rmax_scale / sqrt(omega)
  std::size_t points = 6001;      // samples of the returned profile
  double divergence_factor = 1.5; // DIVERGES once phi > factor * phi0
  double decay_threshold = 1e-10; // DECAYS once phi < threshold * phi0 with phi' < 0
  double tail_switch = 1e-6;      // attach the asymptotic tail below this fraction
  double first_integral_tol = 1e-12;  // N = 1 decay classification tolerance
  double identity_tolerance = 1e-6;   // enforced on K_omega and P of the result
  int max_bracket_expansions = 8;
};

enum class ShotOutcome { crosses_zero, diverges, decays };
const char* to_string(ShotOutcome outcome);

struct ShotResult {
  ShotOutcome outcome;
  double r_event = 0.0;   // radius at which the classification fired
  double phi_end = 0.0;
  double dphi_end = 0.0;
  std::size_t steps = 0;
};

/// Integrates from phi(0) = phi0, phi'(0) = 0 and classifies the trajectory.
/// For N = 1 the conserved first integral settles trajectories the event
/// monitors cannot (near-critical orbits that oscillate inside the well).
ShotResult shoot(double phi0, const Parameters& params, const ShootingConfig& config = {});

/// Bisects the shooting amplitude between crossing and diverging trajectories,
/// then integrates once more to build the profile with an asymptotic tail.
GroundState solve_ground_state(const Parameters& params, const ShootingConfig& config = {});

/// Ground state per omega. Sequential sweeps warm-start each bracket from the
/// previous amplitude; with threads > 1 every solve uses a cold bracket.
std::vector<GroundState> omega_sweep(const std::vector<double>& omegas, Parameters base,
                                     const ShootingConfig& config = {}, int threads = 1);

/// Columnar text export, versioned and self-describing (see save for layout).
void save_ground_state(const GroundState& state, const std::filesystem::path& path);
GroundState load_ground_state(const std::filesystem::path& path);

}  // namespace dpnls
