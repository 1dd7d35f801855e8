#pragma once

#include <cstddef>
#include <vector>

#include "dpnls/functionals.hpp"
#include "dpnls/shooting.hpp"

namespace dpnls {

struct AnalysisConfig {
  double identity_tolerance = 1e-6;    // relative bound on |K|, |P| of a ground state
  double membership_tolerance = 1e-8;  // relative margin for the strict inequalities
  double mass_tolerance = 1e-8;        // relative mass-equality tolerance
  double slack_tolerance = 1e-8;       // allowed violation of the E - P bound
  double root_tol = 1e-10;             // relative tolerance of lambda roots
  double scan_lo = 1e-4;               // lambda scan window for root bracketing
  double scan_hi = 1e4;
  std::size_t scan_points = 4096;
};

/// The structure of lambda -> E(v^lambda) when E(v) > 0: critical points
/// lambda1 < lambda3 and zeros lambda2 < lambda4, interlaced as
/// lambda1 < lambda2 < lambda3 < lambda4.
struct CurvePoints {
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0, lambda4 = 0.0;
};

CurvePoints critical_points(const ScalingCurve& curve, const AnalysisConfig& config = {});

/// The four defining conditions of the blowup set, with their margins:
/// 0 < E(v) < E(phi), ||v||^2 = ||phi||^2, P(v) < 0, K_omega(v) < 0.
struct MembershipReport {
  bool in_B = false;
  bool energy_positive = false;
  bool energy_below_ground = false;
  bool mass_matches = false;
  bool virial_negative = false;
  bool nehari_negative = false;
  double E_v = 0.0, E_phi = 0.0;
  double mass_v = 0.0, mass_phi = 0.0;
  double P_v = 0.0, K_v = 0.0;
};

MembershipReport membership(const FunctionalReport& v, const GroundState& ground,
                            const AnalysisConfig& config = {});

/// Checks d(omega) < S_omega(v) for E(v) > 0, K_omega(v) < 0, P(v) = 0,
/// and reports the lambda0 in (0,1) with K_omega(v^lambda0) = 0.
struct Lemma2Report {
  double d_omega = 0.0;
  double S_v = 0.0;
  double margin = 0.0;  // S_v - d_omega, must be positive
  double lambda0 = 0.0;
  double nehari_at_lambda0 = 0.0;
};

Lemma2Report lemma2_check(const FunctionalReport& v, const GroundState& ground,
                          const AnalysisConfig& config = {});

/// Checks E(phi) <= E(v) - P(v) for members of the blowup set.
struct LemmaEPReport {
  double E_phi = 0.0, E_v = 0.0, P_v = 0.0;
  double slack = 0.0;  // E_v - P_v - E_phi, must be >= -slack_tolerance
};

LemmaEPReport lemma_ep_check(const FunctionalReport& v, const GroundState& ground,
                             const AnalysisConfig& config = {});

/// One bisection iterate of the energy-sign search in omega. epq_gap is
/// (beta-2) b/(q+1) lq - (2-alpha) a/(p+1) lp, whose sign equals the sign of
/// E(phi_omega) because P(phi_omega) = 0; energy is E(phi_omega) directly.
struct Omega1Iterate {
  double omega = 0.0;
  double epq_gap = 0.0;
  double energy = 0.0;
};

struct Omega1Result {
  double omega1 = 0.0;
  double bracket_lo = 0.0, bracket_hi = 0.0;
  std::vector<Omega1Iterate> iterates;
};

/// Bisects the sign change of E(phi_omega) in omega using the epq_gap sign,
/// cross-checked against the directly assembled energy at every iterate.
Omega1Result locate_omega1(const Parameters& base, double omega_lo, double omega_hi,
                           const ShootingConfig& shooting = {}, double rel_tol = 1e-3);

}  // namespace dpnls
