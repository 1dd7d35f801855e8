#include "dpnls/scaling_analysis.hpp"

#include <cmath>
#include <functional>

#include "dpnls/errors.hpp"
#include "dpnls/text_io.hpp"

namespace dpnls {

namespace {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                   double rel_tol) {
  // f(lo) and f(hi) have opposite signs by construction.
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Roots of f on a log-spaced scan grid, refined by bisection.
std::vector<double> scan_roots(const std::function<double(double)>& f,
                               const AnalysisConfig& config) {
  const std::size_t n = config.scan_points;
  const double ratio = std::log(config.scan_hi / config.scan_lo);
  std::vector<double> roots;
  double prev_x = config.scan_lo;
  double prev_f = f(prev_x);
  for (std::size_t j = 1; j < n; ++j) {
    const double x = config.scan_lo * std::exp(ratio * static_cast<double>(j) /
                                               static_cast<double>(n - 1));
    const double fx = f(x);
    if (prev_f == 0.0)
      roots.push_back(prev_x);
    else if ((fx < 0.0) != (prev_f < 0.0))
      roots.push_back(bisect_root(f, prev_x, x, prev_f, config.root_tol));
    prev_x = x;
    prev_f = fx;
  }
  if (prev_f == 0.0) roots.push_back(prev_x);
  return roots;
}

}  // namespace

CurvePoints critical_points(const ScalingCurve& curve, const AnalysisConfig& config) {
  const double energy_at_one = curve.energy(1.0);
  if (!(energy_at_one > 0.0))
    fail(Errc::not_positive_energy,
         "E(v) = " + format_double(energy_at_one) + " is not positive");
  if (!(curve.c2 > 0.0) || !(curve.c_alpha > 0.0) || !(curve.c_beta > 0.0))
    fail(Errc::not_four_point,
         "degenerate curve: four-point structure needs all three coefficients positive");
  if (!(curve.alpha < 2.0) || !(curve.beta > 2.0))
    fail(Errc::not_four_point, "four-point structure needs alpha < 2 < beta");

  const auto slope_roots =
      scan_roots([&](double l) { return curve.denergy_dlambda(l); }, config);
  const auto zero_roots = scan_roots([&](double l) { return curve.energy(l); }, config);
  if (slope_roots.size() != 2 || zero_roots.size() != 2)
    fail(Errc::not_four_point, "scan found " + std::to_string(slope_roots.size()) +
                                   " slope roots and " + std::to_string(zero_roots.size()) +
                                   " zero crossings in the lambda window");

  CurvePoints pts{slope_roots[0], zero_roots[0], slope_roots[1], zero_roots[1]};
  if (!(pts.lambda1 < pts.lambda2 && pts.lambda2 < pts.lambda3 && pts.lambda3 < pts.lambda4))
    fail(Errc::not_four_point, "extracted points are not interlaced");
  return pts;
}

MembershipReport membership(const FunctionalReport& v, const GroundState& ground,
                            const AnalysisConfig& config) {
  const auto& g = ground.diagnostics;
  if (!(g.E > 0.0))
    fail(Errc::hypothesis_failure,
         "ground state has E(phi) = " + format_double(g.E) + " <= 0");

  MembershipReport rep;
  rep.E_v = v.E;
  rep.E_phi = g.E;
  rep.mass_v = v.mass;
  rep.mass_phi = g.mass;
  rep.P_v = v.P;
  rep.K_v = v.K_omega;

  const double mtol = config.membership_tolerance;
  rep.energy_positive = v.E > mtol * g.E;
  rep.energy_below_ground = v.E < (1.0 - mtol) * g.E;
  rep.mass_matches = std::abs(v.mass - g.mass) <= config.mass_tolerance * g.mass;
  rep.virial_negative = v.P < -mtol * v.grad2;
  rep.nehari_negative = v.K_omega < -mtol * (v.grad2 + ground.params.omega * v.mass);
  rep.in_B = rep.energy_positive && rep.energy_below_ground && rep.mass_matches &&
             rep.virial_negative && rep.nehari_negative;
  return rep;
}

Lemma2Report lemma2_check(const FunctionalReport& v, const GroundState& ground,
                          const AnalysisConfig& config) {
  if (!(v.E > 0.0))
    fail(Errc::hypothesis_failure, "needs E(v) > 0, got " + format_double(v.E));
  if (!(v.K_omega < 0.0))
    fail(Errc::hypothesis_failure, "needs K_omega(v) < 0, got " + format_double(v.K_omega));
  if (std::abs(v.P) > config.identity_tolerance * v.grad2)
    fail(Errc::hypothesis_failure,
         "needs P(v) = 0, got |P|/grad2 = " + format_double(std::abs(v.P) / v.grad2));

  const ScalingCurve curve = scaling_curve(v, ground.params);
  // K(0+) = omega ||v||^2 > 0, K(1) = K_omega(v) < 0: bisect inside (0, 1).
  double lo = 1e-12, hi = 1.0;
  double f_lo = curve.nehari(lo);
  if (!(f_lo > 0.0))
    fail(Errc::hypothesis_failure, "K_omega(v^lambda) not positive at lambda -> 0");
  const double lambda0 =
      bisect_root([&](double l) { return curve.nehari(l); }, lo, hi, f_lo, config.root_tol);

  Lemma2Report rep;
  rep.d_omega = ground.diagnostics.S_omega;
  rep.S_v = v.S_omega;
  rep.margin = rep.S_v - rep.d_omega;
  rep.lambda0 = lambda0;
  rep.nehari_at_lambda0 = curve.nehari(lambda0);
  return rep;
}

LemmaEPReport lemma_ep_check(const FunctionalReport& v, const GroundState& ground,
                             const AnalysisConfig& config) {
  const MembershipReport member = membership(v, ground, config);
  if (!member.in_B)
    fail(Errc::hypothesis_failure, "v is not in the blowup set");
  LemmaEPReport rep;
  rep.E_phi = ground.diagnostics.E;
  rep.E_v = v.E;
  rep.P_v = v.P;
  rep.slack = v.E - v.P - ground.diagnostics.E;
  return rep;
}

Omega1Result locate_omega1(const Parameters& base, double omega_lo, double omega_hi,
                           const ShootingConfig& shooting, double rel_tol) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo))
    fail(Errc::no_sign_change, "need 0 < omega_lo < omega_hi, got [" +
                                   format_double(omega_lo) + ", " + format_double(omega_hi) + "]");

  Omega1Result result;
  result.bracket_lo = omega_lo;
  result.bracket_hi = omega_hi;

  auto evaluate = [&](double omega) {
    Parameters p = base;
    p.omega = omega;
    const GroundState state = solve_ground_state(p, shooting);
    const auto& d = state.diagnostics;
    Omega1Iterate it;
    it.omega = omega;
    it.epq_gap = (p.beta() - 2.0) * p.b / (p.q + 1.0) * d.lq -
                 (2.0 - p.alpha()) * p.a / (p.p + 1.0) * d.lp;
    it.energy = d.E;
    // E = (epq_gap + P)/2 with P ~ 0, so the two sign routes must agree
    // whenever the gap is clear of the identity noise floor.
    if ((it.epq_gap < 0.0) != (it.energy < 0.0) &&
        std::abs(it.epq_gap) > 10.0 * shooting.identity_tolerance * d.grad2)
      fail(Errc::invariant_violation,
           "energy sign and Epq sign disagree at omega = " + format_double(omega));
    result.iterates.push_back(it);
    return it.epq_gap;
  };

  double gap_lo = evaluate(omega_lo);
  double gap_hi = evaluate(omega_hi);
  if (gap_lo == 0.0 || gap_hi == 0.0 || (gap_lo < 0.0) == (gap_hi < 0.0))
    fail(Errc::no_sign_change,
         "E(phi_omega) does not change sign over the bracket: gap(" +
             format_double(omega_lo) + ") = " + format_double(gap_lo) + ", gap(" +
             format_double(omega_hi) + ") = " + format_double(gap_hi));

  double lo = omega_lo, hi = omega_hi;
  while (hi - lo > rel_tol * hi) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    const double gap_mid = evaluate(mid);
    if ((gap_mid < 0.0) == (gap_lo < 0.0)) {
      lo = mid;
      gap_lo = gap_mid;
    } else {
      hi = mid;
    }
  }
  result.omega1 = std::sqrt(lo * hi);
  result.bracket_lo = lo;
  result.bracket_hi = hi;
  return result;
}

}  // namespace dpnls
