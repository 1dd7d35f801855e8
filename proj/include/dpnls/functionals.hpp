#pragma once

#include "dpnls/grid_function.hpp"
#include "dpnls/params.hpp"
#include "dpnls/radial_profile.hpp"

namespace dpnls {

/// The four base norms of v together with the assembled functionals
///   E       = grad2/2 - a/(p+1) lp - b/(q+1) lq
///   S_omega = E + (omega/2) mass
///   K_omega = grad2 + omega*mass - a*lp - b*lq
///   P       = grad2 - a*alpha/(p+1) lp - b*beta/(q+1) lq
struct FunctionalReport {
  double mass = 0.0;   // ||v||_{L2}^2
  double grad2 = 0.0;  // ||grad v||_{L2}^2
  double lp = 0.0;     // ||v||_{L^{p+1}}^{p+1}
  double lq = 0.0;     // ||v||_{L^{q+1}}^{q+1}
  double E = 0.0;
  double S_omega = 0.0;
  double K_omega = 0.0;
  double P = 0.0;
};

struct NormOptions {
  bool kahan = false;            // compensated summation of the quadratures
  bool check_resolution = true;  // coarse-grid cross-check of grad2
};

FunctionalReport assemble_report(double mass, double grad2, double lp, double lq,
                                 const Parameters& params);

FunctionalReport norms(const RadialProfile& v, const Parameters& params,
                       const NormOptions& opts = {});
FunctionalReport norms(const GridFunction& v, const Parameters& params,
                       const NormOptions& opts = {});

/// v^lambda(x) = lambda^{N/2} v(lambda x). Mass preserving. The radial
/// representation rescales its abscissae (exact); the grid representation
/// keeps its box and resamples through the trigonometric interpolant.
RadialProfile rescale(const RadialProfile& v, double lambda);
GridFunction rescale(const GridFunction& v, double lambda);

/// Coefficients of E(v^lambda) = c2 l^2 - c_alpha l^alpha - c_beta l^beta,
/// with enough of the norms kept to evaluate P and K_omega along the scaling.
struct ScalingCurve {
  double c2 = 0.0, c_alpha = 0.0, c_beta = 0.0;
  double alpha = 1.0, beta = 3.0;
  double omega_mass = 0.0;  // omega ||v||^2
  double ap_norm = 0.0;     // a ||v||_{p+1}^{p+1}
  double bq_norm = 0.0;     // b ||v||_{q+1}^{q+1}

  double energy(double lambda) const;
  double denergy_dlambda(double lambda) const;
  double virial(double lambda) const { return lambda * denergy_dlambda(lambda); }
  double nehari(double lambda) const;
  double dnehari_dlambda(double lambda) const;
};

ScalingCurve scaling_curve(const FunctionalReport& report, const Parameters& params);

}  // namespace dpnls
