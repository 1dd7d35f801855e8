#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "dpnls/grid_function.hpp"
#include "dpnls/params.hpp"
#include "dpnls/scaling_analysis.hpp"
#include "dpnls/shooting.hpp"

namespace dpnls {

struct EvolutionConfig {
  double dt0 = 2.5e-4;
  double t_end = 5.0;
  double cfl_safety = 0.2;  // max nonlinear phase advance per step (radians)
  double blowup_gradient_factor = 1e3;
  double conservation_tolerance = 1e-8;  // relative drift per unit time
  bool dealias = true;                   // 2/3-rule truncation
  double dt_collapse = 1e-12;            // dt below this counts as collapsed
  double boundary_zone = 0.05;           // fraction of the box next to each edge
  double boundary_leak_tol = 1e-6;       // abort once boundary mass exceeds this
  double initial_leak_tol = 1e-8;        // admissibility gate on u0
  double trusted_drift = 1e-4;       // energy drift gate (relative to its terms)
  double trusted_mass_drift = 1e-8;  // mass drift gate for trusted samples
  std::size_t max_steps = 20000000;
};

enum class Verdict { ran_to_horizon, blowup, step_collapse };
const char* to_string(Verdict verdict);

/// Uniformly sampled diagnostics of one run. Sampling stops ("freezes") at
/// the step where a verdict other than ran_to_horizon is reached.
struct EvolutionTrace {
  std::vector<double> times;
  std::vector<double> mass;
  std::vector<double> energy;
  std::vector<double> K_omega;
  std::vector<double> P;
  std::vector<double> grad_norm;  // ||grad u||_{L2}
  std::vector<double> virial;     // ||(x - centroid) u||_{L2}^2
  Verdict verdict = Verdict::ran_to_horizon;
  double t_detect = 0.0;      // set for blowup / step_collapse
  std::size_t trusted = 0;    // prefix of samples with healthy dt and drifts
  double centroid = 0.0;      // initial mass centroid used in the virial weight
  Parameters params;
  EvolutionConfig config;

  std::size_t samples() const { return times.size(); }
  double sample_dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

/// One Strang step: half nonlinear phase rotation, full linear spectral step,
/// half nonlinear phase rotation. Both substeps preserve the discrete mass;
/// the optional 2/3-rule truncation follows each nonlinear substep.
GridFunction step(const GridFunction& u, double dt, const Parameters& params,
                  bool dealias = true);

EvolutionTrace evolve(const GridFunction& u0, const Parameters& params,
                      const EvolutionConfig& config = {});

/// Centered second difference of the virial series against 8 P(u(t)).
struct VirialResidual {
  std::vector<double> absolute;  // |d2V/dt2 - 8P| at interior samples
  std::vector<double> relative;  // absolute / max|8P|
  double max_abs = 0.0;
  double max_rel = 0.0;
};

/// limit = 0 means "all trusted samples".
VirialResidual virial_residual(const EvolutionTrace& trace, std::size_t limit = 0);

/// Flow-invariance checks for a run started inside the blowup set:
/// P(u) <= E(u0) - E(phi) + slack, K_omega(u) < 0, P(u) < 0 and a concave
/// virial series at every trusted sample.
struct MonotonicityReport {
  std::size_t samples_checked = 0;
  double bound = 0.0;      // E(u0) - E(phi)
  double worst_gap = 0.0;  // max over samples of P(u) - bound
};

MonotonicityReport monotonicity_check(const EvolutionTrace& trace, const GroundState& ground,
                                      const AnalysisConfig& config = {});

/// Columnar trace export: '#'-prefixed config echo, then one row per sample.
void save_trace(const EvolutionTrace& trace, const std::filesystem::path& path);

/// Even extension u(x) = phi(|x|) sampled onto the periodic grid.
GridFunction grid_from_profile(const RadialProfile& profile, double half_width,
                               std::size_t n);

}  // namespace dpnls
