#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dpnls/evolution.hpp"
#include "dpnls/params.hpp"
#include "dpnls/scaling_analysis.hpp"
#include "dpnls/shooting.hpp"

namespace dpnls::cli {

enum class Experiment {
  ground_state,
  omega_sweep,
  locate_omega1,
  lemma_checks,
  instability_demo,
  free_benchmark,
};

const char* to_string(Experiment e);

struct SweepOptions {
  std::vector<double> omegas;  // explicit list wins over the geometric range
  double omega_min = 0.25;
  double omega_max = 1024.0;
  std::size_t count = 13;
  std::vector<double> resolve() const;
};

struct Omega1Options {
  double bracket_lo = 0.5;
  double bracket_hi = 64.0;
  double rel_tol = 1e-3;
};

struct DemoOptions {
  double omega_factor = 4.0;  // omega = factor * located omega1
  std::vector<double> lambdas = {1.02, 1.05, 1.1};
};

struct LemmaOptions {
  std::size_t count = 20;
  double omega = 0.0;  // 0: use omega_factor * located omega1
  double omega_factor = 4.0;
};

struct GridOptions {
  double box_halfwidth = 32.0;
  std::size_t grid_points = 4096;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::ground_state;
  std::string output_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  Parameters params;
  ShootingConfig solver;
  AnalysisConfig analysis;
  EvolutionConfig evolution;
  GridOptions grid;
  SweepOptions sweep;
  Omega1Options omega1;
  DemoOptions demo;
  LemmaOptions lemma;

  std::string canonical_json() const;  // deterministic echo for the manifest
};

/// Parses a config file. Unknown keys anywhere are ConfigParse errors.
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin);

}  // namespace dpnls::cli
