#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"

namespace dpnls::cli {

struct CheckLine {
  std::string name;    // module invariant being checked
  bool pass = false;
  std::string detail;
};

struct RunOutcome {
  std::vector<CheckLine> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// Executes the configured experiment, writing manifest, artifacts and
/// summary under out_dir. Returns the summary check lines.
RunOutcome run_experiment(const ExperimentConfig& config,
                          const std::filesystem::path& out_dir, bool verbose);

/// Reads the artifacts of a completed run and emits plot-ready columnar
/// files next to them. Throws MissingArtifacts when there is nothing to do.
std::vector<std::string> emit_plotdata(const std::filesystem::path& run_dir);

}  // namespace dpnls::cli
