#include <cstdio>
#include <cstdlib>
#include <string>

#include "CLI11.hpp"
#include "config.hpp"
#include "dpnls/errors.hpp"
#include "experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dpnls: ground states, scaling structure and blowup for the "
               "double-power nonlinear Schrodinger equation"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  int threads = 0;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "run an experiment described by a config file");
  run->add_option("config", config_path, "path to the JSON experiment config")->required();
  run->add_option("--output-dir", output_dir, "override the config's output directory");
  run->add_option("--threads", threads, "worker threads for independent sweep points");
  run->add_flag("--verbose", verbose, "print each check as it completes");

  std::string run_dir;
  auto* plot = app.add_subcommand("emit-plotdata",
                                  "emit plot-ready columnar files from a finished run");
  plot->add_option("run-dir", run_dir, "directory of a completed run")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      auto config = dpnls::cli::load_config(config_path);
      if (!output_dir.empty()) config.output_dir = output_dir;
      if (config.output_dir.empty())
        dpnls::fail(dpnls::Errc::config_parse,
                    "no output directory: set output_dir in the config or pass --output-dir");
      if (threads > 0) config.threads = threads;
      if (const char* env = std::getenv("DPNLS_THREADS"); env && threads <= 0)
        config.threads = std::max(1, std::atoi(env));

      const auto outcome = dpnls::cli::run_experiment(config, config.output_dir, verbose);
      std::size_t failed = 0;
      for (const auto& c : outcome.checks) {
        if (!c.pass) ++failed;
        if (!verbose)
          std::printf("%s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                      c.detail.c_str());
      }
      std::printf("%s: %zu checks, %zu failed\n", dpnls::cli::to_string(config.experiment),
                  outcome.checks.size(), failed);
      return failed == 0 ? 0 : 1;
    }
    if (plot->parsed()) {
      const auto written = dpnls::cli::emit_plotdata(run_dir);
      for (const auto& name : written) std::printf("wrote %s\n", name.c_str());
      return 0;
    }
  } catch (const dpnls::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
