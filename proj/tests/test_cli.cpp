#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "doctest.h"
#include "dpnls/errors.hpp"
#include "experiments.hpp"

using namespace dpnls;
using namespace dpnls::cli;

namespace fs = std::filesystem;

TEST_CASE("minimal config parses with defaults") {
  const auto cfg = parse_config(R"({"experiment": "free_benchmark"})", "inline");
  CHECK(cfg.experiment == Experiment::free_benchmark);
  CHECK(cfg.seed == 1);
  CHECK(cfg.params.dim == 1);
  CHECK(cfg.evolution.dealias);
}

TEST_CASE("sections override defaults") {
  const auto cfg = parse_config(R"({
    "experiment": "ground_state",
    "seed": 42,
    "params": {"N": 1, "a": 2.0, "omega": 4.0},
    "solver": {"points": 3001, "ode_tol": 1e-9},
    "evolution": {"dt0": 1e-3, "dealias": false}
  })", "inline");
  CHECK(cfg.seed == 42);
  CHECK(cfg.params.a == 2.0);
  CHECK(cfg.params.omega == 4.0);
  CHECK(cfg.solver.points == 3001);
  CHECK(cfg.solver.ode_tol == 1e-9);
  CHECK(cfg.evolution.dt0 == 1e-3);
  CHECK_FALSE(cfg.evolution.dealias);
}

TEST_CASE("unknown keys are ConfigParse errors, not warnings") {
  const auto expect_parse_error = [](const char* text) {
    try {
      parse_config(text, "inline");
      FAIL_CHECK("expected ConfigParse for: " << text);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::config_parse);
    }
  };
  expect_parse_error(R"({"experiment": "ground_state", "tpyo": 1})");
  expect_parse_error(R"({"experiment": "ground_state", "solver": {"ode_tl": 1e-9}})");
  expect_parse_error(R"({"experiment": "ground_state", "params": {"Omega": 2}})");
  expect_parse_error(R"({"experiment": "no_such_thing"})");
  expect_parse_error(R"({"seed": 3})");
  expect_parse_error(R"({"experiment": "ground_state", "solver": {"points": "many"}})");
  expect_parse_error("not json at all");
}

TEST_CASE("sweep resolves to a log-spaced list") {
  SweepOptions sweep;
  sweep.omega_min = 1.0;
  sweep.omega_max = 16.0;
  sweep.count = 5;
  const auto omegas = sweep.resolve();
  REQUIRE(omegas.size() == 5);
  CHECK(omegas.front() == doctest::Approx(1.0));
  CHECK(omegas.back() == doctest::Approx(16.0));
  for (std::size_t i = 0; i + 1 < omegas.size(); ++i)
    CHECK(omegas[i + 1] / omegas[i] == doctest::Approx(2.0).epsilon(1e-12));
  SweepOptions explicit_list;
  explicit_list.omegas = {3.0, 5.0};
  CHECK(explicit_list.resolve() == std::vector<double>{3.0, 5.0});
}

TEST_CASE("canonical config echo is deterministic") {
  const auto cfg = parse_config(R"({"experiment": "omega_sweep", "seed": 9})", "inline");
  CHECK(cfg.canonical_json() == cfg.canonical_json());
  const auto cfg2 = parse_config(R"({"seed": 9, "experiment": "omega_sweep"})", "inline");
  CHECK(cfg.canonical_json() == cfg2.canonical_json());
}

TEST_CASE("free benchmark experiment passes its own checks") {
  auto cfg = parse_config(R"({
    "experiment": "free_benchmark",
    "grid": {"box_halfwidth": 32.0, "grid_points": 512},
    "evolution": {"dt0": 1e-3, "t_end": 0.5}
  })", "inline");
  const fs::path dir = fs::temp_directory_path() / "dpnls_test_free_benchmark";
  fs::remove_all(dir);
  const auto outcome = run_experiment(cfg, dir, false);
  CHECK(outcome.all_passed());
  CHECK(fs::exists(dir / "manifest.txt"));
  CHECK(fs::exists(dir / "summary.txt"));
  CHECK(fs::exists(dir / "trace_free.dat"));

  // traces are plot-ready; emit-plotdata must pick them up
  const auto written = emit_plotdata(dir);
  CHECK(!written.empty());
  fs::remove_all(dir);
}

TEST_CASE("emit-plotdata rejects a run directory without artifacts") {
  const fs::path dir = fs::temp_directory_path() / "dpnls_test_empty_run";
  fs::remove_all(dir);
  fs::create_directories(dir);
  try {
    emit_plotdata(dir);
    FAIL("expected MissingArtifacts");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::missing_artifacts);
  }
  fs::remove_all(dir);
}
