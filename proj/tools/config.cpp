#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dpnls/errors.hpp"
#include "json.hpp"

namespace dpnls::cli {

using nlohmann::json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::ground_state: return "ground_state";
    case Experiment::omega_sweep: return "omega_sweep";
    case Experiment::locate_omega1: return "locate_omega1";
    case Experiment::lemma_checks: return "lemma_checks";
    case Experiment::instability_demo: return "instability_demo";
    case Experiment::free_benchmark: return "free_benchmark";
  }
  return "?";
}

std::vector<double> SweepOptions::resolve() const {
  if (!omegas.empty()) return omegas;
  if (count < 2 || !(omega_min > 0.0) || !(omega_max > omega_min))
    fail(Errc::config_parse, "sweep needs omegas or 0 < omega_min < omega_max with count >= 2");
  std::vector<double> out(count);
  const double ratio = std::log(omega_max / omega_min);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = omega_min * std::exp(ratio * static_cast<double>(i) /
                                  static_cast<double>(count - 1));
  return out;
}

namespace {

/// Wraps a json object so every key must be consumed exactly once.
class Section {
public:
  Section(const json& node, std::string name) : node_(node), name_(std::move(name)) {
    if (!node_.is_object()) fail(Errc::config_parse, "section '" + name_ + "' must be an object");
  }

  template <typename T>
  void get(const char* key, T& out) {
    auto it = node_.find(key);
    if (it == node_.end()) return;
    try {
      out = it->get<T>();
    } catch (const json::exception& e) {
      fail(Errc::config_parse, "bad value for '" + name_ + "." + key + "': " + e.what());
    }
    seen_.push_back(key);
  }

  void finish() const {
    for (auto it = node_.begin(); it != node_.end(); ++it) {
      bool known = false;
      for (const auto& s : seen_)
        if (s == it.key()) known = true;
      if (!known)
        fail(Errc::config_parse, "unknown key '" + name_ + "." + it.key() + "'");
    }
  }

  bool has(const char* key) const { return node_.contains(key); }

private:
  const json& node_;
  std::string name_;
  std::vector<std::string> seen_;
};

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::ground_state, Experiment::omega_sweep,
                       Experiment::locate_omega1, Experiment::lemma_checks,
                       Experiment::instability_demo, Experiment::free_benchmark})
    if (name == to_string(e)) return e;
  fail(Errc::config_parse, "unknown experiment '" + name + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::config_parse, origin + ": " + e.what());
  }
  if (!root.is_object()) fail(Errc::config_parse, origin + ": top level must be an object");

  static const char* known_top[] = {"experiment", "output_dir", "seed",     "threads",
                                    "params",     "solver",     "analysis", "evolution",
                                    "grid",       "sweep",      "omega1",   "demo",
                                    "lemma"};
  for (auto it = root.begin(); it != root.end(); ++it) {
    bool known = false;
    for (const char* k : known_top)
      if (it.key() == k) known = true;
    if (!known) fail(Errc::config_parse, "unknown key '" + it.key() + "'");
  }

  ExperimentConfig cfg;
  if (!root.contains("experiment"))
    fail(Errc::config_parse, origin + ": missing 'experiment'");
  auto get_top = [&](const char* key, auto& out) {
    if (!root.contains(key)) return;
    try {
      out = root[key].get<std::decay_t<decltype(out)>>();
    } catch (const json::exception& e) {
      fail(Errc::config_parse, std::string("bad value for '") + key + "': " + e.what());
    }
  };
  std::string experiment;
  get_top("experiment", experiment);
  cfg.experiment = parse_experiment(experiment);
  get_top("output_dir", cfg.output_dir);
  get_top("seed", cfg.seed);
  get_top("threads", cfg.threads);

  auto consume = [&](const char* name, auto&& body) {
    if (!root.contains(name)) return;
    Section s(root[name], name);
    body(s);
    s.finish();
  };

  consume("params", [&](Section& s) {
    s.get("N", cfg.params.dim);
    s.get("a", cfg.params.a);
    s.get("b", cfg.params.b);
    s.get("p", cfg.params.p);
    s.get("q", cfg.params.q);
    s.get("omega", cfg.params.omega);
  });

  consume("solver", [&](Section& s) {
    s.get("bracket_lo", cfg.solver.bracket_lo);
    s.get("bracket_hi", cfg.solver.bracket_hi);
    s.get("ode_tol", cfg.solver.ode_tol);
    s.get("bisect_tol", cfg.solver.bisect_tol);
    s.get("rmax_scale", cfg.solver.rmax_scale);
    s.get("points", cfg.solver.points);
    s.get("divergence_factor", cfg.solver.divergence_factor);
    s.get("decay_threshold", cfg.solver.decay_threshold);
    s.get("tail_switch", cfg.solver.tail_switch);
    s.get("first_integral_tol", cfg.solver.first_integral_tol);
    s.get("identity_tolerance", cfg.solver.identity_tolerance);
    s.get("max_bracket_expansions", cfg.solver.max_bracket_expansions);
  });

  consume("analysis", [&](Section& s) {
    s.get("identity_tolerance", cfg.analysis.identity_tolerance);
    s.get("membership_tolerance", cfg.analysis.membership_tolerance);
    s.get("mass_tolerance", cfg.analysis.mass_tolerance);
    s.get("slack_tolerance", cfg.analysis.slack_tolerance);
    s.get("root_tol", cfg.analysis.root_tol);
    s.get("scan_lo", cfg.analysis.scan_lo);
    s.get("scan_hi", cfg.analysis.scan_hi);
    s.get("scan_points", cfg.analysis.scan_points);
  });

  consume("evolution", [&](Section& s) {
    s.get("dt0", cfg.evolution.dt0);
    s.get("t_end", cfg.evolution.t_end);
    s.get("cfl_safety", cfg.evolution.cfl_safety);
    s.get("blowup_gradient_factor", cfg.evolution.blowup_gradient_factor);
    s.get("conservation_tolerance", cfg.evolution.conservation_tolerance);
    s.get("dealias", cfg.evolution.dealias);
    s.get("dt_collapse", cfg.evolution.dt_collapse);
    s.get("boundary_zone", cfg.evolution.boundary_zone);
    s.get("boundary_leak_tol", cfg.evolution.boundary_leak_tol);
    s.get("initial_leak_tol", cfg.evolution.initial_leak_tol);
    s.get("trusted_drift", cfg.evolution.trusted_drift);
    s.get("trusted_mass_drift", cfg.evolution.trusted_mass_drift);
    s.get("max_steps", cfg.evolution.max_steps);
  });

  consume("grid", [&](Section& s) {
    s.get("box_halfwidth", cfg.grid.box_halfwidth);
    s.get("grid_points", cfg.grid.grid_points);
  });

  consume("sweep", [&](Section& s) {
    s.get("omegas", cfg.sweep.omegas);
    s.get("omega_min", cfg.sweep.omega_min);
    s.get("omega_max", cfg.sweep.omega_max);
    s.get("count", cfg.sweep.count);
  });

  consume("omega1", [&](Section& s) {
    s.get("bracket_lo", cfg.omega1.bracket_lo);
    s.get("bracket_hi", cfg.omega1.bracket_hi);
    s.get("rel_tol", cfg.omega1.rel_tol);
  });

  consume("demo", [&](Section& s) {
    s.get("omega_factor", cfg.demo.omega_factor);
    s.get("lambdas", cfg.demo.lambdas);
  });

  consume("lemma", [&](Section& s) {
    s.get("count", cfg.lemma.count);
    s.get("omega", cfg.lemma.omega);
    s.get("omega_factor", cfg.lemma.omega_factor);
  });

  if (cfg.threads < 1) fail(Errc::config_parse, "threads must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::config_parse, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["experiment"] = to_string(experiment);
  j["seed"] = seed;
  j["params"] = {{"N", params.dim}, {"a", params.a},     {"b", params.b},
                 {"p", params.p},   {"q", params.q},     {"omega", params.omega}};
  j["solver"] = {{"bracket_lo", solver.bracket_lo},
                 {"bracket_hi", solver.bracket_hi},
                 {"ode_tol", solver.ode_tol},
                 {"bisect_tol", solver.bisect_tol},
                 {"rmax_scale", solver.rmax_scale},
                 {"points", solver.points},
                 {"divergence_factor", solver.divergence_factor},
                 {"decay_threshold", solver.decay_threshold},
                 {"tail_switch", solver.tail_switch},
                 {"first_integral_tol", solver.first_integral_tol},
                 {"identity_tolerance", solver.identity_tolerance},
                 {"max_bracket_expansions", solver.max_bracket_expansions}};
  j["analysis"] = {{"identity_tolerance", analysis.identity_tolerance},
                   {"membership_tolerance", analysis.membership_tolerance},
                   {"mass_tolerance", analysis.mass_tolerance},
                   {"slack_tolerance", analysis.slack_tolerance},
                   {"root_tol", analysis.root_tol},
                   {"scan_lo", analysis.scan_lo},
                   {"scan_hi", analysis.scan_hi},
                   {"scan_points", analysis.scan_points}};
  j["evolution"] = {{"dt0", evolution.dt0},
                    {"t_end", evolution.t_end},
                    {"cfl_safety", evolution.cfl_safety},
                    {"blowup_gradient_factor", evolution.blowup_gradient_factor},
                    {"conservation_tolerance", evolution.conservation_tolerance},
                    {"dealias", evolution.dealias},
                    {"dt_collapse", evolution.dt_collapse},
                    {"boundary_zone", evolution.boundary_zone},
                    {"boundary_leak_tol", evolution.boundary_leak_tol},
                    {"initial_leak_tol", evolution.initial_leak_tol},
                    {"trusted_drift", evolution.trusted_drift},
                    {"trusted_mass_drift", evolution.trusted_mass_drift},
                    {"max_steps", evolution.max_steps}};
  j["grid"] = {{"box_halfwidth", grid.box_halfwidth}, {"grid_points", grid.grid_points}};
  j["sweep"] = {{"omegas", sweep.omegas},
                {"omega_min", sweep.omega_min},
                {"omega_max", sweep.omega_max},
                {"count", sweep.count}};
  j["omega1"] = {{"bracket_lo", omega1.bracket_lo},
                 {"bracket_hi", omega1.bracket_hi},
                 {"rel_tol", omega1.rel_tol}};
  j["demo"] = {{"omega_factor", demo.omega_factor}, {"lambdas", demo.lambdas}};
  j["lemma"] = {{"count", lemma.count},
                {"omega", lemma.omega},
                {"omega_factor", lemma.omega_factor}};
  return j.dump(2);
}

}  // namespace dpnls::cli
