#include "experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "dpnls/errors.hpp"
#include "dpnls/evolution.hpp"
#include "dpnls/parallel.hpp"
#include "dpnls/rng.hpp"
#include "dpnls/text_io.hpp"

namespace dpnls::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "dpnls 1.0.0";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) fail(Errc::io_failure, "write failed for " + path.string());
}

void write_manifest(const ExperimentConfig& config, const fs::path& dir) {
  write_text(dir / "manifest.txt",
             std::string(kToolVersion) + "\n" + config.canonical_json() + "\n");
}

void write_runinfo(const fs::path& dir) {
  const auto now = std::chrono::system_clock::now();
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
  write_text(dir / "runinfo.txt",
             "unix_time " + std::to_string(secs.count()) + "\n");
}

class Csv {
public:
  Csv(const fs::path& path, const std::string& header) : out_(path) {
    if (!out_) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
    out_ << header << "\n";
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i)
      out_ << cells[i] << (i + 1 < cells.size() ? "," : "");
    out_ << "\n";
  }
  ~Csv() { out_.flush(); }

private:
  std::ofstream out_;
};

std::string fmt(double x) { return format_double(x); }

/// Validation policy: the full exponent window applies to genuine
/// double-power runs; single-power oracle runs (a = 0 or b = 0) only need a
/// subcritical focusing exponent and omega > 0.
void check_solver_params(const Parameters& p) {
  if (p.a > 0.0 && p.b > 0.0) {
    validate(p);
    return;
  }
  if (!(p.omega > 0.0)) fail(Errc::non_positive_coefficient, "omega must be positive");
  if (p.dim < 1 || p.dim > 3) fail(Errc::bad_dimension, "N must be 1, 2 or 3");
  const double ceiling = p.exponent_ceiling();
  if (p.a > 0.0 && !(p.p > 1.0 && p.p < ceiling))
    fail(Errc::exponent_ordering, "single-power run needs 1 < p < 2*-1");
  if (p.b > 0.0 && !(p.q > 1.0 && p.q < ceiling))
    fail(Errc::exponent_ordering, "single-power run needs 1 < q < 2*-1");
  if (!(p.a > 0.0) && !(p.b > 0.0))
    fail(Errc::non_positive_coefficient, "at least one focusing coefficient must be positive");
}

struct Checks {
  std::vector<CheckLine>* lines;
  bool verbose;
  void add(const std::string& name, bool pass, const std::string& detail) {
    lines->push_back({name, pass, detail});
    if (verbose) std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  }
};

double single_power_profile(double r, double exponent, double omega, double coeff) {
  const double amplitude =
      std::pow((exponent + 1.0) * omega / (2.0 * coeff), 1.0 / (exponent - 1.0));
  const double width = 0.5 * (exponent - 1.0) * std::sqrt(omega);
  return amplitude * std::pow(1.0 / std::cosh(width * r), 2.0 / (exponent - 1.0));
}

void save_diagnostics_csv(const GroundState& gs, const fs::path& path) {
  const auto& d = gs.diagnostics;
  Csv csv(path, "omega,phi0,mass,grad2,lp,lq,E,S_omega,K_omega,P,ratio_lp_lq,tail_rate");
  csv.row({fmt(gs.params.omega), fmt(gs.phi0), fmt(d.mass), fmt(d.grad2), fmt(d.lp),
           fmt(d.lq), fmt(d.E), fmt(d.S_omega), fmt(d.K_omega), fmt(d.P),
           fmt(d.lq > 0 ? d.lp / d.lq : 0.0), fmt(gs.profile.tail_rate)});
}

// ---------------------------------------------------------------------------
// ground_state

void run_ground_state(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  check_solver_params(cfg.params);
  const GroundState gs = solve_ground_state(cfg.params, cfg.solver);
  save_ground_state(gs, dir / "ground_state.dat");
  save_diagnostics_csv(gs, dir / "diagnostics.csv");

  const auto& d = gs.diagnostics;
  const double k_rel = std::abs(d.K_omega) / (d.grad2 + cfg.params.omega * d.mass);
  const double p_rel = std::abs(d.P) / d.grad2;
  checks.add("groundstate.nehari_identity", k_rel <= cfg.analysis.identity_tolerance,
             "|K|/scale = " + fmt(k_rel));
  checks.add("groundstate.virial_identity", p_rel <= cfg.analysis.identity_tolerance,
             "|P|/grad2 = " + fmt(p_rel));

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < gs.profile.size(); ++i)
    if (!(gs.profile.values[i + 1] < gs.profile.values[i])) monotone = false;
  checks.add("groundstate.monotone_positive_profile",
             monotone && gs.profile.values.back() > 0.0,
             "terminal/phi0 = " + fmt(gs.profile.values.back() / gs.phi0));

  if (cfg.params.dim == 1)
    checks.add("groundstate.amplitude_equation", gs.first_integral_residual <= 1e-8,
               "residual = " + fmt(gs.first_integral_residual));

  const bool only_q = cfg.params.a == 0.0 && cfg.params.b > 0.0;
  const bool only_p = cfg.params.b == 0.0 && cfg.params.a > 0.0;
  if (cfg.params.dim == 1 && (only_q || only_p)) {
    const double e = only_q ? cfg.params.q : cfg.params.p;
    const double c = only_q ? cfg.params.b : cfg.params.a;
    double linf = 0.0;
    for (std::size_t i = 0; i < gs.profile.size(); ++i)
      linf = std::max(linf, std::abs(gs.profile.values[i] -
                                     single_power_profile(gs.profile.r[i], e,
                                                          cfg.params.omega, c)));
    checks.add("groundstate.single_power_oracle", linf <= 1e-6, "Linf = " + fmt(linf));
  }
}

// ---------------------------------------------------------------------------
// omega_sweep

void run_omega_sweep(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  check_solver_params(cfg.params);
  const auto omegas = cfg.sweep.resolve();
  const auto states = omega_sweep(omegas, cfg.params, cfg.solver, cfg.threads);

  Csv csv(dir / "omega_sweep.csv",
          "omega,phi0,mass,grad2,lp,lq,E,S_omega,K_rel,P_rel,ratio_lp_lq");
  double worst_k = 0.0, worst_p = 0.0;
  bool action_increasing = true;
  int sign_changes = 0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto& d = states[i].diagnostics;
    const double k_rel = std::abs(d.K_omega) / (d.grad2 + omegas[i] * d.mass);
    const double p_rel = std::abs(d.P) / d.grad2;
    worst_k = std::max(worst_k, k_rel);
    worst_p = std::max(worst_p, p_rel);
    if (i > 0 && !(d.S_omega > states[i - 1].diagnostics.S_omega)) action_increasing = false;
    if (i > 0 && (d.E < 0.0) != (states[i - 1].diagnostics.E < 0.0)) ++sign_changes;
    csv.row({fmt(omegas[i]), fmt(states[i].phi0), fmt(d.mass), fmt(d.grad2), fmt(d.lp),
             fmt(d.lq), fmt(d.E), fmt(d.S_omega), fmt(k_rel), fmt(p_rel),
             fmt(d.lp / d.lq)});
  }

  checks.add("groundstate.identities_along_sweep",
             worst_k <= cfg.analysis.identity_tolerance &&
                 worst_p <= cfg.analysis.identity_tolerance,
             "max |K|/scale = " + fmt(worst_k) + ", max |P|/grad2 = " + fmt(worst_p));
  checks.add("groundstate.action_increasing", action_increasing,
             "d(omega) strictly increasing over " + std::to_string(states.size()) + " solves");

  const std::size_t tail = std::min<std::size_t>(4, states.size());
  bool tail_decreasing = true;
  for (std::size_t i = states.size() - tail; i + 1 < states.size(); ++i) {
    const double r0 = states[i].diagnostics.lp / states[i].diagnostics.lq;
    const double r1 = states[i + 1].diagnostics.lp / states[i + 1].diagnostics.lq;
    if (!(r1 < r0)) tail_decreasing = false;
  }
  checks.add("groundstate.ratio_tail_decreasing", tail_decreasing,
             "lp/lq over the last " + std::to_string(tail) + " solves");
  checks.add("scaling.energy_single_crossing", sign_changes <= 1,
             std::to_string(sign_changes) + " sign changes of E along the sweep");
}

// ---------------------------------------------------------------------------
// locate_omega1

void run_locate_omega1(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  validate(cfg.params);
  const auto result = locate_omega1(cfg.params, cfg.omega1.bracket_lo, cfg.omega1.bracket_hi,
                                    cfg.solver, cfg.omega1.rel_tol);

  Csv csv(dir / "omega1_iterates.csv", "omega,epq_gap,energy");
  bool signs_agree = true;
  for (const auto& it : result.iterates) {
    if ((it.epq_gap < 0.0) != (it.energy < 0.0)) signs_agree = false;
    csv.row({fmt(it.omega), fmt(it.epq_gap), fmt(it.energy)});
  }
  write_text(dir / "omega1.txt",
             "omega1 " + fmt(result.omega1) + "\nbracket_lo " + fmt(result.bracket_lo) +
                 "\nbracket_hi " + fmt(result.bracket_hi) + "\nrel_tol " +
                 fmt(cfg.omega1.rel_tol) + "\n");

  checks.add("scaling.omega1_located", true,
             "omega1 = " + fmt(result.omega1) + " in [" + fmt(result.bracket_lo) + ", " +
                 fmt(result.bracket_hi) + "]");
  checks.add("scaling.epq_sign_consistency", signs_agree,
             std::to_string(result.iterates.size()) + " iterates");

  Parameters lo = cfg.params, hi = cfg.params;
  lo.omega = 0.9 * result.omega1;
  hi.omega = 1.1 * result.omega1;
  const double e_lo = solve_ground_state(lo, cfg.solver).diagnostics.E;
  const double e_hi = solve_ground_state(hi, cfg.solver).diagnostics.E;
  checks.add("scaling.energy_sign_flip", e_lo < 0.0 && e_hi > 0.0,
             "E(0.9 omega1) = " + fmt(e_lo) + ", E(1.1 omega1) = " + fmt(e_hi));
}

// ---------------------------------------------------------------------------
// lemma_checks

struct LemmaCorpusEntry {
  double eps, center, width;
  FunctionalReport report;  // P = 0 representative
};

/// Mass-preserving bump perturbations of the ground state, projected onto
/// P = 0 by rescaling to the lambda3 of their own curve; only candidates
/// with K_omega < 0 qualify for the d(omega) comparison.
std::vector<LemmaCorpusEntry> build_lemma2_corpus(const GroundState& gs, std::size_t count,
                                                  Rng& rng, const AnalysisConfig& analysis) {
  std::vector<LemmaCorpusEntry> corpus;
  const Parameters& p = gs.params;
  const double inv_scale = 1.0 / std::sqrt(p.omega);
  std::size_t attempts = 0;
  while (corpus.size() < count && attempts < 100 * count) {
    ++attempts;
    LemmaCorpusEntry entry;
    entry.eps = (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.005, 0.06);
    entry.center = rng.uniform(0.0, 1.5 * inv_scale);
    entry.width = rng.uniform(0.2, 1.0) * inv_scale;

    RadialProfile pert = gs.profile;
    for (std::size_t i = 0; i < pert.size(); ++i) {
      const double z = (pert.r[i] - entry.center) / entry.width;
      pert.values[i] *= 1.0 + entry.eps * std::exp(-0.5 * z * z);
    }
    const auto raw = norms(pert, p, {false, false});
    const double mass_fix = std::sqrt(gs.diagnostics.mass / raw.mass);
    for (auto& v : pert.values) v *= mass_fix;

    const auto rep = norms(pert, p, {false, false});
    if (!(rep.E > 0.0)) continue;
    CurvePoints pts;
    try {
      pts = critical_points(scaling_curve(rep, p), analysis);
    } catch (const Error&) {
      continue;
    }
    const auto projected = norms(rescale(pert, pts.lambda3), p, {false, false});
    if (!(projected.K_omega <
          -1e-10 * (projected.grad2 + p.omega * projected.mass)))
      continue;
    entry.report = projected;
    corpus.push_back(entry);
  }
  return corpus;
}

void run_lemma_checks(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  validate(cfg.params);
  Parameters p = cfg.params;
  if (cfg.lemma.omega > 0.0) {
    p.omega = cfg.lemma.omega;
  } else {
    const auto o1 = locate_omega1(cfg.params, cfg.omega1.bracket_lo, cfg.omega1.bracket_hi,
                                  cfg.solver, cfg.omega1.rel_tol);
    p.omega = cfg.lemma.omega_factor * o1.omega1;
  }
  const GroundState gs = solve_ground_state(p, cfg.solver);
  checks.add("scaling.positive_energy_hypothesis", gs.diagnostics.E > 0.0,
             "E(phi) = " + fmt(gs.diagnostics.E) + " at omega = " + fmt(p.omega));

  Rng rng(cfg.seed);
  const auto corpus = build_lemma2_corpus(gs, cfg.lemma.count, rng, cfg.analysis);

  Csv csv2(dir / "lemma2.csv",
           "eps,center,width,E_v,K_v,S_v,d_omega,margin,lambda0,K_at_lambda0");
  bool margins_ok = !corpus.empty();
  bool lambda0_ok = !corpus.empty();
  for (const auto& entry : corpus) {
    const auto rep = lemma2_check(entry.report, gs, cfg.analysis);
    const double k_scale = entry.report.grad2 + p.omega * entry.report.mass;
    if (!(rep.margin > 0.0)) margins_ok = false;
    if (!(rep.lambda0 > 0.0 && rep.lambda0 < 1.0 &&
          std::abs(rep.nehari_at_lambda0) <= 1e-10 * k_scale))
      lambda0_ok = false;
    csv2.row({fmt(entry.eps), fmt(entry.center), fmt(entry.width), fmt(entry.report.E),
              fmt(entry.report.K_omega), fmt(entry.report.S_omega), fmt(rep.d_omega),
              fmt(rep.margin), fmt(rep.lambda0), fmt(rep.nehari_at_lambda0)});
  }
  checks.add("analysis.lemma2_corpus_size", corpus.size() >= cfg.lemma.count,
             std::to_string(corpus.size()) + " qualifying inputs");
  checks.add("analysis.lemma2_margin_positive", margins_ok,
             "S_omega(v) - d(omega) > 0 for all inputs");
  checks.add("analysis.lemma2_lambda0", lambda0_ok,
             "K_omega(v^lambda0) = 0 within 1e-10, lambda0 in (0,1)");

  // Lemma EP family: phi^lambda for lambda just above 1, kept while in B.
  Csv csvep(dir / "lemma_ep.csv", "lambda,E_v,P_v,E_phi,slack");
  bool slack_ok = true;
  std::size_t ep_count = 0;
  for (std::size_t i = 0; i < cfg.lemma.count; ++i) {
    const double lambda = 1.0 + (0.3 * static_cast<double>(i + 1)) /
                                    static_cast<double>(cfg.lemma.count);
    const auto rep = norms(rescale(gs.profile, lambda), p, {false, false});
    const auto member = membership(rep, gs, cfg.analysis);
    if (!member.in_B) continue;
    const auto ep = lemma_ep_check(rep, gs, cfg.analysis);
    if (!(ep.slack >= -cfg.analysis.slack_tolerance)) slack_ok = false;
    ++ep_count;
    csvep.row({fmt(lambda), fmt(ep.E_v), fmt(ep.P_v), fmt(ep.E_phi), fmt(ep.slack)});
  }
  checks.add("analysis.lemma_ep_slack", slack_ok && ep_count >= cfg.lemma.count / 2,
             std::to_string(ep_count) + " members, slack >= -" +
                 fmt(cfg.analysis.slack_tolerance));
}

// ---------------------------------------------------------------------------
// instability_demo

void run_instability_demo(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  validate(cfg.params);
  const auto o1 = locate_omega1(cfg.params, cfg.omega1.bracket_lo, cfg.omega1.bracket_hi,
                                cfg.solver, cfg.omega1.rel_tol);
  Parameters p = cfg.params;
  p.omega = cfg.demo.omega_factor * o1.omega1;
  const GroundState gs = solve_ground_state(p, cfg.solver);
  save_ground_state(gs, dir / "ground_state.dat");
  checks.add("scaling.omega1_located", true,
             "omega1 = " + fmt(o1.omega1) + ", demo omega = " + fmt(p.omega));
  checks.add("scaling.positive_energy_hypothesis", gs.diagnostics.E > 0.0,
             "E(phi) = " + fmt(gs.diagnostics.E));

  struct LambdaResult {
    MembershipReport member;
    LemmaEPReport ep;
    EvolutionTrace trace;
    double virial_rel_early = 0.0;
    double mono_worst_gap = 0.0;
    std::string mono_error;
  };
  const auto& lambdas = cfg.demo.lambdas;
  std::vector<LambdaResult> results(lambdas.size());

  parallel_for(lambdas.size(), cfg.threads, [&](std::size_t i) {
    LambdaResult& r = results[i];
    const auto prof = rescale(gs.profile, lambdas[i]);
    const auto u0 = grid_from_profile(prof, cfg.grid.box_halfwidth, cfg.grid.grid_points);
    const auto rep = norms(u0, p);
    r.member = membership(rep, gs, cfg.analysis);
    r.ep = lemma_ep_check(rep, gs, cfg.analysis);
    r.trace = evolve(u0, p, cfg.evolution);
    const std::size_t early = std::max<std::size_t>(5, r.trace.trusted / 2);
    if (r.trace.trusted >= 5)
      r.virial_rel_early = virial_residual(r.trace, std::min(early, r.trace.trusted)).max_rel;
    try {
      r.mono_worst_gap = monotonicity_check(r.trace, gs, cfg.analysis).worst_gap;
    } catch (const Error& e) {
      r.mono_error = e.what();
    }
  });

  Csv csv(dir / "instability_demo.csv",
          "lambda,in_B,E0,E_phi,P0,K0,ep_slack,verdict,t_detect,trusted,samples,"
          "virial_rel_early,mono_worst_gap");
  bool all_member = true, all_blowup = true, all_mono = true, all_ep = true;
  bool detect_decreasing = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const auto& r = results[i];
    if (!r.member.in_B) all_member = false;
    if (r.trace.verdict != Verdict::blowup) all_blowup = false;
    if (!r.mono_error.empty()) all_mono = false;
    if (!(r.ep.slack >= -cfg.analysis.slack_tolerance)) all_ep = false;
    if (i > 0 && !(r.trace.t_detect < results[i - 1].trace.t_detect))
      detect_decreasing = false;
    save_trace(r.trace, dir / ("trace_lambda_" + format_double(lambdas[i], 6) + ".dat"));
    csv.row({fmt(lambdas[i]), r.member.in_B ? "1" : "0", fmt(r.member.E_v),
             fmt(r.member.E_phi), fmt(r.member.P_v), fmt(r.member.K_v), fmt(r.ep.slack),
             to_string(r.trace.verdict), fmt(r.trace.t_detect),
             std::to_string(r.trace.trusted), std::to_string(r.trace.samples()),
             fmt(r.virial_rel_early), fmt(r.mono_worst_gap)});
  }

  checks.add("analysis.membership_certified", all_member,
             "all " + std::to_string(lambdas.size()) + " rescaled data in the blowup set");
  checks.add("analysis.lemma_ep_slack", all_ep, "E(v) - P(v) - E(phi) >= 0 for all lambda");
  checks.add("evolution.monotonicity_bound", all_mono,
             all_mono ? "P(u(t)) <= E(u0) - E(phi) at every trusted sample"
                      : results[0].mono_error);
  checks.add("evolution.blowup_verdict", all_blowup, "BLOWUP with finite t_detect for all lambda");
  checks.add("evolution.t_detect_decreasing", detect_decreasing,
             "t_detect strictly decreasing in lambda");

  double worst_virial = 0.0;
  for (const auto& r : results) worst_virial = std::max(worst_virial, r.virial_rel_early);
  checks.add("evolution.virial_residual_early", worst_virial <= 5e-3,
             "max relative residual over the early trusted window = " + fmt(worst_virial));
}

// ---------------------------------------------------------------------------
// free_benchmark

void run_free_benchmark(const ExperimentConfig& cfg, const fs::path& dir, Checks& checks) {
  Parameters p = cfg.params;
  p.a = 0.0;
  p.b = 0.0;
  p.dim = 1;

  const double L = cfg.grid.box_halfwidth;
  const std::size_t n = cfg.grid.grid_points;
  std::vector<std::complex<double>> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -L + 2.0 * L * static_cast<double>(j) / static_cast<double>(n);
    v[j] = std::exp(-0.5 * x * x);
  }
  const GridFunction u0(L, v);
  auto trace = evolve(u0, p, cfg.evolution);
  save_trace(trace, dir / "trace_free.dat");

  Csv csv(dir / "free_benchmark.csv", "t,virial,exact,rel_err");
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    const double t = trace.times[i];
    const double exact = 0.5 * std::sqrt(std::numbers::pi) * (1.0 + 4.0 * t * t);
    const double rel = std::abs(trace.virial[i] - exact) / exact;
    worst = std::max(worst, rel);
    csv.row({fmt(t), fmt(trace.virial[i]), fmt(exact), fmt(rel)});
  }
  checks.add("evolution.variance_law", worst <= 1e-6, "max relative error = " + fmt(worst));

  const auto vr = virial_residual(trace);
  checks.add("evolution.virial_residual_free", vr.max_rel <= 1e-6,
             "max relative residual = " + fmt(vr.max_rel));

  double mass_drift = 0.0;
  for (std::size_t i = 0; i < trace.samples(); ++i)
    mass_drift = std::max(mass_drift,
                          std::abs(trace.mass[i] - trace.mass.front()) / trace.mass.front());
  checks.add("evolution.mass_conservation", mass_drift <= 1e-11,
             "max relative drift = " + fmt(mass_drift));

  // Exact dispersive field: u(t,x) = (1+2it)^{-1/2} exp(-x^2 / (2(1+2it))).
  GridFunction u = u0;
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.evolution.t_end /
                                                                  cfg.evolution.dt0));
  for (std::size_t s = 0; s < steps; ++s) u = step(u, cfg.evolution.dt0, p, false);
  double linf = 0.0;
  const std::complex<double> den(1.0, 2.0 * cfg.evolution.t_end);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = u.x(j);
    const std::complex<double> exact = std::exp(-x * x / (2.0 * den)) / std::sqrt(den);
    linf = std::max(linf, std::abs(u.values()[j] - exact));
  }
  checks.add("evolution.exact_dispersive_field", linf <= 1e-6, "Linf error = " + fmt(linf));
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config, const fs::path& out_dir,
                          bool verbose) {
  fs::create_directories(out_dir);
  write_manifest(config, out_dir);
  write_runinfo(out_dir);

  RunOutcome outcome;
  Checks checks{&outcome.checks, verbose};
  switch (config.experiment) {
    case Experiment::ground_state: run_ground_state(config, out_dir, checks); break;
    case Experiment::omega_sweep: run_omega_sweep(config, out_dir, checks); break;
    case Experiment::locate_omega1: run_locate_omega1(config, out_dir, checks); break;
    case Experiment::lemma_checks: run_lemma_checks(config, out_dir, checks); break;
    case Experiment::instability_demo: run_instability_demo(config, out_dir, checks); break;
    case Experiment::free_benchmark: run_free_benchmark(config, out_dir, checks); break;
  }

  std::ostringstream summary;
  for (const auto& c : outcome.checks)
    summary << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  write_text(out_dir / "summary.txt", summary.str());
  return outcome;
}

// ---------------------------------------------------------------------------
// emit-plotdata

namespace {

void emit_scaling_curve(const fs::path& run_dir, std::vector<std::string>& written) {
  const fs::path src = run_dir / "ground_state.dat";
  if (!fs::exists(src)) return;
  const GroundState gs = load_ground_state(src);
  const auto curve = scaling_curve(gs.diagnostics, gs.params);

  bool have_points = false;
  CurvePoints pts;
  try {
    pts = critical_points(curve);
    have_points = true;
  } catch (const Error&) {
    // negative-energy ground state: the curve is still worth plotting
  }

  const double lo = have_points ? pts.lambda1 / 4.0 : 0.05;
  const double hi = have_points ? 4.0 * pts.lambda4 : 20.0;
  std::ostringstream out;
  out << "# dpnls-plot scaling-curve\n";
  if (have_points) {
    out << "# lambda1 " << format_double(pts.lambda1) << "\n";
    out << "# lambda2 " << format_double(pts.lambda2) << "\n";
    out << "# lambda3 " << format_double(pts.lambda3) << "\n";
    out << "# lambda4 " << format_double(pts.lambda4) << "\n";
  }
  out << "# columns lambda E P K_omega\n";
  const std::size_t samples = 513;
  for (std::size_t i = 0; i < samples; ++i) {
    const double lam = lo * std::exp(std::log(hi / lo) * static_cast<double>(i) /
                                     static_cast<double>(samples - 1));
    out << format_double(lam) << " " << format_double(curve.energy(lam)) << " "
        << format_double(curve.virial(lam)) << " " << format_double(curve.nehari(lam))
        << "\n";
  }
  write_text(run_dir / "plot_scaling_curve.dat", out.str());
  written.push_back("plot_scaling_curve.dat");
}

void emit_omega_curve(const fs::path& run_dir, std::vector<std::string>& written) {
  const fs::path src = run_dir / "omega_sweep.csv";
  if (!fs::exists(src)) return;
  std::ifstream in(src);
  std::string header;
  std::getline(in, header);
  std::ostringstream out;
  out << "# dpnls-plot omega-energy\n";
  out << "# columns omega E S_omega ratio_lp_lq\n";
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() < 11) fail(Errc::io_failure, "malformed row in " + src.string());
    out << cells[0] << " " << cells[6] << " " << cells[7] << " " << cells[10] << "\n";
  }
  write_text(run_dir / "plot_omega_energy.dat", out.str());
  written.push_back("plot_omega_energy.dat");
}

void emit_traces(const fs::path& run_dir, std::vector<std::string>& written) {
  std::vector<fs::path> traces;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("trace_", 0) == 0 && name.find("plot_") == std::string::npos &&
        entry.path().extension() == ".dat")
      traces.push_back(entry.path());
  }
  std::sort(traces.begin(), traces.end());
  for (const auto& t : traces) {
    const fs::path dst = run_dir / ("plot_" + t.filename().string());
    fs::copy_file(t, dst, fs::copy_options::overwrite_existing);
    written.push_back(dst.filename().string());
  }
}

}  // namespace

std::vector<std::string> emit_plotdata(const fs::path& run_dir) {
  if (!fs::is_directory(run_dir))
    fail(Errc::missing_artifacts, run_dir.string() + " is not a run directory");
  std::vector<std::string> written;
  emit_scaling_curve(run_dir, written);
  emit_omega_curve(run_dir, written);
  emit_traces(run_dir, written);
  if (written.empty())
    fail(Errc::missing_artifacts, "no plottable artifacts found in " + run_dir.string());
  return written;
}

}  // namespace dpnls::cli
