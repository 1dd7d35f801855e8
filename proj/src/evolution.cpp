#include "dpnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "dpnls/errors.hpp"
#include "dpnls/functionals.hpp"
#include "dpnls/text_io.hpp"

namespace dpnls {

namespace {

void dealias_spectrum(std::vector<std::complex<double>>& s) {
  const std::size_t n = s.size();
  const long cutoff = static_cast<long>(n) / 3;
  for (std::size_t m = 0; m < n; ++m)
    if (std::labs(spectral::signed_mode(m, n)) > cutoff) s[m] = 0.0;
}

/// |z|^e as a function of |z|^2, with a multiply-only path when e is a
/// nonnegative even integer (the canonical p = 3, q = 7 case).
class AmpPower {
public:
  explicit AmpPower(double exponent) : e_(exponent) {
    const double half = 0.5 * exponent;
    const double rounded = std::round(half);
    if (std::abs(half - rounded) < 1e-12 && rounded >= 0.0 && rounded <= 16.0)
      int_half_ = static_cast<int>(rounded);
  }
  double operator()(double norm2) const {
    if (int_half_ >= 0) {
      double acc = 1.0;
      for (int i = 0; i < int_half_; ++i) acc *= norm2;
      return acc;
    }
    return std::pow(norm2, 0.5 * e_);
  }

private:
  double e_;
  int int_half_ = -1;
};

void nonlinear_phase(std::vector<std::complex<double>>& v, double dt_half,
                     const Parameters& params) {
  const AmpPower pow_p(params.p - 1.0), pow_q(params.q - 1.0);
  for (auto& z : v) {
    const double norm2 = std::norm(z);
    if (norm2 == 0.0) continue;
    const double rate = params.a * pow_p(norm2) + params.b * pow_q(norm2);
    z *= std::polar(1.0, dt_half * rate);
  }
}

double max_phase_rate(const std::vector<std::complex<double>>& v, const Parameters& params) {
  // The rate is monotone in |z|, so only the largest sample matters.
  double peak = 0.0;
  for (const auto& z : v) peak = std::max(peak, std::norm(z));
  if (peak == 0.0) return 0.0;
  const AmpPower pow_p(params.p - 1.0), pow_q(params.q - 1.0);
  return params.a * pow_p(peak) + params.b * pow_q(peak);
}

struct Diagnostics {
  double mass = 0, grad2 = 0, lp = 0, lq = 0;
  double E = 0, K = 0, P = 0;
  double grad_norm = 0, virial = 0;
  double boundary_fraction = 0;
};

Diagnostics diagnose(const GridFunction& u, const Parameters& params, double centroid,
                     double boundary_zone) {
  Diagnostics d;
  const std::size_t n = u.size();
  const double dx = u.dx();
  const double zone = (1.0 - boundary_zone) * u.half_width();
  const AmpPower pow_p(params.p + 1.0), pow_q(params.q + 1.0);
  double boundary = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(u.values()[j]);
    d.mass += w;
    d.lp += pow_p(w);
    d.lq += pow_q(w);
    const double xr = u.x(j) - centroid;
    d.virial += xr * xr * w;
    if (std::abs(u.x(j)) > zone) boundary += w;
  }
  d.mass *= dx;
  d.lp *= dx;
  d.lq *= dx;
  d.virial *= dx;
  d.boundary_fraction = d.mass > 0.0 ? boundary * dx / d.mass : 0.0;

  auto s = spectrum(u);
  const auto k = spectral::wavenumbers(n, u.half_width());
  for (std::size_t m = 0; m < n; ++m)
    if (m != n / 2) d.grad2 += k[m] * k[m] * std::norm(s[m]);
  d.grad2 *= dx / static_cast<double>(n);
  d.grad_norm = std::sqrt(d.grad2);

  const auto rep = assemble_report(d.mass, d.grad2, d.lp, d.lq, params);
  d.E = rep.E;
  d.K = rep.K_omega;
  d.P = rep.P;
  return d;
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::ran_to_horizon: return "RAN_TO_HORIZON";
    case Verdict::blowup: return "BLOWUP";
    case Verdict::step_collapse: return "STEP_COLLAPSE";
  }
  return "?";
}

GridFunction step(const GridFunction& u, double dt, const Parameters& params, bool dealias) {
  if (!(dt > 0.0)) fail(Errc::invalid_argument, "time step must be positive");
  std::vector<std::complex<double>> v(u.values());
  const std::size_t n = v.size();

  nonlinear_phase(v, 0.5 * dt, params);

  spectral::fft(v);
  if (dealias) dealias_spectrum(v);
  const auto k = spectral::wavenumbers(n, u.half_width());
  for (std::size_t m = 0; m < n; ++m) v[m] *= std::polar(1.0, -k[m] * k[m] * dt);
  spectral::ifft(v);

  nonlinear_phase(v, 0.5 * dt, params);
  if (dealias) {
    spectral::fft(v);
    dealias_spectrum(v);
    spectral::ifft(v);
  }
  return GridFunction(u.half_width(), std::move(v));
}

EvolutionTrace evolve(const GridFunction& u0, const Parameters& params,
                      const EvolutionConfig& config) {
  if (!(config.dt0 > 0.0) || !(config.t_end > 0.0) || !(config.blowup_gradient_factor > 1.0))
    fail(Errc::invalid_argument, "need dt0 > 0, t_end > 0, blowup_gradient_factor > 1");

  EvolutionTrace trace;
  trace.params = params;
  trace.config = config;

  // Virial weight centered at the initial mass centroid.
  {
    double moment = 0.0, total = 0.0;
    for (std::size_t j = 0; j < u0.size(); ++j) {
      const double w = std::norm(u0.values()[j]);
      moment += u0.x(j) * w;
      total += w;
    }
    trace.centroid = total > 0.0 ? moment / total : 0.0;
  }

  Diagnostics d0 = diagnose(u0, params, trace.centroid, config.boundary_zone);
  if (d0.boundary_fraction > config.initial_leak_tol)
    fail(Errc::box_mass_leak, "initial boundary mass fraction " +
                                  format_double(d0.boundary_fraction) + " exceeds " +
                                  format_double(config.initial_leak_tol));

  const std::size_t sample_every =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(0.01 / config.dt0)));
  const double sample_dt = static_cast<double>(sample_every) * config.dt0;

  auto record = [&](double t, const Diagnostics& d) {
    trace.times.push_back(t);
    trace.mass.push_back(d.mass);
    trace.energy.push_back(d.E);
    trace.K_omega.push_back(d.K);
    trace.P.push_back(d.P);
    trace.grad_norm.push_back(d.grad_norm);
    trace.virial.push_back(d.virial);
  };
  record(0.0, d0);

  GridFunction u = u0;
  double t = 0.0;
  std::size_t sample_index = 0;
  std::size_t steps = 0;
  const double grad0 = std::max(d0.grad_norm, 1e-300);

  auto detect = [&](Verdict collapse_kind) {
    const Diagnostics d = diagnose(u, params, trace.centroid, config.boundary_zone);
    trace.verdict = (d.grad_norm > config.blowup_gradient_factor * grad0)
                        ? Verdict::blowup
                        : collapse_kind;
    trace.t_detect = t;
  };

  bool done = false;
  while (!done) {
    const double next_sample = static_cast<double>(sample_index + 1) * sample_dt;
    const double horizon = std::min(next_sample, config.t_end);

    // March to the next sample instant; dt never steps past it.
    while (t < horizon) {
      const double rate = max_phase_rate(u.values(), params);
      double dt = config.dt0;
      if (rate > 0.0) dt = std::min(dt, config.cfl_safety / rate);
      if (dt < config.dt_collapse) {
        detect(Verdict::step_collapse);
        done = true;
        break;
      }
      dt = std::min(dt, horizon - t);
      u = step(u, dt, params, config.dealias);
      t += dt;
      if (++steps >= config.max_steps) {
        detect(Verdict::step_collapse);
        done = true;
        break;
      }
    }
    if (done) break;

    const Diagnostics d = diagnose(u, params, trace.centroid, config.boundary_zone);
    if (d.boundary_fraction > config.boundary_leak_tol)
      fail(Errc::box_mass_leak, "boundary mass fraction " +
                                    format_double(d.boundary_fraction) + " exceeds " +
                                    format_double(config.boundary_leak_tol) + " at t = " +
                                    format_double(t));
    if (t >= next_sample - 1e-12 * sample_dt) {
      ++sample_index;
      record(t, d);
    }
    if (t >= config.t_end - 1e-12 * sample_dt) {
      trace.verdict = Verdict::ran_to_horizon;
      done = true;
    }
  }

  // Diagnostics are trusted while the conserved quantities hold. Mass is an
  // isometry invariant of the splitting, so any visible loss flags the
  // dealias truncation eating a collapsing spike; energy drift is measured
  // against the size of its constituents, not the (often small) total.
  const double e_scale = std::max({std::abs(trace.energy.front()), d0.grad2, 1e-12});
  trace.trusted = trace.samples();
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    const double mass_drift = std::abs(trace.mass[i] - trace.mass.front()) / trace.mass.front();
    const double energy_drift = std::abs(trace.energy[i] - trace.energy.front()) / e_scale;
    if (mass_drift > config.trusted_mass_drift || energy_drift > config.trusted_drift) {
      trace.trusted = i;
      break;
    }
  }
  return trace;
}

VirialResidual virial_residual(const EvolutionTrace& trace, std::size_t limit) {
  std::size_t count = limit == 0 ? trace.trusted : std::min(limit, trace.samples());
  if (count < 5)
    fail(Errc::too_few_samples,
         "virial residual needs at least 5 uniformly sampled points, got " +
             std::to_string(count));
  const double dt = trace.sample_dt();
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double gap = trace.times[i + 1] - trace.times[i];
    if (std::abs(gap - dt) > 1e-9 * dt)
      fail(Errc::too_few_samples, "trace samples are not uniform in time");
  }

  VirialResidual res;
  double denom = 0.0;
  for (std::size_t i = 0; i < count; ++i) denom = std::max(denom, std::abs(8.0 * trace.P[i]));
  denom = std::max(denom, 1e-300);
  for (std::size_t i = 1; i + 1 < count; ++i) {
    const double d2 =
        (trace.virial[i + 1] - 2.0 * trace.virial[i] + trace.virial[i - 1]) / (dt * dt);
    const double abs_res = std::abs(d2 - 8.0 * trace.P[i]);
    res.absolute.push_back(abs_res);
    res.relative.push_back(abs_res / denom);
    res.max_abs = std::max(res.max_abs, abs_res);
    res.max_rel = std::max(res.max_rel, abs_res / denom);
  }
  return res;
}

MonotonicityReport monotonicity_check(const EvolutionTrace& trace, const GroundState& ground,
                                      const AnalysisConfig& config) {
  if (trace.samples() == 0) fail(Errc::too_few_samples, "empty trace");
  const auto& g = ground.diagnostics;
  if (!(g.E > 0.0)) fail(Errc::hypothesis_failure, "ground state energy is not positive");

  // Gate: the initial sample must sit inside the blowup set.
  const double E0 = trace.energy.front();
  const double mass0 = trace.mass.front();
  const bool in_B = E0 > 0.0 && E0 < g.E &&
                    std::abs(mass0 - g.mass) <= config.mass_tolerance * g.mass &&
                    trace.P.front() < 0.0 && trace.K_omega.front() < 0.0;
  if (!in_B)
    fail(Errc::hypothesis_failure, "initial datum is not certified in the blowup set");

  MonotonicityReport rep;
  rep.bound = E0 - g.E;
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  const std::size_t count = trace.trusted;
  const double dt = trace.sample_dt();
  for (std::size_t i = 0; i < count; ++i) {
    const double gap = trace.P[i] - rep.bound;
    rep.worst_gap = std::max(rep.worst_gap, gap);
    if (gap > config.slack_tolerance)
      fail(Errc::invariant_violation,
           "P(u(t)) exceeds E(u0) - E(phi) at sample " + std::to_string(i) + " (t = " +
               format_double(trace.times[i]) + ") by " + format_double(gap));
    if (!(trace.K_omega[i] < 0.0) || !(trace.P[i] < 0.0))
      fail(Errc::invariant_violation,
           "flow left the blowup set at sample " + std::to_string(i) + " (t = " +
               format_double(trace.times[i]) + ")");
    if (i >= 1 && i + 1 < count) {
      const double d2 =
          (trace.virial[i + 1] - 2.0 * trace.virial[i] + trace.virial[i - 1]) / (dt * dt);
      if (!(d2 < 0.0))
        fail(Errc::invariant_violation,
             "virial series is not concave at sample " + std::to_string(i));
    }
    ++rep.samples_checked;
  }
  return rep;
}

void save_trace(const EvolutionTrace& trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  const auto& p = trace.params;
  const auto& c = trace.config;
  out << "# dpnls-trace-v1\n";
  out << "# N " << p.dim << " a " << format_double(p.a) << " b " << format_double(p.b)
      << " p " << format_double(p.p) << " q " << format_double(p.q) << " omega "
      << format_double(p.omega) << "\n";
  out << "# dt0 " << format_double(c.dt0) << " t_end " << format_double(c.t_end)
      << " cfl_safety " << format_double(c.cfl_safety) << " dealias " << (c.dealias ? 1 : 0)
      << "\n";
  out << "# blowup_gradient_factor " << format_double(c.blowup_gradient_factor)
      << " dt_collapse " << format_double(c.dt_collapse) << " conservation_tolerance "
      << format_double(c.conservation_tolerance) << "\n";
  out << "# centroid " << format_double(trace.centroid) << " trusted " << trace.trusted
      << " verdict " << to_string(trace.verdict);
  if (trace.verdict != Verdict::ran_to_horizon)
    out << " t_detect " << format_double(trace.t_detect);
  out << "\n";
  out << "# columns t mass energy K_omega P grad_norm virial\n";
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    out << format_double(trace.times[i]) << " " << format_double(trace.mass[i]) << " "
        << format_double(trace.energy[i]) << " " << format_double(trace.K_omega[i]) << " "
        << format_double(trace.P[i]) << " " << format_double(trace.grad_norm[i]) << " "
        << format_double(trace.virial[i]) << "\n";
  }
  if (!out) fail(Errc::io_failure, "write failed for " + path.string());
}

GridFunction grid_from_profile(const RadialProfile& profile, double half_width,
                               std::size_t n) {
  const double h = profile.spacing();
  const std::size_t m = profile.size();
  std::vector<std::complex<double>> values(n);
  const double dx = 2.0 * half_width / static_cast<double>(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -half_width + static_cast<double>(j) * dx;
    const double r = std::abs(x);
    if (r > profile.rmax()) {
      values[j] = profile.values.back() * std::exp(-profile.tail_rate * (r - profile.rmax()));
      continue;
    }
    // 6-point Lagrange interpolation on the uniform profile grid.
    const auto idx = static_cast<std::ptrdiff_t>(std::floor(r / h));
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(m) - 6;
    const std::size_t base = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx - 2, 0, last));
    double sum = 0.0;
    for (std::size_t k = 0; k < 6; ++k) {
      double weight = 1.0;
      for (std::size_t l = 0; l < 6; ++l) {
        if (l == k) continue;
        weight *= (r - profile.r[base + l]) / (profile.r[base + k] - profile.r[base + l]);
      }
      sum += weight * profile.values[base + k];
    }
    values[j] = sum;
  }
  return GridFunction(half_width, std::move(values));
}

}  // namespace dpnls
