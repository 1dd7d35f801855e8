#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "dpnls/errors.hpp"
#include "dpnls/evolution.hpp"
#include "dpnls/functionals.hpp"
#include "dpnls/scaling_analysis.hpp"
#include "dpnls/shooting.hpp"

using namespace dpnls;

namespace {

const Parameters kFree{1, 0.0, 0.0, 3.0, 7.0, 1.0};
const Parameters kCanonical{1, 1.0, 1.0, 3.0, 7.0, 1.0};

GridFunction unit_gaussian(double L, std::size_t n) {
  std::vector<std::complex<double>> v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -L + 2.0 * L * static_cast<double>(j) / static_cast<double>(n);
    v[j] = std::exp(-0.5 * x * x);
  }
  return GridFunction(L, std::move(v));
}

GridFunction advance(GridFunction u, const Parameters& p, double dt, std::size_t steps,
                     bool dealias = true) {
  for (std::size_t s = 0; s < steps; ++s) u = step(u, dt, p, dealias);
  return u;
}

}  // namespace

TEST_CASE("free Gaussian: variance follows (sqrt(pi)/2)(1 + 4 t^2)") {
  EvolutionConfig cfg;
  cfg.dt0 = 1e-3;
  cfg.t_end = 1.0;
  const auto trace = evolve(unit_gaussian(32.0, 1024), kFree, cfg);
  REQUIRE(trace.verdict == Verdict::ran_to_horizon);
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    const double exact =
        0.5 * std::sqrt(std::numbers::pi) * (1.0 + 4.0 * trace.times[i] * trace.times[i]);
    worst = std::max(worst, std::abs(trace.virial[i] - exact) / exact);
  }
  CHECK(worst <= 1e-6);

  const auto vr = virial_residual(trace);
  CHECK(vr.max_rel <= 1e-6);
}

TEST_CASE("free Gaussian: discrete field matches the closed-form evolution") {
  const auto u = advance(unit_gaussian(32.0, 1024), kFree, 1e-3, 1000, false);
  const std::complex<double> den(1.0, 2.0);
  double worst = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double x = u.x(j);
    const std::complex<double> exact = std::exp(-x * x / (2.0 * den)) / std::sqrt(den);
    worst = std::max(worst, std::abs(u.values()[j] - exact));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("each step conserves the discrete mass to machine precision") {
  auto u = unit_gaussian(32.0, 512);
  const double m0 = u.stored_mass();
  for (int s = 0; s < 100; ++s) {
    u = step(u, 5e-4, kCanonical, true);
    CHECK(std::abs(u.stored_mass() - m0) <= 1e-13 * m0);
  }
}

TEST_CASE("Strang splitting self-converges at second order") {
  const double T = 0.5;
  const auto ref = advance(unit_gaussian(32.0, 512), kCanonical, T / 4096.0, 4096);
  double previous = 0.0;
  for (std::size_t k : {64, 128, 256}) {
    const auto uk = advance(unit_gaussian(32.0, 512), kCanonical, T / k, k);
    double err = 0.0;
    for (std::size_t j = 0; j < uk.size(); ++j)
      err = std::max(err, std::abs(uk.values()[j] - ref.values()[j]));
    if (previous > 0.0) {
      const double ratio = previous / err;
      CHECK(ratio > 3.5);
      CHECK(ratio < 4.5);
    }
    previous = err;
  }
}

TEST_CASE("conjugated evolution runs backwards to the initial state") {
  const auto u0 = unit_gaussian(32.0, 512);
  const auto forward = advance(u0, kCanonical, 1e-3, 500);
  std::vector<std::complex<double>> flipped(forward.values());
  for (auto& z : flipped) z = std::conj(z);
  const auto back = advance(GridFunction(32.0, std::move(flipped)), kCanonical, 1e-3, 500);
  double worst = 0.0;
  for (std::size_t j = 0; j < u0.size(); ++j)
    worst = std::max(worst, std::abs(std::conj(back.values()[j]) - u0.values()[j]));
  CHECK(worst <= 1e-6);
}

TEST_CASE("spectral accuracy: free-run error collapses as n doubles") {
  const double T = 0.25;
  std::vector<double> errors;
  for (std::size_t n : {64, 128}) {
    const auto u = advance(unit_gaussian(32.0, n), kFree, 1e-3, 250, false);
    const std::complex<double> den(1.0, 2.0 * T);
    double err = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) {
      const double x = u.x(j);
      const std::complex<double> exact = std::exp(-x * x / (2.0 * den)) / std::sqrt(den);
      err = std::max(err, std::abs(u.values()[j] - exact));
    }
    errors.push_back(err);
  }
  CHECK(errors[1] * 10.0 <= errors[0]);
}

TEST_CASE("standing wave keeps its modulus and conserves mass and energy") {
  const auto gs = solve_ground_state(kCanonical);
  const auto u0 = grid_from_profile(gs.profile, 32.0, 4096);
  EvolutionConfig cfg;
  cfg.dt0 = 2.5e-4;
  cfg.t_end = 2.0;
  const auto trace = evolve(u0, kCanonical, cfg);
  REQUIRE(trace.verdict == Verdict::ran_to_horizon);
  CHECK(trace.trusted == trace.samples());

  for (std::size_t i = 0; i < trace.samples(); ++i) {
    const double t = std::max(trace.times[i], cfg.dt0);
    CHECK(std::abs(trace.mass[i] - trace.mass[0]) <=
          cfg.conservation_tolerance * t * trace.mass[0]);
    CHECK(std::abs(trace.energy[i] - trace.energy[0]) <=
          cfg.conservation_tolerance * t * std::abs(trace.energy[0]));
  }

  // modulus against the profile, and the e^{i omega t} phase against the field
  const std::size_t steps = static_cast<std::size_t>(std::llround(1.0 / cfg.dt0));
  const auto u1 = advance(u0, kCanonical, cfg.dt0, steps);
  double mod_err = 0.0, phase_err = 0.0;
  const std::complex<double> rot = std::polar(1.0, -kCanonical.omega * 1.0);
  for (std::size_t j = 0; j < u1.size(); ++j) {
    mod_err = std::max(mod_err, std::abs(std::abs(u1.values()[j]) -
                                         std::abs(u0.values()[j])));
    phase_err = std::max(phase_err, std::abs(rot * u1.values()[j] - u0.values()[j]));
  }
  CHECK(mod_err <= 1e-6);
  CHECK(phase_err <= 1e-4);
}

TEST_CASE("stationary profile above the crossing runs to the horizon with K, P near zero") {
  Parameters p = kCanonical;
  p.omega = 9.0;
  const auto gs = solve_ground_state(p);
  const auto u0 = grid_from_profile(gs.profile, 8.0, 2048);
  EvolutionConfig cfg;
  cfg.dt0 = 2.5e-4;
  cfg.t_end = 2.0;
  const auto trace = evolve(u0, p, cfg);
  REQUIRE(trace.verdict == Verdict::ran_to_horizon);
  const double k_scale = trace.grad_norm[0] * trace.grad_norm[0] + p.omega * trace.mass[0];
  for (std::size_t i = 0; i < trace.trusted; ++i) {
    CHECK(std::abs(trace.K_omega[i]) <= 1e-3 * k_scale);
    CHECK(std::abs(trace.P[i]) <= 1e-3 * k_scale);
  }
  const auto vr = virial_residual(trace);
  CHECK(vr.max_abs <= 1e-5);  // both sides of the identity are near zero
}

TEST_CASE("certified blowup datum trips the detector and the bound holds") {
  Parameters p = kCanonical;
  p.omega = 9.0;
  const auto gs = solve_ground_state(p);
  const auto u0 = grid_from_profile(rescale(gs.profile, 1.1), 8.0, 8192);
  const auto member = membership(norms(u0, p), gs);
  REQUIRE(member.in_B);

  EvolutionConfig cfg;
  cfg.dt0 = 2.5e-4;
  cfg.t_end = 10.0;
  cfg.blowup_gradient_factor = 10.0;
  cfg.dt_collapse = 1e-6;
  const auto trace = evolve(u0, p, cfg);
  CHECK(trace.verdict == Verdict::blowup);
  CHECK(trace.t_detect > 0.0);
  CHECK(trace.t_detect < cfg.t_end);

  const auto mono = monotonicity_check(trace, gs);
  CHECK(mono.samples_checked == trace.trusted);
  CHECK(mono.bound < 0.0);
  CHECK(mono.worst_gap <= 0.0);
}

TEST_CASE("monotonicity check rejects non-members") {
  Parameters p = kCanonical;
  p.omega = 9.0;
  const auto gs = solve_ground_state(p);
  const auto u0 = grid_from_profile(gs.profile, 8.0, 2048);  // boundary, not interior
  EvolutionConfig cfg;
  cfg.dt0 = 5e-4;
  cfg.t_end = 0.2;
  const auto trace = evolve(u0, p, cfg);
  CHECK_THROWS_AS(monotonicity_check(trace, gs), Error);
}

TEST_CASE("initial data touching the boundary raises BoxMassLeak") {
  const auto wide = [&] {
    const double L = 6.0;
    const std::size_t n = 256;
    std::vector<std::complex<double>> v(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -L + 2.0 * L * static_cast<double>(j) / static_cast<double>(n);
      v[j] = std::exp(-0.05 * x * x);
    }
    return GridFunction(L, std::move(v));
  }();
  EvolutionConfig cfg;
  cfg.t_end = 0.5;
  try {
    evolve(wide, kFree, cfg);
    FAIL("expected BoxMassLeak");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::box_mass_leak);
  }
}

TEST_CASE("virial residual needs enough samples") {
  EvolutionConfig cfg;
  cfg.dt0 = 1e-3;
  cfg.t_end = 0.02;  // two samples only
  const auto trace = evolve(unit_gaussian(32.0, 256), kFree, cfg);
  CHECK_THROWS_AS(virial_residual(trace), Error);
}

TEST_CASE("trace samples are uniform in time") {
  EvolutionConfig cfg;
  cfg.dt0 = 2.5e-4;
  cfg.t_end = 0.3;
  const auto trace = evolve(unit_gaussian(32.0, 256), kFree, cfg);
  REQUIRE(trace.samples() >= 4);
  const double dt = trace.sample_dt();
  CHECK(dt == doctest::Approx(0.01).epsilon(1e-12));
  for (std::size_t i = 0; i + 1 < trace.samples(); ++i)
    CHECK(trace.times[i + 1] - trace.times[i] == doctest::Approx(dt).epsilon(1e-9));
}
