#include "dpnls/functionals.hpp"

#include <cmath>

#include "dpnls/errors.hpp"

namespace dpnls {

namespace {

constexpr double kRichardsonLimit = 1e-2;

double plain_sum(const std::vector<double>& terms) {
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

double grid_sum(const std::vector<double>& terms, bool kahan) {
  return kahan ? compensated_sum(terms) : plain_sum(terms);
}

double grid_grad2(const GridFunction& v, bool kahan) {
  auto s = spectrum(v);
  const std::size_t n = s.size();
  const auto k = spectral::wavenumbers(n, v.half_width());
  std::vector<double> terms(n);
  for (std::size_t m = 0; m < n; ++m)
    terms[m] = (m == n / 2) ? 0.0 : k[m] * k[m] * std::norm(s[m]);
  return v.dx() / static_cast<double>(n) * grid_sum(terms, kahan);
}

double profile_grad2(const RadialProfile& v, bool kahan) {
  const auto d = radial_derivative(v);
  std::vector<double> integrand(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) integrand[i] = d[i] * d[i];
  return radial_integral(v, integrand, kahan);
}

}  // namespace

FunctionalReport assemble_report(double mass, double grad2, double lp, double lq,
                                 const Parameters& params) {
  FunctionalReport rep;
  rep.mass = mass;
  rep.grad2 = grad2;
  rep.lp = lp;
  rep.lq = lq;
  const double ap = params.a / (params.p + 1.0);
  const double bq = params.b / (params.q + 1.0);
  rep.E = 0.5 * grad2 - ap * lp - bq * lq;
  rep.S_omega = rep.E + 0.5 * params.omega * mass;
  rep.K_omega = grad2 + params.omega * mass - params.a * lp - params.b * lq;
  rep.P = grad2 - ap * params.alpha() * lp - bq * params.beta() * lq;
  return rep;
}

FunctionalReport norms(const RadialProfile& v, const Parameters& params,
                       const NormOptions& opts) {
  const std::size_t m = v.size();
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = v.values[i] * v.values[i];
  const double mass = radial_integral(v, f, opts.kahan);
  for (std::size_t i = 0; i < m; ++i) f[i] = std::pow(std::abs(v.values[i]), params.p + 1.0);
  const double lp = radial_integral(v, f, opts.kahan);
  for (std::size_t i = 0; i < m; ++i) f[i] = std::pow(std::abs(v.values[i]), params.q + 1.0);
  const double lq = radial_integral(v, f, opts.kahan);
  const double grad2 = profile_grad2(v, opts.kahan);

  if (opts.check_resolution && m >= 17) {
    RadialProfile coarse;
    coarse.dim = v.dim;
    for (std::size_t i = 0; i < m; i += 2) {
      coarse.r.push_back(v.r[i]);
      coarse.values.push_back(v.values[i]);
    }
    const double g2 = profile_grad2(coarse, opts.kahan);
    if (std::abs(grad2 - g2) > kRichardsonLimit * std::max(std::abs(grad2), 1e-14))
      fail(Errc::resolution_too_coarse, "radial derivative changes by more than 1% under coarsening");
  }
  return assemble_report(mass, grad2, lp, lq, params);
}

FunctionalReport norms(const GridFunction& v, const Parameters& params,
                       const NormOptions& opts) {
  const std::size_t n = v.size();
  const double dx = v.dx();
  std::vector<double> terms(n);
  for (std::size_t j = 0; j < n; ++j) terms[j] = std::norm(v.values()[j]);
  const double mass = dx * grid_sum(terms, opts.kahan);
  for (std::size_t j = 0; j < n; ++j)
    terms[j] = std::pow(std::abs(v.values()[j]), params.p + 1.0);
  const double lp = dx * grid_sum(terms, opts.kahan);
  for (std::size_t j = 0; j < n; ++j)
    terms[j] = std::pow(std::abs(v.values()[j]), params.q + 1.0);
  const double lq = dx * grid_sum(terms, opts.kahan);
  const double grad2 = grid_grad2(v, opts.kahan);

  if (opts.check_resolution && n >= 16) {
    std::vector<std::complex<double>> sub(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) sub[j] = v.values()[2 * j];
    const GridFunction coarse(v.half_width(), std::move(sub));
    const double g2 = grid_grad2(coarse, opts.kahan);
    if (std::abs(grad2 - g2) > kRichardsonLimit * std::max(std::abs(grad2), 1e-14))
      fail(Errc::resolution_too_coarse, "spectral derivative changes by more than 1% under coarsening");
  }
  return assemble_report(mass, grad2, lp, lq, params);
}

RadialProfile rescale(const RadialProfile& v, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "scaling parameter must be positive");
  // v^lambda(r_i/lambda) = lambda^{N/2} v(r_i): scale the abscissae instead of
  // resampling, which realizes the scaling exactly on the quadrature grid.
  RadialProfile out;
  out.dim = v.dim;
  const double factor = std::pow(lambda, 0.5 * v.dim);
  out.r.resize(v.size());
  out.values.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.r[i] = v.r[i] / lambda;
    out.values[i] = factor * v.values[i];
  }
  out.tail_rate = v.tail_rate * lambda;
  return out;
}

GridFunction rescale(const GridFunction& v, double lambda) {
  if (!(lambda > 0.0)) fail(Errc::invalid_argument, "scaling parameter must be positive");
  if (lambda == 1.0) return v;
  const std::size_t n = v.size();

  if (lambda > 1.0) {
    // Compression reads v beyond the box (clipped to zero there); reject
    // inputs that still carry mass near their own edges.
    const double zone = 0.9 * v.half_width();
    double boundary = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(v.values()[j]);
      total += w;
      if (std::abs(v.x(j)) > zone) boundary += w;
    }
    if (total > 0.0 && boundary > 1e-8 * total)
      fail(Errc::scaling_out_of_box,
           "input carries boundary mass; compressing it would clip real data");
  }

  const auto spec = spectrum(v);
  std::vector<double> targets(n);
  for (std::size_t j = 0; j < n; ++j) targets[j] = lambda * v.x(j);
  auto resampled = eval_trig_interpolant(spec, v.half_width(), targets);
  const double factor = std::pow(lambda, 0.5);  // grid evolution is 1-D
  for (auto& z : resampled) z *= factor;
  GridFunction out(v.half_width(), std::move(resampled));

  if (lambda < 1.0) {
    // Stretching pushes mass toward the edges; reject once the boundary zone
    // holds more than a 1e-8 fraction of the total.
    const double zone = 0.9 * out.half_width();
    double boundary = 0.0, total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double w = std::norm(out.values()[j]);
      total += w;
      if (std::abs(out.x(j)) > zone) boundary += w;
    }
    if (total > 0.0 && boundary > 1e-8 * total)
      fail(Errc::scaling_out_of_box, "lambda < 1 pushed significant mass into the boundary zone");
  }
  return out;
}

double ScalingCurve::energy(double lambda) const {
  return c2 * lambda * lambda - c_alpha * std::pow(lambda, alpha) -
         c_beta * std::pow(lambda, beta);
}

double ScalingCurve::denergy_dlambda(double lambda) const {
  return 2.0 * c2 * lambda - alpha * c_alpha * std::pow(lambda, alpha - 1.0) -
         beta * c_beta * std::pow(lambda, beta - 1.0);
}

double ScalingCurve::nehari(double lambda) const {
  return 2.0 * c2 * lambda * lambda + omega_mass - ap_norm * std::pow(lambda, alpha) -
         bq_norm * std::pow(lambda, beta);
}

double ScalingCurve::dnehari_dlambda(double lambda) const {
  return 4.0 * c2 * lambda - alpha * ap_norm * std::pow(lambda, alpha - 1.0) -
         beta * bq_norm * std::pow(lambda, beta - 1.0);
}

ScalingCurve scaling_curve(const FunctionalReport& report, const Parameters& params) {
  ScalingCurve curve;
  curve.c2 = 0.5 * report.grad2;
  curve.c_alpha = params.a / (params.p + 1.0) * report.lp;
  curve.c_beta = params.b / (params.q + 1.0) * report.lq;
  curve.alpha = params.alpha();
  curve.beta = params.beta();
  curve.omega_mass = params.omega * report.mass;
  curve.ap_norm = params.a * report.lp;
  curve.bq_norm = params.b * report.lq;
  return curve;
}

}  // namespace dpnls
