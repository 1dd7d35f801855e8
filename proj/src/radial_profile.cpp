#include "dpnls/radial_profile.hpp"

#include <cmath>
#include <numbers>

#include "dpnls/errors.hpp"

namespace dpnls {

double compensated_sum(const std::vector<double>& terms) {
  double sum = 0.0, carry = 0.0;
  for (double t : terms) {
    const double y = t - carry;
    const double s = sum + y;
    carry = (s - sum) - y;
    sum = s;
  }
  return sum;
}

double sphere_surface(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
  }
  fail(Errc::bad_dimension, "radial representation needs N in {1,2,3}");
}

RadialProfile make_radial_profile(std::vector<double> values, double rmax, int dim) {
  sphere_surface(dim);  // dimension check
  if (values.size() < 9) fail(Errc::invalid_argument, "profile needs at least 9 samples");
  if (!(rmax > 0.0)) fail(Errc::invalid_argument, "rmax must be positive");

  RadialProfile profile;
  const std::size_t m = values.size();
  const double h = rmax / static_cast<double>(m - 1);
  profile.r.resize(m);
  for (std::size_t i = 0; i < m; ++i) profile.r[i] = static_cast<double>(i) * h;
  profile.values = std::move(values);
  profile.dim = dim;
  profile.tail_rate = fit_tail_rate(profile.r, profile.values);
  return profile;
}

std::vector<double> quadrature_weights(const RadialProfile& profile) {
  const std::size_t m = profile.size();
  const double h = profile.spacing();
  const double sigma = sphere_surface(profile.dim);
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double measure = sigma * std::pow(profile.r[i], profile.dim - 1);
    const double trap = (i == 0 || i + 1 == m) ? 0.5 : 1.0;
    w[i] = trap * h * measure;
  }
  return w;
}

double radial_integral(const RadialProfile& profile, const std::vector<double>& f,
                       bool kahan) {
  if (f.size() != profile.size())
    fail(Errc::invalid_argument, "integrand length does not match the profile grid");
  const auto w = quadrature_weights(profile);
  if (kahan) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) terms[i] = w[i] * f[i];
    return compensated_sum(terms);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i];
  return sum;
}

std::vector<double> radial_derivative(const RadialProfile& profile) {
  const std::size_t m = profile.size();
  const double h = profile.spacing();
  const auto& v = profile.values;
  std::vector<double> d(m);

  // Even extension across r = 0: v[-i] = v[i].
  d[0] = 0.0;
  d[1] = (-v[3] + 8.0 * v[2] - 8.0 * v[0] + v[1]) / (12.0 * h);
  for (std::size_t i = 2; i + 2 < m; ++i)
    d[i] = (-v[i + 2] + 8.0 * v[i + 1] - 8.0 * v[i - 1] + v[i - 2]) / (12.0 * h);

  // One-sided 4th-order closures at the outer edge.
  const std::size_t n = m - 1;
  d[n - 1] = (3.0 * v[n] + 10.0 * v[n - 1] - 18.0 * v[n - 2] + 6.0 * v[n - 3] -
              v[n - 4]) / (12.0 * h);
  d[n] = (25.0 * v[n] - 48.0 * v[n - 1] + 36.0 * v[n - 2] - 16.0 * v[n - 3] +
          3.0 * v[n - 4]) / (12.0 * h);
  return d;
}

double fit_tail_rate(const std::vector<double>& r, const std::vector<double>& values) {
  // Slope of -log|phi| over the last tenth of the grid, skipping samples too
  // small for their logarithm to carry information.
  const std::size_t m = r.size();
  std::size_t begin = m - std::max<std::size_t>(m / 10, 4);
  double sr = 0, sl = 0, srr = 0, srl = 0;
  std::size_t count = 0;
  for (std::size_t i = begin; i < m; ++i) {
    const double a = std::abs(values[i]);
    if (a < 1e-300) continue;
    const double l = std::log(a);
    sr += r[i];
    sl += l;
    srr += r[i] * r[i];
    srl += r[i] * l;
    ++count;
  }
  if (count < 2) return 0.0;
  const double denom = count * srr - sr * sr;
  if (denom == 0.0) return 0.0;
  return -(count * srl - sr * sl) / denom;
}

}  // namespace dpnls
