#include "dpnls/grid_function.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "dpnls/errors.hpp"
#include "dpnls/radial_profile.hpp"

namespace dpnls {

namespace spectral {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

// fftw_plan creation is not thread safe; execution on distinct arrays is.
// Plans are cached per (n, sign), created FFTW_UNALIGNED so they can run on
// whatever buffer the caller owns.
std::mutex plan_mutex;

fftw_plan plan_for(std::size_t n, int sign) {
  static std::map<std::pair<std::size_t, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<std::complex<double>> scratch(n);
  auto* data = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), data, data, sign,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!plan) fail(Errc::invalid_argument, "fftw plan creation failed");
  cache.emplace(key, plan);
  return plan;
}

void execute(std::span<std::complex<double>> a, int sign) {
  if (!is_power_of_two(a.size()))
    fail(Errc::invalid_argument, "transform length must be a power of two");
  fftw_plan plan = plan_for(a.size(), sign);
  auto* data = reinterpret_cast<fftw_complex*>(a.data());
  fftw_execute_dft(plan, data, data);
}

}  // namespace

void fft(std::span<std::complex<double>> a) { execute(a, FFTW_FORWARD); }

void ifft(std::span<std::complex<double>> a) {
  execute(a, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (auto& z : a) z *= scale;
}

long signed_mode(std::size_t m, std::size_t n) {
  return m < n / 2 ? static_cast<long>(m) : static_cast<long>(m) - static_cast<long>(n);
}

std::vector<double> wavenumbers(std::size_t n, double half_width) {
  std::vector<double> k(n);
  const double base = std::numbers::pi / half_width;
  for (std::size_t m = 0; m < n; ++m) k[m] = base * static_cast<double>(signed_mode(m, n));
  return k;
}

}  // namespace spectral

GridFunction::GridFunction(double half_width, std::vector<std::complex<double>> values)
    : half_width_(half_width), values_(std::move(values)) {
  if (!(half_width_ > 0.0)) fail(Errc::invalid_argument, "box half-width must be positive");
  if (!spectral::is_power_of_two(values_.size()) || values_.size() < 8)
    fail(Errc::invalid_argument, "grid size must be a power of two, at least 8");
  mass_ = mass(false);
}

double GridFunction::mass(bool kahan) const {
  if (kahan) {
    std::vector<double> terms(values_.size());
    for (std::size_t j = 0; j < values_.size(); ++j) terms[j] = std::norm(values_[j]);
    return dx() * compensated_sum(terms);
  }
  double sum = 0.0;
  for (const auto& z : values_) sum += std::norm(z);
  return dx() * sum;
}

std::vector<std::complex<double>> spectrum(const GridFunction& u) {
  std::vector<std::complex<double>> s(u.values());
  spectral::fft(s);
  return s;
}

GridFunction spectral_derivative(const GridFunction& u) {
  auto s = spectrum(u);
  const std::size_t n = s.size();
  const auto k = spectral::wavenumbers(n, u.half_width());
  for (std::size_t m = 0; m < n; ++m) s[m] *= std::complex<double>(0.0, k[m]);
  s[n / 2] = 0.0;  // odd derivative has no Nyquist component
  spectral::ifft(s);
  return GridFunction(u.half_width(), std::move(s));
}

std::vector<std::complex<double>> eval_trig_interpolant(
    const std::vector<std::complex<double>>& spec, double half_width,
    std::span<const double> points) {
  const std::size_t n = spec.size();
  if (!spectral::is_power_of_two(n))
    fail(Errc::invalid_argument, "spectrum length must be a power of two");
  const long half = static_cast<long>(n / 2);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double period = 2.0 * half_width;

  std::vector<std::complex<double>> out(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    // Points outside [-L, L) read as zero: the interpolant represents a
    // decaying function, and wrapping would alias copies of it instead.
    if (points[j] < -half_width || points[j] >= half_width) {
      out[j] = 0.0;
      continue;
    }
    // theta in [0, 2*pi): position inside the box measured from x = -L.
    double frac = (points[j] + half_width) / period;
    frac -= std::floor(frac);
    const double theta = 2.0 * std::numbers::pi * frac;

    const std::complex<double> w(std::cos(theta), std::sin(theta));
    std::complex<double> acc = 0.0;
    // Sum over signed modes -n/2+1 .. n/2-1 with a running power of w,
    // refreshed periodically to stop rounding drift.
    std::complex<double> pos = 1.0, neg = 1.0;
    acc += spec[0];
    for (long m = 1; m < half; ++m) {
      if (m % 256 == 0) {
        pos = std::complex<double>(std::cos(theta * m), std::sin(theta * m));
        neg = std::conj(pos);
      } else {
        pos *= w;
        neg *= std::conj(w);
      }
      acc += spec[static_cast<std::size_t>(m)] * pos;
      acc += spec[static_cast<std::size_t>(half + (half - m))] * neg;
    }
    // Nyquist bin: represent as a cosine so nodes reproduce exactly.
    acc += spec[static_cast<std::size_t>(half)] * std::cos(theta * static_cast<double>(half));
    out[j] = acc * inv_n;
  }
  return out;
}

}  // namespace dpnls
