#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace dpnls {

/// Complex field sampled at x_j = -L + j*(2L/n) on the periodic box [-L, L).
/// n must be a power of two. Immutable after construction; the L2 mass is
/// computed once and kept as metadata.
class GridFunction {
public:
  GridFunction(double half_width, std::vector<std::complex<double>> values);

  double half_width() const { return half_width_; }
  std::size_t size() const { return values_.size(); }
  double dx() const { return 2.0 * half_width_ / static_cast<double>(size()); }
  double x(std::size_t j) const { return -half_width_ + static_cast<double>(j) * dx(); }
  const std::vector<std::complex<double>>& values() const { return values_; }

  double stored_mass() const { return mass_; }
  double mass(bool kahan = false) const;  // dx * sum |u_j|^2

private:
  double half_width_;
  std::vector<std::complex<double>> values_;
  double mass_;
};

namespace spectral {

bool is_power_of_two(std::size_t n);

/// In-place forward/inverse DFT (FFTW backed). fft is unnormalized,
/// ifft carries the 1/n factor, so ifft(fft(u)) == u.
void fft(std::span<std::complex<double>> a);
void ifft(std::span<std::complex<double>> a);

/// Signed mode number of bin m: m for m < n/2, m - n otherwise.
long signed_mode(std::size_t m, std::size_t n);

/// k_m = (pi/L) * signed_mode(m).
std::vector<double> wavenumbers(std::size_t n, double half_width);

}  // namespace spectral

/// Forward transform of the samples (unnormalized bins).
std::vector<std::complex<double>> spectrum(const GridFunction& u);

/// Spectral first derivative; the Nyquist mode is dropped.
GridFunction spectral_derivative(const GridFunction& u);

/// Evaluates the trigonometric interpolant defined by an unnormalized
/// spectrum at arbitrary points (periodically wrapped).
std::vector<std::complex<double>> eval_trig_interpolant(
    const std::vector<std::complex<double>>& spec, double half_width,
    std::span<const double> points);

}  // namespace dpnls
