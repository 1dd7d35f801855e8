#pragma once

#include <cstddef>
#include <vector>

namespace dpnls {

/// Real radial samples phi(r_i) on a uniform grid r_i = i*h starting at r = 0.
struct RadialProfile {
  std::vector<double> r;
  std::vector<double> values;
  int dim = 1;             // dimension N the profile lives in
  double tail_rate = 0.0;  // fitted exponential decay rate of the tail

  std::size_t size() const { return r.size(); }
  double rmax() const { return r.back(); }
  double spacing() const { return r.size() > 1 ? r[1] - r[0] : 0.0; }
};

/// Builds a profile on the uniform grid [0, rmax] and fits the tail rate.
RadialProfile make_radial_profile(std::vector<double> values, double rmax, int dim);

/// Surface measure of the unit sphere: 2, 2*pi, 4*pi for N = 1, 2, 3.
double sphere_surface(int dim);

/// Trapezoid weights w_i such that sum_i w_i f(r_i) approximates the full
/// R^N integral sigma_N int_0^Rmax f(r) r^{N-1} dr of a radial integrand.
std::vector<double> quadrature_weights(const RadialProfile& profile);

/// sum_i w_i f_i with the weights above; optional compensated summation.
double radial_integral(const RadialProfile& profile, const std::vector<double>& f,
                       bool kahan = false);

/// 4th-order centered first derivative. The origin uses the even symmetry
/// phi(-r) = phi(r), the right end one-sided stencils of the same order.
std::vector<double> radial_derivative(const RadialProfile& profile);

/// Least-squares slope of -log(values) over the trailing part of the grid.
double fit_tail_rate(const std::vector<double>& r, const std::vector<double>& values);

double compensated_sum(const std::vector<double>& terms);

}  // namespace dpnls
