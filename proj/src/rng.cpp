#include "dpnls/rng.hpp"

#include <cmath>

namespace dpnls {

double Rng::log_uniform(double lo, double hi) {
  return std::exp(uniform(std::log(lo), std::log(hi)));
}

}  // namespace dpnls
