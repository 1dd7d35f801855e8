#include "dpnls/params.hpp"

#include <cmath>
#include <sstream>

#include "dpnls/errors.hpp"

namespace dpnls {

Parameters validate(const Parameters& params) {
  if (params.dim < 1 || params.dim > 3)
    fail(Errc::bad_dimension, "N must be 1, 2 or 3, got " + std::to_string(params.dim));
  if (!(params.a > 0.0) || !(params.b > 0.0) || !(params.omega > 0.0)) {
    std::ostringstream msg;
    msg << "a, b, omega must be positive, got a=" << params.a << " b=" << params.b
        << " omega=" << params.omega;
    fail(Errc::non_positive_coefficient, msg.str());
  }
  const double mass_critical = 1.0 + 4.0 / params.dim;
  const double ceiling = params.exponent_ceiling();
  const bool ok = params.p > 1.0 && params.p < mass_critical && params.q > mass_critical &&
                  params.q < ceiling;
  if (!ok) {
    std::ostringstream msg;
    msg << "need 1 < p < 1 + 4/N < q";
    if (std::isfinite(ceiling)) msg << " < " << ceiling;
    msg << ", got p=" << params.p << " q=" << params.q << " with 1 + 4/N=" << mass_critical;
    fail(Errc::exponent_ordering, msg.str());
  }
  return params;
}

}  // namespace dpnls
