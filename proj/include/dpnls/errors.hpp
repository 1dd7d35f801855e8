#pragma once

#include <stdexcept>
#include <string>

namespace dpnls {

enum class Errc {
  exponent_ordering,
  non_positive_coefficient,
  bad_dimension,
  invalid_argument,
  resolution_too_coarse,
  scaling_out_of_box,
  stiffness_failure,
  bracketing_failure,
  truncation_too_small,
  not_positive_energy,
  not_four_point,
  hypothesis_failure,
  no_sign_change,
  too_few_samples,
  invariant_violation,
  box_mass_leak,
  missing_artifacts,
  config_parse,
  io_failure,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message);
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace dpnls
