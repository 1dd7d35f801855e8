#include "dpnls/errors.hpp"

namespace dpnls {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::exponent_ordering: return "ExponentOrdering";
    case Errc::non_positive_coefficient: return "NonPositiveCoefficient";
    case Errc::bad_dimension: return "BadDimension";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::resolution_too_coarse: return "ResolutionTooCoarse";
    case Errc::scaling_out_of_box: return "ScalingOutOfBox";
    case Errc::stiffness_failure: return "StiffnessFailure";
    case Errc::bracketing_failure: return "BracketingFailure";
    case Errc::truncation_too_small: return "TruncationTooSmall";
    case Errc::not_positive_energy: return "NotPositiveEnergy";
    case Errc::not_four_point: return "NotFourPoint";
    case Errc::hypothesis_failure: return "HypothesisFailure";
    case Errc::no_sign_change: return "NoSignChange";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::box_mass_leak: return "BoxMassLeak";
    case Errc::missing_artifacts: return "MissingArtifacts";
    case Errc::config_parse: return "ConfigParse";
    case Errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace dpnls
