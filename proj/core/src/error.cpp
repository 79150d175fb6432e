#include "stroh/error.hpp"

#include "stroh/types.hpp"

namespace stroh {

const char* to_string(Direction d) { return d == Direction::outgoing ? "outgoing" : "incoming"; }

const char* to_string(SignType t) {
  switch (t) {
    case SignType::none: return "none";
    case SignType::positive: return "positive";
    case SignType::negative: return "negative";
    case SignType::indefinite: return "indefinite";
  }
  return "none";
}

const char* to_string(Side s) { return s == Side::plus ? "plus" : "minus"; }

const char* to_string(Region r) {
  switch (r) {
    case Region::hyperbolic: return "hyperbolic";
    case Region::mixed: return "mixed";
    case Region::elliptic: return "elliptic";
    case Region::glancing: return "glancing";
  }
  return "unknown";
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::NonUnitAxis: return "NonUnitAxis";
    case ErrorKind::NotARotation: return "NotARotation";
    case ErrorKind::AsymmetricStiffness: return "AsymmetricStiffness";
    case ErrorKind::AsymmetricVoigtMatrix: return "AsymmetricVoigtMatrix";
    case ErrorKind::InvalidFrame: return "InvalidFrame";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::IndefiniteAcousticTensor: return "IndefiniteAcousticTensor";
    case ErrorKind::DegenerateA0: return "DegenerateA0";
    case ErrorKind::GlancingSpectrum: return "GlancingSpectrum";
    case ErrorKind::SigmaCardinality: return "SigmaCardinality";
    case ErrorKind::IllConditionedJ: return "IllConditionedJ";
    case ErrorKind::FactorizationCheckFailed: return "FactorizationCheckFailed";
    case ErrorKind::ContourTooClose: return "ContourTooClose";
    case ErrorKind::NotAnEigenvalue: return "NotAnEigenvalue";
    case ErrorKind::DefectiveEigenvalue: return "DefectiveEigenvalue";
    case ErrorKind::RealSpectrumPresent: return "RealSpectrumPresent";
    case ErrorKind::NearDefectiveQ: return "NearDefectiveQ";
    case ErrorKind::NoSurfaceWave: return "NoSurfaceWave";
    case ErrorKind::GlancingLimit: return "GlancingLimit";
    case ErrorKind::NonEllipticOperator: return "NonEllipticOperator";
    case ErrorKind::NoIncomingMode: return "NoIncomingMode";
    case ErrorKind::GlancingEncountered: return "GlancingEncountered";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPositiveDensity:
    case ErrorKind::NonUnitAxis:
    case ErrorKind::NotARotation:
    case ErrorKind::AsymmetricStiffness:
    case ErrorKind::AsymmetricVoigtMatrix:
    case ErrorKind::InvalidFrame:
    case ErrorKind::InvalidArgument:
    case ErrorKind::SchemaError:
      return ErrorCategory::validation;
    default:
      return ErrorCategory::numerical;
  }
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace stroh
