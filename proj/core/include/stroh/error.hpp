#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stroh {

enum class ErrorKind {
  // input validation
  NonPositiveDensity,
  NonUnitAxis,
  NotARotation,
  AsymmetricStiffness,
  AsymmetricVoigtMatrix,
  InvalidFrame,
  InvalidArgument,
  SchemaError,
  // numerical domain
  IndefiniteAcousticTensor,
  DegenerateA0,
  GlancingSpectrum,
  SigmaCardinality,
  IllConditionedJ,
  FactorizationCheckFailed,
  ContourTooClose,
  NotAnEigenvalue,
  DefectiveEigenvalue,
  RealSpectrumPresent,
  NearDefectiveQ,
  NoSurfaceWave,
  GlancingLimit,
  NonEllipticOperator,
  NoIncomingMode,
  GlancingEncountered,
};

enum class ErrorCategory { validation, numerical };

std::string_view to_string(ErrorKind kind);
ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  ErrorCategory category() const noexcept { return category_of(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace stroh
