// Error taxonomy shared by every module.
//
// Each error carries a stable kebab-case code so the CLI can map failures to a
// machine-readable error object and the documented exit statuses: configuration
// and input problems exit 2, numeric/resolution failures exit 3.
#pragma once

#include <stdexcept>
#include <string>

namespace tomoregion {

enum class ErrorKind {
  kInput,    // bad arguments, malformed files, violated preconditions
  kNumeric,  // a computation could not be carried out or resolved
};

class Error : public std::runtime_error {
 public:
  Error(std::string code, ErrorKind kind, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), kind_(kind) {}

  const std::string& code() const noexcept { return code_; }
  ErrorKind kind() const noexcept { return kind_; }

 private:
  std::string code_;
  ErrorKind kind_;
};

#define TOMOREGION_DEFINE_ERROR(ClassName, code_str, kind_val)          \
  class ClassName : public Error {                                      \
   public:                                                              \
    explicit ClassName(const std::string& message)                      \
        : Error(code_str, kind_val, std::string(code_str) + ": " + message) {} \
  }

TOMOREGION_DEFINE_ERROR(InvalidDimensionError, "invalid-dimension", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(DimensionMismatchError, "dimension-mismatch", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InvalidInputError, "invalid-input", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(OutOfEllipsoidError, "out-of-ellipsoid", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InvalidRadiusError, "invalid-radius", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InvalidOptionError, "invalid-option", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(IncompleteDesignError, "incomplete-design", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(DegenerateEllipsoidError, "degenerate-ellipsoid", ErrorKind::kNumeric);
TOMOREGION_DEFINE_ERROR(InstanceTooLargeError, "instance-too-large", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InvalidWitnessInputError, "invalid-witness-input", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(ResolutionFailureError, "resolution-failure", ErrorKind::kNumeric);
TOMOREGION_DEFINE_ERROR(PrecisionUnreachableError, "precision-unreachable", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InvalidParameterError, "invalid-parameter", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(NormalizationUnresolvableError, "normalization-unresolvable", ErrorKind::kNumeric);
TOMOREGION_DEFINE_ERROR(LemmaInapplicableError, "lemma-inapplicable", ErrorKind::kInput);
TOMOREGION_DEFINE_ERROR(InsufficientSamplesError, "insufficient-psd-samples", ErrorKind::kNumeric);

#undef TOMOREGION_DEFINE_ERROR

}  // namespace tomoregion
