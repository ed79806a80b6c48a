#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ifcodec {

enum class ErrorCode {
  InvalidSpec,
  EmptyModel,
  NodeSeparationViolation,
  EnvelopeViolation,
  SpectrumUnavailable,
  IntervalInvalid,
  LeakageSpecInvalid,
  ConfigInvalid,
  ResidualTooLarge,
  QuadratureFailure,
  KernelRadiusTooSmall,
  EmptyWindow,
  LengthMismatch,
  SeparationTooSmall,
  RegimeViolation,
  OrderUnrecoverable,
  CertificateInvalid,
  IoError,
};

std::string_view to_string(ErrorCode code);

/// Numeric failures (as opposed to rejected inputs) map to CLI exit code 3.
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ifcodec
