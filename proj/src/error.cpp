#include "ifcodec/error.hpp"

namespace ifcodec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyModel: return "EmptyModel";
    case ErrorCode::NodeSeparationViolation: return "NodeSeparationViolation";
    case ErrorCode::EnvelopeViolation: return "EnvelopeViolation";
    case ErrorCode::SpectrumUnavailable: return "SpectrumUnavailable";
    case ErrorCode::IntervalInvalid: return "IntervalInvalid";
    case ErrorCode::LeakageSpecInvalid: return "LeakageSpecInvalid";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::KernelRadiusTooSmall: return "KernelRadiusTooSmall";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SeparationTooSmall: return "SeparationTooSmall";
    case ErrorCode::RegimeViolation: return "RegimeViolation";
    case ErrorCode::OrderUnrecoverable: return "OrderUnrecoverable";
    case ErrorCode::CertificateInvalid: return "CertificateInvalid";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::ResidualTooLarge:
    case ErrorCode::QuadratureFailure:
    case ErrorCode::KernelRadiusTooSmall:
      return true;
    default:
      return false;
  }
}

}  // namespace ifcodec
