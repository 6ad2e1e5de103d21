#include "bloodflow/error.hpp"

namespace bloodflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidWeights: return "InvalidWeights";
    case ErrorCode::NumericError: return "NumericError";
    case ErrorCode::DimensionError: return "DimensionError";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::PhaseError: return "PhaseError";
    case ErrorCode::BpmRangeError: return "BpmRangeError";
    case ErrorCode::SamplingError: return "SamplingError";
    case ErrorCode::InputError: return "InputError";
    case ErrorCode::RoiError: return "RoiError";
    case ErrorCode::TraceLengthError: return "TraceLengthError";
    case ErrorCode::MaskCountError: return "MaskCountError";
    case ErrorCode::BandError: return "BandError";
    case ErrorCode::SignalLengthError: return "SignalLengthError";
    case ErrorCode::NoPeak: return "NoPeak";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

}  // namespace bloodflow
