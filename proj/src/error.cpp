#include "netbound/error.hpp"

namespace netbound {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::UnsupportedDims: return "UnsupportedDims";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::MissingMeasure: return "MissingMeasure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace netbound
