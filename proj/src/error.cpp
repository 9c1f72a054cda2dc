#include "sraif/error.hpp"

namespace sraif {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return "InvalidArgument";
    case ErrorCode::ShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::NotStochastic:
      return "NotStochastic";
    case ErrorCode::NonFinite:
      return "NonFinite";
    case ErrorCode::IndexOutOfRange:
      return "IndexOutOfRange";
    case ErrorCode::NumericallySingular:
      return "NumericallySingular";
    case ErrorCode::DivergentSeries:
      return "DivergentSeries";
    case ErrorCode::ExplosionCap:
      return "ExplosionCap";
    case ErrorCode::InvalidSpec:
      return "InvalidSpec";
    case ErrorCode::NonPositiveLikelihood:
      return "NonPositiveLikelihood";
  }
  return "Unknown";
}

}  // namespace sraif
