#include "perfhom/errors.hpp"

namespace perfhom {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SeparationViolation: return "SeparationViolation";
    case ErrorKind::HoleOutsideCell: return "HoleOutsideCell";
    case ErrorKind::GeometryViolation: return "GeometryViolation";
    case ErrorKind::MeshGenerationFailure: return "MeshGenerationFailure";
    case ErrorKind::TilingMismatch: return "TilingMismatch";
    case ErrorKind::MeshLineageMismatch: return "MeshLineageMismatch";
    case ErrorKind::FieldKindMismatch: return "FieldKindMismatch";
    case ErrorKind::CGNoConvergence: return "CGNoConvergence";
    case ErrorKind::EigenIterationDivergence: return "EigenIterationDivergence";
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::ConfigParseError: return "ConfigParseError";
    case ErrorKind::ConfigValidationError: return "ConfigValidationError";
    case ErrorKind::IoFailure: return "IoFailure";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace perfhom
