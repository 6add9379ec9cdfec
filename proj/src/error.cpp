#include "nkiso/error.hpp"

namespace nkiso {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::BaseMismatch: return "base-mismatch";
    case ErrorKind::GramMismatch: return "gram-mismatch";
    case ErrorKind::DegenerateBasis: return "degenerate-basis";
    case ErrorKind::OrientationMismatch: return "orientation-mismatch";
    case ErrorKind::NotAnIsometry: return "not-an-isometry";
    case ErrorKind::JIncompatible: return "j-incompatible";
    case ErrorKind::PProjectionResidual: return "p-projection-residual";
    case ErrorKind::ReductiveResidual: return "reductive-residual";
    case ErrorKind::NotUnitary: return "not-unitary";
    case ErrorKind::NonOrthogonal: return "non-orthogonal";
    case ErrorKind::ZeroVector: return "zero-vector";
    case ErrorKind::NonUnit: return "non-unit";
    case ErrorKind::DistributionAmbiguity: return "distribution-ambiguity";
    case ErrorKind::AngleInconsistency: return "angle-inconsistency";
    case ErrorKind::SingularMetric: return "singular-metric";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::Parse: return "parse-error";
  }
  return "unknown";
}

}  // namespace nkiso
