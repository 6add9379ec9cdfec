#pragma once

#include <stdexcept>
#include <string>

namespace nkiso {

enum class ErrorKind {
  DimensionMismatch,
  BaseMismatch,
  GramMismatch,
  DegenerateBasis,
  OrientationMismatch,
  NotAnIsometry,
  JIncompatible,
  PProjectionResidual,
  ReductiveResidual,
  NotUnitary,
  NonOrthogonal,
  ZeroVector,
  NonUnit,
  DistributionAmbiguity,
  AngleInconsistency,
  SingularMetric,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Exception type thrown by every fallible operation in the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nkiso
