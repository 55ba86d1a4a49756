#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace perfhom {

enum class ErrorKind {
  SeparationViolation,
  HoleOutsideCell,
  GeometryViolation,
  MeshGenerationFailure,
  TilingMismatch,
  MeshLineageMismatch,
  FieldKindMismatch,
  CGNoConvergence,
  EigenIterationDivergence,
  MeanNotZero,
  ConfigParseError,
  ConfigValidationError,
  IoFailure,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when an iterative linear solve stalls; keeps the last relative residual.
class CGNoConvergenceError : public Error {
 public:
  CGNoConvergenceError(const std::string& message, double residual, int iterations)
      : Error(ErrorKind::CGNoConvergence, message), residual_(residual), iterations_(iterations) {}

  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

/// Config validation failures name the offending field.
class ConfigValidationError : public Error {
 public:
  ConfigValidationError(std::string field, const std::string& reason)
      : Error(ErrorKind::ConfigValidationError, field + ": " + reason), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

#define PERFHOM_THROW_IF(cond, kind, msg)           \
  do {                                              \
    if (cond) throw ::perfhom::Error((kind), (msg)); \
  } while (0)

}  // namespace perfhom
