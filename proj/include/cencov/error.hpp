#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cencov {

enum class ErrorKind {
  // numkit
  NotSquare,
  NotHermitian,
  NoConvergence,
  DimensionMismatch,
  // groupoid
  AssociativityViolation,
  UnitViolation,
  InverseViolation,
  CoherenceViolation,
  BadMeasure,
  NotAGroup,
  BadWeight,
  HomomorphismViolation,
  InvarianceViolation,
  UnknownOutcome,
  // algebra / states
  GroupoidMismatch,
  NotPairGroupoid,
  NonUniformP,
  InvalidState,
  InvalidDensity,
  // channels
  PositivityLost,
  NormalizationLost,
  RowSumViolation,
  NonTracePreserving,
  Unsupported,
  // gns / estimation
  DegenerateState,
  IntervalExceeded,
  FoliumViolation,
  ZeroInformation,
  SupportBoundary,
  NotCongruent,
  // io
  Schema,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cencov
