#include "cencov/error.hpp"

namespace cencov {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AssociativityViolation: return "AssociativityViolation";
    case ErrorKind::UnitViolation: return "UnitViolation";
    case ErrorKind::InverseViolation: return "InverseViolation";
    case ErrorKind::CoherenceViolation: return "CoherenceViolation";
    case ErrorKind::BadMeasure: return "BadMeasure";
    case ErrorKind::NotAGroup: return "NotAGroup";
    case ErrorKind::BadWeight: return "BadWeight";
    case ErrorKind::HomomorphismViolation: return "HomomorphismViolation";
    case ErrorKind::InvarianceViolation: return "InvarianceViolation";
    case ErrorKind::UnknownOutcome: return "UnknownOutcome";
    case ErrorKind::GroupoidMismatch: return "GroupoidMismatch";
    case ErrorKind::NotPairGroupoid: return "NotPairGroupoid";
    case ErrorKind::NonUniformP: return "NonUniformP";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::InvalidDensity: return "InvalidDensity";
    case ErrorKind::PositivityLost: return "PositivityLost";
    case ErrorKind::NormalizationLost: return "NormalizationLost";
    case ErrorKind::RowSumViolation: return "RowSumViolation";
    case ErrorKind::NonTracePreserving: return "NonTracePreserving";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::IntervalExceeded: return "IntervalExceeded";
    case ErrorKind::FoliumViolation: return "FoliumViolation";
    case ErrorKind::ZeroInformation: return "ZeroInformation";
    case ErrorKind::SupportBoundary: return "SupportBoundary";
    case ErrorKind::NotCongruent: return "NotCongruent";
    case ErrorKind::Schema: return "Schema";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace cencov
