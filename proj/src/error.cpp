#include "bpsv/error.hpp"

namespace bpsv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonZeroMeanRhs: return "NonZeroMeanRhs";
    case ErrorKind::PointOutsideDomain: return "PointOutsideDomain";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::ThresholdViolated: return "ThresholdViolated";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::AnnulusTooThin: return "AnnulusTooThin";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

}  // namespace bpsv
