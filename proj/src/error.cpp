#include "kirchhoff/error.hpp"

namespace kirchhoff {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::NoInteriorMax: return "NoInteriorMax";
    case ErrorKind::NoNegativeStart: return "NoNegativeStart";
    case ErrorKind::Stagnation: return "Stagnation";
    case ErrorKind::LevelBreach: return "LevelBreach";
    case ErrorKind::EmptyCandidateSet: return "EmptyCandidateSet";
    case ErrorKind::ConfigParse: return "ConfigParse";
    case ErrorKind::ConfigValidation: return "ConfigValidation";
  }
  return "Unknown";
}

}  // namespace kirchhoff
