#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavetorus {

enum class ErrorCode {
  InvalidArgument,
  GridTooCoarse,
  NotInKernel,
  NotInEperp,
  ResonantMass,
  NonpositiveLeading,
  RatioCondition,
  NoMonotoneFloor,
  SmoothnessExponent,
  OrderUnavailable,
  NoConvergence,
  SingularJacobian,
  StallAt,
  Schedule,
  ParseError,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NotInKernel: return "NotInKernel";
    case ErrorCode::NotInEperp: return "NotInEperp";
    case ErrorCode::ResonantMass: return "ResonantMass";
    case ErrorCode::NonpositiveLeading: return "NonpositiveLeading";
    case ErrorCode::RatioCondition: return "RatioCondition";
    case ErrorCode::NoMonotoneFloor: return "NoMonotoneFloor";
    case ErrorCode::SmoothnessExponent: return "SmoothnessExponent";
    case ErrorCode::OrderUnavailable: return "OrderUnavailable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::SingularJacobian: return "SingularJacobian";
    case ErrorCode::StallAt: return "StallAt";
    case ErrorCode::Schedule: return "Schedule";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wavetorus
