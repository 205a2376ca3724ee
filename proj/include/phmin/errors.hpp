#pragma once

#include <stdexcept>
#include <string>

namespace phmin {

enum class ErrorCode {
  ZeroDenominator,
  DegreeViolation,
  ClusterAmbiguity,
  SingularSystem,
  SingularSampleSystem,
  ZeroPole,
  DimensionMismatch,
  InvalidGf,
  SingularA,
  ParseError,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DegreeViolation: return "DegreeViolation";
    case ErrorCode::ClusterAmbiguity: return "ClusterAmbiguity";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::SingularSampleSystem: return "SingularSampleSystem";
    case ErrorCode::ZeroPole: return "ZeroPole";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidGf: return "InvalidGf";
    case ErrorCode::SingularA: return "SingularA";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace phmin
