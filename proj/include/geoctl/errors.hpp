#pragma once

#include <stdexcept>
#include <string>

namespace geoctl {

enum class ErrorCode {
  NotSkew,
  Degenerate,
  FreeFallCommand,
  HeadingDegenerate,
  SingularMixer,
  IntegrationDiverged,
  OutOfSchedule,
  OutOfDomain,
  ConfigInvalid,
  EmptyLog,
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotSkew: return "NotSkew";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::FreeFallCommand: return "FreeFallCommand";
    case ErrorCode::HeadingDegenerate: return "HeadingDegenerate";
    case ErrorCode::SingularMixer: return "SingularMixer";
    case ErrorCode::IntegrationDiverged: return "IntegrationDiverged";
    case ErrorCode::OutOfSchedule: return "OutOfSchedule";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::EmptyLog: return "EmptyLog";
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

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace geoctl
