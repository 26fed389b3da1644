#pragma once

#include <stdexcept>
#include <string>

namespace asvnav {

// Values mirror the asv_status codes of the C API.
enum class ErrorCode {
  InvalidArgument = 1,
  Io = 2,
  ChartParse = 3,
  ChartValidation = 4,
  LogParse = 5,
  ConfigParse = 6,
  ScenarioParse = 7,
  DegenerateSplit = 8,
  IncompleteRotation = 9,
  NonPositiveDt = 10,
  SingularInnovation = 11,
  NoSafePoint = 12,
  ScenarioDiverged = 13,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }

  // 1-based source line for parse errors, 0 otherwise.
  int line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  int line_;
};

}  // namespace asvnav
