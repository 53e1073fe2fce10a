#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lf {

enum class ErrorCode {
  kDuplicatePoint,
  kBudgetExceeded,
  kNotFoundInWindow,
  kNoSparePoint,
  kJoinNotFinitelyDescribable,
  kParseError,
  kStepMismatch,
  kInvalidArgument,
  kOutOfRange,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code; the
// CLI turns it into an error document.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace lf
