#include "lf/error.hpp"

namespace lf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicatePoint: return "DuplicatePoint";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kNotFoundInWindow: return "NotFoundInWindow";
    case ErrorCode::kNoSparePoint: return "NoSparePoint";
    case ErrorCode::kJoinNotFinitelyDescribable: return "JoinNotFinitelyDescribable";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kStepMismatch: return "StepMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kOutOfRange: return "OutOfRange";
  }
  return "Unknown";
}

}  // namespace lf
