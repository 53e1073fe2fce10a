#include "lf/verdict.hpp"

namespace lf {

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kHolds:
      return "Holds";
    case VerdictKind::kFails:
      return "Fails";
    case VerdictKind::kUndecided:
      return "UndecidedUpTo";
  }
  return "UndecidedUpTo";
}

}  // namespace lf
