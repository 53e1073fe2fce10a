#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace lf {

enum class VerdictKind { kHolds, kFails, kUndecided };

std::string_view to_string(VerdictKind kind);

/// Outcome of a decision procedure. `exact` is false when the answer rests
/// on window evidence or on a finite candidate pool rather than a proof.
struct Verdict {
  VerdictKind kind = VerdictKind::kUndecided;
  nlohmann::json witness;
  bool exact = true;
  std::uint64_t window = 0;
  std::string note;

  bool holds() const { return kind == VerdictKind::kHolds; }
  bool fails() const { return kind == VerdictKind::kFails; }
  bool undecided() const { return kind == VerdictKind::kUndecided; }

  static Verdict Holds(nlohmann::json witness = nullptr, bool exact = true) {
    return {VerdictKind::kHolds, std::move(witness), exact, 0, {}};
  }
  static Verdict Fails(nlohmann::json witness = nullptr, bool exact = true) {
    return {VerdictKind::kFails, std::move(witness), exact, 0, {}};
  }
  static Verdict UndecidedUpTo(std::uint64_t window, std::string note = {}) {
    return {VerdictKind::kUndecided, nullptr, false, window, std::move(note)};
  }
};

}  // namespace lf
