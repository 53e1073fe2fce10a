#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lf/error.hpp"
#include "lf/groups.hpp"

namespace lf {

struct ScenarioStep {
  std::string op;
  nlohmann::json args;
  std::optional<nlohmann::json> expect;
};

/// A named list of operations. Arguments may refer to earlier outputs with
/// {"$step": i} or {"$step": i, "pointer": "/json/pointer"}.
struct Scenario {
  std::string name;
  std::optional<Point> window;
  std::optional<std::uint64_t> budget;
  std::vector<ScenarioStep> steps;
};

class StepMismatch : public Error {
 public:
  StepMismatch(std::size_t index, const std::string& message)
      : Error(ErrorCode::kStepMismatch, "step " + std::to_string(index) + ": " + message), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

Scenario scenario_from_json(const nlohmann::json& j, const std::string& where = "$");
nlohmann::json to_json(const Scenario& s);

/// Objects in `expect` constrain only the keys they list; arrays and
/// scalars must match exactly. {"error": code} matches a failing step.
bool expectation_matches(const nlohmann::json& expect, const nlohmann::json& actual);

/// Runs the steps in order and returns the transcript. Throws StepMismatch
/// at the first failed expectation; errors in steps without an expectation
/// are rethrown with the step index.
nlohmann::json run_scenario(const Scenario& s, const WindowConfig& defaults);

struct BundledScenario {
  std::string file;
  std::string text;
};
const std::vector<BundledScenario>& bundled_sources();
std::vector<Scenario> bundled_corpus();

}  // namespace lf
