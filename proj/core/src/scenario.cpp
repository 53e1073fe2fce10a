#include "lf/scenario.hpp"

#include "lf/json_io.hpp"
#include "lf/ops.hpp"

namespace lf {

namespace {

json resolve(const json& v, const std::vector<json>& outputs, std::size_t index) {
  if (v.is_object() && v.contains("$step")) {
    const auto& ref = v["$step"];
    if (!ref.is_number_unsigned() || ref.get<std::size_t>() >= index) {
      throw StepMismatch(index, "reference to a step that has not run");
    }
    const json& out = outputs[ref.get<std::size_t>()];
    if (!v.contains("pointer")) return out;
    try {
      return out.at(json::json_pointer(v["pointer"].get<std::string>()));
    } catch (const json::exception& e) {
      throw StepMismatch(index, std::string("bad pointer: ") + e.what());
    }
  }
  if (v.is_object()) {
    json out = json::object();
    for (const auto& [k, x] : v.items()) out[k] = resolve(x, outputs, index);
    return out;
  }
  if (v.is_array()) {
    json out = json::array();
    for (const auto& x : v) out.push_back(resolve(x, outputs, index));
    return out;
  }
  return v;
}

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& where) {
  auto bad = [&](const std::string& at, const std::string& what) { fail(ErrorCode::kParseError, at + ": " + what); };
  if (!j.is_object()) bad(where, "a scenario is an object");
  Scenario s;
  if (!j.contains("name") || !j["name"].is_string()) bad(where, "missing string field \"name\"");
  s.name = j["name"].get<std::string>();
  if (j.contains("window")) {
    if (!j["window"].is_number_unsigned()) bad(where + ".window", "expected a non-negative integer");
    s.window = j["window"].get<Point>();
  }
  if (j.contains("budget")) {
    if (!j["budget"].is_number_unsigned()) bad(where + ".budget", "expected a non-negative integer");
    s.budget = j["budget"].get<std::uint64_t>();
  }
  const json steps = j.value("steps", json::array());
  if (!steps.is_array()) bad(where + ".steps", "expected an array");
  const auto& reg = op_registry();
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string at = where + ".steps[" + std::to_string(i) + "]";
    const json& st = steps[i];
    if (!st.is_object() || !st.contains("op") || !st["op"].is_string()) bad(at, "missing string field \"op\"");
    ScenarioStep step{st["op"].get<std::string>(), st.value("args", json::object()), std::nullopt};
    if (!reg.count(step.op)) bad(at + ".op", "unknown operation \"" + step.op + "\"");
    if (st.contains("expect")) step.expect = st["expect"];
    s.steps.push_back(std::move(step));
  }
  return s;
}

json to_json(const Scenario& s) {
  json out = {{"name", s.name}};
  if (s.window) out["window"] = *s.window;
  if (s.budget) out["budget"] = *s.budget;
  json steps = json::array();
  for (const auto& st : s.steps) {
    json x = {{"op", st.op}, {"args", st.args}};
    if (st.expect) x["expect"] = *st.expect;
    steps.push_back(x);
  }
  out["steps"] = steps;
  return out;
}

bool expectation_matches(const json& expect, const json& actual) {
  if (expect.is_object()) {
    if (!actual.is_object()) return false;
    for (const auto& [k, v] : expect.items()) {
      if (!actual.contains(k) || !expectation_matches(v, actual[k])) return false;
    }
    return true;
  }
  if (expect.is_array()) {
    if (!actual.is_array() || actual.size() != expect.size()) return false;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      if (!expectation_matches(expect[i], actual[i])) return false;
    }
    return true;
  }
  return expect == actual;
}

json run_scenario(const Scenario& s, const WindowConfig& defaults) {
  WindowConfig w = defaults;
  if (s.window) w.bound = *s.window;
  if (s.budget) w.element_budget = *s.budget;
  std::vector<json> outputs;
  json steps = json::array();
  std::size_t checked = 0;
  for (std::size_t i = 0; i < s.steps.size(); ++i) {
    const auto& st = s.steps[i];
    const json args = resolve(st.args, outputs, i);
    json output;
    try {
      output = run_op(st.op, args, w);
    } catch (const StepMismatch&) {
      throw;
    } catch (const Error& e) {
      if (!st.expect) throw Error(e.code(), "step " + std::to_string(i) + " (" + st.op + "): " + e.what());
      output = error_document(e);
    }
    if (st.expect) {
      if (!expectation_matches(*st.expect, output)) {
        throw StepMismatch(i, "expected " + st.expect->dump() + ", got " + output.dump());
      }
      ++checked;
    }
    outputs.push_back(output);
    steps.push_back({{"index", i}, {"op", st.op}, {"args", args}, {"output", output}, {"checked", st.expect.has_value()}});
  }
  return {{"scenario", s.name},
          {"window", w.bound},
          {"budget", w.element_budget},
          {"steps", steps},
          {"summary", {{"steps", s.steps.size()}, {"checked", checked}, {"passed", true}}}};
}

std::vector<Scenario> bundled_corpus() {
  std::vector<Scenario> out;
  for (const auto& src : bundled_sources()) out.push_back(scenario_from_json(parse_json(src.text), src.file));
  return out;
}

}  // namespace lf
