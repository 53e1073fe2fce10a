#include <gtest/gtest.h>

#include <set>

#include "lf/json_io.hpp"
#include "lf/ops.hpp"
#include "lf/scenario.hpp"

namespace lf {
namespace {

TEST(Scenario, CorpusContents) {
  const auto corpus = bundled_corpus();
  EXPECT_GE(corpus.size(), 7u);
  std::set<std::string> names;
  for (const auto& s : corpus) names.insert(s.name);
  for (const char* want : {"gstar-embedding", "e0e1-counterexample", "matet-e0e1", "lemma-super-coarsening",
                           "rho-builder", "pr-run", "pa-run", "chain-pseudo-intersection"}) {
    EXPECT_TRUE(names.count(want)) << want;
  }
}

TEST(Scenario, CorpusPassesAndReplays) {
  const WindowConfig w;
  for (const auto& s : bundled_corpus()) {
    const auto first = run_scenario(s, w);
    EXPECT_EQ(first["summary"]["checked"], s.steps.size()) << s.name;
    EXPECT_EQ(run_scenario(s, w).dump(), first.dump()) << s.name;
    // Replaying the recorded inputs gives the recorded outputs.
    for (const auto& step : first["steps"]) {
      const auto again = step["output"].contains("error") ? step["output"] : run_op(step["op"], step["args"], w);
      EXPECT_EQ(again, step["output"]) << s.name << " step " << step["index"];
    }
  }
}

TEST(Scenario, EmptyScenario) {
  const auto t = run_scenario(scenario_from_json(parse_json(R"({"name": "empty"})")), {});
  EXPECT_TRUE(t["steps"].empty());
  EXPECT_EQ(t["summary"]["steps"], 0);
}

TEST(Scenario, WrongExpectationNamesTheStep) {
  const auto s = scenario_from_json(parse_json(R"({"name": "bad", "steps": [
    {"op": "perm.inverse", "args": {"p": [[0, 1, 2]]}, "expect": [[0, 2, 1]]},
    {"op": "perm.inverse", "args": {"p": [[0, 1, 2]]}, "expect": [[0, 1, 2]]}]})"));
  try {
    run_scenario(s, {});
    FAIL();
  } catch (const StepMismatch& e) {
    EXPECT_EQ(e.index(), 1u);
    EXPECT_EQ(e.code(), ErrorCode::kStepMismatch);
  }
}

TEST(Scenario, ParseErrors) {
  EXPECT_THROW(scenario_from_json(parse_json(R"({"steps": []})")), Error);
  EXPECT_THROW(scenario_from_json(parse_json(R"({"name": "x", "steps": [{"op": "nope"}]})")), Error);
  EXPECT_THROW(parse_json("{"), Error);
  try {
    run_op("perm.inverse", parse_json(R"({"p": [[1, 1]]})"), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_EQ(error_document(e)["error"], "ParseError");
  }
}

TEST(Scenario, StepReferences) {
  const auto s = scenario_from_json(parse_json(R"({"name": "refs", "steps": [
    {"op": "perm.compose", "args": {"p": [[0, 1]], "q": [[1, 2]]}},
    {"op": "perm.inverse", "args": {"p": {"$step": 0}}, "expect": [[0, 2, 1]]},
    {"op": "perm.info", "args": {"p": {"$step": 0}}, "expect": {"order": 3}}]})"));
  EXPECT_NO_THROW(run_scenario(s, {}));
  const auto forward = scenario_from_json(parse_json(R"({"name": "fwd", "steps": [
    {"op": "perm.inverse", "args": {"p": {"$step": 0}}}]})"));
  EXPECT_THROW(run_scenario(forward, {}), StepMismatch);
}

TEST(Scenario, ExpectationMatching) {
  EXPECT_TRUE(expectation_matches(parse_json(R"({"a": 1})"), parse_json(R"({"a": 1, "b": 2})")));
  EXPECT_FALSE(expectation_matches(parse_json(R"({"a": 1})"), parse_json(R"({"b": 2})")));
  EXPECT_FALSE(expectation_matches(parse_json("[1]"), parse_json("[1, 2]")));
  EXPECT_TRUE(expectation_matches(parse_json(R"([{}, {"x": true}])"), parse_json(R"([{"y": 0}, {"x": true}])")));
  EXPECT_FALSE(expectation_matches(parse_json("1"), parse_json("2")));
}

TEST(Scenario, ErrorsBecomeOutcomesOnlyWhenExpected) {
  const auto expected = scenario_from_json(parse_json(R"({"name": "e", "window": 8, "steps": [
    {"op": "construct.avoid", "args": {"group": {"kind": "fg", "generators": [[[0, 1]]]}, "m": 2},
     "expect": {"error": "NotFoundInWindow"}}]})"));
  EXPECT_NO_THROW(run_scenario(expected, {}));
  auto bare = expected;
  bare.steps[0].expect.reset();
  try {
    run_scenario(bare, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFoundInWindow);
    EXPECT_NE(std::string(e.what()).find("step 0"), std::string::npos);
  }
}

TEST(Scenario, RoundTrip) {
  for (const auto& s : bundled_corpus()) {
    EXPECT_EQ(to_json(scenario_from_json(to_json(s))), to_json(s));
  }
}

}  // namespace
}  // namespace lf
