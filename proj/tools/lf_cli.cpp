// Command-line front end. Every subcommand maps onto an entry of the
// operation table; arguments are a JSON object given inline, from a file,
// or on stdin.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lf/error.hpp"
#include "lf/json_io.hpp"
#include "lf/ops.hpp"
#include "lf/scenario.hpp"

namespace {

using lf::json;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) lf::fail(lf::ErrorCode::kParseError, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON, or @path, or - for stdin.
json load(const std::string& source) {
  if (source == "-") return lf::parse_json(slurp("-"));
  if (!source.empty() && source[0] == '@') return lf::parse_json(slurp(source.substr(1)));
  return lf::parse_json(source);
}

struct Invocation {
  std::string op;
  std::string args = "{}";
  std::string action;
};

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally finite permutation group lattice toolkit"};
  app.require_subcommand(1);

  lf::WindowConfig w;
  app.add_option("--window", w.bound, "window bound (points below it are considered)")
      ->envname("LF_WINDOW")
      ->capture_default_str();
  app.add_option("--budget", w.element_budget, "element budget for closures")->capture_default_str();

  Invocation inv;
  auto args_option = [&](CLI::App* sub) {
    sub->add_option("--args,-a", inv.args, "arguments: inline JSON, @file, or - for stdin")->capture_default_str();
  };
  auto with_actions = [&](const std::string& name, const std::string& help, const std::string& prefix,
                          const std::vector<std::string>& actions) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("action", inv.action, "one of: " + CLI::detail::join(actions, ", "))
        ->required()
        ->check(CLI::IsMember(actions));
    args_option(sub);
    sub->callback([&, prefix] { inv.op = prefix + inv.action; });
    return sub;
  };

  with_actions("perm", "permutation arithmetic", "perm.", {"compose", "inverse", "info", "sf_at"});
  with_actions("group", "group descriptions", "group.",
               {"normalize", "member", "is_infinite", "window_generators", "local_part", "generated_over", "transport",
                "trace"});
  with_actions("partition", "partitions of the naturals", "partition.",
               {"normalize", "meet", "join", "refines", "group_is_finite", "almost_coarser", "coarsen",
                "extract_transposition"});
  with_actions("almost", "almost containment", "almost.", {"verify", "search", "equal"});
  with_actions("construct", "constructions", "construct.", {"avoid", "rho", "pseudo", "antireap", "diag"});

  auto* orth = app.add_subcommand("orth", "orthogonality of two groups");
  args_option(orth);
  orth->callback([&] { inv.op = "orth"; });
  auto* metric = app.add_subcommand("metric", "distance between two groups");
  args_option(metric);
  metric->callback([&] { inv.op = "metric"; });

  auto* family = app.add_subcommand("family", "splitting, reaping and shattering families");
  family->add_option("action", inv.action, "check or shatter")->check(CLI::IsMember({"check", "shatter"}));
  args_option(family);
  family->callback([&] { inv.op = inv.action == "shatter" ? "family.shattering_from_splitting" : "family"; });

  std::string oracles;
  std::string transcript;
  auto* force = app.add_subcommand("force", "forcing posets and filter chains");
  force->add_option("action", inv.action, "pr, pa or verify")->required()->check(CLI::IsMember({"pr", "pa", "verify"}));
  force->add_option("--oracles", oracles, "oracle list: inline JSON, @file, or -");
  force->add_option("transcript", transcript, "transcript file for verify");
  args_option(force);
  force->callback([&] { inv.op = "force." + inv.action; });

  std::vector<std::string> scenario_paths;
  std::string bundled;
  bool list = false;
  auto* scenario = app.add_subcommand("scenario", "run scenario files or the bundled corpus");
  scenario->add_option("paths", scenario_paths, "scenario files");
  scenario->add_option("--bundled", bundled, "run a bundled scenario by name, or 'all'");
  scenario->add_flag("--list", list, "list bundled scenarios");

  auto* ops = app.add_subcommand("ops", "list every operation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    emit({{"error", "UsageError"}, {"message", e.what()}});
    return 2;
  }

  try {
    if (ops->parsed()) {
      json out = json::object();
      for (const auto& [name, info] : lf::op_registry()) out[name] = info.summary;
      emit(out);
      return 0;
    }
    if (scenario->parsed()) {
      if (list) {
        json out = json::array();
        for (const auto& s : lf::bundled_corpus()) out.push_back({{"name", s.name}, {"steps", s.steps.size()}});
        emit(out);
        return 0;
      }
      std::vector<lf::Scenario> runs;
      for (const auto& p : scenario_paths) runs.push_back(lf::scenario_from_json(lf::parse_json(slurp(p)), p));
      if (!bundled.empty()) {
        bool found = false;
        for (auto& s : lf::bundled_corpus()) {
          if (bundled == "all" || s.name == bundled) {
            runs.push_back(std::move(s));
            found = true;
          }
        }
        if (!found) lf::fail(lf::ErrorCode::kInvalidArgument, "no bundled scenario named " + bundled);
      }
      if (runs.empty()) lf::fail(lf::ErrorCode::kInvalidArgument, "nothing to run");
      json out = json::array();
      for (const auto& s : runs) out.push_back(lf::run_scenario(s, w));
      emit(runs.size() == 1 ? out[0] : out);
      return 0;
    }
    json args = load(inv.args);
    if (!oracles.empty()) args["oracles"] = load(oracles);
    if (!transcript.empty()) args["transcript"] = load("@" + transcript);
    emit(lf::run_op(inv.op, args, w));
    return 0;
  } catch (const lf::StepMismatch& e) {
    auto doc = lf::error_document(e);
    doc["step"] = e.index();
    emit(doc);
  } catch (const std::exception& e) {
    emit(lf::error_document(e));
  }
  return 1;
}
