#pragma once

#include <functional>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "lf/groups.hpp"

namespace lf {

/// An operation takes a JSON object of named arguments and returns JSON.
/// The CLI and the scenario runner both dispatch through this table.
using OpFn = std::function<nlohmann::json(const nlohmann::json& args, const WindowConfig& w)>;

struct OpInfo {
  OpFn fn;
  std::string summary;
};

const std::map<std::string, OpInfo>& op_registry();

/// Throws kInvalidArgument for an unknown name.
nlohmann::json run_op(const std::string& name, const nlohmann::json& args, const WindowConfig& w);

/// {"error": code, "message": text}
nlohmann::json error_document(const std::exception& e);

}  // namespace lf
