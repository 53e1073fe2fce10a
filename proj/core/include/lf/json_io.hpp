#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "lf/groups.hpp"
#include "lf/index_set.hpp"
#include "lf/partition.hpp"
#include "lf/perm.hpp"
#include "lf/perm_group.hpp"
#include "lf/verdict.hpp"

namespace lf {

using nlohmann::json;

// Parsers throw Error(kParseError) naming the JSON location of the problem.

json to_json(const FinPerm& p);
FinPerm perm_from_json(const json& j, const std::string& where = "$");
json to_json(const std::vector<FinPerm>& perms);
std::vector<FinPerm> perms_from_json(const json& j, const std::string& where = "$");

/// {"prefix": [0|1...], "cycle": [0|1...]}; also "all", "none", "evens",
/// "odds", {"finite": [...]}, {"mod": k, "residues": [...]}, {"from": n}.
json to_json(const IndexSet& s);
IndexSet index_set_from_json(const json& j, const std::string& where = "$");

/// {"preperiod", "period", "labels", "patch", "classes"}. A tail label is an
/// infinite class id, or {"off": d} for "same class as the point d earlier"
/// ({"off": 0} starts a finite class). Patch labels are infinite class ids
/// or strings naming finite classes; unpatched prefix points are
/// singletons. Also "modK", "pairs", "singletons", "one".
json to_json(const PartitionDesc& e);
PartitionDesc partition_from_json(const json& j, const std::string& where = "$");

/// Tagged union on "kind": fg, gstar, family, partition, extended. The
/// strings "gstar" and "trivial" are accepted as shorthands.
json to_json(const GroupDesc& g);
GroupDesc group_from_json(const json& j, const std::string& where = "$");

json to_json(const Certificate& c);
Certificate certificate_from_json(const json& j, const std::string& where = "$");

json to_json(const Verdict& v);
json to_json(const MembershipVerdict& v);
json to_json(const LocalPart& lp);

/// Parses text, turning syntax errors into kParseError with the byte offset.
json parse_json(const std::string& text);

}  // namespace lf
