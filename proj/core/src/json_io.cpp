#include "lf/json_io.hpp"

#include <map>
#include <set>

#include "lf/error.hpp"

namespace lf {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParseError, where + ": " + what);
}

std::uint64_t as_uint(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    parse_fail(where, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Point as_point(const json& j, const std::string& where) {
  const auto v = as_uint(j, where);
  if (v > 0xffffffffull) parse_fail(where, "point out of range");
  return static_cast<Point>(v);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) parse_fail(where, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<bool> bits_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array of 0/1");
  std::vector<bool> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& b = j[i];
    if (b.is_boolean()) {
      out.push_back(b.get<bool>());
    } else {
      const auto v = as_uint(b, where + "[" + std::to_string(i) + "]");
      if (v > 1) parse_fail(where + "[" + std::to_string(i) + "]", "expected 0 or 1");
      out.push_back(v == 1);
    }
  }
  return out;
}

}  // namespace

json to_json(const FinPerm& p) {
  json out = json::array();
  for (const auto& c : p.cycles()) out.push_back(c.points);
  return out;
}

FinPerm perm_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "a permutation is an array of cycles");
  std::vector<std::vector<Point>> cycles;
  std::set<Point> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() < 2) parse_fail(at, "a cycle is an array of at least two points");
    std::vector<Point> c;
    for (std::size_t k = 0; k < j[i].size(); ++k) {
      const Point x = as_point(j[i][k], at + "[" + std::to_string(k) + "]");
      if (!seen.insert(x).second) parse_fail(at, "point " + std::to_string(x) + " repeats");
      c.push_back(x);
    }
    cycles.push_back(std::move(c));
  }
  return FinPerm::from_cycles(cycles);
}

json to_json(const std::vector<FinPerm>& perms) {
  json out = json::array();
  for (const auto& p : perms) out.push_back(to_json(p));
  return out;
}

std::vector<FinPerm> perms_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array of permutations");
  std::vector<FinPerm> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(perm_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

json to_json(const IndexSet& s) {
  json prefix = json::array();
  json cycle = json::array();
  for (bool b : s.prefix()) prefix.push_back(b ? 1 : 0);
  for (bool b : s.cycle()) cycle.push_back(b ? 1 : 0);
  return {{"prefix", prefix}, {"cycle", cycle}};
}

IndexSet index_set_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "all") return IndexSet::all();
    if (s == "none") return IndexSet::none();
    if (s == "evens") return IndexSet::residues(2, {0});
    if (s == "odds") return IndexSet::residues(2, {1});
    parse_fail(where, "unknown index set \"" + s + "\"");
  }
  if (!j.is_object()) parse_fail(where, "expected an index set");
  if (j.contains("finite")) {
    std::vector<std::uint64_t> m;
    for (std::size_t i = 0; i < j["finite"].size(); ++i) m.push_back(as_uint(j["finite"][i], where + ".finite"));
    return IndexSet::finite(m);
  }
  if (j.contains("mod")) {
    const auto k = as_uint(j["mod"], where + ".mod");
    if (k == 0) parse_fail(where + ".mod", "modulus must be positive");
    std::vector<std::uint64_t> r;
    for (const auto& x : field(j, "residues", where)) r.push_back(as_uint(x, where + ".residues"));
    return IndexSet::residues(k, r);
  }
  if (j.contains("from")) return IndexSet::from(as_uint(j["from"], where + ".from"));
  auto prefix = j.contains("prefix") ? bits_from_json(j["prefix"], where + ".prefix") : std::vector<bool>{};
  auto cycle = bits_from_json(field(j, "cycle", where), where + ".cycle");
  if (cycle.empty()) parse_fail(where + ".cycle", "cycle must be non-empty");
  return IndexSet(std::move(prefix), std::move(cycle));
}

json to_json(const PartitionDesc& e) {
  json labels = json::array();
  for (const auto& t : e.tail_entries()) {
    if (t.global) {
      labels.push_back(t.value);
    } else {
      labels.push_back({{"off", t.value}});
    }
  }
  json patch = json::object();
  json classes = json::array();
  const auto anchors = e.infinite_class_anchors();
  for (std::size_t id = 0; id < anchors.size(); ++id) {
    classes.push_back({{"id", id}, {"kind", "infinite"}, {"anchor", anchors[id]}});
  }
  std::map<std::uint64_t, std::vector<Point>> finite;
  for (Point x = 0; x < e.preperiod(); ++x) {
    const auto& p = e.prefix_entries()[x];
    if (p.global) {
      patch[std::to_string(x)] = p.value;
    } else {
      finite[p.value].push_back(x);
    }
  }
  for (const auto& [least, pts] : finite) {
    const auto members = e.class_members(static_cast<Point>(least), static_cast<Point>(e.finite_class_end(least)));
    if (members.size() < 2) continue;
    const std::string label = "c" + std::to_string(least);
    for (Point x : pts) patch[std::to_string(x)] = label;
    classes.push_back({{"id", label}, {"kind", "finite"}, {"extent", members}});
  }
  return {{"preperiod", e.preperiod()}, {"period", e.period()}, {"labels", labels}, {"patch", patch},
          {"classes", classes}};
}

PartitionDesc partition_from_json(const json& j, const std::string& where) {
  using Entry = PartitionDesc::Entry;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "pairs") return PartitionDesc::pairs();
    if (s == "singletons") return PartitionDesc::singletons();
    if (s == "one") return PartitionDesc::one_class();
    if (s.size() > 3 && s.rfind("mod", 0) == 0) {
      try {
        const auto k = std::stoul(s.substr(3));
        if (k > 0 && k < 1'000'000) return PartitionDesc::mod(static_cast<std::uint32_t>(k));
      } catch (const std::exception&) {
      }
    }
    parse_fail(where, "unknown partition shorthand \"" + s + "\"");
  }
  const auto pre = as_uint(field(j, "preperiod", where), where + ".preperiod");
  const auto per = as_uint(field(j, "period", where), where + ".period");
  const json& labels = field(j, "labels", where);
  if (per == 0) parse_fail(where + ".period", "period must be positive");
  if (!labels.is_array() || labels.size() != per) parse_fail(where + ".labels", "need one label per residue");
  if (pre > 1'000'000 || per > 1'000'000) parse_fail(where, "description too large");

  // Resolve offset chains within the tail to the least point of the class.
  std::vector<Entry> tail(per);
  for (std::uint64_t r = 0; r < per; ++r) {
    std::uint64_t total = 0;
    std::uint64_t cur = r;
    for (std::uint64_t steps = 0;; ++steps) {
      const std::string at = where + ".labels[" + std::to_string(cur) + "]";
      const json& l = labels[cur];
      if (l.is_object()) {
        const auto d = as_uint(field(l, "off", at), at + ".off");
        if (d == 0) {
          tail[r] = {false, total};
          break;
        }
        if (steps >= per) parse_fail(at, "offsets form a cycle");
        total += d;
        cur = (cur + per - d % per) % per;
      } else {
        tail[r] = {true, as_uint(l, at)};
        break;
      }
    }
  }
  std::vector<Entry> prefix(pre);
  for (Point x = 0; x < pre; ++x) prefix[x] = {false, x};
  if (j.contains("patch")) {
    const json& patch = j["patch"];
    if (!patch.is_object()) parse_fail(where + ".patch", "expected an object");
    std::map<std::string, Point> finite_least;
    std::map<Point, std::string> finite_label;
    for (const auto& [key, value] : patch.items()) {
      const std::string at = where + ".patch." + key;
      Point x = 0;
      try {
        std::size_t used = 0;
        const auto v = std::stoull(key, &used);
        if (used != key.size() || v >= pre) throw std::out_of_range("");
        x = static_cast<Point>(v);
      } catch (const std::exception&) {
        parse_fail(at, "patch keys are prefix points below the preperiod");
      }
      if (value.is_string()) {
        finite_label[x] = value.get<std::string>();
      } else {
        prefix[x] = {true, as_uint(value, at)};
      }
    }
    for (const auto& [x, label] : finite_label) {
      const auto [it, fresh] = finite_least.emplace(label, x);
      prefix[x] = {false, it->second};
    }
  }
  try {
    return PartitionDesc::from_parts(std::move(prefix), std::move(tail));
  } catch (const Error& err) {
    parse_fail(where, err.what());
  }
}

json to_json(const GroupDesc& g) {
  using Kind = GroupDesc::Kind;
  switch (g.kind()) {
    case Kind::kFinitelyGenerated:
      return {{"kind", "fg"}, {"generators", to_json(g.generators())}};
    case Kind::kDisjointFamily:
      if (g.is_gstar_family()) return {{"kind", "gstar"}, {"indices", to_json(g.indices())}};
      return {{"kind", "family"}, {"members", to_json(g.generators())}};
    case Kind::kPartition:
      return {{"kind", "partition"}, {"partition", to_json(g.partition_desc())}};
    case Kind::kExtended:
      return {{"kind", "extended"}, {"base", to_json(g.base())}, {"extra", to_json(g.extra())}};
  }
  return nullptr;
}

GroupDesc group_from_json(const json& j, const std::string& where) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "gstar") return gstar();
    if (s == "trivial") return GroupDesc();
    parse_fail(where, "unknown group shorthand \"" + s + "\"");
  }
  const json& kind_j = field(j, "kind", where);
  if (!kind_j.is_string()) parse_fail(where + ".kind", "expected a string");
  const auto kind = kind_j.get<std::string>();
  try {
    if (kind == "fg") return GroupDesc::finitely_generated(perms_from_json(field(j, "generators", where), where + ".generators"));
    if (kind == "gstar") {
      return gstar_subgroup(j.contains("indices") ? index_set_from_json(j["indices"], where + ".indices") : IndexSet::all());
    }
    if (kind == "family") return GroupDesc::explicit_family(perms_from_json(field(j, "members", where), where + ".members"));
    if (kind == "partition") return GroupDesc::partition(partition_from_json(field(j, "partition", where), where + ".partition"));
    if (kind == "extended") {
      return generated_over(group_from_json(field(j, "base", where), where + ".base"),
                            perms_from_json(field(j, "extra", where), where + ".extra"));
    }
  } catch (const Error& err) {
    if (err.code() == ErrorCode::kParseError) throw;
    parse_fail(where, err.what());
  }
  parse_fail(where + ".kind", "unknown group kind \"" + kind + "\"");
}

json to_json(const Certificate& c) {
  json program = json::array();
  for (const auto& line : c.program.lines) {
    switch (line.op) {
      case Slp::Op::kGen:
        program.push_back({"gen", line.a});
        break;
      case Slp::Op::kInv:
        program.push_back({"inv", line.a});
        break;
      case Slp::Op::kMul:
        program.push_back({"mul", line.a, line.b});
        break;
    }
  }
  return {{"generators", to_json(c.generators)}, {"program", program}};
}

Certificate certificate_from_json(const json& j, const std::string& where) {
  Certificate c;
  c.generators = perms_from_json(field(j, "generators", where), where + ".generators");
  const json& program = field(j, "program", where);
  if (!program.is_array()) parse_fail(where + ".program", "expected an array");
  for (std::size_t i = 0; i < program.size(); ++i) {
    const std::string at = where + ".program[" + std::to_string(i) + "]";
    const json& line = program[i];
    if (!line.is_array() || line.empty() || !line[0].is_string()) parse_fail(at, "malformed line");
    const auto op = line[0].get<std::string>();
    auto arg = [&](std::size_t k, std::uint64_t limit) {
      if (line.size() <= k) parse_fail(at, "missing operand");
      const auto v = as_uint(line[k], at);
      if (v >= limit) parse_fail(at, "operand out of range");
      return static_cast<std::uint32_t>(v);
    };
    if (op == "gen") {
      c.program.lines.push_back({Slp::Op::kGen, arg(1, c.generators.size()), 0});
    } else if (op == "inv") {
      c.program.lines.push_back({Slp::Op::kInv, arg(1, i), 0});
    } else if (op == "mul") {
      c.program.lines.push_back({Slp::Op::kMul, arg(1, i), arg(2, i)});
    } else {
      parse_fail(at, "unknown op \"" + op + "\"");
    }
  }
  return c;
}

json to_json(const Verdict& v) {
  json out = {{"verdict", std::string(to_string(v.kind))}, {"exact", v.exact}};
  if (v.undecided()) out["window"] = v.window;
  if (!v.witness.is_null()) out["witness"] = v.witness;
  if (!v.note.empty()) out["note"] = v.note;
  return out;
}

json to_json(const MembershipVerdict& v) {
  json out;
  switch (v.kind) {
    case MemberKind::kMember:
      out["result"] = "Member";
      if (v.certificate) out["certificate"] = to_json(*v.certificate);
      break;
    case MemberKind::kNonMember:
      out["result"] = "NonMember";
      break;
    case MemberKind::kUnknown:
      out["result"] = "UnknownUpTo";
      out["window"] = v.window;
      break;
  }
  if (!v.reason.empty()) out["reason"] = v.reason;
  return out;
}

json to_json(const LocalPart& lp) {
  return {{"domain", lp.domain}, {"elements", to_json(lp.elements)}, {"exact", lp.exact}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& err) {
    fail(ErrorCode::kParseError, "byte " + std::to_string(err.byte) + ": " + err.what());
  }
}

}  // namespace lf
