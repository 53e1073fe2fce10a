#include "lf/forcing.hpp"

#include <algorithm>
#include <set>

#include "lf/constructions.hpp"
#include "lf/error.hpp"
#include "lf/json_io.hpp"

namespace lf {

namespace {

Point above(const std::vector<FinPerm>& a, const std::vector<FinPerm>& b = {}) {
  Point m = 0;
  for (const auto* v : {&a, &b}) {
    for (const auto& p : *v) {
      if (const auto x = p.max_moved()) m = std::max(m, *x + 1);
    }
  }
  return m;
}

bool includes(const std::vector<FinPerm>& big, const std::vector<FinPerm>& small) {
  return std::all_of(small.begin(), small.end(),
                     [&](const FinPerm& p) { return std::find(big.begin(), big.end(), p) != big.end(); });
}

std::size_t count_in(const std::vector<FinPerm>& perms, const GroupDesc& g, const WindowConfig& w) {
  return static_cast<std::size_t>(
      std::count_if(perms.begin(), perms.end(), [&](const FinPerm& p) { return is_member(p, g, w); }));
}

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  fail(ErrorCode::kParseError, where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) parse_fail(where, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t as_size(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    parse_fail(where, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace

bool disjoint_supports(const std::vector<FinPerm>& perms) {
  std::set<Point> seen;
  for (const auto& p : perms) {
    if (p.is_identity()) return false;
    for (const auto& mv : p.moves()) {
      if (!seen.insert(mv.first).second) return false;
    }
  }
  return true;
}

bool valid(const PrCondition& c) {
  auto all = c.h;
  all.insert(all.end(), c.h2.begin(), c.h2.end());
  return disjoint_supports(all);
}

bool valid(const PaCondition& c) { return disjoint_supports(c.h); }

bool pr_leq(const PrCondition& c, const PrCondition& d) { return includes(c.h, d.h) && includes(c.h2, d.h2); }

PrCondition pr_dense_extend(const PrCondition& c, const GroupDesc& g, std::size_t k, const WindowConfig& w) {
  PrCondition out = c;
  while (true) {
    const bool need1 = count_in(out.h, g, w) <= k;
    const bool need2 = count_in(out.h2, g, w) <= k;
    if (!need1 && !need2) break;
    if (need1) out.h.push_back(avoid_support(g, above(out.h, out.h2), w).rho);
    if (need2) out.h2.push_back(avoid_support(g, above(out.h, out.h2), w).rho);
  }
  std::sort(out.h.begin(), out.h.end(), sf_less);
  std::sort(out.h2.begin(), out.h2.end(), sf_less);
  return out;
}

Verdict pa_leq(const PaCondition& c, const PaCondition& d, const WindowConfig& w) {
  if (!includes(c.h, d.h)) return Verdict::Fails({{"reason", "h does not contain the other h"}});
  const PermGroup old(d.h);
  bool unknown = false;
  for (const auto& e : PermGroup(c.h).elements(w.element_budget)) {
    if (old.contains(e)) continue;
    for (std::size_t i = 0; i < d.f.size(); ++i) {
      const auto v = membership(e, d.f[i], w, false);
      if (v.member()) return Verdict::Fails({{"reason", "new element in a group of f"}, {"element", to_json(e)}, {"group", i}});
      unknown = unknown || !v.non_member();
    }
  }
  for (const auto& g : d.f) {
    if (std::find(c.f.begin(), c.f.end(), g) == c.f.end()) {
      return Verdict::Fails({{"reason", "f does not contain the other f"}, {"group", to_json(g)}});
    }
  }
  if (unknown) return Verdict::UndecidedUpTo(w.bound, "membership is window-limited");
  return Verdict::Holds();
}

PaCondition pa_dense_extend_group(const PaCondition& c, const GroupDesc& g) {
  PaCondition out = c;
  if (std::find(out.f.begin(), out.f.end(), g) == out.f.end()) out.f.push_back(g);
  return out;
}

PaCondition pa_dense_extend_size(const PaCondition& c, std::size_t l, const WindowConfig& w) {
  PaCondition out = c;
  while (out.h.size() <= l) {
    out.h.push_back(rho_k_cycles(out.f, 1, above(out.h), out.h, w).rho);
  }
  std::sort(out.h.begin(), out.h.end(), sf_less);
  return out;
}

std::string DenseOracle::name() const {
  switch (kind) {
    case Kind::kPrCount:
      return "D(" + to_json(group).dump() + ", k=" + std::to_string(bound) + ")";
    case Kind::kPaGroup:
      return "Sigma_G(" + to_json(group).dump() + ")";
    case Kind::kPaSize:
      return "Sigma_l(" + std::to_string(bound) + ")";
  }
  return {};
}

bool DenseOracle::met_by(const Condition& c, const WindowConfig& w) const {
  switch (kind) {
    case Kind::kPrCount: {
      const auto* p = std::get_if<PrCondition>(&c);
      return p && count_in(p->h, group, w) > bound && count_in(p->h2, group, w) > bound;
    }
    case Kind::kPaGroup: {
      const auto* p = std::get_if<PaCondition>(&c);
      return p && std::find(p->f.begin(), p->f.end(), group) != p->f.end();
    }
    case Kind::kPaSize: {
      const auto* p = std::get_if<PaCondition>(&c);
      return p && p->h.size() > bound;
    }
  }
  return false;
}

Condition DenseOracle::extend(const Condition& c, const WindowConfig& w) const {
  switch (kind) {
    case Kind::kPrCount:
      return pr_dense_extend(std::get<PrCondition>(c), group, bound, w);
    case Kind::kPaGroup:
      return pa_dense_extend_group(std::get<PaCondition>(c), group);
    case Kind::kPaSize:
      return pa_dense_extend_size(std::get<PaCondition>(c), bound, w);
  }
  return c;
}

FilterChain rasiowa_sikorski(Poset poset, const std::vector<DenseOracle>& oracles, const WindowConfig& w) {
  FilterChain chain;
  chain.poset = poset;
  chain.oracles = oracles;
  chain.conditions.push_back(poset == Poset::kPr ? Condition(PrCondition{}) : Condition(PaCondition{}));
  for (std::size_t i = 0; i < oracles.size(); ++i) {
    if (oracles[i].poset() != poset) fail(ErrorCode::kInvalidArgument, "oracle " + std::to_string(i) + " is for the other poset");
    try {
      chain.conditions.push_back(oracles[i].extend(chain.conditions.back(), w));
    } catch (const Error& e) {
      throw Error(e.code(), "oracle " + std::to_string(i) + " (" + oracles[i].name() + "): " + e.what());
    }
    chain.met_at.push_back(chain.conditions.size() - 1);
  }
  return chain;
}

Verdict verify_chain(const FilterChain& chain, const WindowConfig& w) {
  const auto& cs = chain.conditions;
  if (cs.empty()) return Verdict::Fails({{"reason", "empty chain"}});
  if (chain.met_at.size() != chain.oracles.size()) return Verdict::Fails({{"reason", "met list length"}});
  bool undecided = false;
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (chain.poset == Poset::kPr) {
      const auto* c = std::get_if<PrCondition>(&cs[j]);
      if (!c || !valid(*c)) return Verdict::Fails({{"reason", "invalid condition"}, {"index", j}});
      if (j == 0 && !(c->h.empty() && c->h2.empty())) return Verdict::Fails({{"reason", "does not start at the top"}});
      for (std::size_t i = 0; i < j; ++i) {
        if (!pr_leq(*c, std::get<PrCondition>(cs[i]))) {
          return Verdict::Fails({{"reason", "not decreasing"}, {"from", i}, {"to", j}});
        }
      }
    } else {
      const auto* c = std::get_if<PaCondition>(&cs[j]);
      if (!c || !valid(*c)) return Verdict::Fails({{"reason", "invalid condition"}, {"index", j}});
      if (j == 0 && !(c->h.empty() && c->f.empty())) return Verdict::Fails({{"reason", "does not start at the top"}});
      for (std::size_t i = 0; i < j; ++i) {
        const auto v = pa_leq(*c, std::get<PaCondition>(cs[i]), w);
        if (v.fails()) return Verdict::Fails({{"reason", "not decreasing"}, {"from", i}, {"to", j}, {"detail", v.witness}});
        undecided = undecided || v.undecided();
      }
    }
  }
  for (std::size_t i = 0; i < chain.oracles.size(); ++i) {
    if (chain.met_at[i] >= cs.size() || !chain.oracles[i].met_by(cs[chain.met_at[i]], w)) {
      return Verdict::Fails({{"reason", "oracle not met"}, {"oracle", i}});
    }
  }
  if (undecided) return Verdict::UndecidedUpTo(w.bound, "order checks are window-limited");
  return Verdict::Holds({{"conditions", cs.size()}, {"oracles", chain.oracles.size()}});
}

Extracted extract_group(const FilterChain& chain) {
  if (chain.conditions.empty()) return {};
  if (const auto* c = std::get_if<PrCondition>(&chain.conditions.back())) {
    return {GroupDesc::finitely_generated(c->h), GroupDesc::finitely_generated(c->h2)};
  }
  return {GroupDesc::finitely_generated(std::get<PaCondition>(chain.conditions.back()).h), std::nullopt};
}

json to_json(const Condition& c) {
  if (const auto* p = std::get_if<PrCondition>(&c)) return {{"h", to_json(p->h)}, {"h2", to_json(p->h2)}};
  const auto& a = std::get<PaCondition>(c);
  json f = json::array();
  for (const auto& g : a.f) f.push_back(to_json(g));
  return {{"h", to_json(a.h)}, {"f", f}};
}

json to_json(const DenseOracle& o) {
  switch (o.kind) {
    case DenseOracle::Kind::kPrCount:
      return {{"kind", "pr_D"}, {"group", to_json(o.group)}, {"k", o.bound}};
    case DenseOracle::Kind::kPaGroup:
      return {{"kind", "pa_group"}, {"group", to_json(o.group)}};
    case DenseOracle::Kind::kPaSize:
      return {{"kind", "pa_size"}, {"l", o.bound}};
  }
  return nullptr;
}

json to_json(const FilterChain& chain) {
  json oracles = json::array();
  json met = json::array();
  for (std::size_t i = 0; i < chain.oracles.size(); ++i) {
    oracles.push_back(to_json(chain.oracles[i]));
    met.push_back({{"oracle", chain.oracles[i].name()}, {"index", chain.met_at[i]}});
  }
  json conditions = json::array();
  for (const auto& c : chain.conditions) conditions.push_back(to_json(c));
  const auto ex = extract_group(chain);
  json extracted = {{"group", to_json(ex.group)}};
  if (ex.second) extracted["second"] = to_json(*ex.second);
  return {{"poset", chain.poset == Poset::kPr ? "pr" : "pa"},
          {"oracles", oracles},
          {"conditions", conditions},
          {"met", met},
          {"extracted", extracted}};
}

Poset poset_from_string(const std::string& s) {
  if (s == "pr") return Poset::kPr;
  if (s == "pa") return Poset::kPa;
  fail(ErrorCode::kParseError, "unknown poset \"" + s + "\"");
}

Condition condition_from_json(const json& j, Poset poset, const std::string& where) {
  auto h = perms_from_json(field(j, "h", where), where + ".h");
  if (poset == Poset::kPr) {
    PrCondition c{std::move(h), perms_from_json(field(j, "h2", where), where + ".h2")};
    if (!valid(c)) parse_fail(where, "supports are not pairwise disjoint");
    return c;
  }
  PaCondition c{std::move(h), {}};
  const json& f = field(j, "f", where);
  if (!f.is_array()) parse_fail(where + ".f", "expected an array of groups");
  for (std::size_t i = 0; i < f.size(); ++i) c.f.push_back(group_from_json(f[i], where + ".f[" + std::to_string(i) + "]"));
  if (!valid(c)) parse_fail(where, "supports are not pairwise disjoint");
  return c;
}

DenseOracle oracle_from_json(const json& j, const std::string& where) {
  const json& kind = field(j, "kind", where);
  if (!kind.is_string()) parse_fail(where + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  DenseOracle o;
  if (k == "pr_D") {
    o.kind = DenseOracle::Kind::kPrCount;
    o.group = group_from_json(field(j, "group", where), where + ".group");
    o.bound = as_size(field(j, "k", where), where + ".k");
  } else if (k == "pa_group") {
    o.kind = DenseOracle::Kind::kPaGroup;
    o.group = group_from_json(field(j, "group", where), where + ".group");
  } else if (k == "pa_size") {
    o.kind = DenseOracle::Kind::kPaSize;
    o.bound = as_size(field(j, "l", where), where + ".l");
  } else {
    parse_fail(where + ".kind", "unknown oracle kind \"" + k + "\"");
  }
  return o;
}

FilterChain chain_from_json(const json& j, const std::string& where) {
  const json& poset = field(j, "poset", where);
  if (!poset.is_string()) parse_fail(where + ".poset", "expected \"pr\" or \"pa\"");
  FilterChain chain;
  chain.poset = poset_from_string(poset.get<std::string>());
  const json& oracles = field(j, "oracles", where);
  const json& conditions = field(j, "conditions", where);
  const json& met = field(j, "met", where);
  if (!oracles.is_array() || !conditions.is_array() || !met.is_array()) parse_fail(where, "expected arrays");
  for (std::size_t i = 0; i < oracles.size(); ++i) {
    chain.oracles.push_back(oracle_from_json(oracles[i], where + ".oracles[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < conditions.size(); ++i) {
    chain.conditions.push_back(condition_from_json(conditions[i], chain.poset, where + ".conditions[" + std::to_string(i) + "]"));
  }
  for (std::size_t i = 0; i < met.size(); ++i) {
    const std::string at = where + ".met[" + std::to_string(i) + "]";
    chain.met_at.push_back(as_size(met[i].is_object() ? field(met[i], "index", at) : met[i], at));
  }
  return chain;
}

}  // namespace lf
