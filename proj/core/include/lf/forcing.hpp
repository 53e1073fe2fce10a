#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lf/groups.hpp"
#include "lf/verdict.hpp"

namespace lf {

/// A condition of the reaping poset: two finite sets of permutations whose
/// supports are pairwise disjoint. Both lists are kept in SF order.
struct PrCondition {
  std::vector<FinPerm> h;
  std::vector<FinPerm> h2;
  bool operator==(const PrCondition&) const = default;
};

/// A condition of the orthogonality poset: disjoint-support permutations H
/// and a finite set F of groups to stay away from.
struct PaCondition {
  std::vector<FinPerm> h;
  std::vector<GroupDesc> f;
  bool operator==(const PaCondition&) const = default;
};

enum class Poset { kPr, kPa };
using Condition = std::variant<PrCondition, PaCondition>;

bool disjoint_supports(const std::vector<FinPerm>& perms);
bool valid(const PrCondition& c);
bool valid(const PaCondition& c);

/// c extends d: c.h contains d.h and c.h2 contains d.h2.
bool pr_leq(const PrCondition& c, const PrCondition& d);
/// Adds elements of G above all existing supports, alternating between h
/// and h2, until both meet G in more than k elements.
PrCondition pr_dense_extend(const PrCondition& c, const GroupDesc& g, std::size_t k, const WindowConfig& w);

/// Superset checks plus: no element of <c.h> outside <d.h> lies in a group
/// of d.f. The closure is enumerated, so this may throw kBudgetExceeded.
Verdict pa_leq(const PaCondition& c, const PaCondition& d, const WindowConfig& w);
PaCondition pa_dense_extend_group(const PaCondition& c, const GroupDesc& g);
/// Adds cycle-builder outputs against c.f until |h| > l.
PaCondition pa_dense_extend_size(const PaCondition& c, std::size_t l, const WindowConfig& w);

/// A dense set together with the deterministic extension into it.
struct DenseOracle {
  enum class Kind { kPrCount, kPaGroup, kPaSize };
  Kind kind = Kind::kPrCount;
  GroupDesc group;
  std::size_t bound = 0;  // k for kPrCount, l for kPaSize

  std::string name() const;
  Poset poset() const { return kind == Kind::kPrCount ? Poset::kPr : Poset::kPa; }
  bool met_by(const Condition& c, const WindowConfig& w) const;
  Condition extend(const Condition& c, const WindowConfig& w) const;
};

struct FilterChain {
  Poset poset = Poset::kPr;
  std::vector<Condition> conditions;
  std::vector<DenseOracle> oracles;
  std::vector<std::size_t> met_at;  // met_at[i]: index of the condition meeting oracle i
};

/// Starts at the largest condition and applies each oracle once, in order.
/// Oracle failures are rethrown with the oracle's index in the message.
FilterChain rasiowa_sikorski(Poset poset, const std::vector<DenseOracle>& oracles, const WindowConfig& w);

/// Pairwise order along the chain, condition invariants, and every recorded
/// meeting.
Verdict verify_chain(const FilterChain& chain, const WindowConfig& w);

struct Extracted {
  GroupDesc group;
  std::optional<GroupDesc> second;  // the h2 group, for the reaping poset
};
Extracted extract_group(const FilterChain& chain);

nlohmann::json to_json(const Condition& c);
nlohmann::json to_json(const DenseOracle& o);
/// Transcript: poset, oracles, conditions, met indices and extracted groups.
nlohmann::json to_json(const FilterChain& chain);

Condition condition_from_json(const nlohmann::json& j, Poset poset, const std::string& where = "$");
DenseOracle oracle_from_json(const nlohmann::json& j, const std::string& where = "$");
FilterChain chain_from_json(const nlohmann::json& j, const std::string& where = "$");
Poset poset_from_string(const std::string& s);

}  // namespace lf
