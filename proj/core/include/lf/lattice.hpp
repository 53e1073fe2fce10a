#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lf/groups.hpp"
#include "lf/verdict.hpp"

namespace lf {

/// G1 and G2 have finite intersection. Decided exactly for every
/// description kind; a Fails witness lists up to `threshold` distinct
/// non-trivial common elements.
Verdict orthogonal(const GroupDesc& g1, const GroupDesc& g2, const WindowConfig& w, std::size_t threshold = 16);

/// Every window generator of G1 is a member of <G2, X>. The witness carries
/// one certificate per checked generator.
Verdict almost_contained_verify(const GroupDesc& g1, const GroupDesc& g2, const std::vector<FinPerm>& x,
                                const WindowConfig& w);

struct AlmostWitness {
  std::vector<FinPerm> x;
  std::vector<Certificate> certificates;  // one per window generator of G1
};

/// First X (by size, then SF order of its members) with at most
/// `size_bound` elements of support below `support_bound` such that
/// almost_contained_verify(G1, G2, X) holds.
std::optional<AlmostWitness> almost_witness_search(const GroupDesc& g1, const GroupDesc& g2, std::size_t size_bound,
                                                   Point support_bound, const WindowConfig& w);

Verdict a_equal(const GroupDesc& g1, const GroupDesc& g2, const std::vector<FinPerm>& x1,
                const std::vector<FinPerm>& x2, const WindowConfig& w);

/// Some c, d from the pool, both infinite subgroups of b, with c <= a and d
/// orthogonal to a. A Fails verdict is relative to the pool.
Verdict splits(const GroupDesc& a, const GroupDesc& b, const std::vector<GroupDesc>& pool, const WindowConfig& w);

/// For two G* index subgroups: G_{A cap B} and G_{B minus A}. Empty otherwise.
std::vector<GroupDesc> default_split_pool(const GroupDesc& a, const GroupDesc& b);

enum class FamilyKind { kSplitting, kReaping, kShattering };

struct FamilyOptions {
  std::size_t size_bound = 2;
  Point support_bound = 8;
  std::vector<GroupDesc> pool;  // extra split candidates
};

struct ProbeOutcome {
  bool witnessed = false;
  nlohmann::json witness;
};

struct FamilyReport {
  FamilyKind kind = FamilyKind::kSplitting;
  std::vector<ProbeOutcome> outcomes;
  bool pass = false;
};

/// Splitting and reaping read `families[0]` as the family; shattering reads
/// every entry as one of the families.
FamilyReport family_check(FamilyKind kind, const std::vector<std::vector<GroupDesc>>& families,
                          const std::vector<GroupDesc>& probes, const WindowConfig& w,
                          const FamilyOptions& options = {});

/// For each member c of the family, a maximal pairwise orthogonal family
/// drawn from the pool (in pool order) that contains c.
std::vector<std::vector<GroupDesc>> shattering_from_splitting(const std::vector<GroupDesc>& family,
                                                              const std::vector<GroupDesc>& pool,
                                                              const WindowConfig& w);

struct MetricValue {
  /// The value is numerator / 2^(n - 1); n <= 64 keeps it exact.
  std::uint64_t numerator = 0;
  unsigned denominator_log2 = 0;
  long double value = 0;
  long double error_bound = 0;
};

/// Local parts on A_n = { bit positions of n } compared by mutual
/// containment of their generators.
bool local_parts_equal(const GroupDesc& g1, const GroupDesc& g2, const std::vector<Point>& a, const WindowConfig& w);
MetricValue metric_d(const GroupDesc& g1, const GroupDesc& g2, unsigned n, const WindowConfig& w);

nlohmann::json to_json(const FamilyReport& r);
nlohmann::json to_json(const MetricValue& m);
nlohmann::json to_json(const AlmostWitness& a);

}  // namespace lf
