#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lf {

/// An eventually periodic subset of the naturals: membership of i is
/// prefix[i] for i < prefix.size(), and cycle[(i - prefix.size()) % cycle.size()]
/// afterwards. Stored in a canonical (shortest) form, so == is set equality.
class IndexSet {
 public:
  IndexSet() : cycle_{false} {}
  IndexSet(std::vector<bool> prefix, std::vector<bool> cycle);

  static IndexSet all() { return IndexSet({}, {true}); }
  static IndexSet none() { return IndexSet(); }
  static IndexSet finite(const std::vector<std::uint64_t>& members);
  static IndexSet residues(std::uint64_t modulus, const std::vector<std::uint64_t>& residues);
  static IndexSet from(std::uint64_t start) { return IndexSet(std::vector<bool>(start, false), {true}); }

  bool contains(std::uint64_t i) const;
  bool is_finite() const;
  bool is_empty() const;
  /// Members below `bound`, ascending.
  std::vector<std::uint64_t> members_below(std::uint64_t bound) const;
  /// Least member >= from, if any.
  std::optional<std::uint64_t> next_member(std::uint64_t from) const;

  IndexSet intersect(const IndexSet& o) const;
  IndexSet unite(const IndexSet& o) const;
  IndexSet minus(const IndexSet& o) const;
  IndexSet complement() const;
  bool subset_of(const IndexSet& o) const { return minus(o).is_empty(); }
  bool almost_subset_of(const IndexSet& o) const { return minus(o).is_finite(); }

  const std::vector<bool>& prefix() const { return prefix_; }
  const std::vector<bool>& cycle() const { return cycle_; }

  bool operator==(const IndexSet&) const = default;

 private:
  template <typename Op>
  IndexSet combine(const IndexSet& o, Op op) const;
  void canonicalize();

  std::vector<bool> prefix_;
  std::vector<bool> cycle_;
};

}  // namespace lf
