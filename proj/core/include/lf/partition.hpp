#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "lf/perm.hpp"

namespace lf {

/// Which class a point is in. Infinite classes are numbered 0, 1, ... by the
/// first point that meets them; a finite class is named by its least point.
struct ClassKey {
  bool infinite = false;
  std::uint64_t value = 0;

  auto operator<=>(const ClassKey&) const = default;
};

/// A partition of the naturals that is eventually periodic.
///
/// Points below the preperiod P carry explicit keys. A point x >= P reads the
/// entry for residue (x - P) mod p: either an infinite class id, or an offset
/// d saying the class of x is the finite class whose least point is x - d.
/// Construction always canonicalizes (shortest period, then shortest
/// preperiod, infinite ids by first occurrence), so == is equality of
/// partitions.
class PartitionDesc {
 public:
  struct Entry {
    bool global = false;
    std::uint64_t value = 0;  // class id, or least point (prefix) / offset (tail)
    bool operator==(const Entry&) const = default;
  };

  PartitionDesc();  // all singletons

  static PartitionDesc singletons() { return {}; }
  static PartitionDesc one_class();
  /// Residue classes mod k, all infinite.
  static PartitionDesc mod(std::uint32_t k);
  /// Blocks {2j, 2j+1}.
  static PartitionDesc pairs();
  /// Finite classes listed explicitly, everything else a singleton.
  static PartitionDesc from_finite_classes(const std::vector<std::vector<Point>>& classes);
  /// Classes generated by a finite set of pairs; untouched points are singletons.
  static PartitionDesc from_pairs(const std::vector<std::pair<Point, Point>>& pairs);

  /// Canonical construction from raw labels on [0, prefix_len + period):
  /// equal raw labels mean the same class, labels at positions >= prefix_len
  /// repeat with the given period, and `infinite(label)` tells whether a
  /// label names an infinite class. Every finite class must have its least
  /// point inside the window.
  static PartitionDesc build(std::uint64_t prefix_len, std::uint64_t period,
                             const std::vector<std::uint64_t>& raw,
                             const std::function<bool(std::uint64_t)>& infinite);

  /// Raw form: explicit prefix keys and tail entries. Throws kInvalidArgument
  /// when the data is inconsistent.
  static PartitionDesc from_parts(std::vector<Entry> prefix, std::vector<Entry> tail);

  ClassKey key(Point x) const;
  bool same_class(Point x, Point y) const { return key(x) == key(y); }
  bool class_is_infinite(Point x) const { return key(x).infinite; }

  std::uint64_t preperiod() const { return prefix_.size(); }
  std::uint64_t period() const { return tail_.size(); }
  const std::vector<Entry>& prefix_entries() const { return prefix_; }
  const std::vector<Entry>& tail_entries() const { return tail_; }
  std::uint64_t infinite_class_count() const { return globals_; }
  /// Largest tail offset; finite classes with least point v lie inside
  /// [v, max(P, v + max_offset() + 1)).
  std::uint64_t max_offset() const { return max_offset_; }
  /// One past the largest member of a finite class with least point v.
  std::uint64_t finite_class_end(std::uint64_t v) const;

  /// Members of the class of x that are < bound, ascending.
  std::vector<Point> class_members(Point x, Point bound) const;
  /// Least point of each infinite class.
  std::vector<Point> infinite_class_anchors() const;
  /// Least member of infinite class `id` that is >= from.
  Point next_in_infinite_class(std::uint64_t id, Point from) const;
  /// The classes cut down to [0, bound), ordered by least point.
  std::vector<std::vector<Point>> window_classes(Point bound) const;

  bool operator==(const PartitionDesc&) const = default;

 private:
  std::vector<Entry> prefix_;
  std::vector<Entry> tail_;
  std::uint64_t globals_ = 0;
  std::uint64_t max_offset_ = 0;

  void finish();
};

PartitionDesc meet(const PartitionDesc& a, const PartitionDesc& b);
/// Transitive closure of the union. Throws kJoinNotFinitelyDescribable if no
/// eventually periodic description verifies within the search limits.
PartitionDesc join(const PartitionDesc& a, const PartitionDesc& b);
/// Every class of `fine` lies inside a class of `coarse`.
bool refines(const PartitionDesc& fine, const PartitionDesc& coarse);
/// G_E is finite: no infinite class and only finitely many non-singletons.
bool group_is_finite(const PartitionDesc& e);
/// The partition restricted to [0, bound) as related pairs (x, y), x < y.
std::vector<std::pair<Point, Point>> pair_view(const PartitionDesc& e, Point bound);

enum class CoarserOutcome { kHolds, kFails, kUndecided };

struct CoarserVerdict {
  CoarserOutcome outcome = CoarserOutcome::kUndecided;
  /// A patch Z with X inside join(Y, Z) (Holds), or the minimal one that
  /// exceeded the budget (Undecided).
  std::vector<std::pair<Point, Point>> patch;
  /// Two points joined by join(Y, X) but not by Y, taken from a stretch of
  /// the tail that repeats forever (Fails).
  std::optional<std::pair<Point, Point>> counterexample;
  std::uint64_t needed = 0;
};

/// Decides whether X is contained in join(Y, Z) for some finite pair set Z,
/// i.e. whether Y becomes coarser than X after finitely many merges.
CoarserVerdict almost_coarser(const PartitionDesc& y, const PartitionDesc& x, std::uint64_t patch_budget);

/// The partition whose group is generated by G_E0 and g (exact when every
/// class g touches joins an infinite class).
PartitionDesc coarsen_by_perm(const PartitionDesc& e0, const FinPerm& g);

struct ExtractedTransposition {
  FinPerm transposition;
  Point a_spare = 0;
  Point b_spare = 0;
  /// The five factors, left to right: (a a'), g^-1, (b b'), g, (a a').
  std::vector<FinPerm> factors;
};

/// Conjugation trick producing a transposition across the classes of a and
/// b = g(a). Spares are the least class points outside supp(g) below `bound`.
ExtractedTransposition extract_transposition(const PartitionDesc& e0, const FinPerm& g, Point a, Point b,
                                             Point bound);

}  // namespace lf
