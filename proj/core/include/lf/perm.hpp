#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lf {

using Point = std::uint32_t;

/// A cycle of length >= 2, rotated so that its least point comes first.
struct Cycle {
  std::vector<Point> points;

  bool operator==(const Cycle&) const = default;
};

/// A finitary permutation of the naturals.
///
/// Only moved points are stored, as (point, image) pairs sorted by point, so
/// two values compare equal exactly when they are the same permutation.
/// Products follow function composition: (p * q)(x) == p(q(x)).
class FinPerm {
 public:
  using Move = std::pair<Point, Point>;

  FinPerm() = default;

  static FinPerm identity() { return {}; }
  /// Throws ErrorCode::kDuplicatePoint if `points` repeats a point.
  static FinPerm cycle(std::span<const Point> points);
  static FinPerm cycle(std::initializer_list<Point> points);
  static FinPerm transposition(Point a, Point b);
  /// Builds from an arbitrary point->image list; fixed entries are dropped.
  /// Throws kInvalidArgument if the list is not a bijection of its domain.
  static FinPerm from_moves(std::vector<Move> moves);
  /// Product of disjoint-or-not cycles, composed left to right as written.
  static FinPerm from_cycles(const std::vector<std::vector<Point>>& cycles);

  Point operator()(Point x) const;
  bool is_identity() const { return moves_.empty(); }
  const std::vector<Move>& moves() const { return moves_; }
  std::vector<Point> support() const;
  std::size_t support_size() const { return moves_.size(); }
  bool moves_point(Point x) const;
  /// Largest moved point; nullopt for the identity.
  std::optional<Point> max_moved() const;
  std::optional<Point> min_moved() const;

  FinPerm inverse() const;
  FinPerm pow(std::int64_t e) const;
  std::uint64_t order() const;
  std::vector<Cycle> cycles() const;
  /// Restriction to a set the permutation maps onto itself.
  FinPerm restricted_to(std::span<const Point> sorted_domain) const;

  bool operator==(const FinPerm&) const = default;

  std::string to_string() const;

 private:
  explicit FinPerm(std::vector<Move> moves) : moves_(std::move(moves)) {}
  std::vector<Move> moves_;
};

FinPerm operator*(const FinPerm& p, const FinPerm& q);

/// The enumeration order of SF(omega): by largest moved point, then by the
/// lexicographic order of the image sequence on [0, max]. The identity is
/// first.
bool sf_less(const FinPerm& p, const FinPerm& q);

struct SfLess {
  bool operator()(const FinPerm& p, const FinPerm& q) const { return sf_less(p, q); }
};

/// Position of `p` in the SF enumeration. Throws kOutOfRange when the largest
/// moved point exceeds 19 (the index would not fit in 64 bits).
std::uint64_t sf_index(const FinPerm& p);
/// Inverse of sf_index. Throws kOutOfRange for i >= 20!.
FinPerm sf_at(std::uint64_t i);

bool supports_disjoint(const FinPerm& p, const FinPerm& q);

}  // namespace lf
