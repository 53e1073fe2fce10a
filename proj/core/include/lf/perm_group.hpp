#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lf/perm.hpp"

namespace lf {

/// A straight-line program: line k is a generator, the inverse of an earlier
/// line, or the product of two earlier lines. The program's value is its last
/// line (the identity when empty).
struct Slp {
  enum class Op : std::uint8_t { kGen, kInv, kMul };
  struct Line {
    Op op;
    std::uint32_t a;
    std::uint32_t b;
    bool operator==(const Line&) const = default;
  };
  std::vector<Line> lines;

  FinPerm evaluate(std::span<const FinPerm> generators) const;
  bool operator==(const Slp&) const = default;
};

/// Membership certificate: a word, in compressed form, over the listed
/// generators of the group it was issued for.
struct Certificate {
  std::vector<FinPerm> generators;
  Slp program;

  FinPerm evaluate() const { return program.evaluate(generators); }
  bool operator==(const Certificate&) const = default;
};

Certificate word_certificate(std::vector<FinPerm> generators,
                             const std::vector<std::pair<std::uint32_t, std::int64_t>>& word);

/// Base and strong generating set of a finite permutation group, built by the
/// deterministic Schreier-Sims algorithm. Every strong generator and
/// transversal element is tracked as a straight-line program over the input
/// generators, so sifting yields membership certificates.
class PermGroup {
 public:
  /// `base_prefix` fixes the first base points in order (useful for pointwise
  /// stabilizers and for extending partial maps).
  explicit PermGroup(std::vector<FinPerm> generators, std::span<const Point> base_prefix = {});

  const std::vector<FinPerm>& generators() const { return generators_; }
  const std::vector<Point>& base() const { return base_points_; }
  std::size_t base_prefix_size() const { return prefix_size_; }

  bool contains(const FinPerm& g) const;
  std::optional<Certificate> certify(const FinPerm& g) const;

  /// Order as a floating value (exact while below 2^64).
  long double order() const;
  std::optional<std::uint64_t> order_exact() const;

  /// All elements; throws kBudgetExceeded when the order exceeds `budget`.
  std::vector<FinPerm> elements(std::uint64_t budget) const;

  /// Strong generators of the pointwise stabilizer of the first `depth` base
  /// points. With depth = base_prefix_size() this is the stabilizer of the
  /// prefix.
  std::vector<FinPerm> stabilizer_generators(std::size_t depth) const;

  /// An element g with g(base[i]) = images[i] for every i < images.size(),
  /// if one exists. Requires images.size() <= base_prefix_size().
  std::optional<FinPerm> realize_prefix(std::span<const Point> images) const;

  std::vector<Point> orbit(Point x) const;

 private:
  using Local = std::vector<std::uint32_t>;
  static constexpr std::uint32_t kNoNode = 0xffffffffu;

  struct Level {
    std::uint32_t base = 0;
    std::vector<std::uint32_t> gens;       // indices into strong_
    std::vector<std::int32_t> where;       // local point -> orbit index, -1 if absent
    std::vector<std::uint32_t> orbit;
    std::vector<Local> transversal;        // transversal[i](base) == orbit[i]
    std::vector<std::uint32_t> trans_node;
  };

  std::uint32_t local_of(Point x) const;
  bool in_domain(Point x) const;
  Local to_local(const FinPerm& g) const;
  FinPerm to_perm(const Local& g) const;
  Local identity_local() const;
  static Local mul(const Local& p, const Local& q);
  static Local inv(const Local& p);
  static bool is_identity(const Local& p);

  std::uint32_t node_mul(std::uint32_t a, std::uint32_t b);
  std::uint32_t node_inv(std::uint32_t a);
  std::uint32_t node_product(const std::vector<std::pair<std::uint32_t, bool>>& factors);

  void rebuild_level(std::size_t l);
  void run_schreier_sims();
  // Returns residue and the level where sifting stopped (levels_.size() when
  // it went all the way through). Collects inverse-transversal node factors.
  std::pair<Local, std::size_t> sift(Local g, std::size_t from,
                                     std::vector<std::pair<std::uint32_t, bool>>* factors) const;
  Certificate extract(std::uint32_t node) const;

  std::vector<FinPerm> generators_;
  std::vector<Point> domain_;
  std::vector<std::int32_t> index_of_;
  std::vector<Point> base_points_;
  std::size_t prefix_size_ = 0;

  std::vector<Local> strong_;
  std::vector<std::uint32_t> strong_node_;
  std::vector<Level> levels_;
  std::vector<Slp::Line> arena_;
  std::vector<std::uint32_t> inverse_memo_;
};

/// An element of <generators> extending the partial injective map, if any.
std::optional<FinPerm> realize_partial_map(const std::vector<FinPerm>& generators,
                                           std::span<const std::pair<Point, Point>> partial);

/// Breadth-first closure of <generators>, independent of Schreier-Sims.
/// Throws kBudgetExceeded when more than `budget` elements appear.
std::vector<FinPerm> closure_bfs(const std::vector<FinPerm>& generators, std::uint64_t budget);

}  // namespace lf
