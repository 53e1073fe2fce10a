#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lf/index_set.hpp"
#include "lf/partition.hpp"
#include "lf/perm.hpp"
#include "lf/perm_group.hpp"

namespace lf {

/// Truncation of an infinite computation: only points below `bound` are
/// considered, and closures stop after `element_budget` elements.
struct WindowConfig {
  Point bound = 64;
  std::uint64_t element_budget = 1'000'000;
};

struct GroupNode;

/// Immutable description of a subgroup of SF(omega). Copies share the
/// underlying node.
class GroupDesc {
 public:
  enum class Kind { kFinitelyGenerated, kDisjointFamily, kPartition, kExtended };

  /// The trivial group.
  GroupDesc();

  static GroupDesc finitely_generated(std::vector<FinPerm> generators);
  /// Disjoint family of prime cycles sigma_i, i in `indices` (see gstar_block).
  static GroupDesc gstar_family(IndexSet indices);
  /// Disjoint family given by an explicit list. Throws kInvalidArgument when
  /// two supports meet or an entry is the identity.
  static GroupDesc explicit_family(std::vector<FinPerm> members);
  static GroupDesc partition(PartitionDesc e);

  Kind kind() const;
  /// FinitelyGenerated generators, or the members of an explicit family.
  const std::vector<FinPerm>& generators() const;
  bool is_gstar_family() const;
  const IndexSet& indices() const;
  const PartitionDesc& partition_desc() const;
  /// ExtendedBy parts. The base is never itself an extension.
  const GroupDesc& base() const;
  const std::vector<FinPerm>& extra() const;

  /// Infinite as a set, decided from the description.
  bool is_infinite() const;

  bool operator==(const GroupDesc& o) const;

  const GroupNode& node() const { return *node_; }

 private:
  explicit GroupDesc(std::shared_ptr<const GroupNode> node) : node_(std::move(node)) {}
  friend GroupDesc generated_over(const GroupDesc& g, std::vector<FinPerm> x);

  std::shared_ptr<const GroupNode> node_;
};

/// The subgroup generated by G and X. Extensions flatten, finitely generated
/// bases absorb X, and an empty X returns G itself.
GroupDesc generated_over(const GroupDesc& g, std::vector<FinPerm> x);

struct GstarBlock {
  Point start = 0;
  Point length = 0;
};

/// Block i of G*: consecutive blocks of prime lengths 2, 3, 5, ... from 0.
GstarBlock gstar_block(std::uint64_t i);
/// Index of the block containing x.
std::uint64_t gstar_block_of(Point x);
/// The cycle sigma_i on block i.
FinPerm gstar_sigma(std::uint64_t i);
GroupDesc gstar();
GroupDesc gstar_subgroup(IndexSet indices);

/// Generators of G with support inside the window, and whether these
/// generate everything G has there.
struct WindowGenerators {
  std::vector<FinPerm> generators;
  bool exact = true;
};
WindowGenerators window_generators(const GroupDesc& g, const WindowConfig& w);

/// How an extension <B, X> splits up: a finite group on the set T, times
/// the class-preserving group of `join` off T (partition base joined along
/// X), or times the G* blocks outside `near_blocks`.
struct ExtensionShape {
  std::vector<Point> t;
  PartitionDesc join;
  std::vector<std::uint64_t> near_blocks;
  std::vector<FinPerm> finite_generators;
};
ExtensionShape extension_shape(const GroupDesc& g, const WindowConfig& w);

struct LocalPart {
  std::vector<Point> domain;
  std::vector<FinPerm> elements;  // sorted in SF order, identity first
  bool exact = true;
};

/// Generators of { g in G : supp(g) inside A }, without enumerating.
WindowGenerators local_generators(const GroupDesc& g, const std::vector<Point>& a, const WindowConfig& w);
LocalPart local_part(const GroupDesc& g, const std::vector<Point>& a, const WindowConfig& w);

enum class MemberKind { kMember, kNonMember, kUnknown };

struct MembershipVerdict {
  MemberKind kind = MemberKind::kUnknown;
  std::optional<Certificate> certificate;
  std::string reason;
  Point window = 0;

  bool member() const { return kind == MemberKind::kMember; }
  bool non_member() const { return kind == MemberKind::kNonMember; }
};

/// Exact for partition groups, disjoint families and their finite
/// extensions. For finitely generated groups with generators outside the
/// window a negative answer becomes kUnknown. With `certify` set, Member
/// verdicts carry a word over members of G (and the extension elements).
MembershipVerdict membership(const FinPerm& g, const GroupDesc& group, const WindowConfig& w,
                             bool certify = true);
/// Shorthand: kMember without building a certificate.
bool is_member(const FinPerm& g, const GroupDesc& group, const WindowConfig& w);

struct TransportMaps {
  /// Each map lists the images of A's points in ascending order of A.
  std::vector<std::vector<Point>> maps;
  bool exact = true;
};

/// Does some element of G extend the partial injective map?
/// nullopt when the window cannot decide.
std::optional<bool> extends(const GroupDesc& g, const std::vector<std::pair<Point, Point>>& partial,
                            const WindowConfig& w);
/// Restrictions to A of the elements mapping A onto B.
TransportMaps transport_maps(const GroupDesc& g, std::vector<Point> a, std::vector<Point> b, const WindowConfig& w);

struct TraceSet {
  std::vector<std::uint64_t> members;
  std::vector<std::uint64_t> unknown;
};
TraceSet trace_set(const GroupDesc& g, std::uint64_t n, const WindowConfig& w);

}  // namespace lf
