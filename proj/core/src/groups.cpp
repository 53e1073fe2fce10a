#include "lf/groups.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>

#include "lf/error.hpp"

namespace lf {

namespace {

// Data that depends on the window: generators kept, the finitely generated
// closure, and for extensions the finite part F acting on the set T.
struct Analysis {
  WindowGenerators window;
  std::vector<FinPerm> extras;  // extension elements inside the window
  bool dropped = false;         // some generator fell outside the window
  std::unique_ptr<PermGroup> group;  // FinitelyGenerated only
  PartitionDesc join;           // partition base: E joined along the extras
  std::vector<Point> t;         // sorted
  std::set<std::uint64_t> near; // gstar base: blocks meeting supp X
  std::vector<FinPerm> f_gens;
  std::unique_ptr<PermGroup> f;
};

std::vector<FinPerm> adjacent_transpositions(const std::vector<Point>& sorted) {
  std::vector<FinPerm> out;
  for (std::size_t i = 1; i < sorted.size(); ++i) out.push_back(FinPerm::transposition(sorted[i - 1], sorted[i]));
  return out;
}

bool inside(const FinPerm& g, Point bound) {
  const auto top = g.max_moved();
  return !top || *top < bound;
}

bool contains_sorted(const std::vector<Point>& v, Point x) { return std::binary_search(v.begin(), v.end(), x); }

std::vector<Point> sorted_unique(std::vector<Point> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<Point> support_union(const std::vector<FinPerm>& perms) {
  std::vector<Point> out;
  for (const auto& p : perms) {
    for (const auto& [x, y] : p.moves()) out.push_back(x);
  }
  return sorted_unique(std::move(out));
}

// Block layout of G*, grown on demand.
class BlockTable {
 public:
  GstarBlock block(std::uint64_t i) {
    std::lock_guard lock(mu_);
    while (starts_.size() <= i) grow();
    return {static_cast<Point>(starts_[i]), static_cast<Point>(lens_[i])};
  }

  std::uint64_t block_of(Point x) {
    std::lock_guard lock(mu_);
    while (starts_.empty() || starts_.back() + lens_.back() <= x) grow();
    const auto it = std::upper_bound(starts_.begin(), starts_.end(), std::uint64_t{x});
    return static_cast<std::uint64_t>(it - starts_.begin()) - 1;
  }

 private:
  void grow() {
    std::uint64_t p = lens_.empty() ? 1 : lens_.back();
    for (bool prime = false; !prime;) {
      ++p;
      prime = p >= 2;
      for (std::uint64_t d = 2; d * d <= p && prime; ++d) prime = p % d != 0;
    }
    starts_.push_back(lens_.empty() ? 0 : starts_.back() + lens_.back());
    lens_.push_back(p);
    if (starts_.back() + p > 0xffffffffull) fail(ErrorCode::kOutOfRange, "gstar block beyond the point range");
  }

  std::mutex mu_;
  std::vector<std::uint64_t> starts_;
  std::vector<std::uint64_t> lens_;
};

BlockTable& blocks() {
  static BlockTable table;
  return table;
}

}  // namespace

struct GroupNode {
  GroupDesc::Kind kind = GroupDesc::Kind::kFinitelyGenerated;
  std::vector<FinPerm> gens;  // generators, family members, or extension elements
  bool gstar = false;
  IndexSet indices;
  PartitionDesc partition;
  std::optional<GroupDesc> base;
  std::map<Point, std::size_t> owner;  // explicit family: point -> member

  mutable std::mutex mu;
  mutable std::map<Point, std::shared_ptr<const Analysis>> cache;
};

GstarBlock gstar_block(std::uint64_t i) { return blocks().block(i); }
std::uint64_t gstar_block_of(Point x) { return blocks().block_of(x); }

FinPerm gstar_sigma(std::uint64_t i) {
  const auto b = gstar_block(i);
  std::vector<Point> pts(b.length);
  for (Point k = 0; k < b.length; ++k) pts[k] = b.start + k;
  return FinPerm::cycle(pts);
}

GroupDesc::GroupDesc() : node_(std::make_shared<GroupNode>()) {}

GroupDesc GroupDesc::finitely_generated(std::vector<FinPerm> generators) {
  auto n = std::make_shared<GroupNode>();
  std::erase_if(generators, [](const FinPerm& g) { return g.is_identity(); });
  n->gens = std::move(generators);
  return GroupDesc(std::move(n));
}

GroupDesc GroupDesc::gstar_family(IndexSet indices) {
  auto n = std::make_shared<GroupNode>();
  n->kind = Kind::kDisjointFamily;
  n->gstar = true;
  n->indices = std::move(indices);
  return GroupDesc(std::move(n));
}

GroupDesc GroupDesc::explicit_family(std::vector<FinPerm> members) {
  auto n = std::make_shared<GroupNode>();
  n->kind = Kind::kDisjointFamily;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].is_identity()) fail(ErrorCode::kInvalidArgument, "family member is the identity");
    for (const auto& [x, y] : members[i].moves()) {
      if (!n->owner.emplace(x, i).second) {
        fail(ErrorCode::kInvalidArgument, "family supports meet at point " + std::to_string(x));
      }
    }
  }
  n->gens = std::move(members);
  return GroupDesc(std::move(n));
}

GroupDesc GroupDesc::partition(PartitionDesc e) {
  auto n = std::make_shared<GroupNode>();
  n->kind = Kind::kPartition;
  n->partition = std::move(e);
  return GroupDesc(std::move(n));
}

GroupDesc::Kind GroupDesc::kind() const { return node_->kind; }
const std::vector<FinPerm>& GroupDesc::generators() const { return node_->gens; }
bool GroupDesc::is_gstar_family() const { return node_->gstar; }
const IndexSet& GroupDesc::indices() const { return node_->indices; }
const PartitionDesc& GroupDesc::partition_desc() const { return node_->partition; }
const std::vector<FinPerm>& GroupDesc::extra() const { return node_->gens; }

const GroupDesc& GroupDesc::base() const {
  if (!node_->base) fail(ErrorCode::kInvalidArgument, "group is not an extension");
  return *node_->base;
}

bool GroupDesc::is_infinite() const {
  switch (kind()) {
    case Kind::kFinitelyGenerated:
      return false;
    case Kind::kDisjointFamily:
      return is_gstar_family() && !indices().is_finite();
    case Kind::kPartition:
      return !group_is_finite(partition_desc());
    case Kind::kExtended:
      return base().is_infinite();
  }
  return false;
}

bool GroupDesc::operator==(const GroupDesc& o) const {
  if (node_ == o.node_) return true;
  const auto& a = *node_;
  const auto& b = *o.node_;
  if (a.kind != b.kind || a.gens != b.gens || a.gstar != b.gstar) return false;
  switch (a.kind) {
    case Kind::kFinitelyGenerated:
      return true;
    case Kind::kDisjointFamily:
      return !a.gstar || a.indices == b.indices;
    case Kind::kPartition:
      return a.partition == b.partition;
    case Kind::kExtended:
      return *a.base == *b.base;
  }
  return false;
}

GroupDesc generated_over(const GroupDesc& g, std::vector<FinPerm> x) {
  std::vector<FinPerm> fresh;
  for (auto& p : x) {
    if (!p.is_identity() && std::find(fresh.begin(), fresh.end(), p) == fresh.end()) fresh.push_back(std::move(p));
  }
  if (fresh.empty()) return g;
  using Kind = GroupDesc::Kind;
  if (g.kind() == Kind::kFinitelyGenerated || (g.kind() == Kind::kDisjointFamily && !g.is_gstar_family())) {
    auto gens = g.generators();
    gens.insert(gens.end(), fresh.begin(), fresh.end());
    return GroupDesc::finitely_generated(std::move(gens));
  }
  auto n = std::make_shared<GroupNode>();
  n->kind = Kind::kExtended;
  if (g.kind() == Kind::kExtended) {
    n->base = g.base();
    n->gens = g.extra();
    for (auto& p : fresh) {
      if (std::find(n->gens.begin(), n->gens.end(), p) == n->gens.end()) n->gens.push_back(std::move(p));
    }
  } else {
    n->base = g;
    n->gens = std::move(fresh);
  }
  return GroupDesc(std::move(n));
}

GroupDesc gstar() { return GroupDesc::gstar_family(IndexSet::all()); }
GroupDesc gstar_subgroup(IndexSet indices) { return GroupDesc::gstar_family(std::move(indices)); }

namespace {

WindowGenerators base_window_generators(const GroupDesc& g, Point bound) {
  using Kind = GroupDesc::Kind;
  WindowGenerators out;
  switch (g.kind()) {
    case Kind::kFinitelyGenerated:
    case Kind::kDisjointFamily:
      if (g.is_gstar_family()) {
        for (std::uint64_t i = 0;; ++i) {
          const auto b = gstar_block(i);
          if (std::uint64_t{b.start} + b.length > bound) break;
          if (g.indices().contains(i)) out.generators.push_back(gstar_sigma(i));
        }
      } else {
        for (const auto& p : g.generators()) {
          if (inside(p, bound)) {
            out.generators.push_back(p);
          } else {
            out.exact = false;
          }
        }
        // A disjoint family never produces window elements from outside members.
        if (g.kind() == Kind::kDisjointFamily) out.exact = true;
      }
      break;
    case Kind::kPartition:
      for (const auto& cls : g.partition_desc().window_classes(bound)) {
        auto t = adjacent_transpositions(cls);
        out.generators.insert(out.generators.end(), t.begin(), t.end());
      }
      break;
    case Kind::kExtended:
      break;
  }
  return out;
}

std::shared_ptr<const Analysis> analyze(const GroupDesc& g, Point bound) {
  const GroupNode& node = g.node();
  {
    std::lock_guard lock(node.mu);
    if (auto it = node.cache.find(bound); it != node.cache.end()) return it->second;
  }
  auto a = std::make_shared<Analysis>();
  using Kind = GroupDesc::Kind;
  if (g.kind() != Kind::kExtended) {
    a->window = base_window_generators(g, bound);
    a->dropped = !a->window.exact;
    if (g.kind() == Kind::kFinitelyGenerated) a->group = std::make_unique<PermGroup>(a->window.generators);
  } else {
    const GroupDesc& base = g.base();
    a->window = base_window_generators(base, bound);
    for (const auto& x : g.extra()) {
      if (inside(x, bound)) {
        a->extras.push_back(x);
      } else {
        a->dropped = true;
      }
    }
    a->window.generators.insert(a->window.generators.end(), a->extras.begin(), a->extras.end());
    a->window.exact = !a->dropped;
    const auto k = support_union(a->extras);
    if (base.kind() == Kind::kPartition) {
      const PartitionDesc& e = base.partition_desc();
      std::vector<std::pair<Point, Point>> pairs;
      for (const auto& x : a->extras) {
        for (const auto& [p, q] : x.moves()) pairs.emplace_back(p, q);
      }
      a->join = join(e, PartitionDesc::from_pairs(pairs));
      std::vector<Point> t;
      for (Point p : k) {
        const auto key = a->join.key(p);
        if (key.infinite) continue;
        auto members = a->join.class_members(p, static_cast<Point>(a->join.finite_class_end(key.value)));
        t.insert(t.end(), members.begin(), members.end());
      }
      a->t = sorted_unique(std::move(t));
      for (Point p : a->t) {
        const auto key = e.key(p);
        if (key.value != p) continue;  // handle each E-class once, from its least point
        auto tr = adjacent_transpositions(e.class_members(p, static_cast<Point>(e.finite_class_end(p))));
        a->f_gens.insert(a->f_gens.end(), tr.begin(), tr.end());
      }
      for (const auto& x : a->extras) a->f_gens.push_back(x.restricted_to(a->t));
    } else {
      std::vector<Point> t;
      for (Point p : k) a->near.insert(gstar_block_of(p));
      for (auto i : a->near) {
        const auto b = gstar_block(i);
        for (Point q = 0; q < b.length; ++q) t.push_back(b.start + q);
        if (base.indices().contains(i)) a->f_gens.push_back(gstar_sigma(i));
      }
      a->t = sorted_unique(std::move(t));
      a->f_gens.insert(a->f_gens.end(), a->extras.begin(), a->extras.end());
    }
    std::erase_if(a->f_gens, [](const FinPerm& p) { return p.is_identity(); });
    a->f = std::make_unique<PermGroup>(a->f_gens);
  }
  std::lock_guard lock(node.mu);
  return node.cache.emplace(bound, std::move(a)).first->second;
}

// Powers of sigma_i on each touched block; nullopt if g is not in G_I.
std::optional<std::vector<std::pair<std::uint64_t, std::int64_t>>> gstar_factor(const FinPerm& g,
                                                                               const IndexSet& indices) {
  std::vector<std::pair<std::uint64_t, std::int64_t>> out;
  std::set<std::uint64_t> seen;
  for (const auto& [x, y] : g.moves()) {
    const auto i = gstar_block_of(x);
    if (!seen.insert(i).second) continue;
    if (!indices.contains(i)) return std::nullopt;
    const auto b = gstar_block(i);
    const Point s = g(b.start);
    if (s < b.start || s >= b.start + b.length) return std::nullopt;
    const Point e = s - b.start;
    for (Point j = 0; j < b.length; ++j) {
      if (g(b.start + j) != b.start + (j + e) % b.length) return std::nullopt;
    }
    if (e != 0) out.emplace_back(i, e);
  }
  return out;
}

// Powers of explicit family members; nullopt if g is not in the group.
std::optional<std::vector<std::pair<std::size_t, std::int64_t>>> family_factor(const FinPerm& g,
                                                                              const GroupNode& node) {
  std::vector<std::pair<std::size_t, std::int64_t>> out;
  std::set<std::size_t> seen;
  for (const auto& [x, y] : g.moves()) {
    const auto it = node.owner.find(x);
    if (it == node.owner.end()) return std::nullopt;
    if (!seen.insert(it->second).second) continue;
    const FinPerm& m = node.gens[it->second];
    const auto supp = m.support();
    for (Point x : supp) {
      if (!std::binary_search(supp.begin(), supp.end(), g(x))) return std::nullopt;
    }
    const FinPerm piece = g.restricted_to(supp);
    bool matched = false;
    FinPerm power = m;
    for (std::uint64_t e = 1; e < m.order() && !matched; ++e, power = power * m) {
      if (power.restricted_to(supp) == piece) {
        out.emplace_back(it->second, static_cast<std::int64_t>(e));
        matched = true;
      }
    }
    if (!matched) return std::nullopt;
  }
  return out;
}

// g maps the sorted set T onto itself.
bool preserves(const FinPerm& g, const std::vector<Point>& t) {
  for (const auto& [x, y] : g.moves()) {
    if (contains_sorted(t, x) != contains_sorted(t, y)) return false;
  }
  return true;
}

// The part of g moving points outside T.
FinPerm outside(const FinPerm& g, const std::vector<Point>& t) {
  std::vector<FinPerm::Move> moves;
  for (const auto& m : g.moves()) {
    if (!contains_sorted(t, m.first)) moves.push_back(m);
  }
  return FinPerm::from_moves(std::move(moves));
}

std::vector<Point> restrict_points(const FinPerm& g, const std::vector<Point>& t) {
  std::vector<Point> out;
  for (const auto& [x, y] : g.moves()) {
    if (contains_sorted(t, x)) out.push_back(x);
  }
  return out;
}

// Transpositions of E joining consecutive points of D inside each class.
std::vector<FinPerm> class_generators(const PartitionDesc& e, const std::vector<Point>& d) {
  std::map<ClassKey, std::vector<Point>> by_class;
  for (Point x : d) by_class[e.key(x)].push_back(x);
  std::vector<FinPerm> out;
  for (auto& [key, pts] : by_class) {
    auto t = adjacent_transpositions(pts);
    out.insert(out.end(), t.begin(), t.end());
  }
  return out;
}

// Certificate for a member of <G_E, X> over class transpositions and X,
// using a few spare points per infinite class touched.
std::optional<Certificate> partition_certificate(const FinPerm& g, const PartitionDesc& e,
                                                 const std::vector<FinPerm>& extras,
                                                 const std::vector<Point>& t) {
  std::vector<Point> core = g.support();
  const auto k = support_union(extras);
  core.insert(core.end(), k.begin(), k.end());
  core.insert(core.end(), t.begin(), t.end());
  core = sorted_unique(std::move(core));
  for (std::size_t spares : {0u, 2u, 4u, 8u}) {
    if (spares == 0 && !extras.empty()) continue;
    std::vector<Point> d = core;
    std::set<std::uint64_t> done;
    for (Point x : core) {
      const auto key = e.key(x);
      if (!key.infinite || !done.insert(key.value).second) continue;
      Point y = e.next_in_infinite_class(key.value, 0);
      for (std::size_t found = 0; found < spares; y = e.next_in_infinite_class(key.value, y + 1)) {
        if (!contains_sorted(core, y)) {
          d.push_back(y);
          ++found;
        }
      }
    }
    d = sorted_unique(std::move(d));
    auto gens = class_generators(e, d);
    gens.insert(gens.end(), extras.begin(), extras.end());
    PermGroup group(gens);
    if (auto cert = group.certify(g)) return cert;
  }
  return std::nullopt;
}

MembershipVerdict member_verdict(std::optional<Certificate> cert, bool certify) {
  MembershipVerdict v;
  v.kind = MemberKind::kMember;
  if (certify) {
    v.certificate = std::move(cert);
    if (!v.certificate) v.reason = "no certificate found on the spare points tried";
  }
  return v;
}

MembershipVerdict negative(bool exact, Point bound, std::string reason) {
  MembershipVerdict v;
  v.kind = exact ? MemberKind::kNonMember : MemberKind::kUnknown;
  v.reason = std::move(reason);
  if (!exact) v.window = bound;
  return v;
}

}  // namespace

WindowGenerators window_generators(const GroupDesc& g, const WindowConfig& w) {
  return analyze(g, w.bound)->window;
}

ExtensionShape extension_shape(const GroupDesc& g, const WindowConfig& w) {
  if (g.kind() != GroupDesc::Kind::kExtended) fail(ErrorCode::kInvalidArgument, "group is not an extension");
  const auto a = analyze(g, w.bound);
  return {a->t, a->join, {a->near.begin(), a->near.end()}, a->f_gens};
}

MembershipVerdict membership(const FinPerm& g, const GroupDesc& group, const WindowConfig& w, bool certify) {
  using Kind = GroupDesc::Kind;
  const GroupNode& node = group.node();
  switch (group.kind()) {
    case Kind::kFinitelyGenerated: {
      const auto a = analyze(group, w.bound);
      if (certify) {
        if (auto cert = a->group->certify(g)) return member_verdict(std::move(cert), true);
      } else if (a->group->contains(g)) {
        return member_verdict(std::nullopt, false);
      }
      return negative(!a->dropped, w.bound, "not in the subgroup generated inside the window");
    }
    case Kind::kDisjointFamily: {
      if (group.is_gstar_family()) {
        const auto f = gstar_factor(g, group.indices());
        if (!f) return negative(true, w.bound, "not a product of powers of the listed blocks");
        std::vector<FinPerm> gens;
        std::vector<std::pair<std::uint32_t, std::int64_t>> word;
        for (const auto& [i, e] : *f) {
          word.emplace_back(static_cast<std::uint32_t>(gens.size()), e);
          gens.push_back(gstar_sigma(i));
        }
        return member_verdict(word_certificate(std::move(gens), word), certify);
      }
      const auto f = family_factor(g, node);
      if (!f) return negative(true, w.bound, "not a product of powers of family members");
      std::vector<FinPerm> gens;
      std::vector<std::pair<std::uint32_t, std::int64_t>> word;
      for (const auto& [i, e] : *f) {
        word.emplace_back(static_cast<std::uint32_t>(gens.size()), e);
        gens.push_back(node.gens[i]);
      }
      return member_verdict(word_certificate(std::move(gens), word), certify);
    }
    case Kind::kPartition: {
      const auto& e = group.partition_desc();
      for (const auto& [x, y] : g.moves()) {
        if (!e.same_class(x, y)) {
          return negative(true, w.bound, "moves " + std::to_string(x) + " out of its class");
        }
      }
      return member_verdict(certify ? partition_certificate(g, e, {}, {}) : std::nullopt, certify);
    }
    case Kind::kExtended:
      break;
  }

  const auto a = analyze(group, w.bound);
  const GroupDesc& base = group.base();
  if (!preserves(g, a->t)) return negative(!a->dropped, w.bound, "does not preserve the finite part");
  const FinPerm local = g.restricted_to(restrict_points(g, a->t));
  if (!a->f->contains(local)) return negative(!a->dropped, w.bound, "finite part not generated");
  if (base.kind() == Kind::kPartition) {
    for (const auto& [x, y] : g.moves()) {
      if (!a->join.same_class(x, y)) {
        return negative(!a->dropped, w.bound, "moves " + std::to_string(x) + " out of its class");
      }
    }
    if (!certify) return member_verdict(std::nullopt, false);
    return member_verdict(partition_certificate(g, base.partition_desc(), a->extras, a->t), true);
  }
  const FinPerm far = outside(g, a->t);
  const auto f = gstar_factor(far, base.indices());
  if (!f) return negative(!a->dropped, w.bound, "not a product of powers of the listed blocks");
  if (!certify) return member_verdict(std::nullopt, false);
  auto gens = a->f_gens;
  for (const auto& [i, e] : *f) gens.push_back(gstar_sigma(i));
  return member_verdict(PermGroup(gens).certify(g), true);
}

bool is_member(const FinPerm& g, const GroupDesc& group, const WindowConfig& w) {
  return membership(g, group, w, false).member();
}

WindowGenerators local_generators(const GroupDesc& g, const std::vector<Point>& a_in, const WindowConfig& w) {
  using Kind = GroupDesc::Kind;
  const auto a = sorted_unique(a_in);
  WindowGenerators out;
  auto stabilizer = [&](const std::vector<FinPerm>& gens, const std::vector<Point>& dom) {
    std::vector<Point> fix;
    std::set_difference(dom.begin(), dom.end(), a.begin(), a.end(), std::back_inserter(fix));
    PermGroup group(gens, fix);
    return group.stabilizer_generators(fix.size());
  };
  auto gstar_blocks_in_a = [&](const IndexSet& indices, const std::set<std::uint64_t>& skip) {
    std::set<std::uint64_t> seen;
    for (Point x : a) {
      const auto i = gstar_block_of(x);
      if (!seen.insert(i).second || skip.count(i) || !indices.contains(i)) continue;
      const auto b = gstar_block(i);
      bool all = true;
      for (Point q = 0; q < b.length && all; ++q) all = contains_sorted(a, b.start + q);
      if (all) out.generators.push_back(gstar_sigma(i));
    }
  };
  switch (g.kind()) {
    case Kind::kFinitelyGenerated: {
      const auto an = analyze(g, w.bound);
      out.generators = stabilizer(an->window.generators, support_union(an->window.generators));
      out.exact = !an->dropped;
      return out;
    }
    case Kind::kDisjointFamily:
      if (g.is_gstar_family()) {
        gstar_blocks_in_a(g.indices(), {});
      } else {
        for (const auto& m : g.generators()) {
          const auto s = m.support();
          if (std::includes(a.begin(), a.end(), s.begin(), s.end())) out.generators.push_back(m);
        }
      }
      return out;
    case Kind::kPartition:
      out.generators = class_generators(g.partition_desc(), a);
      return out;
    case Kind::kExtended:
      break;
  }
  const auto an = analyze(g, w.bound);
  out.exact = !an->dropped;
  out.generators = stabilizer(an->f_gens, an->t);
  std::vector<Point> rest;
  std::set_difference(a.begin(), a.end(), an->t.begin(), an->t.end(), std::back_inserter(rest));
  if (g.base().kind() == Kind::kPartition) {
    // Outside T the group is the full class-preserving group of the join.
    auto gens = class_generators(an->join, rest);
    out.generators.insert(out.generators.end(), gens.begin(), gens.end());
  } else {
    gstar_blocks_in_a(g.base().indices(), an->near);
  }
  return out;
}

LocalPart local_part(const GroupDesc& g, const std::vector<Point>& a, const WindowConfig& w) {
  LocalPart out;
  out.domain = sorted_unique(a);
  const auto gens = local_generators(g, out.domain, w);
  out.exact = gens.exact;
  out.elements = PermGroup(gens.generators).elements(w.element_budget);
  return out;
}

std::optional<bool> extends(const GroupDesc& g, const std::vector<std::pair<Point, Point>>& partial,
                            const WindowConfig& w) {
  using Kind = GroupDesc::Kind;
  {
    std::set<Point> dom;
    std::set<Point> img;
    for (const auto& [x, y] : partial) {
      if (!dom.insert(x).second || !img.insert(y).second) {
        fail(ErrorCode::kInvalidArgument, "partial map is not injective");
      }
    }
  }
  auto gstar_ok = [](const IndexSet& indices, const std::vector<std::pair<Point, Point>>& pairs) {
    std::map<std::uint64_t, std::optional<Point>> shift;
    for (const auto& [x, y] : pairs) {
      const auto i = gstar_block_of(x);
      const auto b = gstar_block(i);
      if (y < b.start || y >= b.start + b.length) return false;
      const Point e = (y - x + b.length) % b.length;
      auto [it, fresh] = shift.emplace(i, e);
      if (!fresh && *it->second != e) return false;
      if (e != 0 && !indices.contains(i)) return false;
    }
    return true;
  };
  switch (g.kind()) {
    case Kind::kFinitelyGenerated: {
      const auto an = analyze(g, w.bound);
      if (realize_partial_map(an->window.generators, partial)) return true;
      if (an->dropped) return std::nullopt;
      return false;
    }
    case Kind::kDisjointFamily: {
      if (g.is_gstar_family()) return gstar_ok(g.indices(), partial);
      const GroupNode& node = g.node();
      std::map<std::size_t, std::vector<std::pair<Point, Point>>> per_member;
      for (const auto& [x, y] : partial) {
        const auto it = node.owner.find(x);
        if (it == node.owner.end()) {
          if (x != y) return false;
          continue;
        }
        per_member[it->second].emplace_back(x, y);
      }
      for (const auto& [i, pairs] : per_member) {
        const FinPerm& m = node.gens[i];
        bool ok = false;
        FinPerm power;
        for (std::uint64_t e = 0; e < m.order() && !ok; ++e, power = power * m) {
          ok = std::all_of(pairs.begin(), pairs.end(), [&](const auto& pr) { return power(pr.first) == pr.second; });
        }
        if (!ok) return false;
      }
      return true;
    }
    case Kind::kPartition:
      return std::all_of(partial.begin(), partial.end(),
                         [&](const auto& pr) { return g.partition_desc().same_class(pr.first, pr.second); });
    case Kind::kExtended:
      break;
  }
  const auto an = analyze(g, w.bound);
  std::vector<std::pair<Point, Point>> in_t;
  std::vector<std::pair<Point, Point>> rest;
  for (const auto& pr : partial) {
    const bool a_in = contains_sorted(an->t, pr.first);
    if (a_in != contains_sorted(an->t, pr.second)) return an->dropped ? std::nullopt : std::optional<bool>(false);
    (a_in ? in_t : rest).push_back(pr);
  }
  bool ok = in_t.empty() || realize_partial_map(an->f_gens, in_t).has_value();
  if (ok) {
    if (g.base().kind() == Kind::kPartition) {
      ok = std::all_of(rest.begin(), rest.end(),
                       [&](const auto& pr) { return an->join.same_class(pr.first, pr.second); });
    } else {
      ok = gstar_ok(g.base().indices(), rest);
    }
  }
  if (!ok && an->dropped) return std::nullopt;
  return ok;
}

TransportMaps transport_maps(const GroupDesc& g, std::vector<Point> a, std::vector<Point> b, const WindowConfig& w) {
  a = sorted_unique(std::move(a));
  b = sorted_unique(std::move(b));
  if (a.size() != b.size()) fail(ErrorCode::kInvalidArgument, "transport sets differ in size");
  TransportMaps out;
  std::vector<std::pair<Point, Point>> partial(a.size());
  do {
    for (std::size_t i = 0; i < a.size(); ++i) partial[i] = {a[i], b[i]};
    const auto r = extends(g, partial, w);
    if (!r) {
      out.exact = false;
    } else if (*r) {
      out.maps.push_back(b);
    }
  } while (std::next_permutation(b.begin(), b.end()));
  return out;
}

TraceSet trace_set(const GroupDesc& g, std::uint64_t n, const WindowConfig& w) {
  TraceSet out;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto v = membership(sf_at(i), g, w, false);
    if (v.member()) {
      out.members.push_back(i);
    } else if (v.kind == MemberKind::kUnknown) {
      out.unknown.push_back(i);
    }
  }
  return out;
}

}  // namespace lf
