#include "lf/lattice.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "lf/error.hpp"
#include "lf/json_io.hpp"

namespace lf {

namespace {

using Kind = GroupDesc::Kind;

// A group agrees with its core up to a finite factor, so intersections are
// infinite exactly when the cores' intersections are.
struct Core {
  enum class Type { kFinite, kPartition, kGstar } type = Type::kFinite;
  PartitionDesc e;
  IndexSet indices;
};

// The partition with every point of T turned into a singleton. T must be a
// union of finite classes of e.
PartitionDesc singletons_on(const PartitionDesc& e, const std::vector<Point>& t) {
  using Entry = PartitionDesc::Entry;
  if (t.empty()) return e;
  const std::uint64_t len = std::max<std::uint64_t>(e.preperiod(), std::uint64_t{t.back()} + 1);
  std::vector<Entry> prefix(len);
  for (Point x = 0; x < len; ++x) {
    const auto key = e.key(x);
    prefix[x] = std::binary_search(t.begin(), t.end(), x) ? Entry{false, x} : Entry{key.infinite, key.value};
  }
  const auto& tail = e.tail_entries();
  std::vector<Entry> rotated(tail.size());
  for (std::size_t r = 0; r < tail.size(); ++r) rotated[r] = tail[(r + len - e.preperiod()) % tail.size()];
  return PartitionDesc::from_parts(std::move(prefix), std::move(rotated));
}

Core core_of(const GroupDesc& g, const WindowConfig& w) {
  Core c;
  switch (g.kind()) {
    case Kind::kFinitelyGenerated:
      return c;
    case Kind::kDisjointFamily:
      if (g.is_gstar_family()) {
        c.type = Core::Type::kGstar;
        c.indices = g.indices();
      }
      return c;
    case Kind::kPartition:
      c.type = Core::Type::kPartition;
      c.e = g.partition_desc();
      return c;
    case Kind::kExtended:
      break;
  }
  const auto shape = extension_shape(g, w);
  if (g.base().kind() == Kind::kPartition) {
    c.type = Core::Type::kPartition;
    c.e = singletons_on(shape.join, shape.t);
  } else {
    c.type = Core::Type::kGstar;
    c.indices = g.base().indices().minus(IndexSet::finite(shape.near_blocks));
  }
  return c;
}

// Transpositions inside classes of e, in order of class, up to `limit`.
std::vector<FinPerm> class_transpositions(const PartitionDesc& e, std::size_t limit) {
  std::vector<FinPerm> out;
  for (Point bound = 64; out.size() < limit && bound < (1u << 24); bound *= 2) {
    out.clear();
    for (const auto& cls : e.window_classes(bound)) {
      for (std::size_t k = 1; k < cls.size() && out.size() < limit; ++k) {
        out.push_back(FinPerm::transposition(cls[0], cls[k]));
      }
      if (out.size() >= limit) break;
    }
  }
  return out;
}

// Whole block i lies in one class of e.
bool block_in_one_class(const PartitionDesc& e, std::uint64_t i) {
  const auto b = gstar_block(i);
  for (Point k = 1; k < b.length; ++k) {
    if (!e.same_class(b.start, b.start + k)) return false;
  }
  return true;
}

std::vector<FinPerm> sigmas(const IndexSet& s, std::size_t limit, const std::function<bool(std::uint64_t)>& keep) {
  std::vector<FinPerm> out;
  for (auto i = s.next_member(0); i && out.size() < limit; i = s.next_member(*i + 1)) {
    if (keep(*i)) out.push_back(gstar_sigma(*i));
  }
  return out;
}

bool moves_point(const GroupDesc& g, Point x, const WindowConfig& w) {
  switch (g.kind()) {
    case Kind::kFinitelyGenerated:
      return std::any_of(g.generators().begin(), g.generators().end(), [&](const FinPerm& p) { return p.moves_point(x); });
    case Kind::kDisjointFamily:
      if (g.is_gstar_family()) return g.indices().contains(gstar_block_of(x));
      return std::any_of(g.generators().begin(), g.generators().end(), [&](const FinPerm& p) { return p.moves_point(x); });
    case Kind::kPartition: {
      const auto& e = g.partition_desc();
      const auto key = e.key(x);
      if (key.infinite) return true;
      return e.class_members(x, static_cast<Point>(e.finite_class_end(key.value))).size() > 1;
    }
    case Kind::kExtended:
      break;
  }
  return moves_point(g.base(), x, w) ||
         std::any_of(g.extra().begin(), g.extra().end(), [&](const FinPerm& p) { return p.moves_point(x); });
}

// c is a subgroup of b: exact for like-shaped descriptions and finite c,
// otherwise checked on the window generators of c.
Verdict subgroup(const GroupDesc& c, const GroupDesc& b, const WindowConfig& w) {
  if (c.is_gstar_family() && b.is_gstar_family()) {
    return c.indices().subset_of(b.indices()) ? Verdict::Holds() : Verdict::Fails();
  }
  if (c.kind() == Kind::kPartition && b.kind() == Kind::kPartition) {
    return refines(c.partition_desc(), b.partition_desc()) ? Verdict::Holds() : Verdict::Fails();
  }
  auto v = almost_contained_verify(c, b, {}, w);
  v.witness = nullptr;
  return v;
}

json group_list(const std::vector<GroupDesc>& gs) {
  json out = json::array();
  for (const auto& g : gs) out.push_back(to_json(g));
  return out;
}

}  // namespace

Verdict orthogonal(const GroupDesc& g1, const GroupDesc& g2, const WindowConfig& w, std::size_t threshold) {
  const Core a = core_of(g1, w);
  const Core b = core_of(g2, w);
  using T = Core::Type;
  std::vector<FinPerm> common;
  bool infinite = false;
  if (a.type == T::kFinite || b.type == T::kFinite) {
    infinite = false;
  } else if (a.type == T::kPartition && b.type == T::kPartition) {
    const auto m = meet(a.e, b.e);
    infinite = !group_is_finite(m);
    if (infinite) common = class_transpositions(m, threshold);
  } else if (a.type == T::kGstar && b.type == T::kGstar) {
    const auto i = a.indices.intersect(b.indices);
    infinite = !i.is_finite();
    if (infinite) common = sigmas(i, threshold, [](std::uint64_t) { return true; });
  } else {
    const PartitionDesc& e = a.type == T::kPartition ? a.e : b.e;
    const IndexSet& indices = a.type == T::kGstar ? a.indices : b.indices;
    // Long blocks past the preperiod see several classes unless the tail is
    // one infinite class; only then can infinitely many blocks fit.
    const bool uniform = e.period() == 1 && e.tail_entries()[0].global;
    infinite = uniform && !indices.is_finite();
    if (infinite) common = sigmas(indices, threshold, [&](std::uint64_t i) { return block_in_one_class(e, i); });
  }
  if (!infinite) return Verdict::Holds();
  return Verdict::Fails(to_json(common));
}

Verdict almost_contained_verify(const GroupDesc& g1, const GroupDesc& g2, const std::vector<FinPerm>& x,
                                const WindowConfig& w) {
  const auto wg = window_generators(g1, w);
  const GroupDesc h = generated_over(g2, x);
  json certs = json::array();
  for (const auto& gen : wg.generators) {
    const auto v = membership(gen, h, w);
    if (v.non_member()) return Verdict::Fails({{"generator", to_json(gen)}, {"reason", v.reason}});
    if (!v.member()) return Verdict::UndecidedUpTo(w.bound, "membership of " + gen.to_string() + " unknown");
    json entry = {{"generator", to_json(gen)}};
    if (v.certificate) entry["certificate"] = to_json(*v.certificate);
    certs.push_back(std::move(entry));
  }
  const bool exact = wg.exact && !g1.is_infinite();
  auto out = Verdict::Holds({{"x", to_json(x)}, {"certificates", certs}}, exact);
  out.window = w.bound;
  if (!exact) out.note = "checked on the generators inside the window";
  return out;
}

std::optional<AlmostWitness> almost_witness_search(const GroupDesc& g1, const GroupDesc& g2, std::size_t size_bound,
                                                   Point support_bound, const WindowConfig& w) {
  const auto gens = window_generators(g1, w).generators;
  std::vector<FinPerm> defects;
  for (const auto& g : gens) {
    if (!is_member(g, g2, w)) defects.push_back(g);
  }
  auto finish = [&](std::vector<FinPerm> x) -> std::optional<AlmostWitness> {
    AlmostWitness out;
    const GroupDesc h = generated_over(g2, x);
    for (const auto& g : gens) {
      auto v = membership(g, h, w);
      if (!v.member()) return std::nullopt;
      out.certificates.push_back(v.certificate.value_or(Certificate{}));
    }
    out.x = std::move(x);
    return out;
  };
  if (defects.empty()) return finish({});
  if (size_bound == 0) return std::nullopt;

  std::vector<FinPerm> pool;
  if (support_bound <= 7) {
    std::uint64_t count = 1;
    for (Point k = 2; k <= support_bound; ++k) count *= k;
    for (std::uint64_t i = 1; i < count; ++i) pool.push_back(sf_at(i));
  }
  for (const auto& d : defects) {
    const auto top = d.max_moved();
    if (top && *top < support_bound) pool.push_back(d);
  }
  std::sort(pool.begin(), pool.end(), SfLess{});
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  std::erase_if(pool, [&](const FinPerm& p) { return is_member(p, g2, w); });

  // Points some defect moves but nothing in G2 does must be covered by X.
  std::set<Point> required;
  for (const auto& d : defects) {
    for (Point x : d.support()) {
      if (!moves_point(g2, x, w)) required.insert(x);
    }
  }
  // Defects whose required points no common pool element moves each need an
  // element of their own; a greedy packing of them bounds |X| from below.
  std::size_t lower = 1;
  {
    std::map<Point, std::vector<std::size_t>> movers;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      for (Point x : pool[i].support()) {
        if (required.count(x)) movers[x].push_back(i);
      }
    }
    std::vector<bool> taken(pool.size(), false);
    std::size_t packed = 0;
    for (const auto& d : defects) {
      std::set<std::size_t> cover;
      bool needs = false;
      for (Point x : d.support()) {
        if (!required.count(x)) continue;
        needs = true;
        if (auto it = movers.find(x); it != movers.end()) cover.insert(it->second.begin(), it->second.end());
      }
      if (!needs || std::any_of(cover.begin(), cover.end(), [&](std::size_t i) { return taken[i]; })) continue;
      for (auto i : cover) taken[i] = true;
      ++packed;
    }
    lower = std::max<std::size_t>(lower, packed);
  }
  if (lower > size_bound) return std::nullopt;

  auto works = [&](const std::vector<FinPerm>& x) {
    const GroupDesc h = generated_over(g2, x);
    return std::all_of(defects.begin(), defects.end(), [&](const FinPerm& d) { return is_member(d, h, w); });
  };
  if (pool.empty() || !works(pool)) return std::nullopt;

  std::vector<std::size_t> largest_after(pool.size() + 1, 0);
  for (std::size_t i = pool.size(); i-- > 0;) largest_after[i] = std::max(largest_after[i + 1], pool[i].support_size());

  std::uint64_t tried = 0;
  std::vector<FinPerm> chosen;
  std::function<bool(std::size_t, std::size_t)> search = [&](std::size_t from, std::size_t slots) -> bool {
    std::size_t uncovered = 0;
    for (Point x : required) {
      uncovered += std::none_of(chosen.begin(), chosen.end(), [&](const FinPerm& p) { return p.moves_point(x); });
    }
    if (slots == 0) {
      if (uncovered) return false;
      if (++tried > w.element_budget) fail(ErrorCode::kBudgetExceeded, "witness search exceeded the budget");
      return works(chosen);
    }
    if (from >= pool.size() || uncovered > slots * largest_after[from]) return false;
    for (std::size_t i = from; i + slots <= pool.size(); ++i) {
      chosen.push_back(pool[i]);
      if (search(i + 1, slots - 1)) return true;
      chosen.pop_back();
    }
    return false;
  };
  for (std::size_t size = lower; size <= size_bound && size <= pool.size(); ++size) {
    chosen.clear();
    if (search(0, size)) return finish(chosen);
  }
  return std::nullopt;
}

Verdict a_equal(const GroupDesc& g1, const GroupDesc& g2, const std::vector<FinPerm>& x1,
                const std::vector<FinPerm>& x2, const WindowConfig& w) {
  const auto fwd = almost_contained_verify(g1, g2, x1, w);
  const auto bwd = almost_contained_verify(g2, g1, x2, w);
  const json witness = {{"forward", to_json(fwd)}, {"backward", to_json(bwd)}};
  const bool exact = fwd.exact && bwd.exact;
  if (fwd.fails() || bwd.fails()) return Verdict::Fails(witness, (fwd.fails() && fwd.exact) || (bwd.fails() && bwd.exact));
  if (fwd.undecided() || bwd.undecided()) {
    auto v = Verdict::UndecidedUpTo(w.bound, "a direction is undecided");
    v.witness = witness;
    return v;
  }
  auto v = Verdict::Holds(witness, exact);
  v.window = w.bound;
  return v;
}

std::vector<GroupDesc> default_split_pool(const GroupDesc& a, const GroupDesc& b) {
  if (!a.is_gstar_family() || !b.is_gstar_family()) return {};
  return {gstar_subgroup(a.indices().intersect(b.indices())), gstar_subgroup(b.indices().minus(a.indices()))};
}

Verdict splits(const GroupDesc& a, const GroupDesc& b, const std::vector<GroupDesc>& pool, const WindowConfig& w) {
  std::vector<std::size_t> below_b;
  bool exact = true;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!pool[i].is_infinite()) continue;
    const auto v = subgroup(pool[i], b, w);
    exact = exact && v.exact;
    if (v.holds()) below_b.push_back(i);
  }
  for (std::size_t ci : below_b) {
    const auto cv = subgroup(pool[ci], a, w);
    exact = exact && cv.exact;
    if (!cv.holds()) continue;
    for (std::size_t di : below_b) {
      if (!orthogonal(pool[di], a, w).holds()) continue;
      auto v = Verdict::Holds({{"c", ci}, {"d", di}, {"c_group", to_json(pool[ci])}, {"d_group", to_json(pool[di])}},
                              exact);
      v.window = w.bound;
      return v;
    }
  }
  auto v = Verdict::Fails(nullptr, false);
  v.note = "no split among the candidate pool";
  return v;
}

FamilyReport family_check(FamilyKind kind, const std::vector<std::vector<GroupDesc>>& families,
                          const std::vector<GroupDesc>& probes, const WindowConfig& w, const FamilyOptions& options) {
  FamilyReport report;
  report.kind = kind;
  static const std::vector<GroupDesc> kEmpty;
  const auto& family = families.empty() ? kEmpty : families[0];
  for (const auto& probe : probes) {
    ProbeOutcome out;
    switch (kind) {
      case FamilyKind::kSplitting:
        for (std::size_t ai = 0; ai < family.size() && !out.witnessed; ++ai) {
          auto pool = options.pool;
          const auto extra = default_split_pool(family[ai], probe);
          pool.insert(pool.end(), extra.begin(), extra.end());
          const auto v = splits(family[ai], probe, pool, w);
          if (v.holds()) out = {true, {{"member", ai}, {"split", to_json(v)}}};
        }
        break;
      case FamilyKind::kReaping:
        for (std::size_t ai = 0; ai < family.size() && !out.witnessed; ++ai) {
          if (orthogonal(family[ai], probe, w).holds()) {
            out = {true, {{"member", ai}, {"relation", "orthogonal"}}};
          } else if (auto x = almost_witness_search(family[ai], probe, options.size_bound, options.support_bound, w)) {
            out = {true, {{"member", ai}, {"relation", "almost_contained"}, {"x", to_json(x->x)}}};
          }
        }
        break;
      case FamilyKind::kShattering:
        for (std::size_t fi = 0; fi < families.size() && !out.witnessed; ++fi) {
          std::vector<std::size_t> meeting;
          for (std::size_t k = 0; k < families[fi].size() && meeting.size() < 2; ++k) {
            if (orthogonal(families[fi][k], probe, w).fails()) meeting.push_back(k);
          }
          if (meeting.size() == 2) out = {true, {{"family", fi}, {"b", meeting[0]}, {"c", meeting[1]}}};
        }
        break;
    }
    report.outcomes.push_back(std::move(out));
  }
  report.pass = std::all_of(report.outcomes.begin(), report.outcomes.end(), [](const auto& o) { return o.witnessed; });
  return report;
}

std::vector<std::vector<GroupDesc>> shattering_from_splitting(const std::vector<GroupDesc>& family,
                                                              const std::vector<GroupDesc>& pool,
                                                              const WindowConfig& w) {
  std::vector<std::vector<GroupDesc>> out;
  for (const auto& c : family) {
    std::vector<GroupDesc> psi = {c};
    for (const auto& p : pool) {
      if (p == c || !p.is_infinite()) continue;
      const bool fits = std::all_of(psi.begin(), psi.end(), [&](const GroupDesc& q) { return orthogonal(p, q, w).holds(); });
      if (fits) psi.push_back(p);
    }
    out.push_back(std::move(psi));
  }
  return out;
}

bool local_parts_equal(const GroupDesc& g1, const GroupDesc& g2, const std::vector<Point>& a, const WindowConfig& w) {
  const auto l1 = local_generators(g1, a, w).generators;
  const auto l2 = local_generators(g2, a, w).generators;
  const PermGroup p1(l1);
  const PermGroup p2(l2);
  return std::all_of(l1.begin(), l1.end(), [&](const FinPerm& g) { return p2.contains(g); }) &&
         std::all_of(l2.begin(), l2.end(), [&](const FinPerm& g) { return p1.contains(g); });
}

MetricValue metric_d(const GroupDesc& g1, const GroupDesc& g2, unsigned n, const WindowConfig& w) {
  if (n == 0 || n > 64) fail(ErrorCode::kInvalidArgument, "metric truncation must be in 1..64");
  MetricValue out;
  out.denominator_log2 = n - 1;
  for (unsigned k = 0; k < n; ++k) {
    std::vector<Point> a;
    for (unsigned bit = 0; bit < 7; ++bit) {
      if (k >> bit & 1u) a.push_back(bit);
    }
    if (!local_parts_equal(g1, g2, a, w)) out.numerator += std::uint64_t{1} << (n - 1 - k);
  }
  out.value = static_cast<long double>(out.numerator) / static_cast<long double>(std::uint64_t{1} << (n - 1));
  out.error_bound = 1.0L / static_cast<long double>(std::uint64_t{1} << (n - 1));
  return out;
}

json to_json(const FamilyReport& r) {
  static const char* kNames[] = {"splitting", "reaping", "shattering"};
  json outcomes = json::array();
  for (std::size_t i = 0; i < r.outcomes.size(); ++i) {
    json o = {{"probe", i}, {"witnessed", r.outcomes[i].witnessed}};
    if (!r.outcomes[i].witness.is_null()) o["witness"] = r.outcomes[i].witness;
    outcomes.push_back(std::move(o));
  }
  return {{"kind", kNames[static_cast<int>(r.kind)]}, {"pass", r.pass}, {"outcomes", outcomes}};
}

json to_json(const MetricValue& m) {
  return {{"numerator", m.numerator},
          {"denominator_log2", m.denominator_log2},
          {"value", static_cast<double>(m.value)},
          {"error_bound", static_cast<double>(m.error_bound)}};
}

json to_json(const AlmostWitness& a) {
  json certs = json::array();
  for (const auto& c : a.certificates) certs.push_back(to_json(c));
  return {{"x", to_json(a.x)}, {"certificates", certs}};
}

}  // namespace lf
