#include <gtest/gtest.h>

#include <random>

#include "lf/json_io.hpp"
#include "lf/lattice.hpp"

namespace lf {
namespace {

using Entry = PartitionDesc::Entry;

GroupDesc evens() { return gstar_subgroup(IndexSet::residues(2, {0})); }
GroupDesc odds() { return gstar_subgroup(IndexSet::residues(2, {1})); }
PartitionDesc e0() { return PartitionDesc::from_parts({}, {Entry{true, 0}, Entry{true, 1}, Entry{false, 0}}); }
PartitionDesc e1() { return PartitionDesc::from_parts({}, {Entry{false, 0}, Entry{false, 1}, Entry{false, 0}}); }

PartitionDesc random_partition(std::mt19937& rng) {
  const std::uint64_t p = 1 + rng() % 4;
  std::vector<Entry> tail(p);
  std::map<std::uint64_t, std::uint64_t> dense;
  for (std::uint64_t r = 0; r < p; ++r) {
    if (rng() % 3 == 0) {
      tail[r] = {false, 0};
    } else if (r > 0 && rng() % 4 == 0 && !tail[r - 1].global) {
      tail[r] = {false, tail[r - 1].value + 1};
    } else {
      tail[r] = {true, dense.try_emplace(rng() % 2, dense.size()).first->second};
    }
  }
  std::vector<Entry> prefix;
  for (Point x = 0; x < rng() % 3; ++x) prefix.push_back({false, x});
  return PartitionDesc::from_parts(prefix, tail);
}

GroupDesc random_group(std::mt19937& rng) {
  switch (rng() % 4) {
    case 0:
      return GroupDesc::partition(random_partition(rng));
    case 1: {
      std::vector<bool> cycle(1 + rng() % 4);
      for (auto&& b : cycle) b = rng() % 2;
      return gstar_subgroup(IndexSet({}, cycle));
    }
    case 2: {
      const Point a = rng() % 6;
      const Point b = a + 1 + rng() % 5;
      return generated_over(GroupDesc::partition(random_partition(rng)), {FinPerm::transposition(a, b)});
    }
    default:
      return GroupDesc::finitely_generated({FinPerm::cycle({0, static_cast<Point>(1 + rng() % 5)})});
  }
}

// Common transpositions and sigma_i in [lo, hi): these generate the
// intersection of the cores, so infinitely many appear iff it is infinite.
std::size_t common_in(const GroupDesc& a, const GroupDesc& b, Point lo, Point hi, const WindowConfig& w) {
  std::size_t n = 0;
  for (Point x = lo; x < hi; ++x) {
    for (Point y = x + 1; y < hi; ++y) {
      const auto t = FinPerm::transposition(x, y);
      n += is_member(t, a, w) && is_member(t, b, w);
    }
  }
  // Block indices with period up to 4 repeat within any 12 consecutive ones.
  for (std::uint64_t i = 12; i < 24; ++i) {
    const auto s = gstar_sigma(i);
    n += is_member(s, a, w) && is_member(s, b, w);
  }
  return n;
}

TEST(Lattice, OrthogonalExamples) {
  const WindowConfig w;
  EXPECT_TRUE(orthogonal(evens(), odds(), w).holds());
  const auto v = orthogonal(GroupDesc::partition(e0()), GroupDesc::partition(e1()), w);
  EXPECT_TRUE(v.holds());
  EXPECT_TRUE(v.exact);
  for (const auto& g : {gstar(), GroupDesc::partition(PartitionDesc::pairs()), evens()}) {
    const auto f = orthogonal(g, g, w);
    ASSERT_TRUE(f.fails());
    ASSERT_EQ(f.witness.size(), 16u);
    std::set<FinPerm, SfLess> seen;
    for (const auto& p : f.witness) {
      const auto perm = perm_from_json(p);
      EXPECT_FALSE(perm.is_identity());
      EXPECT_TRUE(seen.insert(perm).second);
      EXPECT_TRUE(is_member(perm, g, w));
    }
  }
}

TEST(Lattice, OrthogonalMatchesCommonElementGrowth) {
  std::mt19937 rng(4);
  const WindowConfig w{2000};
  for (int t = 0; t < 300; ++t) {
    const auto a = random_group(rng);
    const auto b = random_group(rng);
    const auto v = orthogonal(a, b, w);
    ASSERT_FALSE(v.undecided());
    const bool far = common_in(a, b, 60, 130, w) > 0;
    ASSERT_EQ(v.fails(), far) << to_json(a).dump() << " vs " << to_json(b).dump();
    if (v.fails()) {
      for (const auto& p : v.witness) {
        const auto perm = perm_from_json(p);
        ASSERT_TRUE(is_member(perm, a, w) && is_member(perm, b, w)) << perm.to_string();
      }
    }
  }
}

TEST(Lattice, AlmostContainedVerify) {
  const WindowConfig w;
  const auto g1 = GroupDesc::finitely_generated({FinPerm::cycle({0, 4, 9}), FinPerm::transposition(2, 3)});
  EXPECT_TRUE(almost_contained_verify(g1, GroupDesc(), g1.generators(), w).holds());
  const auto v = almost_contained_verify(GroupDesc::partition(e1()), GroupDesc::partition(e0()),
                                         {FinPerm::transposition(0, 1)}, w);
  ASSERT_TRUE(v.holds());
  for (const auto& entry : v.witness["certificates"]) {
    const auto cert = certificate_from_json(entry["certificate"]);
    EXPECT_EQ(cert.evaluate(), perm_from_json(entry["generator"]));
  }
  EXPECT_TRUE(almost_contained_verify(GroupDesc::partition(e1()), GroupDesc::partition(e0()), {}, w).fails());
  const auto f = almost_contained_verify(gstar(), evens(), {}, w);
  ASSERT_TRUE(f.fails());
  EXPECT_EQ(perm_from_json(f.witness["generator"]), gstar_sigma(1));
}

TEST(Lattice, AlmostWitnessSearch) {
  const WindowConfig w;
  const auto same = almost_witness_search(gstar(), gstar(), 2, 6, w);
  ASSERT_TRUE(same);
  EXPECT_TRUE(same->x.empty());

  const auto found = almost_witness_search(GroupDesc::partition(e1()), GroupDesc::partition(e0()), 1, 6, w);
  ASSERT_TRUE(found);
  EXPECT_EQ(found->x, (std::vector<FinPerm>{FinPerm::transposition(0, 1)}));

  EXPECT_FALSE(almost_witness_search(evens(), odds(), 1, 6, w));

  // A finite difference is patched by the missing generators.
  const auto a = gstar_subgroup(IndexSet::residues(2, {0}).unite(IndexSet::finite({1, 3})));
  const auto x = almost_witness_search(a, evens(), 2, 20, w);
  ASSERT_TRUE(x);
  EXPECT_EQ(x->x, (std::vector<FinPerm>{gstar_sigma(1), gstar_sigma(3)}));
  EXPECT_FALSE(almost_witness_search(a, evens(), 1, 20, w));
}

TEST(Lattice, AEqual) {
  const WindowConfig w;
  EXPECT_TRUE(a_equal(gstar(), gstar(), {}, {}, w).holds());
  const auto base = GroupDesc::partition(e0());
  const auto coarse = GroupDesc::partition(coarsen_by_perm(e0(), FinPerm::transposition(0, 1)));
  EXPECT_TRUE(almost_contained_verify(base, coarse, {}, w).holds());
  EXPECT_TRUE(almost_contained_verify(coarse, base, {FinPerm::transposition(0, 1)}, w).holds());
  EXPECT_TRUE(a_equal(base, coarse, {}, {FinPerm::transposition(0, 1)}, w).holds());
  EXPECT_TRUE(a_equal(evens(), odds(), {gstar_sigma(0)}, {gstar_sigma(1)}, w).fails());
}

TEST(Lattice, Splits) {
  const WindowConfig w;
  const std::vector<GroupDesc> pool = {evens(), odds(), gstar()};
  const auto v = splits(evens(), gstar(), pool, w);
  ASSERT_TRUE(v.holds());
  EXPECT_EQ(v.witness["c"], 0);
  EXPECT_EQ(v.witness["d"], 1);
  EXPECT_FALSE(splits(gstar(), gstar(), pool, w).holds());
  EXPECT_FALSE(splits(evens(), evens(), pool, w).holds());
}

TEST(Lattice, FamilyCheckExamples) {
  const WindowConfig w;
  EXPECT_TRUE(family_check(FamilyKind::kSplitting, {{evens()}}, {gstar()}, w).pass);
  const auto reap = family_check(FamilyKind::kReaping, {{gstar()}}, {evens()}, w);
  EXPECT_FALSE(reap.pass);
  EXPECT_FALSE(reap.outcomes[0].witnessed);
  EXPECT_TRUE(family_check(FamilyKind::kReaping, {{evens()}}, {gstar(), odds()}, w).pass);
  EXPECT_TRUE(family_check(FamilyKind::kShattering, {{evens(), odds()}}, {gstar()}, w).pass);
  EXPECT_FALSE(family_check(FamilyKind::kShattering, {{evens(), odds()}}, {evens()}, w).pass);
}

TEST(Lattice, ShatteringFromSplitting) {
  const WindowConfig w;
  const auto q = gstar_subgroup(IndexSet::residues(4, {0}));
  const std::vector<GroupDesc> pool = {gstar(), evens(), odds(), q};
  const auto out = shattering_from_splitting({evens()}, pool, w);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0], (std::vector<GroupDesc>{evens(), odds()}));
  const auto seeded = shattering_from_splitting({q, odds()}, pool, w);
  for (std::size_t i = 0; i < seeded.size(); ++i) {
    EXPECT_EQ(seeded[i][0], i == 0 ? q : odds());
    for (std::size_t a = 0; a < seeded[i].size(); ++a) {
      for (std::size_t b = a + 1; b < seeded[i].size(); ++b) {
        EXPECT_TRUE(orthogonal(seeded[i][a], seeded[i][b], w).holds());
      }
    }
  }
}

TEST(Lattice, Metric) {
  const WindowConfig w;
  const auto t01 = GroupDesc::finitely_generated({FinPerm::transposition(0, 1)});
  const auto d = metric_d(t01, GroupDesc(), 64, w);
  // n = 3 mod 4 below 64: sum of 2^-n.
  long double expected = 0;
  for (unsigned n = 3; n < 64; n += 4) expected += std::ldexp(1.0L, -static_cast<int>(n));
  EXPECT_EQ(d.value, expected);
  EXPECT_LE(std::fabs(d.value - 2.0L / 15.0L), std::ldexp(1.0L, -63));
  EXPECT_EQ(metric_d(gstar(), gstar(), 64, w).numerator, 0u);

  std::mt19937 rng(11);
  std::vector<GroupDesc> gs;
  for (int i = 0; i < 12; ++i) gs.push_back(random_group(rng));
  for (const auto& a : gs) {
    for (const auto& b : gs) {
      const auto ab = metric_d(a, b, 64, w);
      ASSERT_EQ(ab.numerator, metric_d(b, a, 64, w).numerator);
      for (const auto& c : gs) {
        ASSERT_LE(ab.value, metric_d(a, c, 64, w).value + metric_d(c, b, 64, w).value + 2 * ab.error_bound);
      }
    }
  }
}

}  // namespace
}  // namespace lf
