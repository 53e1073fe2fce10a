#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "lf/error.hpp"
#include "lf/groups.hpp"

namespace lf {
namespace {

using Entry = PartitionDesc::Entry;

std::vector<Point> range(Point n) {
  std::vector<Point> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

FinPerm random_perm(std::mt19937& rng, Point n, std::size_t max_len = 4) {
  auto pts = range(n);
  std::shuffle(pts.begin(), pts.end(), rng);
  const std::size_t len = 2 + rng() % (max_len - 1);
  FinPerm g = FinPerm::cycle(std::span<const Point>(pts.data(), len));
  if (rng() % 2) g = g * FinPerm::transposition(pts[len], pts[len + 1]);
  return g;
}

// Partition with infinite classes only, period <= 4.
PartitionDesc random_infinite_partition(std::mt19937& rng) {
  const std::uint64_t p = 1 + rng() % 4;
  std::vector<Entry> tail(p);
  std::map<std::uint64_t, std::uint64_t> dense;
  for (auto& e : tail) {
    const auto raw = rng() % p;
    e = {true, dense.try_emplace(raw, dense.size()).first->second};
  }
  return PartitionDesc::from_parts({}, tail);
}

// Reference: elements of <gens> with support inside A, via the pointwise
// stabilizer of the other points in a Schreier-Sims chain of <gens>.
std::set<FinPerm, SfLess> reference_local(const std::vector<FinPerm>& gens, const std::vector<Point>& a) {
  std::vector<Point> dom;
  for (const auto& g : gens) {
    for (Point x : g.support()) dom.push_back(x);
  }
  std::sort(dom.begin(), dom.end());
  dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  std::vector<Point> fix;
  std::set_difference(dom.begin(), dom.end(), a.begin(), a.end(), std::back_inserter(fix));
  PermGroup group(gens, fix);
  const auto stab = group.stabilizer_generators(fix.size());
  const auto elems = closure_bfs(stab, 1'000'000);
  return {elems.begin(), elems.end()};
}

std::set<FinPerm, SfLess> as_set(const LocalPart& lp) { return {lp.elements.begin(), lp.elements.end()}; }

void expect_certificate(const FinPerm& g, const GroupDesc& group, const WindowConfig& w) {
  const auto v = membership(g, group, w);
  ASSERT_TRUE(v.member()) << g.to_string();
  ASSERT_TRUE(v.certificate) << g.to_string();
  EXPECT_EQ(v.certificate->evaluate(), g);
  for (const auto& gen : v.certificate->generators) EXPECT_TRUE(is_member(gen, group, w)) << gen.to_string();
}

TEST(Gstar, BlockLayout) {
  EXPECT_EQ(gstar_sigma(0), FinPerm::cycle({0, 1}));
  EXPECT_EQ(gstar_sigma(1), FinPerm::cycle({2, 3, 4}));
  EXPECT_EQ(gstar_sigma(2), FinPerm::cycle({5, 6, 7, 8, 9}));
  EXPECT_EQ(gstar_block(3).start, 10u);
  EXPECT_EQ(gstar_block_of(16), 3u);
  EXPECT_EQ(gstar_block_of(17), 4u);
  for (std::uint64_t i = 0; i <= 50; ++i) {
    EXPECT_EQ(gstar_block_of(gstar_block(i).start), i);
    for (std::uint64_t j = i + 1; j <= 50; ++j) EXPECT_TRUE(supports_disjoint(gstar_sigma(i), gstar_sigma(j)));
  }
}

TEST(Groups, LocalPartExamples) {
  const WindowConfig w{4};
  const auto g1 = GroupDesc::finitely_generated({FinPerm::transposition(0, 1), FinPerm::transposition(2, 3)});
  const auto lp1 = local_part(g1, {0, 1}, w);
  EXPECT_TRUE(lp1.exact);
  EXPECT_EQ(lp1.elements, (std::vector<FinPerm>{FinPerm(), FinPerm::transposition(0, 1)}));

  const auto g2 = GroupDesc::finitely_generated(
      {FinPerm::from_cycles({{0, 1}, {2, 3}}), FinPerm::transposition(2, 3)});
  EXPECT_EQ(local_part(g2, {0, 1}, w).elements, (std::vector<FinPerm>{FinPerm(), FinPerm::transposition(0, 1)}));

  const auto g3 = GroupDesc::finitely_generated({FinPerm::cycle({0, 1, 2})});
  EXPECT_EQ(local_part(g3, {0, 1}, w).elements, (std::vector<FinPerm>{FinPerm()}));
}

TEST(Groups, MembershipExamples) {
  const WindowConfig w;
  const auto parity = GroupDesc::partition(PartitionDesc::mod(2));
  EXPECT_TRUE(membership(FinPerm::transposition(0, 2), parity, w).member());
  EXPECT_TRUE(membership(FinPerm::transposition(0, 1), parity, w).non_member());

  const auto v = membership(FinPerm::transposition(0, 1), gstar(), w);
  ASSERT_TRUE(v.member());
  ASSERT_TRUE(v.certificate);
  EXPECT_EQ(v.certificate->generators, (std::vector<FinPerm>{gstar_sigma(0)}));
  EXPECT_EQ(v.certificate->evaluate(), FinPerm::transposition(0, 1));

  const auto singles = GroupDesc::partition(PartitionDesc::singletons());
  const auto all = GroupDesc::partition(PartitionDesc::one_class());
  std::mt19937 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto g = random_perm(rng, 10);
    EXPECT_TRUE(membership(g, singles, w).non_member());
    expect_certificate(g, all, w);
  }
  EXPECT_TRUE(membership(FinPerm(), singles, w).member());
}

TEST(Groups, GstarSubgroupFactorization) {
  const WindowConfig w{12};
  const auto evens = gstar_subgroup(IndexSet::residues(2, {0}));
  EXPECT_TRUE(membership(gstar_sigma(1), evens, w).non_member());
  EXPECT_TRUE(membership(gstar_sigma(2).pow(3), evens, w).member());

  // Agreement with brute-force closure on blocks 0..2.
  std::mt19937 rng(2);
  for (int t = 0; t < 20; ++t) {
    std::vector<bool> cycle(1 + rng() % 4);
    for (auto&& b : cycle) b = rng() % 2;
    const auto g = gstar_subgroup(IndexSet({}, cycle));
    const auto gens = window_generators(g, w).generators;
    const auto closure = closure_bfs(gens, 1000);
    const std::set<FinPerm, SfLess> members(closure.begin(), closure.end());
    for (const auto& h : closure) ASSERT_TRUE(membership(h, g, w).member());
    for (int i = 0; i < 200; ++i) {
      const auto h = i % 2 ? random_perm(rng, 10) : closure[rng() % closure.size()] * random_perm(rng, 10);
      ASSERT_EQ(membership(h, g, w).member(), members.count(h) > 0) << h.to_string();
    }
  }
}

TEST(Groups, GstarSubgroupMonotone) {
  const WindowConfig w{64};
  const auto all = gstar_subgroup(IndexSet::all());
  const auto star = gstar();
  for (std::uint64_t i = 0; i < 6; ++i) {
    EXPECT_EQ(is_member(gstar_sigma(i), all, w), is_member(gstar_sigma(i), star, w));
  }
  const auto a = gstar_subgroup(IndexSet::residues(4, {0}));
  const auto b = gstar_subgroup(IndexSet::residues(2, {0}));
  for (const auto& gen : window_generators(a, w).generators) EXPECT_TRUE(is_member(gen, b, w));
}

TEST(Groups, ExplicitFamily) {
  const WindowConfig w;
  const auto f = GroupDesc::explicit_family({FinPerm::from_cycles({{0, 1}, {2, 3, 4}}), FinPerm::cycle({6, 7})});
  // Powers of the whole member, not of its cycles separately.
  EXPECT_TRUE(is_member(FinPerm::cycle({2, 4, 3}), f, w));
  EXPECT_TRUE(is_member(FinPerm::transposition(0, 1), f, w));
  EXPECT_FALSE(is_member(FinPerm::transposition(3, 4), f, w));
  EXPECT_FALSE(is_member(FinPerm::from_cycles({{0, 1}, {3, 4}}), f, w));
  EXPECT_FALSE(is_member(FinPerm::transposition(6, 8), f, w));
  expect_certificate(FinPerm::from_cycles({{0, 1}, {2, 3, 4}}).pow(3), f, w);
  expect_certificate(FinPerm::from_cycles({{2, 3, 4}}).pow(2) * FinPerm::cycle({6, 7}), f, w);
  EXPECT_THROW((void)GroupDesc::explicit_family({FinPerm::cycle({0, 1}), FinPerm::cycle({1, 2})}), Error);
  EXPECT_FALSE(f.is_infinite());
}

TEST(Groups, GeneratedOver) {
  const WindowConfig w;
  const auto e = GroupDesc::partition(PartitionDesc::mod(3));
  EXPECT_EQ(generated_over(e, {}), e);
  const auto ext = generated_over(e, {FinPerm::transposition(0, 1)});
  EXPECT_EQ(ext.kind(), GroupDesc::Kind::kExtended);
  expect_certificate(FinPerm::transposition(3, 4), ext, w);
  EXPECT_TRUE(membership(FinPerm::transposition(0, 2), ext, w).non_member());

  const auto trivial = generated_over(GroupDesc(), {FinPerm::transposition(0, 1)});
  EXPECT_TRUE(membership(FinPerm::transposition(0, 1), trivial, w).member());
  // Extensions flatten.
  const auto twice = generated_over(ext, {FinPerm::transposition(1, 2)});
  EXPECT_EQ(twice.base(), e);
  EXPECT_EQ(twice.extra().size(), 2u);
}

TEST(Groups, ExtendedPartitionAgreesWithWindowClosure) {
  std::mt19937 rng(5);
  for (int t = 0; t < 60; ++t) {
    const auto e = random_infinite_partition(rng);
    std::vector<FinPerm> x = {random_perm(rng, 8)};
    if (rng() % 3 == 0) x.push_back(random_perm(rng, 8));
    const auto g = generated_over(GroupDesc::partition(e), x);
    const WindowConfig w{20};
    const auto gens = window_generators(g, w).generators;
    PermGroup reference(gens);
    for (int i = 0; i < 40; ++i) {
      const auto h = random_perm(rng, 8, 3);
      const auto v = membership(h, g, w);
      ASSERT_EQ(v.member(), reference.contains(h)) << h.to_string();
      if (v.member()) {
        ASSERT_TRUE(v.certificate);
        ASSERT_EQ(v.certificate->evaluate(), h);
      }
    }
    const std::vector<Point> a = {0, 1, 3, 4, 6};
    ASSERT_EQ(as_set(local_part(g, a, w)), reference_local(gens, a));
  }
}

TEST(Groups, ExtendedPartitionWithFiniteClasses) {
  // E: {0,1} finite, {2,3} finite, evens from 4 and odds from 5 infinite.
  const auto e = PartitionDesc::from_parts({Entry{false, 0}, Entry{false, 0}, Entry{false, 2}, Entry{false, 2}},
                                           {Entry{true, 0}, Entry{true, 1}});
  const WindowConfig w{24};
  const auto g = generated_over(GroupDesc::partition(e), {FinPerm::from_cycles({{0, 2}, {4, 5}})});
  const auto gens = window_generators(g, w).generators;
  PermGroup reference(gens);
  std::mt19937 rng(6);
  for (int i = 0; i < 300; ++i) {
    const auto h = random_perm(rng, 10, 3);
    ASSERT_EQ(is_member(h, g, w), reference.contains(h)) << h.to_string();
  }
  for (const std::vector<Point>& a : {std::vector<Point>{0, 1, 2, 3}, std::vector<Point>{0, 2, 4, 5, 6},
                                      std::vector<Point>{1, 3, 5, 7, 8}}) {
    EXPECT_EQ(as_set(local_part(g, a, w)), reference_local(gens, a));
  }
}

TEST(Groups, ExtendedGstarAgreesWithWindowClosure) {
  std::mt19937 rng(7);
  const WindowConfig w{17};
  for (int t = 0; t < 40; ++t) {
    std::vector<bool> cycle(1 + rng() % 3);
    for (auto&& b : cycle) b = rng() % 2;
    const auto g = generated_over(gstar_subgroup(IndexSet({}, cycle)), {random_perm(rng, 9)});
    const auto gens = window_generators(g, w).generators;
    PermGroup reference(gens);
    for (int i = 0; i < 40; ++i) {
      FinPerm h = random_perm(rng, 12, 3);
      if (i % 3 == 0) {
        h = FinPerm();
        for (int k = 0; k < 6; ++k) h = h * gens[rng() % gens.size()];
      }
      const auto v = membership(h, g, w);
      ASSERT_EQ(v.member(), reference.contains(h)) << h.to_string();
      if (v.member()) {
        ASSERT_TRUE(v.certificate);
        ASSERT_EQ(v.certificate->evaluate(), h);
      }
    }
    const std::vector<Point> a = {0, 1, 2, 3, 4, 7};
    ASSERT_EQ(as_set(local_part(g, a, w)), reference_local(gens, a));
  }
}

TEST(Groups, LocalPartIsSubgroup) {
  std::mt19937 rng(8);
  const WindowConfig w{16};
  for (int t = 0; t < 30; ++t) {
    const auto g = GroupDesc::finitely_generated({random_perm(rng, 7), random_perm(rng, 7)});
    const auto lp = local_part(g, {0, 2, 3, 5}, w);
    const std::set<FinPerm, SfLess> s(lp.elements.begin(), lp.elements.end());
    ASSERT_TRUE(s.count(FinPerm()));
    for (const auto& p : lp.elements) {
      ASSERT_TRUE(s.count(p.inverse()));
      for (const auto& q : lp.elements) ASSERT_TRUE(s.count(p * q));
    }
  }
}

TEST(Groups, WindowTruncationIsFlagged) {
  const auto g = GroupDesc::finitely_generated({FinPerm::transposition(0, 1), FinPerm::transposition(1, 30)});
  const WindowConfig w{16};
  EXPECT_FALSE(window_generators(g, w).exact);
  EXPECT_EQ(membership(FinPerm::transposition(0, 30), g, WindowConfig{64}).kind, MemberKind::kMember);
  EXPECT_EQ(membership(FinPerm::transposition(0, 2), g, w).kind, MemberKind::kUnknown);
  EXPECT_EQ(membership(FinPerm::transposition(0, 2), g, WindowConfig{64}).kind, MemberKind::kNonMember);
  EXPECT_FALSE(local_part(g, {0, 1}, w).exact);
}

TEST(Groups, TransportMaps) {
  const WindowConfig w{10};
  const auto parity = GroupDesc::partition(PartitionDesc::mod(2));
  EXPECT_EQ(transport_maps(parity, {0}, {2}, w).maps, (std::vector<std::vector<Point>>{{2}}));
  EXPECT_TRUE(transport_maps(gstar(), {0}, {5}, w).maps.empty());
  EXPECT_EQ(transport_maps(gstar(), {}, {}, w).maps.size(), 1u);
  const auto m = transport_maps(gstar(), {2, 3}, {3, 4}, w);
  EXPECT_EQ(m.maps, (std::vector<std::vector<Point>>{{3, 4}}));
  EXPECT_THROW((void)transport_maps(gstar(), {0, 1}, {2}, w), Error);
}

TEST(Groups, TransportMapsMatchClosure) {
  std::mt19937 rng(9);
  const WindowConfig w{8};
  for (int t = 0; t < 40; ++t) {
    GroupDesc g;
    switch (t % 3) {
      case 0:
        g = GroupDesc::finitely_generated({random_perm(rng, 8), random_perm(rng, 8)});
        break;
      case 1:
        g = GroupDesc::partition(random_infinite_partition(rng));
        break;
      default:
        g = generated_over(gstar_subgroup(IndexSet::residues(2, {1})), {random_perm(rng, 5)});
    }
    const auto gens = window_generators(g, w).generators;
    const auto closure = closure_bfs(gens, 4'000'000);
    auto pts = range(8);
    std::shuffle(pts.begin(), pts.end(), rng);
    std::vector<Point> a(pts.begin(), pts.begin() + 2);
    std::vector<Point> b(pts.begin() + 2, pts.begin() + 4);
    if (t % 2) b = a;
    std::sort(a.begin(), a.end());
    std::set<std::vector<Point>> expected;
    for (const auto& h : closure) {
      std::vector<Point> img = {h(a[0]), h(a[1])};
      auto sorted = img;
      std::sort(sorted.begin(), sorted.end());
      auto bs = b;
      std::sort(bs.begin(), bs.end());
      if (sorted == bs) expected.insert(img);
    }
    const auto got = transport_maps(g, a, b, w);
    ASSERT_EQ(std::set<std::vector<Point>>(got.maps.begin(), got.maps.end()), expected);
  }
}

TEST(Groups, TraceSet) {
  const WindowConfig w{8};
  EXPECT_EQ(trace_set(GroupDesc(), 100, w).members, (std::vector<std::uint64_t>{0}));
  const auto g = GroupDesc::finitely_generated({FinPerm::transposition(0, 1)});
  EXPECT_EQ(trace_set(g, 1000, w).members,
            (std::vector<std::uint64_t>{0, sf_index(FinPerm::transposition(0, 1))}));
  const auto h = GroupDesc::partition(PartitionDesc::one_class());
  const auto tg = trace_set(g, 200, w).members;
  const auto th = trace_set(h, 200, w).members;
  EXPECT_TRUE(std::includes(th.begin(), th.end(), tg.begin(), tg.end()));
  EXPECT_EQ(th.size(), 200u);
}

TEST(Groups, Infinite) {
  EXPECT_TRUE(gstar().is_infinite());
  EXPECT_FALSE(gstar_subgroup(IndexSet::finite({1, 4})).is_infinite());
  EXPECT_TRUE(GroupDesc::partition(PartitionDesc::pairs()).is_infinite());
  EXPECT_FALSE(GroupDesc::finitely_generated({FinPerm::transposition(0, 1)}).is_infinite());
}

}  // namespace
}  // namespace lf
