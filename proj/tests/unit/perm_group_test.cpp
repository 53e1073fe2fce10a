#include <gtest/gtest.h>

#include <random>
#include <set>

#include "lf/error.hpp"
#include "lf/perm_group.hpp"

namespace lf {
namespace {

FinPerm random_perm(std::mt19937& rng, Point n) {
  std::vector<Point> image(n);
  for (Point i = 0; i < n; ++i) image[i] = i;
  std::shuffle(image.begin(), image.end(), rng);
  std::vector<FinPerm::Move> moves;
  for (Point i = 0; i < n; ++i) moves.emplace_back(i, image[i]);
  return FinPerm::from_moves(moves);
}

TEST(PermGroup, SymmetricGroupOrder) {
  PermGroup s5({FinPerm::cycle({0, 1, 2, 3, 4}), FinPerm::transposition(0, 1)});
  EXPECT_EQ(s5.order_exact(), 120u);
  EXPECT_EQ(s5.elements(1000).size(), 120u);
  EXPECT_TRUE(s5.contains(FinPerm::transposition(2, 4)));
  EXPECT_FALSE(s5.contains(FinPerm::transposition(2, 5)));
}

TEST(PermGroup, MatchesBreadthFirstClosureOnRandomGroups) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const Point n = 3 + trial % 5;
    std::vector<FinPerm> gens;
    const int k = 1 + trial % 3;
    for (int i = 0; i < k; ++i) {
      FinPerm g = random_perm(rng, n);
      // Thin out some generators so small subgroups show up too.
      if (i > 0 && trial % 2) g = g.pow(2);
      gens.push_back(g);
    }
    const auto expected = closure_bfs(gens, 100000);
    PermGroup group(gens);
    ASSERT_EQ(group.order_exact(), expected.size());
    ASSERT_EQ(group.elements(100000), expected);
    const std::set<FinPerm, SfLess> members(expected.begin(), expected.end());
    for (int probe = 0; probe < 30; ++probe) {
      const FinPerm g = random_perm(rng, n);
      ASSERT_EQ(group.contains(g), members.contains(g));
      const auto cert = group.certify(g);
      ASSERT_EQ(cert.has_value(), members.contains(g));
      if (cert) ASSERT_EQ(cert->evaluate(), g);
    }
  }
}

TEST(PermGroup, CertificatesOnlyUseListedGenerators) {
  const FinPerm a = FinPerm::cycle({0, 1, 2});
  const FinPerm b = FinPerm::transposition(5, 6);
  PermGroup group({a, b});
  const auto cert = group.certify(a.inverse());
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->generators, std::vector<FinPerm>{a});
  EXPECT_EQ(cert->evaluate(), a.inverse());
  const auto id_cert = group.certify(FinPerm::identity());
  ASSERT_TRUE(id_cert);
  EXPECT_TRUE(id_cert->evaluate().is_identity());
}

TEST(PermGroup, StabilizerOfPrefix) {
  // Sym(4) with 0 and 1 fixed leaves Sym({2,3}).
  const std::vector<Point> prefix = {0, 1};
  PermGroup group({FinPerm::cycle({0, 1, 2, 3}), FinPerm::transposition(0, 1)}, prefix);
  const auto stab = group.stabilizer_generators(2);
  EXPECT_EQ(closure_bfs(stab, 100).size(), 2u);
  for (const auto& s : stab) {
    EXPECT_EQ(s(0), 0u);
    EXPECT_EQ(s(1), 1u);
  }
}

TEST(PermGroup, RealizePartialMaps) {
  const std::vector<FinPerm> gens = {FinPerm::cycle({0, 1, 2, 3, 4})};
  const std::vector<std::pair<Point, Point>> ok = {{0, 2}, {1, 3}};
  const auto g = realize_partial_map(gens, ok);
  ASSERT_TRUE(g);
  EXPECT_EQ((*g)(0), 2u);
  EXPECT_EQ((*g)(1), 3u);
  const std::vector<std::pair<Point, Point>> bad = {{0, 2}, {1, 4}};
  EXPECT_FALSE(realize_partial_map(gens, bad));
  const std::vector<std::pair<Point, Point>> outside = {{0, 9}};
  EXPECT_FALSE(realize_partial_map(gens, outside));
}

TEST(PermGroup, RealizeAgreesWithClosure) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<FinPerm> gens = {random_perm(rng, 6).pow(trial % 3 + 1), random_perm(rng, 6).pow(2)};
    const auto all = closure_bfs(gens, 1000);
    for (Point a = 0; a < 6; ++a) {
      for (Point b = 0; b < 6; ++b) {
        if (a == b) continue;
        for (Point c = 0; c < 6; ++c) {
          for (Point d = 0; d < 6; ++d) {
            if (c == d) continue;
            const bool expected = std::any_of(all.begin(), all.end(),
                                              [&](const FinPerm& g) { return g(a) == c && g(b) == d; });
            const std::vector<std::pair<Point, Point>> map = {{a, c}, {b, d}};
            const auto got = realize_partial_map(gens, map);
            ASSERT_EQ(got.has_value(), expected);
            if (got) {
              ASSERT_EQ((*got)(a), c);
              ASSERT_EQ((*got)(b), d);
            }
          }
        }
      }
    }
  }
}

TEST(PermGroup, BudgetExceeded) {
  PermGroup s6({FinPerm::cycle({0, 1, 2, 3, 4, 5}), FinPerm::transposition(0, 1)});
  EXPECT_THROW((void)s6.elements(100), Error);
  EXPECT_THROW((void)closure_bfs(s6.generators(), 100), Error);
}

TEST(PermGroup, WordCertificate) {
  const FinPerm a = FinPerm::cycle({0, 1, 2, 3, 4});
  const auto cert = word_certificate({a}, {{0, 3}, {0, -7}});
  EXPECT_EQ(cert.evaluate(), a.pow(-4));
}

}  // namespace
}  // namespace lf
