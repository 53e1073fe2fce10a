#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "lf/error.hpp"
#include "lf/perm.hpp"

namespace lf {
namespace {

// Every permutation of {0..n-1}, as FinPerms.
std::vector<FinPerm> all_perms(Point n) {
  std::vector<Point> image(n);
  std::iota(image.begin(), image.end(), 0);
  std::vector<FinPerm> out;
  do {
    std::vector<FinPerm::Move> moves;
    for (Point i = 0; i < n; ++i) moves.emplace_back(i, image[i]);
    out.push_back(FinPerm::from_moves(moves));
  } while (std::next_permutation(image.begin(), image.end()));
  return out;
}

// Independent enumeration: walk Sym({0..M}) in lexicographic order of the
// image sequence for growing M and list each permutation the first time it
// shows up.
std::vector<FinPerm> brute_force_enumeration(Point max_top) {
  std::vector<FinPerm> listed;
  std::set<std::vector<FinPerm::Move>> seen;
  for (Point top = 0; top <= max_top; ++top) {
    for (const auto& p : all_perms(top + 1)) {
      if (seen.insert(p.moves()).second) listed.push_back(p);
    }
  }
  return listed;
}

TEST(Perm, ComposeMatchesPointwiseEvaluation) {
  const FinPerm r = FinPerm::cycle({0, 1}) * FinPerm::cycle({1, 2});
  EXPECT_EQ(r(0), 1u);
  EXPECT_EQ(r(1), 2u);
  EXPECT_EQ(r(2), 0u);
  EXPECT_EQ(r, FinPerm::cycle({0, 1, 2}));
  EXPECT_EQ(FinPerm::identity() * FinPerm::cycle({3, 5, 7}), FinPerm::cycle({3, 5, 7}));
}

TEST(Perm, InverseExamples) {
  EXPECT_EQ(FinPerm::cycle({0, 1, 2}).inverse(), FinPerm::cycle({0, 2, 1}));
  EXPECT_TRUE(FinPerm::identity().inverse().is_identity());
  EXPECT_EQ(FinPerm::transposition(0, 1).inverse(), FinPerm::transposition(0, 1));
}

TEST(Perm, CycleDecompositionExamples) {
  EXPECT_TRUE(FinPerm::identity().cycles().empty());
  const FinPerm p = FinPerm::cycle({0, 1}) * FinPerm::cycle({2, 3, 4});
  const auto cs = p.cycles();
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].points, (std::vector<Point>{0, 1}));
  EXPECT_EQ(cs[1].points, (std::vector<Point>{2, 3, 4}));
  const auto c3 = (FinPerm::cycle({0, 1}) * FinPerm::cycle({1, 2})).cycles();
  ASSERT_EQ(c3.size(), 1u);
  EXPECT_EQ(c3[0].points, (std::vector<Point>{0, 1, 2}));
}

TEST(Perm, MakeCycle) {
  const FinPerm c = FinPerm::cycle({3, 5, 7});
  EXPECT_EQ(c(3), 5u);
  EXPECT_EQ(c(5), 7u);
  EXPECT_EQ(c(7), 3u);
  EXPECT_EQ(c.support(), (std::vector<Point>{3, 5, 7}));
  EXPECT_EQ(FinPerm::cycle({0, 1}), FinPerm::transposition(0, 1));
  try {
    (void)FinPerm::cycle({2, 2});
    FAIL() << "expected DuplicatePoint";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicatePoint);
  }
}

TEST(Perm, FromMovesRejectsNonBijection) {
  EXPECT_THROW((void)FinPerm::from_moves({{0, 1}, {1, 1}}), Error);
  EXPECT_THROW((void)FinPerm::from_moves({{0, 1}, {0, 2}}), Error);
}

TEST(Perm, GroupLawsExhaustiveOnFourPoints) {
  // Associativity is cubic, so check it on Sym(4); identity and inverses on Sym(6).
  const auto s4 = all_perms(4);
  for (const auto& a : s4) {
    for (const auto& b : s4) {
      const FinPerm ab = a * b;
      for (const auto& c : s4) ASSERT_EQ(ab * c, a * (b * c));
    }
  }
  for (const auto& p : all_perms(6)) {
    ASSERT_EQ(p * p.inverse(), FinPerm::identity());
    ASSERT_EQ(p.inverse() * p, FinPerm::identity());
    ASSERT_EQ(FinPerm::identity() * p, p);
    ASSERT_EQ(p * FinPerm::identity(), p);
  }
}

TEST(Perm, CycleRoundTripOnSevenPoints) {
  for (const auto& p : all_perms(7)) {
    FinPerm q;
    Point last_min = 0;
    bool first = true;
    for (const auto& c : p.cycles()) {
      ASSERT_GE(c.points.size(), 2u);
      ASSERT_EQ(c.points.front(), *std::min_element(c.points.begin(), c.points.end()));
      if (!first) ASSERT_LT(last_min, c.points.front());
      first = false;
      last_min = c.points.front();
      q = q * FinPerm::cycle(std::span<const Point>(c.points));
    }
    ASSERT_EQ(q, p);
  }
}

TEST(Perm, SupportOfProductAndCancellation) {
  const auto s5 = all_perms(5);
  for (const auto& p : s5) {
    for (const auto& q : s5) {
      for (Point x : (p * q).support()) ASSERT_TRUE(p.moves_point(x) || q.moves_point(x));
    }
  }
  const FinPerm t = FinPerm::transposition(0, 1);
  EXPECT_TRUE((t * t).is_identity());
}

TEST(Perm, PowAndOrder) {
  const FinPerm p = FinPerm::cycle({0, 1}) * FinPerm::cycle({2, 3, 4});
  EXPECT_EQ(p.order(), 6u);
  FinPerm acc;
  for (int e = 0; e < 13; ++e) {
    EXPECT_EQ(p.pow(e), acc);
    EXPECT_EQ(p.pow(-e), acc.inverse());
    acc = acc * p;
  }
}

TEST(Perm, SfEnumerationMatchesBruteForceTable) {
  const auto table = brute_force_enumeration(6);
  ASSERT_EQ(table.size(), 5040u);
  EXPECT_TRUE(sf_at(0).is_identity());
  EXPECT_EQ(sf_at(1), FinPerm::transposition(0, 1));
  for (std::size_t i = 0; i < table.size(); ++i) {
    ASSERT_EQ(sf_at(i), table[i]) << i;
    ASSERT_EQ(sf_index(table[i]), i);
  }
  for (std::size_t i = 1; i < table.size(); ++i) ASSERT_TRUE(sf_less(table[i - 1], table[i]));
}

TEST(Perm, SfRoundTripTenThousand) {
  std::set<std::vector<FinPerm::Move>> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    const FinPerm p = sf_at(i);
    ASSERT_EQ(sf_index(p), i);
    ASSERT_TRUE(seen.insert(p.moves()).second);
  }
}

TEST(Perm, SfLargeIndices) {
  const FinPerm p = FinPerm::cycle({0, 19}) * FinPerm::cycle({3, 11, 7});
  EXPECT_EQ(sf_at(sf_index(p)), p);
  EXPECT_THROW((void)sf_index(FinPerm::transposition(0, 20)), Error);
}

}  // namespace
}  // namespace lf
