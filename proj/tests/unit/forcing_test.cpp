#include <gtest/gtest.h>

#include "../support/brute.hpp"
#include "lf/error.hpp"
#include "lf/forcing.hpp"
#include "lf/json_io.hpp"
#include "lf/lattice.hpp"

namespace lf {
namespace {

DenseOracle pr_d(const GroupDesc& g, std::size_t k) { return {DenseOracle::Kind::kPrCount, g, k}; }
DenseOracle pa_group(const GroupDesc& g) { return {DenseOracle::Kind::kPaGroup, g, 0}; }
DenseOracle pa_size(std::size_t l) { return {DenseOracle::Kind::kPaSize, GroupDesc(), l}; }

TEST(Forcing, PrOrder) {
  const PrCondition top;
  const PrCondition a{{FinPerm::transposition(0, 1)}, {}};
  const PrCondition b{{FinPerm::transposition(2, 3)}, {}};
  EXPECT_TRUE(pr_leq(a, top));
  EXPECT_TRUE(pr_leq(a, a));
  EXPECT_FALSE(pr_leq(a, b));
  EXPECT_FALSE(pr_leq(b, a));
  EXPECT_FALSE(pr_leq(top, a));
}

TEST(Forcing, PrDenseExtend) {
  const WindowConfig w;
  const auto c = pr_dense_extend({}, gstar(), 1, w);
  EXPECT_EQ(c.h, (std::vector<FinPerm>{gstar_sigma(0), gstar_sigma(2)}));
  EXPECT_EQ(c.h2, (std::vector<FinPerm>{gstar_sigma(1), gstar_sigma(3)}));
  EXPECT_TRUE(valid(c));
  EXPECT_TRUE(pr_leq(c, PrCondition{}));
  const auto mod3 = GroupDesc::partition(PartitionDesc::mod(3));
  const auto d = pr_dense_extend(c, mod3, 2, w);
  EXPECT_TRUE(pr_leq(d, c));
  EXPECT_TRUE(valid(d));
  std::size_t n = 0;
  for (const auto& p : d.h) n += brute::member(p, mod3);
  EXPECT_EQ(n, 3u);
}

TEST(Forcing, PaOrder) {
  const WindowConfig w;
  const PaCondition c{{FinPerm::transposition(0, 1)}, {}};
  EXPECT_TRUE(pa_leq(c, c, w).holds());
  EXPECT_TRUE(pa_leq(c, PaCondition{}, w).holds());
  const auto v = pa_leq(c, PaCondition{{}, {gstar()}}, w);
  ASSERT_TRUE(v.fails());
  EXPECT_EQ(perm_from_json(v.witness["element"]), gstar_sigma(0));
  EXPECT_TRUE(pa_leq(PaCondition{{FinPerm::transposition(0, 2)}, {gstar()}}, PaCondition{{}, {gstar()}}, w).holds());
}

TEST(Forcing, PaDenseExtend) {
  const WindowConfig w;
  const auto g = pa_dense_extend_group({}, gstar());
  EXPECT_EQ(g, (PaCondition{{}, {gstar()}}));
  EXPECT_EQ(pa_dense_extend_group(g, gstar()), g);
  const auto s = pa_dense_extend_size(g, 0, w);
  EXPECT_EQ(s.h, (std::vector<FinPerm>{FinPerm::from_cycles({{0, 3}, {1, 2}})}));
  EXPECT_TRUE(pa_leq(s, g, w).holds());
  const auto s3 = pa_dense_extend_size(s, 3, w);
  EXPECT_EQ(s3.h.size(), 4u);
  EXPECT_TRUE(valid(s3));
  EXPECT_TRUE(pa_leq(s3, s, w).holds());
}

TEST(Forcing, EmptyOracleList) {
  const WindowConfig w;
  const auto chain = rasiowa_sikorski(Poset::kPr, {}, w);
  ASSERT_EQ(chain.conditions.size(), 1u);
  EXPECT_EQ(std::get<PrCondition>(chain.conditions[0]), PrCondition{});
  EXPECT_TRUE(verify_chain(chain, w).holds());
  EXPECT_EQ(extract_group(chain).group, GroupDesc::finitely_generated({}));
  EXPECT_TRUE(extract_group(chain).group.generators().empty());
}

TEST(Forcing, PrRun) {
  const WindowConfig w;
  const auto chain = rasiowa_sikorski(Poset::kPr, {pr_d(gstar(), 0), pr_d(gstar(), 1)}, w);
  ASSERT_EQ(chain.conditions.size(), 3u);
  EXPECT_EQ(chain.met_at, (std::vector<std::size_t>{1, 2}));
  EXPECT_TRUE(verify_chain(chain, w).holds());
  const auto& last = std::get<PrCondition>(chain.conditions.back());
  std::size_t n = 0;
  for (const auto& p : last.h) n += brute::member(p, gstar());
  EXPECT_GE(n, 2u);
  const auto ex = extract_group(chain);
  for (auto i : {0, 2}) {
    const auto& gens = ex.group.generators();
    EXPECT_NE(std::find(gens.begin(), gens.end(), gstar_sigma(i)), gens.end());
  }
  ASSERT_TRUE(ex.second);
  EXPECT_TRUE(orthogonal(ex.group, *ex.second, w).holds());
  for (const auto& a : ex.group.generators()) {
    for (const auto& b : ex.second->generators()) EXPECT_TRUE(supports_disjoint(a, b));
  }
}

TEST(Forcing, PaRun) {
  const WindowConfig w;
  const auto chain = rasiowa_sikorski(Poset::kPa, {pa_group(gstar()), pa_size(0), pa_size(2)}, w);
  EXPECT_TRUE(verify_chain(chain, w).holds());
  const auto ex = extract_group(chain);
  EXPECT_FALSE(ex.second);
  for (const auto& e : closure_bfs(ex.group.generators(), w.element_budget)) {
    if (!e.is_identity()) EXPECT_FALSE(brute::member(e, gstar())) << e.to_string();
  }
  EXPECT_THROW(rasiowa_sikorski(Poset::kPa, {pr_d(gstar(), 0)}, w), Error);
}

TEST(Forcing, TranscriptRoundTrip) {
  const WindowConfig w;
  const auto chain = rasiowa_sikorski(Poset::kPa, {pa_group(gstar()), pa_size(1)}, w);
  const auto text = to_json(chain).dump();
  const auto back = chain_from_json(parse_json(text));
  EXPECT_EQ(to_json(back).dump(), text);
  EXPECT_TRUE(verify_chain(back, w).holds());
  EXPECT_EQ(text, to_json(rasiowa_sikorski(Poset::kPa, {pa_group(gstar()), pa_size(1)}, w)).dump());

  auto tampered = parse_json(text);
  tampered["conditions"][2]["h"] = json::array({json::array({json::array({0, 1})})});
  EXPECT_TRUE(verify_chain(chain_from_json(tampered), w).fails());
  auto unmet = parse_json(text);
  unmet["met"][1]["index"] = 1;
  EXPECT_TRUE(verify_chain(chain_from_json(unmet), w).fails());
}

TEST(Forcing, OracleErrorsNameTheIndex) {
  const WindowConfig w{6};
  try {
    rasiowa_sikorski(Poset::kPr, {pr_d(gstar(), 0), pr_d(gstar(), 5)}, w);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFoundInWindow);
    EXPECT_NE(std::string(e.what()).find("oracle 1"), std::string::npos);
  }
}

}  // namespace
}  // namespace lf
