#include "posetnet/poset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "test_util.hpp"

using namespace posetnet;

namespace {

// Oracle: every upward directed subset, found by exhaustive enumeration, kept
// only if no strict directed superset exists.
std::vector<Mask> directed_blocks_by_enumeration(const Poset& p) {
  const int n = p.size();
  std::vector<Mask> directed;
  for (Mask m = 1; m < (Mask(1) << n); ++m)
    if (p.is_upward_directed(m)) directed.push_back(m);
  std::vector<Mask> maximal;
  for (Mask m : directed) {
    bool dominated = false;
    for (Mask d : directed)
      if (m != d && (m & d) == m) { dominated = true; break; }
    if (!dominated) maximal.push_back(m);
  }
  std::sort(maximal.begin(), maximal.end());
  return maximal;
}

std::vector<Mask> block_masks(const Poset& p, const DirectedDecomposition& dec) {
  std::vector<Mask> out;
  for (const auto& b : dec.blocks) out.push_back(p.mask_of(b));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Poset, SingletonIsReflexive) {
  Poset p = build_poset({"a"}, {});
  EXPECT_TRUE(p.leq(0, 0));
  EXPECT_EQ(p.size(), 1);
}

TEST(Poset, ChainClosureContainsComposite) {
  Poset p = pntest::chain3();
  EXPECT_TRUE(p.leq(p.id_of("a"), p.id_of("c")));
}

TEST(Poset, ClosureIdempotence) {
  Poset p = pntest::chain3();
  std::vector<std::pair<std::string, std::string>> closed;
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j)
      if (p.leq(i, j)) closed.emplace_back(p.label(i), p.label(j));
  Poset q = build_poset(p.labels(), closed);
  for (int i = 0; i < p.size(); ++i)
    for (int j = 0; j < p.size(); ++j)
      EXPECT_EQ(p.leq(i, j), q.leq(i, j));
}

TEST(Poset, AntisymmetryViolationRejected) {
  EXPECT_PN_THROW(build_poset({"a", "b"}, {{"a", "b"}, {"b", "a"}}),
                  ErrorCode::antisymmetry_violation);
  // ...including through transitive closure
  EXPECT_PN_THROW(build_poset({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}),
                  ErrorCode::antisymmetry_violation);
}

TEST(Poset, DuplicateAndUnknownLabels) {
  EXPECT_PN_THROW(build_poset({"a", "a"}, {}), ErrorCode::duplicate_label);
  EXPECT_PN_THROW(build_poset({"a"}, {{"a", "zz"}}), ErrorCode::unknown_element);
}

TEST(Poset, UpwardDirectedQueries) {
  Poset chain = pntest::chain3();
  EXPECT_TRUE(chain.is_upward_directed());
  Poset crown = pntest::crown2();
  EXPECT_FALSE(crown.is_upward_directed());
  EXPECT_TRUE(crown.is_upward_directed(Mask(0)));  // vacuous
  EXPECT_TRUE(crown.is_upward_directed(crown.mask_of({"a1", "a2", "b1"})));
  EXPECT_FALSE(crown.is_upward_directed(crown.mask_of({"b1", "b2"})));
}

TEST(Poset, PathConnectivity) {
  EXPECT_TRUE(pntest::chain3().is_path_connected());
  EXPECT_FALSE(pntest::antichain2().is_path_connected());
  EXPECT_TRUE(pntest::crown2().is_path_connected());
}

TEST(Poset, ComparabilityEdges) {
  EXPECT_EQ(pntest::chain3().comparability_edges().size(), 3u);
  EXPECT_TRUE(pntest::antichain2().comparability_edges().empty());
  EXPECT_EQ(pntest::crown2().comparability_edges().size(), 4u);
}

TEST(Poset, MaximalDirectedSubsetsExamples) {
  {
    Poset p = pntest::chain3();
    auto dec = maximal_directed_subsets(p);
    ASSERT_EQ(dec.blocks.size(), 1u);
    EXPECT_EQ(dec.blocks[0], (std::vector<std::string>{"a", "b", "c"}));
  }
  {
    Poset p = pntest::crown2();
    auto dec = maximal_directed_subsets(p);
    ASSERT_EQ(dec.blocks.size(), 2u);
    EXPECT_EQ(dec.blocks[0], (std::vector<std::string>{"a1", "a2", "b1"}));
    EXPECT_EQ(dec.blocks[1], (std::vector<std::string>{"a1", "a2", "b2"}));
  }
  {
    Poset p = pntest::antichain2();
    auto dec = maximal_directed_subsets(p);
    ASSERT_EQ(dec.blocks.size(), 2u);
    EXPECT_EQ(dec.blocks[0], (std::vector<std::string>{"x"}));
    EXPECT_EQ(dec.blocks[1], (std::vector<std::string>{"y"}));
  }
}

TEST(Poset, MaximalDirectedSubsetsMatchEnumerationOracle) {
  for (const Poset& p : {pntest::chain3(), pntest::antichain2(), pntest::crown2(),
                         pntest::crown3(), pntest::crown2_top(), pntest::tree4(),
                         pntest::diamond_chain()}) {
    auto dec = maximal_directed_subsets(p);
    EXPECT_EQ(block_masks(p, dec), directed_blocks_by_enumeration(p));
  }
}

TEST(Poset, BlocksAreDirectedMaximalAndCover) {
  for (const Poset& p : {pntest::crown2(), pntest::crown3(), pntest::crown2_top(),
                         pntest::tree4()}) {
    auto dec = maximal_directed_subsets(p);
    Mask seen = 0;
    for (const auto& b : dec.blocks) {
      Mask m = p.mask_of(b);
      seen |= m;
      EXPECT_TRUE(p.is_upward_directed(m));
      for (int e = 0; e < p.size(); ++e)
        if (!(m & Poset::bit(e))) {
          EXPECT_FALSE(p.is_upward_directed(m | Poset::bit(e)));
        }
    }
    EXPECT_EQ(seen, p.all_mask());
  }
}

TEST(Poset, DecompositionEquivariantUnderRelabeling) {
  // Rename crown elements; block structure must follow the renaming.
  std::map<std::string, std::string> rename{
      {"a1", "p"}, {"a2", "q"}, {"b1", "r"}, {"b2", "s"}};
  Poset crown = pntest::crown2();
  std::vector<std::string> labels;
  for (const auto& l : crown.labels()) labels.push_back(rename.at(l));
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < crown.size(); ++i)
    for (int j = 0; j < crown.size(); ++j)
      if (i != j && crown.leq(i, j)) pairs.emplace_back(rename.at(crown.label(i)), rename.at(crown.label(j)));
  Poset renamed = build_poset(labels, pairs);
  auto dec1 = maximal_directed_subsets(crown);
  auto dec2 = maximal_directed_subsets(renamed);
  std::vector<std::vector<std::string>> mapped;
  for (auto b : dec1.blocks) {
    for (auto& l : b) l = rename.at(l);
    std::sort(b.begin(), b.end());
    mapped.push_back(b);
  }
  std::sort(mapped.begin(), mapped.end());
  EXPECT_EQ(mapped, dec2.blocks);
}

TEST(Poset, SizeBoundGuard) {
  std::vector<std::string> labels;
  for (int i = 0; i < 25; ++i) labels.push_back("e" + std::to_string(i));
  Poset p = build_poset(labels, {});
  EXPECT_PN_THROW(maximal_directed_subsets(p), ErrorCode::size_bound);
  EXPECT_NO_THROW(maximal_directed_subsets(p, 30));
}
