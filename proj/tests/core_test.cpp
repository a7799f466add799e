#include "ddfair/core.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace ddfair {
namespace {

using oracle::lv;

TEST(RankingTest, LevelsCountDownFromItemCount) {
  Ranking r({2, 0, 3, 1});
  EXPECT_EQ(r.level(2), 4);
  EXPECT_EQ(r.level(0), 3);
  EXPECT_EQ(r.level(3), 2);
  EXPECT_EQ(r.level(1), 1);
  EXPECT_EQ(r.at_level(4), 2u);
  EXPECT_EQ(r.best(), 2u);
  EXPECT_EQ(r.worst(), 1u);
  EXPECT_TRUE(r.prefers(0, 3));
}

TEST(RankingTest, RejectsNonPermutations) {
  EXPECT_THROW(Ranking({0, 0, 1}), InvalidInput);
  EXPECT_THROW(Ranking({0, 3, 1}), InvalidInput);
  EXPECT_THROW(Ranking(std::vector<Item>{}), InvalidInput);
}

TEST(RankingTest, ReversedSwapsLevels) {
  Ranking r({2, 0, 1});
  Ranking rev = r.reversed();
  for (Item i = 0; i < 3; ++i) EXPECT_EQ(rev.level(i), 4 - r.level(i));
}

TEST(MultiBundleTest, SizeAndScaling) {
  MultiBundle x{1, 1, 2};
  EXPECT_EQ(x.size(), 3u);
  EXPECT_EQ(x.multiplicity(1), 2u);
  EXPECT_FALSE(x.is_set());
  MultiBundle tripled = MultiBundle{4}.scaled(3);
  EXPECT_EQ(tripled.size(), 3u);
  EXPECT_EQ(tripled.multiplicity(4), 3u);
}

TEST(LevelPrefixSumsTest, TopPrefixOfExampleBundle) {
  const Ranking r = Ranking::descending(8);
  const MultiBundle x{lv(8), lv(4), lv(2)};
  EXPECT_EQ(level_prefix_sums(x, r, Direction::top), (std::vector<Level>{8, 12, 14}));
}

TEST(LevelPrefixSumsTest, EmptyBundle) {
  EXPECT_TRUE(level_prefix_sums(MultiBundle{}, Ranking::descending(3), Direction::top).empty());
}

TEST(LevelPrefixSumsTest, BottomPrefixOfChoreMultiBundles) {
  // x ≻ y ≻ z with levels 3, 2, 1.
  const Item x = 0, y = 1, z = 2;
  const Ranking a({x, y, z});
  EXPECT_EQ(level_prefix_sums(MultiBundle{y, y, x}, a, Direction::bottom), (std::vector<Level>{2, 4, 7}));
  EXPECT_EQ(level_prefix_sums(MultiBundle{y}.scaled(3), a, Direction::bottom), (std::vector<Level>{2, 4, 6}));
  EXPECT_EQ(level_prefix_sums(MultiBundle{x, y, z}, a, Direction::bottom), (std::vector<Level>{1, 3, 6}));
}

TEST(LevelPrefixSumsTest, UnknownItemThrows) {
  EXPECT_THROW(level_prefix_sums(MultiBundle{7}, Ranking::descending(3), Direction::top), InvalidInput);
}

TEST(LevelPrefixSumsTest, FullItemSetGivesTriangularPrefixes) {
  Rng rng(7);
  for (std::size_t m = 1; m <= 9; ++m) {
    const Ranking r = oracle::random_ranking(m, rng);
    const auto sums = level_prefix_sums(MultiBundle::all(m), r, Direction::top);
    Level expected = 0;
    for (std::size_t k = 1; k <= m; ++k) {
      expected += static_cast<Level>(m - k + 1);
      EXPECT_EQ(sums[k - 1], expected);
      if (k > 1) EXPECT_GE(sums[k - 1], sums[k - 2]);
    }
  }
}

TEST(UtilityTest, SquareUtilityOnExampleBundles) {
  const Ranking r = Ranking::descending(8);
  const auto square = UtilityFunction<std::int64_t>::from_levels(r, [](Level l) { return l * l; });
  EXPECT_EQ(utility_of(MultiBundle{lv(8), lv(4), lv(2)}, square), 84);
  EXPECT_EQ(utility_of(MultiBundle{lv(7), lv(6)}, square), 85);
  EXPECT_EQ(utility_of(MultiBundle{}, square), 0);
  EXPECT_TRUE(classify_dd(square, r));
}

TEST(UtilityTest, SqrtUtilityOnExampleBundles) {
  const Ranking r = Ranking::descending(8);
  const auto root = UtilityFunction<double>::from_levels(r, [](Level l) { return std::sqrt(double(l)); });
  EXPECT_NEAR(utility_of(MultiBundle{lv(8), lv(5)}, root), 5.0645, 1e-4);
  EXPECT_NEAR(utility_of(MultiBundle{lv(7), lv(6)}, root), 5.0952, 1e-4);
  EXPECT_FALSE(classify_dd(root, r));
  EXPECT_TRUE(classify_id(root, r));
}

TEST(UtilityTest, MissingValueThrows) {
  UtilityFunction<std::int64_t> u({1, 2});
  EXPECT_THROW(utility_of(MultiBundle{5}, u), InvalidInput);
}

TEST(ClassificationTest, StandardScoringFunctions) {
  for (std::size_t m = 1; m <= 8; ++m) {
    const Ranking r = Ranking::descending(m);
    EXPECT_TRUE(classify_dd(borda_utility(r), r));
    EXPECT_TRUE(classify_dd(lexicographic_utility(r), r));
    EXPECT_TRUE(classify_id(negative_borda_utility(r), r));
    EXPECT_TRUE(has_sign_of(negative_borda_utility(r), Kind::chores));
    EXPECT_TRUE(has_sign_of(borda_utility(r), Kind::goods));
  }
}

TEST(ClassificationTest, DdAndIdExactlyForArithmeticProgressions) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t m = 3 + uniform_below(rng, 5);
    const Ranking r = oracle::random_ranking(m, rng);
    std::vector<std::int64_t> gaps(m - 1);
    for (auto& g : gaps) g = 1 + static_cast<std::int64_t>(uniform_below(rng, 3));
    if (trial % 3 == 0) std::fill(gaps.begin(), gaps.end(), gaps.front());
    std::vector<std::int64_t> by_level(m);
    by_level[0] = 1;
    for (std::size_t i = 1; i < m; ++i) by_level[i] = by_level[i - 1] + gaps[i - 1];
    const auto u = UtilityFunction<std::int64_t>::from_levels(r, [&](Level l) { return by_level[l - 1]; });
    const bool arithmetic = std::all_of(gaps.begin(), gaps.end(), [&](auto g) { return g == gaps.front(); });
    EXPECT_EQ(classify_dd(u, r) && classify_id(u, r), arithmetic);
    const bool nondecreasing = std::is_sorted(gaps.begin(), gaps.end());
    EXPECT_EQ(classify_dd(u, r), nondecreasing);
  }
}

TEST(ClassificationTest, FloatToleranceAcceptsRoundingNoise) {
  const Ranking r = Ranking::descending(4);
  // 0.1 steps are not exact in binary, so the gaps differ in the last bits.
  const auto u = UtilityFunction<double>::from_levels(r, [](Level l) { return 0.1 * double(l); });
  EXPECT_TRUE(classify_dd(u, r));
  EXPECT_TRUE(classify_id(u, r));
}

TEST(ClassificationTest, BinaryThresholds) {
  const Ranking r = Ranking::descending(5);
  for (Level k = 1; k <= 5; ++k) {
    EXPECT_EQ(binary_threshold(threshold_utility(r, k), r), k);
  }
  EXPECT_FALSE(classify_binary(borda_utility(r), r));
}

TEST(AllocationTest, ValidatesPartition) {
  EXPECT_NO_THROW(Allocation({{0, 2}, {1}}, 3));
  EXPECT_THROW(Allocation({{0, 2}, {2, 1}}, 3), InvalidInput);
  EXPECT_THROW(Allocation({{0}, {1}}, 3), InvalidInput);
  EXPECT_THROW(Allocation({{0, 5}, {1, 2}}, 3), InvalidInput);
  const Allocation a = Allocation::from_owners(std::vector<std::size_t>{1, 0, 1}, 2);
  EXPECT_EQ(a.bundle(1), (MultiBundle{0, 2}));
  EXPECT_EQ(a.owner(1), 0u);
}

TEST(InstanceTest, RankingsMustShareItems) {
  EXPECT_THROW(Instance(Kind::goods, {Ranking::descending(3), Ranking::descending(4)}), InvalidInput);
  EXPECT_THROW(Instance(Kind::goods, {}), InvalidInput);
  const Instance inst(Kind::chores, {Ranking::descending(3)});
  EXPECT_EQ(inst.item_count(), 3u);
  EXPECT_EQ(inst.agent_count(), 1u);
}

}  // namespace
}  // namespace ddfair
