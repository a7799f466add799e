#include "ddfair/protocols.hpp"

#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "ddfair/fairness.hpp"
#include "oracles.hpp"

namespace ddfair {
namespace {

Ranking named(std::initializer_list<int> names) {
  std::vector<Item> order;
  for (int name : names) order.push_back(static_cast<Item>(name - 1));
  return Ranking(order);
}

// Alice 2m ≻ ... ≻ 1, Bob 2 ≻ 3 ≻ ... ≻ 2m ≻ 1.
Instance opposite_pair(std::size_t m) {
  std::vector<Item> alice, bob;
  for (std::size_t l = 2 * m; l >= 1; --l) alice.push_back(l - 1);
  for (std::size_t l = 2; l <= 2 * m; ++l) bob.push_back(l - 1);
  bob.push_back(0);
  return Instance(Kind::goods, {Ranking(alice), Ranking(bob)});
}

bool brute_force_nddpr(const Instance& inst) {
  return oracle::brute_force_find(inst, [&](const Allocation& a) {
           return oracle::proportional_by(oracle::ndd_cone, a, inst);
         }).has_value();
}

bool brute_force_nidpr(const Instance& inst) {
  return oracle::brute_force_find(inst, [&](const Allocation& a) {
           return oracle::proportional_by(oracle::nid_cone, a, inst);
         }).has_value();
}

TEST(RoundRobinTest, OppositePairTrace) {
  const Allocation a = balanced_round_robin(opposite_pair(2));
  EXPECT_EQ(a.bundle(0), (MultiBundle{3, 0}));  // {4, 1}
  EXPECT_EQ(a.bundle(1), (MultiBundle{1, 2}));  // {2, 3}
}

TEST(RoundRobinTest, SingleAgentTakesEverything) {
  const Instance inst(Kind::goods, {named({2, 3, 1})});
  EXPECT_EQ(balanced_round_robin(inst).bundle(0), MultiBundle::all(3));
}

TEST(RoundRobinTest, RequiresMultipleOfN) {
  EXPECT_THROW(balanced_round_robin(Instance(Kind::goods, {Ranking::descending(5), Ranking::descending(5)})),
               InvalidInput);
}

TEST(RoundRobinTest, AccumulatedDifferenceInvariant) {
  Rng rng(71);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 4);
    const std::size_t m = n * (1 + uniform_below(rng, 4));
    const Instance inst = oracle::random_instance(Kind::goods, n, m, rng);
    if (nddpr_exists(inst).exists != Existence::yes) continue;
    RoundRobinTrace trace;
    const Allocation a = balanced_round_robin(inst, &trace);
    ASSERT_EQ(trace.total_level_diff.size(), m / n);
    for (std::size_t r = 1; r <= trace.total_level_diff.size(); ++r) {
      for (std::size_t i = 1; i <= n; ++i) {
        const Level d = trace.total_level_diff[r - 1][i - 1];
        const Level bound = r % 2 == 1 ? static_cast<Level>(n * (n - 1) / 2) : static_cast<Level>(n * (i - 1));
        ASSERT_GE(d, bound) << "half-round " << r << " agent " << i;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto own = level_prefix_sums(a.bundle(i).scaled(n), inst.ranking(i), Direction::top);
      const auto all = level_prefix_sums(inst.all_items(), inst.ranking(i), Direction::top);
      for (std::size_t k = 0; k < m; ++k) ASSERT_GE(own[k], all[k]);
    }
  }
}

TEST(NddprExistsTest, OppositePreferencesAdmitNddpr) {
  for (std::size_t m = 2; m <= 5; ++m) {
    const Instance inst = opposite_pair(m);
    const auto report = nddpr_exists(inst);
    ASSERT_EQ(report.exists, Existence::yes);
    EXPECT_TRUE(check_proportional(*report.allocation, inst, RelationKind::ndd).result);
  }
}

TEST(NddprExistsTest, FailingConditions) {
  const auto odd = nddpr_exists(Instance(Kind::goods, {Ranking::descending(5), Ranking({1, 0, 2, 3, 4})}));
  EXPECT_EQ(odd.exists, Existence::no);
  EXPECT_EQ(odd.reason, ExistenceReason::not_multiple_of_n);
  const auto same = nddpr_exists(Instance(Kind::goods, {Ranking::descending(4), Ranking::descending(4)}));
  EXPECT_EQ(same.exists, Existence::no);
  EXPECT_EQ(same.reason, ExistenceReason::shared_best_item);
  EXPECT_THROW(nddpr_exists(Instance(Kind::chores, {Ranking::descending(4)})), KindMismatch);
}

TEST(NddprExistsTest, CyclicThreeAgents) {
  const Instance inst(Kind::goods, {named({6, 5, 3, 4, 2, 1}), named({5, 4, 3, 6, 2, 1}), named({4, 6, 3, 5, 2, 1})});
  const auto report = nddpr_exists(inst);
  ASSERT_EQ(report.exists, Existence::yes);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(report.allocation->bundle(i).size(), 2u);
  EXPECT_TRUE(check_proportional(*report.allocation, inst, RelationKind::ndd).result);
}

TEST(NddprExistsTest, AgreesWithBruteForce) {
  Rng rng(73);
  for (int trial = 0; trial < 600; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 2);
    const std::size_t m = 2 + uniform_below(rng, 5);
    const Instance inst = oracle::random_instance(Kind::goods, n, m, rng);
    const auto report = nddpr_exists(inst);
    ASSERT_EQ(report.exists == Existence::yes, brute_force_nddpr(inst));
    if (report.allocation) ASSERT_TRUE(check_proportional(*report.allocation, inst, RelationKind::ndd).result);
  }
}

TEST(NddprExistsTest, SoundOnLargerInstances) {
  Rng rng(79);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + uniform_below(rng, 4);
    const std::size_t m = n * (1 + uniform_below(rng, 12 / n));
    const Instance inst = oracle::random_instance(Kind::goods, n, m, rng);
    const auto report = nddpr_exists(inst);
    if (report.exists == Existence::yes) {
      ASSERT_TRUE(check_proportional(*report.allocation, inst, RelationKind::ndd).result);
    }
  }
}

// Chores a, b, c, d, w, x, y, z are ids 0..7.
Instance shared_second_worst() {
  const Item a = 0, b = 1, c = 2, d = 3, w = 4, x = 5, y = 6, z = 7;
  return Instance(Kind::chores, {Ranking({a, b, c, d, w, x, y, z}), Ranking({b, c, d, a, w, x, z, y}),
                                 Ranking({c, d, a, b, w, z, y, x}), Ranking({d, a, b, c, x, z, y, w})});
}

// x, y, z are ids 0, 1, 2.
Instance three_chores() {
  return Instance(Kind::chores, {Ranking({0, 1, 2}), Ranking({0, 2, 1}), Ranking({0, 2, 1})});
}

TEST(NidprNecessaryTest, SharedSecondWorstChoreBlocks) {
  const auto report = nidpr_necessary(shared_second_worst());
  EXPECT_EQ(report.exists, Existence::no);
  EXPECT_EQ(report.reason, ExistenceReason::shared_worst_window_infeasible);
  const auto windows = worst_windows(shared_second_worst());
  for (const auto& w : windows) EXPECT_TRUE(w.count(6));
}

TEST(NidprNecessaryTest, ThreeChoresUndecided) {
  const auto report = nidpr_necessary(three_chores());
  EXPECT_EQ(report.exists, Existence::unknown);
  EXPECT_TRUE(brute_force_nidpr(three_chores()));
}

TEST(NidprNecessaryTest, NotMultiple) {
  const Instance inst(Kind::chores, {Ranking::descending(3), Ranking({2, 1, 0})});
  EXPECT_EQ(nidpr_necessary(inst).reason, ExistenceReason::not_multiple_of_n);
}

TEST(NidprNecessaryTest, NeverRulesOutAnExistingAllocation) {
  Rng rng(83);
  int blocked = 0;
  for (int trial = 0; trial < 800; ++trial) {
    const std::size_t n = 2 + uniform_below(rng, 2);
    const std::size_t m = 2 + uniform_below(rng, 5);
    const Instance inst = oracle::random_instance(Kind::chores, n, m, rng);
    const auto report = nidpr_necessary(inst);
    ASSERT_NE(report.exists, Existence::yes);
    if (report.exists == Existence::no) {
      ++blocked;
      ASSERT_FALSE(brute_force_nidpr(inst));
    }
  }
  EXPECT_GT(blocked, 50);
}

TEST(NidprTwoAgentsTest, DistinctWorstChores) {
  const Instance inst(Kind::chores, {Ranking({0, 1, 2, 3}), Ranking({0, 1, 3, 2})});
  const auto report = nidpr_two_agents(inst);
  ASSERT_EQ(report.exists, Existence::yes);
  EXPECT_TRUE(check_proportional(*report.allocation, inst, RelationKind::nid).result);
}

TEST(NidprTwoAgentsTest, PlainRoundRobinCanFail) {
  const Instance inst(Kind::chores, {Ranking({0, 3, 1, 2}), Ranking({1, 3, 2, 0})});
  const Allocation plain = balanced_round_robin(inst);
  EXPECT_EQ(plain.bundle(0), (MultiBundle{0, 2}));  // includes agent 0's worst chore
  EXPECT_FALSE(check_proportional(plain, inst, RelationKind::nid).result);
  const auto report = nidpr_two_agents(inst);
  ASSERT_EQ(report.exists, Existence::yes);
  EXPECT_TRUE(check_proportional(*report.allocation, inst, RelationKind::nid).result);
}

TEST(NidprTwoAgentsTest, FailingConditions) {
  EXPECT_EQ(nidpr_two_agents(Instance(Kind::chores, {Ranking::descending(4), Ranking::descending(4)})).exists,
            Existence::no);
  EXPECT_EQ(nidpr_two_agents(Instance(Kind::chores, {Ranking::descending(3), Ranking({0, 2, 1})})).reason,
            ExistenceReason::not_multiple_of_n);
  EXPECT_THROW(nidpr_two_agents(three_chores()), InvalidInput);
}

TEST(NidprTwoAgentsTest, ExactForTwoAgents) {
  Rng rng(89);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 2 * (1 + uniform_below(rng, 4));
    const Instance inst = oracle::random_instance(Kind::chores, 2, m, rng);
    const auto report = nidpr_two_agents(inst);
    if (report.exists == Existence::yes) {
      ASSERT_TRUE(check_proportional(*report.allocation, inst, RelationKind::nid).result);
    } else if (m <= 6) {
      ASSERT_FALSE(brute_force_nidpr(inst));
    }
  }
}

TEST(NidprThreeAgentsTest, ThreeChoreExample) {
  const auto report = nidpr_three_agents_special(three_chores());
  ASSERT_EQ(report.exists, Existence::yes);
  EXPECT_EQ(report.allocation->bundle(0), MultiBundle{1});  // A gets y
  EXPECT_EQ(report.allocation->bundle(1), MultiBundle{0});  // B gets x
  EXPECT_EQ(report.allocation->bundle(2), MultiBundle{2});  // C gets z
  EXPECT_TRUE(check_proportional(*report.allocation, three_chores(), RelationKind::nid).result);
}

TEST(NidprThreeAgentsTest, SharedWorstChore) {
  const Instance inst(Kind::chores, {Ranking({0, 1, 2}), Ranking({1, 0, 2}), Ranking({0, 1, 2})});
  const auto report = nidpr_three_agents_special(inst);
  EXPECT_EQ(report.exists, Existence::no);
  EXPECT_EQ(report.reason, ExistenceReason::shared_worst_window_infeasible);
}

TEST(NidprThreeAgentsTest, SixChores) {
  // Shared best part 0 ≻ 1 ≻ 2, then the worst three in different orders.
  const Instance inst(Kind::chores,
                      {Ranking({0, 1, 2, 3, 4, 5}), Ranking({0, 1, 2, 5, 3, 4}), Ranking({0, 1, 2, 4, 5, 3})});
  const auto report = nidpr_three_agents_special(inst);
  ASSERT_EQ(report.exists, Existence::yes);
  EXPECT_TRUE(check_proportional(*report.allocation, inst, RelationKind::nid).result);
}

TEST(NidprThreeAgentsTest, OutsideSpecialCase) {
  const Instance inst(Kind::chores,
                      {Ranking({0, 1, 2, 3, 4, 5}), Ranking({1, 0, 2, 5, 3, 4}), Ranking({0, 1, 2, 4, 5, 3})});
  const auto report = nidpr_three_agents_special(inst);
  EXPECT_EQ(report.exists, Existence::unknown);
  EXPECT_EQ(report.reason, ExistenceReason::out_of_theory);
}

TEST(NidprThreeAgentsTest, RandomSpecialInstancesAreSolved) {
  Rng rng(97);
  int solved = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 3 * (1 + uniform_below(rng, 5));
    const Ranking shared = oracle::random_ranking(m, rng);
    std::vector<Ranking> rankings;
    for (int i = 0; i < 3; ++i) {
      std::vector<Item> order = shared.order();
      const std::size_t tail = m - 3;
      for (std::size_t k = 3; k > 1; --k) std::swap(order[tail + k - 1], order[tail + uniform_below(rng, k)]);
      rankings.emplace_back(order);
    }
    const Instance inst(Kind::chores, rankings);
    const auto report = nidpr_three_agents_special(inst);
    ASSERT_NE(report.reason, ExistenceReason::out_of_theory);
    if (report.exists == Existence::yes) {
      ++solved;
      ASSERT_TRUE(check_proportional(*report.allocation, inst, RelationKind::nid).result);
    } else {
      ASSERT_EQ(report.reason, ExistenceReason::shared_worst_window_infeasible);
    }
  }
  EXPECT_GT(solved, 300);
}

}  // namespace
}  // namespace ddfair
