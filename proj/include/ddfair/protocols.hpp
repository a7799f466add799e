#pragma once

// Existence conditions and constructive protocols: NDDPR for goods via
// balanced round-robin; NIDPR for chores via the W_i necessary condition,
// the two-agent protocol and the three-agent special case.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/push_relabel_max_flow.hpp>

#include "ddfair/core.hpp"

namespace ddfair {

enum class Existence { yes, no, unknown };

enum class ExistenceReason {
  not_multiple_of_n,
  shared_best_item,
  shared_worst_window_infeasible,
  conditions_met,
  out_of_theory,
};

inline std::string_view to_string(Existence e) {
  switch (e) {
    case Existence::yes: return "yes";
    case Existence::no: return "no";
    case Existence::unknown: return "unknown";
  }
  return "?";
}

inline std::string_view to_string(ExistenceReason r) {
  switch (r) {
    case ExistenceReason::not_multiple_of_n: return "not_multiple_of_n";
    case ExistenceReason::shared_best_item: return "shared_best_item";
    case ExistenceReason::shared_worst_window_infeasible: return "shared_worst_window_infeasible";
    case ExistenceReason::conditions_met: return "conditions_met";
    case ExistenceReason::out_of_theory: return "out_of_theory";
  }
  return "?";
}

struct ExistenceReport {
  Existence exists = Existence::unknown;
  ExistenceReason reason = ExistenceReason::out_of_theory;
  std::optional<Allocation> allocation;
};

namespace detail {

inline void require_kind(const Instance& instance, Kind kind) {
  if (instance.kind() != kind) {
    throw KindMismatch("expected a " + std::string(to_string(kind)) + " instance");
  }
}

}  // namespace detail

// TotalLevelDiff of n·X_i against M after each half-round (n picks):
// total_level_diff[r-1][i] compares the top r·n entries.
struct RoundRobinTrace {
  std::vector<std::vector<Level>> total_level_diff;
};

// Agents 1..n then n..1, each taking its best remaining item, until nothing
// is left. Requires M = m·n.
inline Allocation balanced_round_robin(const Instance& instance, RoundRobinTrace* trace = nullptr) {
  const std::size_t n = instance.agent_count();
  const std::size_t m_total = instance.item_count();
  if (m_total % n != 0) throw InvalidInput("balanced round-robin needs M to be a multiple of n");
  std::vector<std::size_t> owner(m_total, kNoAgent);
  std::vector<std::size_t> cursor(n, 0);  // position in each ranking already scanned
  std::vector<Level> picked_levels(n, 0);
  Level top_levels = 0;
  const Level big_m = static_cast<Level>(m_total);
  std::size_t taken = 0;

  auto pick = [&](std::size_t agent) {
    const auto& order = instance.ranking(agent).order();
    while (owner[order[cursor[agent]]] != kNoAgent) ++cursor[agent];
    const Item item = order[cursor[agent]];
    owner[item] = agent;
    picked_levels[agent] += instance.ranking(agent).level(item);
    top_levels += big_m - static_cast<Level>(taken);
    ++taken;
  };
  auto record = [&] {
    if (!trace) return;
    std::vector<Level> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = static_cast<Level>(n) * picked_levels[i] - top_levels;
    trace->total_level_diff.push_back(std::move(diffs));
  };

  while (taken < m_total) {
    for (std::size_t i = 0; i < n; ++i) pick(i);
    record();
    if (taken == m_total) break;
    for (std::size_t i = n; i-- > 0;) pick(i);
    record();
  }
  return Allocation::from_owners(owner, n);
}

// An NDDPR allocation exists iff M = m·n and the best items are pairwise
// distinct; balanced round-robin then finds one.
inline ExistenceReport nddpr_exists(const Instance& instance) {
  detail::require_kind(instance, Kind::goods);
  const std::size_t n = instance.agent_count();
  if (instance.item_count() % n != 0) return {Existence::no, ExistenceReason::not_multiple_of_n, std::nullopt};
  std::set<Item> best;
  for (const Ranking& r : instance.rankings()) best.insert(r.best());
  if (best.size() != n) return {Existence::no, ExistenceReason::shared_best_item, std::nullopt};
  return {Existence::yes, ExistenceReason::conditions_met, balanced_round_robin(instance)};
}

// W_i: agent i's ceil((n-1)/2) worst chores.
inline std::vector<std::set<Item>> worst_windows(const Instance& instance) {
  const std::size_t n = instance.agent_count();
  const std::size_t width = n / 2;  // ceil((n-1)/2)
  std::vector<std::set<Item>> windows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& order = instance.ranking(i).order();
    windows[i].insert(order.end() - static_cast<std::ptrdiff_t>(width), order.end());
  }
  return windows;
}

// Whether each agent can take exactly m chores while avoiding its W_i.
// Max flow source → chore (1) → agent not excluding it (1) → sink (m).
inline bool worst_windows_avoidable(const Instance& instance) {
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  const std::size_t n = instance.agent_count();
  const std::size_t m_total = instance.item_count();
  const auto m = static_cast<long>(m_total / n);
  const std::size_t source = 0, sink = 1, first_chore = 2, first_agent = 2 + m_total;
  Graph g(first_agent + n);
  auto capacity = boost::get(boost::edge_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);
  auto connect = [&](std::size_t from, std::size_t to, long cap) {
    const auto e = boost::add_edge(from, to, g).first;
    const auto back = boost::add_edge(to, from, g).first;
    capacity[e] = cap;
    capacity[back] = 0;
    reverse[e] = back;
    reverse[back] = e;
  };
  const auto windows = worst_windows(instance);
  for (Item c = 0; c < m_total; ++c) {
    connect(source, first_chore + c, 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (!windows[i].count(c)) connect(first_chore + c, first_agent + i, 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) connect(first_agent + i, sink, m);
  return boost::push_relabel_max_flow(g, source, sink) == static_cast<long>(m_total);
}

// Necessary condition only: never reports yes.
inline ExistenceReport nidpr_necessary(const Instance& instance) {
  detail::require_kind(instance, Kind::chores);
  if (instance.item_count() % instance.agent_count() != 0) {
    return {Existence::no, ExistenceReason::not_multiple_of_n, std::nullopt};
  }
  if (!worst_windows_avoidable(instance)) {
    return {Existence::no, ExistenceReason::shared_worst_window_infeasible, std::nullopt};
  }
  return {Existence::unknown, ExistenceReason::conditions_met, std::nullopt};
}

inline ExistenceReport nidpr_two_agents(const Instance& instance) {
  detail::require_kind(instance, Kind::chores);
  if (instance.agent_count() != 2) throw InvalidInput("the two-agent protocol needs exactly 2 agents");
  if (instance.item_count() % 2 != 0) return {Existence::no, ExistenceReason::not_multiple_of_n, std::nullopt};
  if (instance.ranking(0).worst() == instance.ranking(1).worst()) {
    return {Existence::no, ExistenceReason::shared_worst_window_infeasible, std::nullopt};
  }
  // Round-robin on the reversed rankings, then each agent takes what the
  // other picked. For two agents, 2·Y ⪰NDD M (reversed) is equivalent to
  // M ⪰NDD 2·(M \ Y) (reversed), i.e. 2·(M \ Y) ⪰NID M. Plain round-robin
  // on the chore rankings can leave an agent its worst chore.
  std::vector<Ranking> reversed;
  for (const Ranking& r : instance.rankings()) reversed.push_back(r.reversed());
  const Allocation exemptions = balanced_round_robin(Instance(Kind::goods, std::move(reversed)));
  std::vector<std::size_t> owner = exemptions.owners();
  for (auto& o : owner) o = 1 - o;
  return {Existence::yes, ExistenceReason::conditions_met, Allocation::from_owners(owner, 2)};
}

// Three agents sharing the same 3 worst chores and ranking the rest
// identically. The three worst chores are placed so that every agent gets
// level >= 2 and someone level >= 3; the remaining chores go worst first in
// rounds of three, the first of each round to the agent with the largest
// TotalLevelDiff (at least 3), the other two in index order.
inline ExistenceReport nidpr_three_agents_special(const Instance& instance) {
  detail::require_kind(instance, Kind::chores);
  if (instance.agent_count() != 3) throw InvalidInput("the three-agent protocol needs exactly 3 agents");
  const std::size_t m_total = instance.item_count();
  if (m_total % 3 != 0) return {Existence::no, ExistenceReason::not_multiple_of_n, std::nullopt};
  const Item worst = instance.ranking(0).worst();
  if (instance.ranking(1).worst() == worst && instance.ranking(2).worst() == worst) {
    return {Existence::no, ExistenceReason::shared_worst_window_infeasible, std::nullopt};
  }
  const auto& base = instance.ranking(0).order();
  const std::set<Item> tail(base.end() - 3, base.end());
  for (std::size_t i = 1; i < 3; ++i) {
    const auto& order = instance.ranking(i).order();
    if (std::set<Item>(order.end() - 3, order.end()) != tail || !std::equal(base.begin(), base.end() - 3, order.begin())) {
      return {Existence::unknown, ExistenceReason::out_of_theory, std::nullopt};
    }
  }

  std::vector<std::size_t> owner(m_total, kNoAgent);
  std::vector<Level> total_level_diff(3, 0);
  std::vector<Item> opening(tail.begin(), tail.end());
  bool placed = false;
  do {
    bool everyone_two = true, someone_three = false;
    for (std::size_t i = 0; i < 3; ++i) {
      const Level level = instance.ranking(i).level(opening[i]);
      everyone_two = everyone_two && level >= 2;
      someone_three = someone_three || level >= 3;
    }
    placed = everyone_two && someone_three;
  } while (!placed && std::next_permutation(opening.begin(), opening.end()));
  if (!placed) throw Error("no opening assignment of the three worst chores");
  for (std::size_t i = 0; i < 3; ++i) {
    owner[opening[i]] = i;
    total_level_diff[i] = 3 * instance.ranking(i).level(opening[i]) - 6;
  }

  // Shared part of the ranking, worst first: levels 4, 5, ..., M.
  const std::size_t rounds = m_total / 3;
  for (std::size_t r = 2; r <= rounds; ++r) {
    const Level block = static_cast<Level>(9 * r - 3);  // levels 3r-2 + 3r-1 + 3r
    const auto first = static_cast<std::size_t>(std::max_element(total_level_diff.begin(), total_level_diff.end()) -
                                                total_level_diff.begin());
    if (total_level_diff[first] < 3) throw Error("three-agent protocol invariant violated");
    std::vector<std::size_t> takers{first};
    for (std::size_t i = 0; i < 3; ++i) {
      if (i != first) takers.push_back(i);
    }
    for (std::size_t j = 0; j < 3; ++j) {
      const Item chore = base[m_total - 3 * r + 2 - j];
      owner[chore] = takers[j];
      total_level_diff[takers[j]] += 3 * instance.ranking(takers[j]).level(chore) - block;
    }
  }
  return {Existence::yes, ExistenceReason::conditions_met, Allocation::from_owners(owner, 3)};
}

}  // namespace ddfair
