#pragma once

// Exhaustive searches over allocations. Items are assigned in id order and
// agents tried in index order, so enumeration order and returned witnesses
// are the lexicographically first owner vectors.

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "ddfair/budget.hpp"
#include "ddfair/core.hpp"
#include "ddfair/extensions.hpp"
#include "ddfair/fairness.hpp"
#include "ddfair/protocols.hpp"
#include "ddfair/rng.hpp"

namespace ddfair {

// Calls `visit` for every allocation (every equal-size allocation when
// `equal_sizes`); stops early when `visit` returns false.
inline void enumerate_allocations(const Instance& instance, bool equal_sizes,
                                  const std::function<bool(const Allocation&)>& visit,
                                  const SearchBudget& budget = {}) {
  const std::size_t n = instance.agent_count();
  const std::size_t m_total = instance.item_count();
  if (equal_sizes && m_total % n != 0) return;
  const std::size_t quota = equal_sizes ? m_total / n : m_total;
  BudgetMeter meter(budget);
  std::vector<std::size_t> owner(m_total, kNoAgent), sizes(n, 0);
  bool stop = false;
  auto step = [&](auto&& self, Item item) -> void {
    meter.tick();
    if (item == m_total) {
      stop = !visit(Allocation::from_owners(owner, n));
      return;
    }
    for (std::size_t agent = 0; agent < n && !stop; ++agent) {
      if (sizes[agent] == quota) continue;
      owner[item] = agent;
      ++sizes[agent];
      self(self, item + 1);
      --sizes[agent];
    }
  };
  step(step, Item{0});
}

struct AllocationGoal {
  Criterion criterion = Criterion::pr;
  RelationKind relation = RelationKind::ndd;
};

namespace detail {

// Relations whose proportionality forces |X_i| = M/n.
inline bool forces_equal_sizes(RelationKind r) {
  return r == RelationKind::nec || r == RelationKind::ndd || r == RelationKind::nid;
}

class AllocationSearch {
 public:
  AllocationSearch(const Instance& instance, AllocationGoal goal, const SearchBudget& budget)
      : instance_(instance),
        goal_(goal),
        meter_(budget),
        n_(instance.agent_count()),
        m_(instance.item_count()),
        everything_(instance.all_items()),
        owner_(m_, kNoAgent),
        bundles_(n_),
        sizes_(n_, 0) {}

  std::optional<Allocation> run() {
    const bool equal = forces_equal_sizes(goal_.relation);
    if (equal && m_ % n_ != 0) return std::nullopt;
    quota_ = equal ? m_ / n_ : m_;
    forced_.assign(m_, kNoAgent);
    if (goal_.relation == RelationKind::nec || goal_.relation == RelationKind::ndd) {
      // The top-1 prefix condition: every agent holds its best item.
      for (std::size_t i = 0; i < n_; ++i) {
        const Item best = instance_.ranking(i).best();
        if (forced_[best] != kNoAgent) return std::nullopt;
        forced_[best] = i;
      }
    }
    if (goal_.relation == RelationKind::nid) windows_ = worst_windows(instance_);
    // Forced items go first; they have a single choice, so the order over
    // owner vectors is unchanged while bundles complete earlier.
    for (Item item = 0; item < m_; ++item) {
      if (forced_[item] != kNoAgent) order_.push_back(item);
    }
    for (Item item = 0; item < m_; ++item) {
      if (forced_[item] == kNoAgent) order_.push_back(item);
    }
    step(0);
    return found_;
  }

 private:
  bool goods() const { return instance_.kind() == Kind::goods; }

  // Can agent i still be proportional? Goods: check against everything it
  // could still receive. Chores: adding chores never helps, so check the
  // partial bundle.
  bool proportional_possible(std::size_t i, const MultiBundle& unassigned) const {
    const MultiBundle reachable = goods() && !complete(i) ? bundles_[i].united(unassigned) : bundles_[i];
    return holds(goal_.relation, reachable.scaled(n_), everything_, instance_.ranking(i));
  }

  bool complete(std::size_t i) const { return quota_ != m_ && sizes_[i] == quota_; }

  bool prune(std::size_t next) const {
    MultiBundle unassigned;
    for (std::size_t pos = next; pos < m_; ++pos) unassigned.add(order_[pos]);
    for (std::size_t i = 0; i < n_; ++i) {
      if (!proportional_possible(i, unassigned)) return true;
    }
    if (goal_.criterion == Criterion::ef) {
      for (std::size_t i = 0; i < n_; ++i) {
        if (!complete(i)) continue;
        for (std::size_t j = 0; j < n_; ++j) {
          // For goods a partial X_j only improves; for chores wait until it is complete.
          if (i == j || !(goods() || complete(j))) continue;
          if (!holds(goal_.relation, bundles_[i], bundles_[j], instance_.ranking(i))) return true;
        }
      }
    }
    return false;
  }

  bool accept(const Allocation& a) const {
    return check(goal_.criterion, a, instance_, goal_.relation).result;
  }

  void step(std::size_t pos) {
    if (found_) return;
    meter_.tick();
    if (prune(pos)) return;
    if (pos == m_) {
      const Allocation a = Allocation::from_owners(owner_, n_);
      if (accept(a)) found_ = a;
      return;
    }
    const Item item = order_[pos];
    for (std::size_t agent = 0; agent < n_ && !found_; ++agent) {
      if (sizes_[agent] == quota_) continue;
      if (forced_[item] != kNoAgent && forced_[item] != agent) continue;
      if (!windows_.empty() && windows_[agent].count(item)) continue;
      owner_[item] = agent;
      bundles_[agent].add(item);
      ++sizes_[agent];
      step(pos + 1);
      --sizes_[agent];
      bundles_[agent].remove(item);
    }
    owner_[item] = kNoAgent;
  }

  const Instance& instance_;
  AllocationGoal goal_;
  BudgetMeter meter_;
  std::size_t n_, m_;
  MultiBundle everything_;
  std::vector<std::size_t> owner_;
  std::vector<MultiBundle> bundles_;
  std::vector<std::size_t> sizes_;
  std::size_t quota_ = 0;
  std::vector<std::size_t> forced_;
  std::vector<Item> order_;
  std::vector<std::set<Item>> windows_;
  std::optional<Allocation> found_;
};

}  // namespace detail

// The lexicographically first allocation meeting the goal, or nullopt after
// exhausting the space. Throws BudgetExceeded when undecided.
inline std::optional<Allocation> exists_allocation(const Instance& instance, AllocationGoal goal,
                                                   const SearchBudget& budget = {}) {
  if (goal.criterion == Criterion::pe) throw Unsupported("allocation search supports pr and ef goals");
  detail::require_relation_kind(goal.relation, instance);
  if (goal.criterion == Criterion::ef && !is_necessary(goal.relation)) {
    throw Unsupported("envy-freeness under " + std::string(to_string(goal.relation)) + " has no decision procedure");
  }
  return detail::AllocationSearch(instance, goal, budget).run();
}

// Samples DD profiles looking for one under which `alloc` is envy-free.
// A returned profile is a genuine witness; nullopt proves nothing.
inline std::optional<UtilityProfile<std::int64_t>> pddef_witness_search(const Instance& instance,
                                                                       const Allocation& alloc, std::size_t samples,
                                                                       std::uint64_t seed) {
  detail::require_kind(instance, Kind::goods);
  instance.require_compatible(alloc);
  if (samples == 0) throw InvalidInput("witness search needs at least one sample");
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    UtilityProfile<std::int64_t> profile;
    for (const Ranking& r : instance.rankings()) profile.push_back(sample_dd_utility(r, rng));
    if (check_envy_free(alloc, instance, profile).result) return profile;
  }
  return std::nullopt;
}

}  // namespace ddfair
