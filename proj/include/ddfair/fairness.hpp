#pragma once

// Fairness and efficiency verdicts for a fixed allocation, either under a
// set extension (a quantifier over a utility class) or under one concrete
// utility profile. Every negative verdict carries a certificate that can be
// re-checked without this header.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ddfair/budget.hpp"
#include "ddfair/core.hpp"
#include "ddfair/extensions.hpp"

namespace ddfair {

enum class Criterion { pr, ef, pe };

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::pr: return "pr";
    case Criterion::ef: return "ef";
    case Criterion::pe: return "pe";
  }
  return "?";
}

inline Criterion parse_criterion(std::string_view text) {
  if (text == "pr") return Criterion::pr;
  if (text == "ef") return Criterion::ef;
  if (text == "pe") return Criterion::pe;
  throw InvalidInput("unknown criterion '" + std::string(text) + "'");
}

// Agent whose bundle fails proportionality; `refuter` is a utility from the
// extension's class with n·u(X_i) < u(M).
struct ViolatingAgent {
  std::size_t agent = 0;
  std::optional<UtilityFunction<Exact>> refuter;
};

// `envious` does not weakly prefer its bundle to the bundle of `envied`.
struct EnvyPair {
  std::size_t envious = 0;
  std::size_t envied = 0;
  std::optional<UtilityFunction<Exact>> refuter;
};

// Agent `single_owner` holds `single`; agent `pair_owner` holds `first` and
// `second` and ranks `single` above both.
struct OneForTwoSwap {
  std::size_t single_owner = 0;
  Item single = 0;
  std::size_t pair_owner = 0;
  Item first = 0;
  Item second = 0;
};

struct DominatingAllocation {
  Allocation allocation;
};

using Certificate = std::variant<std::monostate, ViolatingAgent, EnvyPair, OneForTwoSwap, DominatingAllocation>;

struct FairnessVerdict {
  Criterion criterion = Criterion::pr;
  std::string extension;  // relation name, or "profile"
  bool result = true;
  Certificate certificate;
};

inline constexpr std::string_view kProfileExtension = "profile";

namespace detail {

inline void require_relation_kind(RelationKind relation, const Instance& instance) {
  if (relation_domain(relation) != instance.kind()) {
    throw KindMismatch("extension " + std::string(to_string(relation)) + " does not apply to " +
                       std::string(to_string(instance.kind())));
  }
  if (relation == RelationKind::nbin || relation == RelationKind::pbin) {
    throw InvalidInput("binary extensions are not fairness extensions");
  }
}

template <class V>
void require_profile(const UtilityProfile<V>& profile, const Instance& instance) {
  if (profile.size() != instance.agent_count()) throw InvalidInput("profile size differs from agent count");
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i].item_count() != instance.item_count() || !is_consistent(profile[i], instance.ranking(i))) {
      throw InvalidInput("utility of agent " + std::to_string(i) + " is not consistent with its ranking");
    }
    if (!has_sign_of(profile[i], instance.kind())) {
      throw InvalidInput("utility of agent " + std::to_string(i) + " has the wrong sign for " +
                         std::string(to_string(instance.kind())));
    }
  }
}

template <class V>
bool strictly_greater(const V& a, const V& b) {
  return !weakly_greater(b, a);
}

}  // namespace detail

// ∀i: n·X_i ⪰ M under agent i's ranking.
inline FairnessVerdict check_proportional(const Allocation& alloc, const Instance& instance, RelationKind relation) {
  detail::require_relation_kind(relation, instance);
  instance.require_compatible(alloc);
  FairnessVerdict verdict{Criterion::pr, std::string(to_string(relation)), true, {}};
  const std::size_t n = instance.agent_count();
  const MultiBundle everything = instance.all_items();
  for (std::size_t i = 0; i < n; ++i) {
    const MultiBundle share = alloc.bundle(i).scaled(n);
    if (!holds(relation, share, everything, instance.ranking(i))) {
      verdict.result = false;
      verdict.certificate = ViolatingAgent{i, refuting_utility(relation, share, everything, instance.ranking(i))};
      return verdict;
    }
  }
  return verdict;
}

// Envy-freeness is pairwise only for the necessary extensions; PDD/Pos/PID
// need one joint profile and have no pairwise test.
inline FairnessVerdict check_envy_free(const Allocation& alloc, const Instance& instance, RelationKind relation) {
  detail::require_relation_kind(relation, instance);
  if (!is_necessary(relation)) {
    throw Unsupported("envy-freeness under " + std::string(to_string(relation)) +
                      " has no pairwise characterization; use a concrete profile or the witness search");
  }
  instance.require_compatible(alloc);
  FairnessVerdict verdict{Criterion::ef, std::string(to_string(relation)), true, {}};
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    for (std::size_t j = 0; j < instance.agent_count(); ++j) {
      if (i == j) continue;
      if (!holds(relation, alloc.bundle(i), alloc.bundle(j), instance.ranking(i))) {
        verdict.result = false;
        verdict.certificate =
            EnvyPair{i, j, refuting_utility(relation, alloc.bundle(i), alloc.bundle(j), instance.ranking(i))};
        return verdict;
      }
    }
  }
  return verdict;
}

template <class V>
FairnessVerdict check_proportional(const Allocation& alloc, const Instance& instance,
                                   const UtilityProfile<V>& profile) {
  detail::require_profile(profile, instance);
  instance.require_compatible(alloc);
  FairnessVerdict verdict{Criterion::pr, std::string(kProfileExtension), true, {}};
  const auto n = static_cast<long long>(instance.agent_count());
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    const V share = utility_of(alloc.bundle(i), profile[i]) * V(n);
    if (!detail::weakly_greater(share, utility_of(instance.all_items(), profile[i]))) {
      verdict.result = false;
      verdict.certificate = ViolatingAgent{i, std::nullopt};
      return verdict;
    }
  }
  return verdict;
}

template <class V>
FairnessVerdict check_envy_free(const Allocation& alloc, const Instance& instance, const UtilityProfile<V>& profile) {
  detail::require_profile(profile, instance);
  instance.require_compatible(alloc);
  FairnessVerdict verdict{Criterion::ef, std::string(kProfileExtension), true, {}};
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    const V own = utility_of(alloc.bundle(i), profile[i]);
    for (std::size_t j = 0; j < instance.agent_count(); ++j) {
      if (i != j && !detail::weakly_greater(own, utility_of(alloc.bundle(j), profile[i]))) {
        verdict.result = false;
        verdict.certificate = EnvyPair{i, j, std::nullopt};
        return verdict;
      }
    }
  }
  return verdict;
}

namespace detail {

// Depth-first search for an allocation that no agent values less than
// `alloc` and some agent values more. values[i][item] is agent i's value.
// An agent that cannot reach its current value even with every unassigned
// item of positive value cuts the branch.
template <class V>
std::optional<Allocation> find_pareto_dominator(const Allocation& alloc, const std::vector<std::vector<V>>& values,
                                                const SearchBudget& budget) {
  const std::size_t n = values.size();
  const std::size_t m = alloc.item_count();
  std::vector<V> target(n, V(0)), current(n, V(0)), headroom(n, V(0));
  for (std::size_t i = 0; i < n; ++i) {
    for (Item item = 0; item < m; ++item) {
      if (alloc.owner(item) == i) target[i] += values[i][item];
      if (values[i][item] > V(0)) headroom[i] += values[i][item];
    }
  }
  BudgetMeter meter(budget);
  std::vector<std::size_t> owner(m, 0);
  std::optional<Allocation> found;

  auto visit = [&](auto&& self, Item item) -> void {
    meter.tick();
    for (std::size_t i = 0; i < n; ++i) {
      if (!weakly_greater(V(current[i] + headroom[i]), target[i])) return;
    }
    if (item == m) {
      bool better = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!weakly_greater(current[i], target[i])) return;
        better = better || strictly_greater(current[i], target[i]);
      }
      if (better) found = Allocation::from_owners(owner, n);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) headroom[i] -= std::max(V(0), values[i][item]);
    for (std::size_t agent = 0; agent < n && !found; ++agent) {
      owner[item] = agent;
      current[agent] += values[agent][item];
      self(self, item + 1);
      current[agent] -= values[agent][item];
    }
    for (std::size_t i = 0; i < n; ++i) headroom[i] += std::max(V(0), values[i][item]);
  };
  visit(visit, Item{0});
  return found;
}

// Bit level-1 set for each item: bundles compare under 2^level exactly.
inline std::vector<std::vector<std::uint64_t>> lexicographic_bits(const Instance& instance) {
  if (instance.item_count() > 64) throw Unsupported("lexicographic Pareto search supports at most 64 items");
  std::vector<std::vector<std::uint64_t>> bits(instance.agent_count(), std::vector<std::uint64_t>(instance.item_count()));
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    for (Item item = 0; item < instance.item_count(); ++item) {
      bits[i][item] = std::uint64_t{1} << (instance.ranking(i).level(item) - 1);
    }
  }
  return bits;
}

}  // namespace detail

// First one-for-two swap in (single_owner, single, pair_owner, first, second) order.
inline std::optional<OneForTwoSwap> find_one_for_two_swap(const Allocation& alloc, const Instance& instance) {
  instance.require_compatible(alloc);
  for (std::size_t a = 0; a < instance.agent_count(); ++a) {
    for (Item x : alloc.bundle(a).items()) {
      for (std::size_t b = 0; b < instance.agent_count(); ++b) {
        if (b == a) continue;
        std::vector<Item> worse;
        for (Item y : alloc.bundle(b).items()) {
          if (instance.ranking(b).prefers(x, y)) worse.push_back(y);
          if (worse.size() == 2) return OneForTwoSwap{a, x, b, worse[0], worse[1]};
        }
      }
    }
  }
  return std::nullopt;
}

inline Allocation apply_swap(const Allocation& alloc, const OneForTwoSwap& swap) {
  std::vector<std::size_t> owner = alloc.owners();
  owner[swap.single] = swap.pair_owner;
  owner[swap.first] = swap.single_owner;
  owner[swap.second] = swap.single_owner;
  return Allocation::from_owners(owner, alloc.agent_count());
}

// DD profile under which the swap is a strict Pareto improvement: the agent
// receiving two items counts items first (M² + level), the other agent is
// lexicographic. Bystanders are lexicographic too.
inline UtilityProfile<Exact> swap_refuting_profile(const Instance& instance, const OneForTwoSwap& swap) {
  UtilityProfile<Exact> profile;
  const Level m = static_cast<Level>(instance.item_count());
  for (std::size_t i = 0; i < instance.agent_count(); ++i) {
    if (i == swap.single_owner) {
      profile.push_back(UtilityFunction<Exact>::from_levels(instance.ranking(i),
                                                            [m](Level level) { return Exact(m * m + level); }));
    } else {
      profile.push_back(lexicographic_utility(instance.ranking(i)));
    }
  }
  return profile;
}

template <class V>
FairnessVerdict check_pareto(const Allocation& alloc, const Instance& instance, const UtilityProfile<V>& profile,
                             const SearchBudget& budget = {}) {
  detail::require_profile(profile, instance);
  instance.require_compatible(alloc);
  std::vector<std::vector<V>> values;
  for (const auto& u : profile) values.push_back(u.values());
  FairnessVerdict verdict{Criterion::pe, std::string(kProfileExtension), true, {}};
  if (auto dominator = detail::find_pareto_dominator(alloc, values, budget)) {
    verdict.result = false;
    verdict.certificate = DominatingAllocation{*dominator};
  }
  return verdict;
}

// Nec and NDD give the same Pareto notion, as do Pos and PDD. PosPE is
// Pareto-efficiency under the lexicographic profile; NecPE additionally
// rules out one-for-two swaps.
inline FairnessVerdict check_pareto(const Allocation& alloc, const Instance& instance, RelationKind relation,
                                    const SearchBudget& budget = {}) {
  detail::require_relation_kind(relation, instance);
  if (relation != RelationKind::nec && relation != RelationKind::ndd && relation != RelationKind::pos &&
      relation != RelationKind::pdd) {
    throw Unsupported("Pareto-efficiency for chores is decided only under a concrete profile");
  }
  instance.require_compatible(alloc);
  FairnessVerdict verdict{Criterion::pe, std::string(to_string(relation)), true, {}};
  const bool necessary = relation == RelationKind::nec || relation == RelationKind::ndd;
  if (necessary) {
    if (auto swap = find_one_for_two_swap(alloc, instance)) {
      verdict.result = false;
      verdict.certificate = *swap;
      return verdict;
    }
  }
  if (auto dominator = detail::find_pareto_dominator(alloc, detail::lexicographic_bits(instance), budget)) {
    verdict.result = false;
    verdict.certificate = DominatingAllocation{*dominator};
  }
  return verdict;
}

inline FairnessVerdict check(Criterion criterion, const Allocation& alloc, const Instance& instance,
                             RelationKind relation, const SearchBudget& budget = {}) {
  switch (criterion) {
    case Criterion::pr: return check_proportional(alloc, instance, relation);
    case Criterion::ef: return check_envy_free(alloc, instance, relation);
    case Criterion::pe: return check_pareto(alloc, instance, relation, budget);
  }
  throw InvalidInput("unknown criterion");
}

}  // namespace ddfair
