#pragma once

// Domain types shared by every module: rankings and the levels they induce,
// multi-bundles, allocations, instances and additive utility functions.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ddfair/errors.hpp"

namespace ddfair {

// Items are dense identifiers 0..M-1.
using Item = std::size_t;
// Borda score of an item under some ranking: best item has level M, worst 1.
using Level = std::int64_t;
// Exact arithmetic for certificates and oracle paths.
using Exact = boost::multiprecision::cpp_rational;

enum class Kind { goods, chores };

inline std::string_view to_string(Kind kind) {
  return kind == Kind::goods ? "goods" : "chores";
}

inline Kind parse_kind(std::string_view text) {
  if (text == "goods") return Kind::goods;
  if (text == "chores") return Kind::chores;
  throw InvalidInput("unknown kind '" + std::string(text) + "'");
}

// A strict total order over the items 0..M-1, stored best to worst.
class Ranking {
 public:
  explicit Ranking(std::vector<Item> order) : order_(std::move(order)) {
    if (order_.empty()) throw InvalidInput("ranking must contain at least one item");
    const std::size_t m = order_.size();
    level_.assign(m, 0);
    for (std::size_t pos = 0; pos < m; ++pos) {
      const Item item = order_[pos];
      if (item >= m) {
        throw InvalidInput("ranking mentions item " + std::to_string(item) +
                           " outside 0.." + std::to_string(m - 1));
      }
      if (level_[item] != 0) {
        throw InvalidInput("ranking lists item " + std::to_string(item) + " twice");
      }
      level_[item] = static_cast<Level>(m - pos);
    }
  }

  // Ranking where item M-1 is best and item 0 is worst, so level(i) == i + 1.
  static Ranking descending(std::size_t item_count) {
    std::vector<Item> order(item_count);
    for (std::size_t pos = 0; pos < item_count; ++pos) order[pos] = item_count - 1 - pos;
    return Ranking(std::move(order));
  }

  std::size_t item_count() const { return order_.size(); }
  const std::vector<Item>& order() const { return order_; }

  Level level(Item item) const {
    if (item >= level_.size()) {
      throw InvalidInput("unknown item " + std::to_string(item));
    }
    return level_[item];
  }

  Item at_level(Level level) const {
    if (level < 1 || level > static_cast<Level>(order_.size())) {
      throw InvalidInput("level " + std::to_string(level) + " out of range");
    }
    return order_[order_.size() - static_cast<std::size_t>(level)];
  }

  Item best() const { return order_.front(); }
  Item worst() const { return order_.back(); }

  bool prefers(Item a, Item b) const { return level(a) > level(b); }

  Ranking reversed() const {
    return Ranking(std::vector<Item>(order_.rbegin(), order_.rend()));
  }

  friend bool operator==(const Ranking& a, const Ranking& b) { return a.order_ == b.order_; }

 private:
  std::vector<Item> order_;
  std::vector<Level> level_;
};

// Multiset of items. Plain bundles are the special case with all
// multiplicities equal to one.
class MultiBundle {
 public:
  MultiBundle() = default;
  MultiBundle(std::initializer_list<Item> items) {
    for (Item item : items) add(item);
  }

  static MultiBundle of(std::span<const Item> items) {
    MultiBundle bundle;
    for (Item item : items) bundle.add(item);
    return bundle;
  }

  // Every item in 0..item_count-1 once.
  static MultiBundle all(std::size_t item_count) {
    MultiBundle bundle;
    for (Item item = 0; item < item_count; ++item) bundle.add(item);
    return bundle;
  }

  void add(Item item, std::size_t copies = 1) {
    if (copies == 0) return;
    counts_[item] += copies;
    size_ += copies;
  }

  // Removes one copy; the item must be present.
  void remove(Item item) {
    auto it = counts_.find(item);
    if (it == counts_.end()) throw InvalidInput("item " + std::to_string(item) + " not in bundle");
    if (--it->second == 0) counts_.erase(it);
    --size_;
  }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  std::size_t multiplicity(Item item) const {
    auto it = counts_.find(item);
    return it == counts_.end() ? 0 : it->second;
  }

  bool contains(Item item) const { return counts_.count(item) != 0; }

  bool is_set() const {
    return std::all_of(counts_.begin(), counts_.end(), [](const auto& kv) { return kv.second == 1; });
  }

  // k·X: every item copied k times.
  MultiBundle scaled(std::size_t factor) const {
    MultiBundle out;
    for (const auto& [item, count] : counts_) out.add(item, count * factor);
    return out;
  }

  MultiBundle united(const MultiBundle& other) const {
    MultiBundle out = *this;
    for (const auto& [item, count] : other.counts_) out.add(item, count);
    return out;
  }

  // Items expanded by multiplicity, in identifier order.
  std::vector<Item> items() const {
    std::vector<Item> out;
    out.reserve(size_);
    for (const auto& [item, count] : counts_) out.insert(out.end(), count, item);
    return out;
  }

  auto begin() const { return counts_.begin(); }
  auto end() const { return counts_.end(); }

  friend bool operator==(const MultiBundle& a, const MultiBundle& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::map<Item, std::size_t> counts_;
  std::size_t size_ = 0;
};

// Levels of the bundle's items (with multiplicity) under `ranking`, best first.
inline std::vector<Level> levels_descending(const MultiBundle& bundle, const Ranking& ranking) {
  std::vector<Level> levels;
  levels.reserve(bundle.size());
  for (const auto& [item, count] : bundle) levels.insert(levels.end(), count, ranking.level(item));
  std::sort(levels.begin(), levels.end(), std::greater<>());
  return levels;
}

enum class Direction { top, bottom };

// result[k-1] = total level of the k best (top) or k worst (bottom) items.
inline std::vector<Level> level_prefix_sums(const MultiBundle& bundle, const Ranking& ranking,
                                            Direction direction) {
  std::vector<Level> levels = levels_descending(bundle, ranking);
  if (direction == Direction::bottom) std::reverse(levels.begin(), levels.end());
  std::partial_sum(levels.begin(), levels.end(), levels.begin());
  return levels;
}

inline Level total_level(const MultiBundle& bundle, const Ranking& ranking) {
  Level sum = 0;
  for (const auto& [item, count] : bundle) sum += static_cast<Level>(count) * ranking.level(item);
  return sum;
}

// Owner placeholder for items not yet assigned.
inline constexpr std::size_t kNoAgent = static_cast<std::size_t>(-1);

// A partition of all items into per-agent bundles.
class Allocation {
 public:
  Allocation(std::vector<std::vector<Item>> bundles, std::size_t item_count)
      : owner_(item_count, kNoAgent) {
    bundles_.reserve(bundles.size());
    for (std::size_t agent = 0; agent < bundles.size(); ++agent) {
      for (Item item : bundles[agent]) {
        if (item >= item_count) {
          throw InvalidInput("allocation mentions unknown item " + std::to_string(item));
        }
        if (owner_[item] != kNoAgent) {
          throw InvalidInput("item " + std::to_string(item) + " allocated twice");
        }
        owner_[item] = agent;
      }
      bundles_.push_back(MultiBundle::of(bundles[agent]));
    }
    for (Item item = 0; item < item_count; ++item) {
      if (owner_[item] == kNoAgent) {
        throw InvalidInput("item " + std::to_string(item) + " is not allocated");
      }
    }
  }

  // owner[item] = agent receiving the item.
  static Allocation from_owners(std::span<const std::size_t> owner, std::size_t agent_count) {
    std::vector<std::vector<Item>> bundles(agent_count);
    for (Item item = 0; item < owner.size(); ++item) {
      if (owner[item] >= agent_count) {
        throw InvalidInput("owner of item " + std::to_string(item) + " out of range");
      }
      bundles[owner[item]].push_back(item);
    }
    return Allocation(std::move(bundles), owner.size());
  }

  std::size_t agent_count() const { return bundles_.size(); }
  std::size_t item_count() const { return owner_.size(); }
  const MultiBundle& bundle(std::size_t agent) const { return bundles_.at(agent); }
  const std::vector<MultiBundle>& bundles() const { return bundles_; }
  std::size_t owner(Item item) const { return owner_.at(item); }
  const std::vector<std::size_t>& owners() const { return owner_; }

  friend bool operator==(const Allocation& a, const Allocation& b) { return a.owner_ == b.owner_; }

 private:
  std::vector<MultiBundle> bundles_;
  std::vector<std::size_t> owner_;
};

// n agents with strict rankings over the same M items.
class Instance {
 public:
  Instance(Kind kind, std::vector<Ranking> rankings) : kind_(kind), rankings_(std::move(rankings)) {
    if (rankings_.empty()) throw InvalidInput("instance needs at least one agent");
    const std::size_t m = rankings_.front().item_count();
    for (const Ranking& r : rankings_) {
      if (r.item_count() != m) throw InvalidInput("rankings disagree on the number of items");
    }
  }

  Kind kind() const { return kind_; }
  std::size_t agent_count() const { return rankings_.size(); }
  std::size_t item_count() const { return rankings_.front().item_count(); }
  const Ranking& ranking(std::size_t agent) const { return rankings_.at(agent); }
  const std::vector<Ranking>& rankings() const { return rankings_; }
  MultiBundle all_items() const { return MultiBundle::all(item_count()); }

  void require_compatible(const Allocation& alloc) const {
    if (alloc.agent_count() != agent_count() || alloc.item_count() != item_count()) {
      throw InvalidInput("allocation shape does not match the instance");
    }
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.kind_ == b.kind_ && a.rankings_ == b.rankings_;
  }

 private:
  Kind kind_;
  std::vector<Ranking> rankings_;
};

// Additive utility: values[item]. V is an exact type (integers, Exact) or a
// floating type; classification uses exact comparison for the former and an
// absolute tolerance of 1e-12 for the latter.
template <class V>
class UtilityFunction {
 public:
  using value_type = V;

  UtilityFunction() = default;
  explicit UtilityFunction(std::vector<V> values) : values_(std::move(values)) {}

  // u(item) = f(level of item under ranking).
  template <class F>
  static UtilityFunction from_levels(const Ranking& ranking, F&& f) {
    std::vector<V> values(ranking.item_count());
    for (Item item = 0; item < values.size(); ++item) values[item] = V(f(ranking.level(item)));
    return UtilityFunction(std::move(values));
  }

  std::size_t item_count() const { return values_.size(); }
  const std::vector<V>& values() const { return values_; }

  const V& operator()(Item item) const {
    if (item >= values_.size()) {
      throw InvalidInput("utility has no value for item " + std::to_string(item));
    }
    return values_[item];
  }

  // Same function expressed in another value type.
  template <class W>
  UtilityFunction<W> as() const {
    std::vector<W> out;
    out.reserve(values_.size());
    for (const V& v : values_) out.push_back(W(v));
    return UtilityFunction<W>(std::move(out));
  }

  UtilityFunction negated() const {
    std::vector<V> out;
    out.reserve(values_.size());
    for (const V& v : values_) out.push_back(-v);
    return UtilityFunction(std::move(out));
  }

 private:
  std::vector<V> values_;
};

template <class V>
using UtilityProfile = std::vector<UtilityFunction<V>>;

template <class V>
V utility_of(const MultiBundle& bundle, const UtilityFunction<V>& u) {
  V sum = V(0);
  for (const auto& [item, count] : bundle) sum += u(item) * V(static_cast<long long>(count));
  return sum;
}

namespace detail {

inline constexpr double kFloatTolerance = 1e-12;

template <class V>
bool weakly_greater(const V& a, const V& b) {
  if constexpr (std::is_floating_point_v<V>) {
    return a >= b - V(kFloatTolerance);
  } else {
    return a >= b;
  }
}

template <class V>
bool nearly_equal(const V& a, const V& b) {
  if constexpr (std::is_floating_point_v<V>) {
    return std::abs(a - b) <= V(kFloatTolerance);
  } else {
    return a == b;
  }
}

// u evaluated at levels 1..M, worst to best.
template <class V>
std::vector<V> values_by_level(const UtilityFunction<V>& u, const Ranking& ranking) {
  if (u.item_count() != ranking.item_count()) {
    throw InvalidInput("utility and ranking cover different item sets");
  }
  std::vector<V> by_level(ranking.item_count());
  for (Level level = 1; level <= static_cast<Level>(by_level.size()); ++level) {
    by_level[static_cast<std::size_t>(level - 1)] = u(ranking.at_level(level));
  }
  return by_level;
}

// sign > 0: differences must not shrink toward the top (DD);
// sign < 0: differences must not grow toward the top (ID).
template <class V>
bool differences_monotone(const UtilityFunction<V>& u, const Ranking& ranking, int sign) {
  const std::vector<V> v = values_by_level(u, ranking);
  for (std::size_t i = 0; i + 2 < v.size(); ++i) {
    const V lower = v[i + 1] - v[i];
    const V upper = v[i + 2] - v[i + 1];
    const bool ok = sign > 0 ? weakly_greater(upper, lower) : weakly_greater(lower, upper);
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

// x ≻ y ⟺ u(x) > u(y).
template <class V>
bool is_consistent(const UtilityFunction<V>& u, const Ranking& ranking) {
  const std::vector<V> v = detail::values_by_level(u, ranking);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] > v[i])) return false;
  }
  return true;
}

// Strictly positive on every item (goods) or strictly negative (chores).
template <class V>
bool has_sign_of(const UtilityFunction<V>& u, Kind kind) {
  return std::all_of(u.values().begin(), u.values().end(), [kind](const V& v) {
    return kind == Kind::goods ? v > V(0) : v < V(0);
  });
}

// Consistent, and for every three consecutive levels the upper gap is at
// least the lower gap.
template <class V>
bool classify_dd(const UtilityFunction<V>& u, const Ranking& ranking) {
  return is_consistent(u, ranking) && detail::differences_monotone(u, ranking, +1);
}

// Consistent, and the upper gap is at most the lower gap.
template <class V>
bool classify_id(const UtilityFunction<V>& u, const Ranking& ranking) {
  return is_consistent(u, ranking) && detail::differences_monotone(u, ranking, -1);
}

// Threshold level k in 1..M if u is 1 on levels >= k and 0 below.
template <class V>
std::optional<Level> binary_threshold(const UtilityFunction<V>& u, const Ranking& ranking) {
  const std::vector<V> v = detail::values_by_level(u, ranking);
  for (Level k = 1; k <= static_cast<Level>(v.size()); ++k) {
    bool match = true;
    for (Level level = 1; level <= static_cast<Level>(v.size()) && match; ++level) {
      const V expected = level >= k ? V(1) : V(0);
      match = detail::nearly_equal(v[static_cast<std::size_t>(level - 1)], expected);
    }
    if (match) return k;
  }
  return std::nullopt;
}

template <class V>
bool classify_binary(const UtilityFunction<V>& u, const Ranking& ranking) {
  return binary_threshold(u, ranking).has_value();
}

// Common utility functions.

inline UtilityFunction<Exact> borda_utility(const Ranking& ranking) {
  return UtilityFunction<Exact>::from_levels(ranking, [](Level level) { return Exact(level); });
}

// 2^level: bundles compare by their best differing item.
inline UtilityFunction<Exact> lexicographic_utility(const Ranking& ranking) {
  return UtilityFunction<Exact>::from_levels(ranking, [](Level level) {
    return Exact(boost::multiprecision::cpp_int(1) << static_cast<unsigned>(level));
  });
}

// level - M - 1: chores valued -1 (easiest) .. -M (hardest).
inline UtilityFunction<Exact> negative_borda_utility(const Ranking& ranking) {
  const Level m = static_cast<Level>(ranking.item_count());
  return UtilityFunction<Exact>::from_levels(ranking, [m](Level level) { return Exact(level - m - 1); });
}

// U_k: 1 on levels >= k, 0 below.
inline UtilityFunction<std::int64_t> threshold_utility(const Ranking& ranking, Level k) {
  return UtilityFunction<std::int64_t>::from_levels(
      ranking, [k](Level level) -> std::int64_t { return level >= k ? 1 : 0; });
}

}  // namespace ddfair
