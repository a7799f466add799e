#pragma once

// Set extensions: lifting an item ranking to a partial order on
// (multi-)bundles. Each relation X ⪰ Y quantifies over a class of additive
// utilities consistent with the ranking:
//
//   Nec / Pos    all consistent utilities, for all / for some
//   NDD / PDD    diminishing-differences utilities (goods)
//   NID / PID    increasing-differences utilities (chores)
//   NBIN / PBIN  binary threshold utilities U_k
//
// The checkers below decide each relation exactly from level sequences.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ddfair/core.hpp"
#include "ddfair/rng.hpp"

namespace ddfair {

enum class RelationKind { nec, pos, ndd, pdd, nid, pid, nbin, pbin };

inline constexpr RelationKind kAllRelations[] = {RelationKind::nec, RelationKind::pos, RelationKind::ndd,
                                                 RelationKind::pdd, RelationKind::nid, RelationKind::pid,
                                                 RelationKind::nbin, RelationKind::pbin};

inline std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::nec: return "nec";
    case RelationKind::pos: return "pos";
    case RelationKind::ndd: return "ndd";
    case RelationKind::pdd: return "pdd";
    case RelationKind::nid: return "nid";
    case RelationKind::pid: return "pid";
    case RelationKind::nbin: return "nbin";
    case RelationKind::pbin: return "pbin";
  }
  return "?";
}

inline RelationKind parse_relation(std::string_view text) {
  for (RelationKind kind : kAllRelations) {
    if (to_string(kind) == text) return kind;
  }
  throw InvalidInput("unknown relation '" + std::string(text) + "'");
}

// True for the relations defined by a universal quantifier.
inline bool is_necessary(RelationKind kind) {
  return kind == RelationKind::nec || kind == RelationKind::ndd || kind == RelationKind::nid ||
         kind == RelationKind::nbin;
}

// Which kind of items a relation is meant for. Nec/Pos/binary are stated for goods.
inline Kind relation_domain(RelationKind kind) {
  return kind == RelationKind::nid || kind == RelationKind::pid ? Kind::chores : Kind::goods;
}

namespace detail {

// All functions in this namespace take level sequences sorted best first.

inline Level sum_of(std::span<const Level> levels) {
  Level s = 0;
  for (Level l : levels) s += l;
  return s;
}

// Top-k prefix sums of X never fall below those of Y (k = 1..|Y|), and |X| >= |Y|.
inline bool ndd_levels(std::span<const Level> x, std::span<const Level> y) {
  if (x.size() < y.size()) return false;
  Level total_level_diff = 0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    total_level_diff += x[j] - y[j];
    if (total_level_diff < 0) return false;
  }
  return true;
}

// X ⪰PDD Y: |X| > |Y|, or some top-k prefix of X strictly beats Y's, or Lev(X) >= Lev(Y).
inline bool pdd_levels(std::span<const Level> x, std::span<const Level> y) {
  if (x.size() > y.size()) return true;
  Level total_level_diff = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    total_level_diff += x[j] - y[j];
    if (total_level_diff > 0) return true;
  }
  return sum_of(x) >= sum_of(y);
}

// Responsive dominance: |X| >= |Y| and, for each k <= |Y|, X has at least as
// many items strictly above its k-th best item as Y has.
inline bool nec_levels(std::span<const Level> x, std::span<const Level> y) {
  if (x.size() < y.size()) return false;
  std::size_t first_equal = 0;  // number of X items strictly above x[k]
  std::size_t y_above = 0;      // number of Y items strictly above x[k]
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (k > 0 && x[k] != x[k - 1]) first_equal = k;
    while (y_above < y.size() && y[y_above] > x[k]) ++y_above;
    if (first_equal < y_above) return false;
  }
  return true;
}

// Not (Y beats X under every consistent utility). Y beats X strictly under
// every consistent utility iff Y ⪰Nec X and the two level multisets differ.
inline bool pos_levels(std::span<const Level> x, std::span<const Level> y) {
  if (!nec_levels(y, x)) return true;
  return std::equal(x.begin(), x.end(), y.begin(), y.end());
}

// U_k(X) - U_k(Y) for k = 1..M, where U_k counts items of level >= k.
inline std::vector<std::int64_t> threshold_gaps(std::span<const Level> x, std::span<const Level> y,
                                                std::size_t item_count) {
  std::vector<std::int64_t> at_level(item_count + 2, 0);
  for (Level l : x) ++at_level[static_cast<std::size_t>(l)];
  for (Level l : y) --at_level[static_cast<std::size_t>(l)];
  std::vector<std::int64_t> gaps(item_count + 1, 0);  // gaps[k], index 0 unused
  std::int64_t running = 0;
  for (std::size_t k = item_count; k >= 1; --k) {
    running += at_level[k];
    gaps[k] = running;
  }
  return gaps;
}

inline bool nbin_levels(std::span<const Level> x, std::span<const Level> y, std::size_t item_count) {
  const auto gaps = threshold_gaps(x, y, item_count);
  for (std::size_t k = 1; k <= item_count; ++k) {
    if (gaps[k] < 0) return false;
  }
  return true;
}

inline bool pbin_levels(std::span<const Level> x, std::span<const Level> y, std::size_t item_count) {
  const auto gaps = threshold_gaps(x, y, item_count);
  for (std::size_t k = 1; k <= item_count; ++k) {
    if (gaps[k] >= 0) return true;
  }
  return false;
}

// Levels under the reversed ranking (M+1-l), still sorted best first.
inline std::vector<Level> reversed_levels(std::span<const Level> levels, std::size_t item_count) {
  std::vector<Level> out(levels.size());
  const Level top = static_cast<Level>(item_count) + 1;
  for (std::size_t i = 0; i < levels.size(); ++i) out[levels.size() - 1 - i] = top - levels[i];
  return out;
}

// X ⪰NID Y: |X| <= |Y| and the k worst chores of X have total level at least
// that of the k worst of Y, for k = 1..|X|.
inline bool nid_levels(std::span<const Level> x, std::span<const Level> y) {
  if (x.size() > y.size()) return false;
  Level total_level_diff = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    total_level_diff += x[x.size() - 1 - j] - y[y.size() - 1 - j];
    if (total_level_diff < 0) return false;
  }
  return true;
}

// X ⪰PID Y ⟺ Y ⪰PDD X under the reversed ranking.
inline bool pid_levels(std::span<const Level> x, std::span<const Level> y, std::size_t item_count) {
  return pdd_levels(reversed_levels(y, item_count), reversed_levels(x, item_count));
}

inline bool holds_levels(RelationKind kind, std::span<const Level> x, std::span<const Level> y,
                         std::size_t item_count) {
  switch (kind) {
    case RelationKind::nec: return nec_levels(x, y);
    case RelationKind::pos: return pos_levels(x, y);
    case RelationKind::ndd: return ndd_levels(x, y);
    case RelationKind::pdd: return pdd_levels(x, y);
    case RelationKind::nid: return nid_levels(x, y);
    case RelationKind::pid: return pid_levels(x, y, item_count);
    case RelationKind::nbin: return nbin_levels(x, y, item_count);
    case RelationKind::pbin: return pbin_levels(x, y, item_count);
  }
  return false;
}

}  // namespace detail

// Exact truth value of X ⪰kind Y under `ranking`.
inline bool holds(RelationKind kind, const MultiBundle& x, const MultiBundle& y, const Ranking& ranking) {
  const std::vector<Level> xl = levels_descending(x, ranking);
  const std::vector<Level> yl = levels_descending(y, ranking);
  return detail::holds_levels(kind, xl, yl, ranking.item_count());
}

// Independent check of X ⪰NDD Y. Every DD utility is a·1 + Σ_k c_k·hinge_k
// with hinge_k(level) = max(0, level - k), a > 0, c_1 > 0, c_k >= 0, so the
// relation holds iff X dominates Y on the size and on every hinge.
inline bool ndd_generator_oracle(const MultiBundle& x, const MultiBundle& y, const Ranking& ranking) {
  if (x.size() < y.size()) return false;
  const Level m = static_cast<Level>(ranking.item_count());
  for (Level k = 1; k < m; ++k) {
    Level hx = 0, hy = 0;
    for (const auto& [item, count] : x) hx += static_cast<Level>(count) * std::max<Level>(0, ranking.level(item) - k);
    for (const auto& [item, count] : y) hy += static_cast<Level>(count) * std::max<Level>(0, ranking.level(item) - k);
    if (hx < hy) return false;
  }
  return true;
}

namespace detail {

// DD utility with u(X) < u(Y). When |Y| > |X| a cardinality-dominated
// utility; otherwise level + B·hinge_k on a hinge k where Y is ahead, with
// B = M·|X| + 1 exceeding any level-sum advantage of X.
inline std::optional<UtilityFunction<Exact>> ndd_refuter(const MultiBundle& x, const MultiBundle& y,
                                                         const Ranking& ranking) {
  const std::vector<Level> xl = levels_descending(x, ranking);
  const std::vector<Level> yl = levels_descending(y, ranking);
  const Level m = static_cast<Level>(ranking.item_count());
  if (yl.size() > xl.size()) {
    const Level shift = m * static_cast<Level>(yl.size());
    return UtilityFunction<Exact>::from_levels(ranking, [shift](Level level) { return Exact(shift + level); });
  }
  auto hinge_sum = [](const std::vector<Level>& levels, Level k) {
    Level total = 0;
    for (Level l : levels) total += std::max<Level>(0, l - k);
    return total;
  };
  for (Level k = 1; k < m; ++k) {
    if (hinge_sum(xl, k) < hinge_sum(yl, k)) {
      const Level step = m * static_cast<Level>(xl.size()) + 1;
      return UtilityFunction<Exact>::from_levels(
          ranking, [=](Level level) { return Exact(level + step * std::max<Level>(0, level - k)); });
    }
  }
  return std::nullopt;
}

// Consistent utility with u(X) < u(Y): a step of height B = M·|X| + 1 on a
// threshold k where Y has more items of level >= k.
inline std::optional<UtilityFunction<Exact>> nec_refuter(const MultiBundle& x, const MultiBundle& y,
                                                         const Ranking& ranking) {
  const std::vector<Level> xl = levels_descending(x, ranking);
  const std::vector<Level> yl = levels_descending(y, ranking);
  const std::size_t m = ranking.item_count();
  const auto gaps = threshold_gaps(xl, yl, m);
  for (std::size_t k = m; k >= 1; --k) {
    if (gaps[k] < 0) {
      const Level step = static_cast<Level>(m * xl.size()) + 1;
      const Level threshold = static_cast<Level>(k);
      return UtilityFunction<Exact>::from_levels(ranking, [=](Level level) {
        return Exact(level + (level >= threshold ? step : 0));
      });
    }
  }
  return std::nullopt;
}

}  // namespace detail

// A utility from the relation's class under which u(X) < u(Y), or nullopt
// when the relation holds. For the possible-relations, a failing relation
// means every member of the class refutes, so a canonical member is returned.
inline std::optional<UtilityFunction<Exact>> refuting_utility(RelationKind kind, const MultiBundle& x,
                                                              const MultiBundle& y, const Ranking& ranking) {
  if (holds(kind, x, y, ranking)) return std::nullopt;
  switch (kind) {
    case RelationKind::ndd: return detail::ndd_refuter(x, y, ranking);
    case RelationKind::nid: {
      auto u = detail::ndd_refuter(y, x, ranking.reversed());
      if (!u) return std::nullopt;
      return u->negated();
    }
    case RelationKind::nec: return detail::nec_refuter(x, y, ranking);
    case RelationKind::pos:
    case RelationKind::pdd: return borda_utility(ranking);
    case RelationKind::pid: return negative_borda_utility(ranking);
    case RelationKind::nbin: {
      const std::size_t m = ranking.item_count();
      const auto gaps = detail::threshold_gaps(levels_descending(x, ranking), levels_descending(y, ranking), m);
      for (std::size_t k = m; k >= 1; --k) {
        if (gaps[k] < 0) return threshold_utility(ranking, static_cast<Level>(k)).as<Exact>();
      }
      return std::nullopt;
    }
    case RelationKind::pbin: return threshold_utility(ranking, static_cast<Level>(ranking.item_count())).as<Exact>();
  }
  return std::nullopt;
}

namespace detail {

// Utility values by level (index 0 = level 1) built from positive increments.
inline std::vector<std::int64_t> cumulative_by_level(std::int64_t base, const std::vector<std::int64_t>& increments) {
  std::vector<std::int64_t> by_level(increments.size() + 1);
  by_level[0] = base;
  for (std::size_t i = 0; i < increments.size(); ++i) by_level[i + 1] = by_level[i] + increments[i];
  return by_level;
}

inline UtilityFunction<std::int64_t> utility_from_level_values(const Ranking& ranking,
                                                               const std::vector<std::int64_t>& by_level) {
  return UtilityFunction<std::int64_t>::from_levels(
      ranking, [&](Level level) { return by_level[static_cast<std::size_t>(level - 1)]; });
}

}  // namespace detail

// Random DD utility: base and M-1 increments drawn from (0, 1] on a 2^-24
// grid (kept as integers), increments sorted so gaps grow toward the top.
inline UtilityFunction<std::int64_t> sample_dd_utility(const Ranking& ranking, Rng& rng) {
  const std::int64_t base = uniform_tick(rng);
  std::vector<std::int64_t> increments(ranking.item_count() - 1);
  for (auto& inc : increments) inc = uniform_tick(rng);
  std::sort(increments.begin(), increments.end());
  return detail::utility_from_level_values(ranking, detail::cumulative_by_level(base, increments));
}

// Random ID chore utility: the negation of a DD utility for the reversed ranking.
inline UtilityFunction<std::int64_t> sample_id_utility(const Ranking& ranking, Rng& rng) {
  return sample_dd_utility(ranking.reversed(), rng).negated();
}

// Random consistent utility with unconstrained gaps.
inline UtilityFunction<std::int64_t> sample_consistent_utility(const Ranking& ranking, Rng& rng) {
  const std::int64_t base = uniform_tick(rng);
  std::vector<std::int64_t> increments(ranking.item_count() - 1);
  for (auto& inc : increments) inc = uniform_tick(rng);
  return detail::utility_from_level_values(ranking, detail::cumulative_by_level(base, increments));
}

// Searches the relation's utility class for u with u(X) < u(Y). Any returned
// utility is a genuine counterexample; nullopt proves nothing (except for
// NBIN, whose M members are enumerated exhaustively).
inline std::optional<UtilityFunction<std::int64_t>> sampled_utility_refuter(RelationKind kind, const MultiBundle& x,
                                                                            const MultiBundle& y,
                                                                            const Ranking& ranking,
                                                                            std::size_t samples, std::uint64_t seed) {
  auto refutes = [&](const UtilityFunction<std::int64_t>& u) { return utility_of(x, u) < utility_of(y, u); };
  if (kind == RelationKind::nbin) {
    for (Level k = 1; k <= static_cast<Level>(ranking.item_count()); ++k) {
      auto u = threshold_utility(ranking, k);
      if (refutes(u)) return u;
    }
    return std::nullopt;
  }
  if (kind != RelationKind::ndd && kind != RelationKind::nid && kind != RelationKind::nec) {
    throw Unsupported("sampled refuter supports ndd, nid, nec and nbin only");
  }
  if (samples == 0) throw InvalidInput("sampled refuter needs at least one sample");
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    UtilityFunction<std::int64_t> u = kind == RelationKind::ndd   ? sample_dd_utility(ranking, rng)
                                      : kind == RelationKind::nid ? sample_id_utility(ranking, rng)
                                                                  : sample_consistent_utility(ranking, rng);
    if (refutes(u)) return u;
  }
  return std::nullopt;
}

}  // namespace ddfair
