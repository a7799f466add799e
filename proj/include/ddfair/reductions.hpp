#pragma once

// Exact-3-cover to NDDEF. Item layout: main items 0..3q-1 (one per base
// element), then the dummy triplets, then the auxiliary triplets. Agent
// 3i+r is position r of the agent triplet for C_i.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ddfair/budget.hpp"
#include "ddfair/core.hpp"
#include "ddfair/errors.hpp"
#include "ddfair/rng.hpp"

namespace ddfair {

using Triplet = std::array<std::size_t, 3>;

struct X3CInstance {
  std::size_t base_size = 0;  // 3q
  std::vector<Triplet> triplets;

  std::size_t q() const { return base_size / 3; }

  void validate() const {
    if (base_size == 0 || base_size % 3 != 0) throw InvalidInput("base size must be a positive multiple of 3");
    if (triplets.size() < q()) throw InvalidInput("need at least q triplets");
    for (const Triplet& t : triplets) {
      for (std::size_t e : t) {
        if (e >= base_size) throw InvalidInput("triplet element " + std::to_string(e) + " outside the base set");
      }
      if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw InvalidInput("triplet elements must be distinct");
    }
  }
};

struct ReducedInstance {
  Instance instance;
  std::vector<Triplet> main;   // Main_i, in the cyclic order of agent 3i
  std::vector<Triplet> dummy;  // Dummy_i
  std::vector<Triplet> aux;    // Aux_j for j = q+1..n, stored from index 0
  std::vector<Triplet> agents;
};

namespace detail {

inline Triplet rotated(const Triplet& t, std::size_t r) { return {t[r % 3], t[(r + 1) % 3], t[(r + 2) % 3]}; }

}  // namespace detail

inline ReducedInstance reduce(const X3CInstance& x3c) {
  x3c.validate();
  const std::size_t n = x3c.triplets.size();
  const std::size_t q = x3c.q();
  const std::size_t item_count = 6 * n;
  const std::size_t dummy_base = 3 * q;
  const std::size_t aux_base = dummy_base + 3 * n;

  std::vector<Triplet> main, dummy, aux, agents;
  for (std::size_t i = 0; i < n; ++i) {
    Triplet t = x3c.triplets[i];
    std::sort(t.begin(), t.end());
    main.push_back(t);
    dummy.push_back({dummy_base + 3 * i, dummy_base + 3 * i + 1, dummy_base + 3 * i + 2});
    agents.push_back({3 * i, 3 * i + 1, 3 * i + 2});
  }
  for (std::size_t j = 0; j < n - q; ++j) aux.push_back({aux_base + 3 * j, aux_base + 3 * j + 1, aux_base + 3 * j + 2});

  std::vector<Ranking> rankings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < 3; ++r) {
      std::vector<Item> order;
      std::vector<bool> placed(item_count, false);
      auto put = [&](Item item) {
        order.push_back(item);
        placed[item] = true;
      };
      for (Item item : detail::rotated(dummy[i], r)) put(item);
      for (Item item : detail::rotated(main[i], r)) put(item);
      for (const Triplet& a : aux) {
        for (Item item : detail::rotated(a, r)) put(item);
      }
      for (Item item = dummy_base; item < aux_base; ++item) {
        if (!placed[item]) put(item);
      }
      for (Item item = 0; item < dummy_base; ++item) {
        if (!placed[item]) put(item);
      }
      rankings.emplace_back(std::move(order));
    }
  }
  return {Instance(Kind::goods, std::move(rankings)), std::move(main), std::move(dummy), std::move(aux),
          std::move(agents)};
}

// Indices of q pairwise-disjoint triplets covering the base, first in
// lexicographic order of index sets.
inline std::optional<std::vector<std::size_t>> solve_x3c(const X3CInstance& x3c, const SearchBudget& budget = {}) {
  x3c.validate();
  const std::size_t n = x3c.triplets.size();
  BudgetMeter meter(budget);
  std::vector<bool> covered(x3c.base_size, false);
  std::vector<std::size_t> chosen;
  auto fits = [&](const Triplet& t) {
    return std::none_of(t.begin(), t.end(), [&](std::size_t e) { return covered[e]; });
  };
  auto mark = [&](const Triplet& t, bool value) {
    for (std::size_t e : t) covered[e] = value;
  };
  auto search = [&](auto&& self, std::size_t from) -> bool {
    meter.tick();
    if (chosen.size() == x3c.q()) return true;
    for (std::size_t i = from; i < n; ++i) {
      if (!fits(x3c.triplets[i])) continue;
      mark(x3c.triplets[i], true);
      chosen.push_back(i);
      if (self(self, i + 1)) return true;
      chosen.pop_back();
      mark(x3c.triplets[i], false);
    }
    return false;
  };
  if (search(search, 0)) return chosen;
  return std::nullopt;
}

// Random instance with q·3 base elements and n triplets. With
// `plant_cover` the triplets include a random partition of the base.
inline X3CInstance random_x3c(std::size_t q, std::size_t n, Rng& rng, bool plant_cover) {
  if (q == 0 || n < q) throw InvalidInput("random X3C needs 1 <= q <= n");
  X3CInstance x3c{3 * q, {}};
  auto shuffle = [&](auto& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
  };
  if (plant_cover) {
    std::vector<std::size_t> base(3 * q);
    for (std::size_t e = 0; e < base.size(); ++e) base[e] = e;
    shuffle(base);
    for (std::size_t t = 0; t < q; ++t) x3c.triplets.push_back({base[3 * t], base[3 * t + 1], base[3 * t + 2]});
  }
  while (x3c.triplets.size() < n) {
    std::vector<std::size_t> base(3 * q);
    for (std::size_t e = 0; e < base.size(); ++e) base[e] = e;
    shuffle(base);
    x3c.triplets.push_back({base[0], base[1], base[2]});
  }
  shuffle(x3c.triplets);
  return x3c;
}

}  // namespace ddfair
