#pragma once

// Monte-Carlo estimate of how often proportional allocations exist when
// agents share a market value per item plus independent uniform noise.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ddfair/core.hpp"
#include "ddfair/errors.hpp"
#include "ddfair/fairness.hpp"
#include "ddfair/protocols.hpp"
#include "ddfair/rng.hpp"
#include "ddfair/search.hpp"

namespace ddfair {

struct SimConfig {
  std::vector<double> noise_levels;
  std::vector<std::size_t> item_pair_counts;  // m; each trial has n·m items
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t agents = 2;

  static SimConfig paper_defaults(std::uint64_t seed) {
    SimConfig config;
    for (int a = 1; a <= 10; ++a) config.noise_levels.push_back(a / 10.0);
    for (std::size_t m = 2; m <= 8; ++m) config.item_pair_counts.push_back(m);
    config.seed = seed;
    return config;
  }

  void validate() const {
    if (noise_levels.empty() || item_pair_counts.empty()) throw InvalidInput("simulation needs A and m values");
    for (double a : noise_levels) {
      if (!(a > 0)) throw InvalidInput("noise level A must be positive");
    }
    for (std::size_t m : item_pair_counts) {
      if (m == 0) throw InvalidInput("m must be positive");
    }
    if (trials == 0) throw InvalidInput("trials must be at least 1");
    if (agents < 2) throw InvalidInput("simulation needs at least 2 agents");
  }
};

struct SimCell {
  double noise = 0;
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t necpr = 0, nddpr = 0, pddpr = 0, pospr = 0;
  std::size_t rr_cardinal_proportional = 0;  // NDDPR exists and round-robin is cardinally proportional

  double p(std::size_t count) const { return static_cast<double>(count) / static_cast<double>(trials); }
  double p_necpr() const { return p(necpr); }
  double p_nddpr() const { return p(nddpr); }
  double p_pddpr() const { return p(pddpr); }
  double p_pospr() const { return p(pospr); }
  double p_rr_cardinal_proportional() const { return p(rr_cardinal_proportional); }
};

struct SimProfile {
  std::vector<std::vector<double>> values;  // values[agent][item]
  Instance instance;
};

// Market value U[1,2] per item, agent value market + U[-A,A], rankings by
// value with ties to the lower item id.
inline SimProfile generate_profile(std::size_t m, double noise, Rng& rng, std::size_t agents = 2) {
  if (!(noise > 0)) throw InvalidInput("noise level A must be positive");
  const std::size_t item_count = agents * m;
  std::vector<double> market(item_count);
  for (double& v : market) v = uniform_real(rng, 1.0, 2.0);
  std::vector<std::vector<double>> values(agents, std::vector<double>(item_count));
  std::vector<Ranking> rankings;
  for (std::size_t i = 0; i < agents; ++i) {
    for (Item item = 0; item < item_count; ++item) values[i][item] = market[item] + uniform_real(rng, -noise, noise);
    std::vector<Item> order(item_count);
    for (Item item = 0; item < item_count; ++item) order[item] = item;
    std::stable_sort(order.begin(), order.end(), [&](Item a, Item b) { return values[i][a] > values[i][b]; });
    rankings.emplace_back(std::move(order));
  }
  return {std::move(values), Instance(Kind::goods, std::move(rankings))};
}

struct TrialOutcome {
  bool necpr = false, nddpr = false, pddpr = false, pospr = false;
  bool rr_cardinal_proportional = false;
};

inline bool cardinally_proportional(const Allocation& alloc, const std::vector<std::vector<double>>& values) {
  const auto n = static_cast<double>(alloc.agent_count());
  for (std::size_t i = 0; i < alloc.agent_count(); ++i) {
    double total = 0, own = 0;
    for (double v : values[i]) total += v;
    for (const auto& [item, count] : alloc.bundle(i)) own += values[i][item] * static_cast<double>(count);
    if (own < total / n - detail::kFloatTolerance) return false;
  }
  return true;
}

// One trial with its invariants asserted; a violation throws Error.
inline TrialOutcome run_trial(const SimProfile& profile, const SearchBudget& budget = {}) {
  const Instance& inst = profile.instance;
  TrialOutcome out;
  out.necpr = exists_allocation(inst, {Criterion::pr, RelationKind::nec}, budget).has_value();
  out.nddpr = exists_allocation(inst, {Criterion::pr, RelationKind::ndd}, budget).has_value();
  out.pddpr = exists_allocation(inst, {Criterion::pr, RelationKind::pdd}, budget).has_value();
  out.pospr = exists_allocation(inst, {Criterion::pr, RelationKind::pos}, budget).has_value();
  if ((out.necpr && !out.nddpr) || (out.nddpr && !out.pddpr) || (out.pddpr && !out.pospr)) {
    throw Error("implication chain NecPR => NDDPR => PDDPR => PosPR violated");
  }
  const ExistenceReport report = nddpr_exists(inst);
  if ((report.exists == Existence::yes) != out.nddpr) throw Error("NDDPR search disagrees with the existence condition");
  if (report.allocation) {
    const Allocation& rr = *report.allocation;
    if (!check_proportional(rr, inst, RelationKind::ndd).result) throw Error("round-robin output is not NDDPR");
    out.rr_cardinal_proportional = cardinally_proportional(rr, profile.values);
    bool all_dd = true;
    for (std::size_t i = 0; i < inst.agent_count(); ++i) {
      all_dd = all_dd && classify_dd(UtilityFunction<double>(profile.values[i]), inst.ranking(i));
    }
    if (all_dd && !out.rr_cardinal_proportional) throw Error("round-robin output not proportional under DD values");
  }
  return out;
}

// Trial t of cell (a, m) uses the stream derive_seed(seed, {a, m, t}), so
// cells are independent of each other and of evaluation order.
inline std::vector<SimCell> run_experiment(const SimConfig& config, const SearchBudget& budget = {}) {
  config.validate();
  std::vector<SimCell> cells;
  for (std::size_t a = 0; a < config.noise_levels.size(); ++a) {
    for (std::size_t mi = 0; mi < config.item_pair_counts.size(); ++mi) {
      SimCell cell;
      cell.noise = config.noise_levels[a];
      cell.m = config.item_pair_counts[mi];
      cell.trials = config.trials;
      for (std::size_t t = 0; t < config.trials; ++t) {
        Rng rng(derive_seed(config.seed, {a, mi, t}));
        const TrialOutcome o = run_trial(generate_profile(cell.m, cell.noise, rng, config.agents), budget);
        cell.necpr += o.necpr;
        cell.nddpr += o.nddpr;
        cell.pddpr += o.pddpr;
        cell.pospr += o.pospr;
        cell.rr_cardinal_proportional += o.rr_cardinal_proportional;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

namespace detail {

inline std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace detail

inline void write_csv(std::ostream& out, const SimConfig& config, const std::vector<SimCell>& cells) {
  out << "# seed=" << config.seed << " trials=" << config.trials << " agents=" << config.agents << "\n";
  out << "# A:";
  for (double a : config.noise_levels) out << " " << detail::fixed4(a);
  out << "\n# m:";
  for (std::size_t m : config.item_pair_counts) out << " " << m;
  out << "\n# values: market U[1,2] + noise U[-A,A]; ties to the lower item id; mt19937_64 per trial, "
         "seeded by splitmix64 over (seed, A index, m index, trial)\n";
  out << "A,m,trials,p_necpr,p_nddpr,p_pddpr,p_pospr,p_rr_cardinal_proportional\n";
  for (const SimCell& c : cells) {
    out << detail::fixed4(c.noise) << "," << c.m << "," << c.trials << "," << detail::fixed4(c.p_necpr()) << ","
        << detail::fixed4(c.p_nddpr()) << "," << detail::fixed4(c.p_pddpr()) << "," << detail::fixed4(c.p_pospr())
        << "," << detail::fixed4(c.p_rr_cardinal_proportional()) << "\n";
  }
}

}  // namespace ddfair
