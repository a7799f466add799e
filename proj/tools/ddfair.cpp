#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "ddfair/errors.hpp"
#include "ddfair/extensions.hpp"
#include "ddfair/fairness.hpp"
#include "ddfair/io.hpp"
#include "ddfair/protocols.hpp"
#include "ddfair/reductions.hpp"
#include "ddfair/search.hpp"
#include "ddfair/simulate.hpp"

namespace {

using namespace ddfair;

enum Exit : int { kHolds = 0, kFails = 1, kError = 2, kUndecided = 3 };

struct Options {
  bool json = false;
  std::optional<std::uint64_t> budget;
};

SearchBudget budget_from(const Options& opts) {
  SearchBudget budget;
  if (opts.budget) {
    budget.max_states = *opts.budget;
  } else if (const char* env = std::getenv("DDFAIR_BUDGET")) {
    try {
      budget.max_states = std::stoull(env);
    } catch (const std::exception&) {
      throw InvalidInput(std::string("DDFAIR_BUDGET is not a number: '") + env + "'");
    }
  }
  return budget;
}

json utility_json(const Profile& p, const UtilityFunction<Exact>& u) {
  json out = json::object();
  for (Item item = 0; item < p.items.size(); ++item) out[p.items[item]] = u(item).str();
  return out;
}

std::string utility_text(const Profile& p, const UtilityFunction<Exact>& u, const Ranking& ranking) {
  std::string out;
  for (Item item : ranking.order()) {
    if (!out.empty()) out += " ";
    out += p.items[item] + "=" + u(item).str();
  }
  return out;
}

void emit(const Options& opts, const json& doc, const std::string& text) {
  if (opts.json) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << text;
  }
}

json read_json_arg(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) {
    try {
      return json::parse(arg);
    } catch (const json::exception& e) {
      throw InvalidInput(std::string("malformed JSON argument: ") + e.what());
    }
  }
  return detail::read_json_file(arg);
}

// ---------------------------------------------------------------- compare

struct CompareArgs {
  std::string profile, agent, x, y, relation;
};

int cmd_compare(const CompareArgs& a, const Options& opts) {
  const Profile p = read_profile(a.profile);
  const std::size_t agent = a.agent.empty() ? 0 : p.agent(a.agent);
  const RelationKind relation = parse_relation(a.relation);
  const Ranking& ranking = p.instance.ranking(agent);
  const MultiBundle x = parse_bundle(p, a.x);
  const MultiBundle y = parse_bundle(p, a.y);
  const bool result = holds(relation, x, y, ranking);
  json doc{{"relation", to_string(relation)}, {"agent", p.agents[agent]}, {"x", format_bundle(p, x)},
           {"y", format_bundle(p, y)}, {"holds", result}};
  std::ostringstream text;
  text << "X = {" << format_bundle(p, x) << "}, Y = {" << format_bundle(p, y) << "}, agent " << p.agents[agent]
       << ": X " << (result ? "" : "not ") << to_string(relation) << "-at-least Y\n";
  if (!result) {
    if (auto u = refuting_utility(relation, x, y, ranking)) {
      doc["refuter"] = utility_json(p, *u);
      text << "refuting utility: " << utility_text(p, *u, ranking) << "\n";
      text << "u(X) = " << utility_of(x, *u).str() << " < u(Y) = " << utility_of(y, *u).str() << "\n";
    }
  }
  emit(opts, doc, text.str());
  return result ? kHolds : kFails;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string profile, allocation, criterion, extension;
};

json certificate_json(const Profile& p, const Certificate& c, std::string& text) {
  std::ostringstream t;
  json doc;
  if (const auto* v = std::get_if<ViolatingAgent>(&c)) {
    doc = {{"type", "violating_agent"}, {"agent", p.agents[v->agent]}};
    t << p.agents[v->agent] << " is not proportional\n";
    if (v->refuter) {
      doc["refuter"] = utility_json(p, *v->refuter);
      t << "refuting utility: " << utility_text(p, *v->refuter, p.instance.ranking(v->agent)) << "\n";
    }
  } else if (const auto* e = std::get_if<EnvyPair>(&c)) {
    doc = {{"type", "envy"}, {"envious", p.agents[e->envious]}, {"envied", p.agents[e->envied]}};
    t << p.agents[e->envious] << " envies " << p.agents[e->envied] << "\n";
    if (e->refuter) {
      doc["refuter"] = utility_json(p, *e->refuter);
      t << "refuting utility: " << utility_text(p, *e->refuter, p.instance.ranking(e->envious)) << "\n";
    }
  } else if (const auto* s = std::get_if<OneForTwoSwap>(&c)) {
    doc = {{"type", "one_for_two_swap"},
           {"single_owner", p.agents[s->single_owner]},
           {"single", p.items[s->single]},
           {"pair_owner", p.agents[s->pair_owner]},
           {"pair", {p.items[s->first], p.items[s->second]}}};
    t << "swap: " << p.agents[s->single_owner] << " gives " << p.items[s->single] << " to "
      << p.agents[s->pair_owner] << " for " << p.items[s->first] << "," << p.items[s->second] << "\n";
  } else if (const auto* d = std::get_if<DominatingAllocation>(&c)) {
    doc = {{"type", "dominating_allocation"}, {"allocation", allocation_to_json(p, d->allocation)}};
    t << "dominated by " << allocation_to_json(p, d->allocation).dump() << "\n";
  }
  text = t.str();
  return doc;
}

int cmd_check(const CheckArgs& a, const Options& opts) {
  const Profile p = read_profile(a.profile);
  const Allocation alloc = allocation_from_json(p, read_json_arg(a.allocation));
  const Criterion criterion = parse_criterion(a.criterion);
  const RelationKind relation = parse_relation(a.extension);
  const FairnessVerdict verdict = check(criterion, alloc, p.instance, relation, budget_from(opts));
  std::string cert_text;
  json doc{{"criterion", to_string(criterion)}, {"extension", verdict.extension}, {"result", verdict.result}};
  const json cert = certificate_json(p, verdict.certificate, cert_text);
  if (!cert.is_null()) doc["certificate"] = cert;
  std::ostringstream text;
  text << to_string(relation) << to_string(criterion) << ": " << (verdict.result ? "holds" : "does not hold") << "\n"
       << cert_text;
  emit(opts, doc, text.str());
  return verdict.result ? kHolds : kFails;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string profile, goal, method = "protocol";
};

struct SolveResult {
  Existence exists = Existence::unknown;
  std::string reason;
  std::optional<Allocation> allocation;
};

SolveResult from_report(const ExistenceReport& r) {
  return {r.exists, std::string(to_string(r.reason)), r.allocation};
}

SolveResult from_search(const std::optional<Allocation>& found) {
  if (found) return {Existence::yes, "found", found};
  return {Existence::no, "exhaustive", std::nullopt};
}

SolveResult solve(const Profile& p, const std::string& goal, const std::string& method, const SearchBudget& budget) {
  const Instance& inst = p.instance;
  const bool search = method == "search";
  if (method != "condition" && method != "protocol" && !search) throw InvalidInput("unknown method '" + method + "'");
  if (goal == "nddpr") {
    if (search) return from_search(exists_allocation(inst, {Criterion::pr, RelationKind::ndd}, budget));
    SolveResult r = from_report(nddpr_exists(inst));
    if (method == "condition") r.allocation.reset();
    return r;
  }
  if (goal == "nidpr") {
    if (search) return from_search(exists_allocation(inst, {Criterion::pr, RelationKind::nid}, budget));
    if (method == "condition") return from_report(nidpr_necessary(inst));
    if (inst.agent_count() == 2) return from_report(nidpr_two_agents(inst));
    if (inst.agent_count() == 3) return from_report(nidpr_three_agents_special(inst));
    throw Unsupported("no NIDPR protocol for " + std::to_string(inst.agent_count()) + " agents; use --method search");
  }
  if (goal == "nddef") {
    if (search) return from_search(exists_allocation(inst, {Criterion::ef, RelationKind::ndd}, budget));
    if (inst.agent_count() > 2) {
      throw Unsupported("NDDEF has no existence condition for 3 or more agents; use --method search");
    }
    // Two agents: NDDEF and NDDPR coincide.
    SolveResult r = from_report(nddpr_exists(inst));
    if (method == "condition") r.allocation.reset();
    return r;
  }
  if (goal == "necpr") {
    if (!search) throw Unsupported("NecPR is decided by --method search only");
    return from_search(exists_allocation(inst, {Criterion::pr, RelationKind::nec}, budget));
  }
  throw InvalidInput("unknown goal '" + goal + "'");
}

int cmd_solve(const SolveArgs& a, const Options& opts) {
  const Profile p = read_profile(a.profile);
  const SolveResult r = solve(p, a.goal, a.method, budget_from(opts));
  json doc{{"goal", a.goal}, {"method", a.method}, {"exists", to_string(r.exists)}, {"reason", r.reason}};
  std::ostringstream text;
  if (r.allocation) {
    // Every printed allocation is re-verified against the goal.
    const bool chores = a.goal == "nidpr";
    const Criterion c = a.goal == "nddef" ? Criterion::ef : Criterion::pr;
    const RelationKind rel = chores ? RelationKind::nid : a.goal == "necpr" ? RelationKind::nec : RelationKind::ndd;
    const bool verified = check(c, *r.allocation, p.instance, rel).result;
    if (!verified) throw Error("internal: produced allocation fails " + a.goal);
    doc["allocation"] = allocation_to_json(p, *r.allocation);
    doc["verified"] = verified;
    text << "exists: " << allocation_to_json(p, *r.allocation).dump() << " (verified)\n";
  } else if (r.exists == Existence::yes) {
    text << "exists: " << r.reason << "\n";
  } else if (r.exists == Existence::no) {
    text << "does not exist: " << r.reason << "\n";
  } else {
    text << "unknown: " << r.reason << "\n";
  }
  emit(opts, doc, text.str());
  switch (r.exists) {
    case Existence::yes: return kHolds;
    case Existence::no: return kFails;
    case Existence::unknown: return kUndecided;
  }
  return kError;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string config, out;
  std::uint64_t seed = 0;
  std::optional<std::size_t> trials;
};

SimConfig read_sim_config(const std::string& path, std::uint64_t seed) {
  SimConfig config = SimConfig::paper_defaults(seed);
  if (path.empty()) return config;
  const json doc = detail::read_json_file(path);
  try {
    if (doc.contains("noise_levels")) config.noise_levels = doc.at("noise_levels").get<std::vector<double>>();
    if (doc.contains("item_pair_counts")) {
      config.item_pair_counts = doc.at("item_pair_counts").get<std::vector<std::size_t>>();
    }
    if (doc.contains("trials")) config.trials = doc.at("trials").get<std::size_t>();
    if (doc.contains("agents")) config.agents = doc.at("agents").get<std::size_t>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed simulation config: ") + e.what());
  }
  return config;
}

int cmd_simulate(const SimulateArgs& a, const Options& opts) {
  SimConfig config = read_sim_config(a.config, a.seed);
  if (a.trials) config.trials = *a.trials;
  const auto cells = run_experiment(config, budget_from(opts));
  std::ostringstream csv;
  write_csv(csv, config, cells);
  if (a.out.empty() || a.out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(a.out);
    if (!out) throw InvalidInput("cannot write '" + a.out + "'");
    out << csv.str();
    json doc{{"out", a.out}, {"cells", cells.size()}, {"seed", config.seed}};
    emit(opts, doc, "wrote " + std::to_string(cells.size()) + " cells to " + a.out + "\n");
  }
  return kHolds;
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  std::string x3c, out;
};

int cmd_reduce(const ReduceArgs& a, const Options& opts) {
  const X3CInstance x3c = x3c_from_json(detail::read_json_file(a.x3c));
  const Profile p = reduced_profile(reduce(x3c));
  const json doc = profile_to_json(p);
  if (a.out.empty() || a.out == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(a.out);
    if (!out) throw InvalidInput("cannot write '" + a.out + "'");
    out << doc.dump(2) << "\n";
    emit(opts, json{{"out", a.out}, {"items", p.items.size()}, {"agents", p.agents.size()}},
         "wrote " + std::to_string(p.agents.size()) + " agents over " + std::to_string(p.items.size()) +
             " items to " + a.out + "\n");
  }
  return kHolds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ordinal fairness under diminishing/increasing differences"};
  app.require_subcommand(1);
  Options opts;
  std::uint64_t budget = 0;
  app.add_flag("--json", opts.json, "Machine-readable output");
  auto* budget_opt = app.add_option("--budget", budget, "Search state budget (default $DDFAIR_BUDGET or 1e7)");

  CompareArgs compare;
  auto* c = app.add_subcommand("compare", "Compare two bundles under a set extension");
  c->add_option("--profile", compare.profile)->required();
  c->add_option("--agent", compare.agent, "Agent name (default: first)");
  c->add_option("--x", compare.x)->required();
  c->add_option("--y", compare.y)->required();
  c->add_option("--relation", compare.relation, "nec|pos|ndd|pdd|nid|pid|nbin|pbin")->required();

  CheckArgs chk;
  auto* k = app.add_subcommand("check", "Check an allocation for pr/ef/pe");
  k->add_option("--profile", chk.profile)->required();
  k->add_option("--allocation", chk.allocation, "JSON file or inline {\"agent\": [items]}")->required();
  k->add_option("--criterion", chk.criterion, "pr|ef|pe")->required();
  k->add_option("--extension", chk.extension, "nec|ndd|pdd|pos|nid|pid")->required();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "Find a fair allocation or prove none exists");
  s->add_option("--profile", sol.profile)->required();
  s->add_option("--goal", sol.goal, "nddpr|nidpr|nddef|necpr")->required();
  s->add_option("--method", sol.method, "condition|protocol|search");

  SimulateArgs sim;
  auto* m = app.add_subcommand("simulate", "Run the market-plus-noise existence experiment");
  m->add_option("--config", sim.config, "JSON config (default: A=0.1..1.0, m=2..8, 1000 trials)");
  m->add_option("--out", sim.out, "CSV path (default: stdout)");
  m->add_option("--seed", sim.seed)->required();
  m->add_option("--trials", sim.trials, "Override trials per cell");

  ReduceArgs red;
  auto* r = app.add_subcommand("reduce", "Build the NDDEF instance of an exact-3-cover instance");
  r->add_option("--x3c", red.x3c)->required();
  r->add_option("--out", red.out, "Profile path (default: stdout)");

  for (auto* sub : {c, k, s, m, r}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }
  if (*budget_opt) opts.budget = budget;

  try {
    if (*c) return cmd_compare(compare, opts);
    if (*k) return cmd_check(chk, opts);
    if (*s) return cmd_solve(sol, opts);
    if (*m) return cmd_simulate(sim, opts);
    if (*r) return cmd_reduce(red, opts);
  } catch (const BudgetExceeded& e) {
    std::cerr << "ddfair: " << e.what() << "\n";
    if (opts.json) std::cout << json{{"error", "undecided"}, {"message", e.what()}}.dump(2) << "\n";
    return kUndecided;
  } catch (const std::exception& e) {
    std::cerr << "ddfair: " << e.what() << "\n";
    if (opts.json) std::cout << json{{"error", "error"}, {"message", e.what()}}.dump(2) << "\n";
    return kError;
  }
  return kError;
}
