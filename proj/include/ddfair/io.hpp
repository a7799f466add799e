#pragma once

// File formats: profile JSON, allocation JSON, X3C JSON, bundle lists with
// `item*k` multiplicities, and a reader for PrefLib strict-order (.soc) files.

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ddfair/core.hpp"
#include "ddfair/errors.hpp"
#include "ddfair/reductions.hpp"

namespace ddfair {

using nlohmann::json;

// An instance together with the names used in files.
struct Profile {
  Instance instance;
  std::vector<std::string> items;
  std::vector<std::string> agents;

  Item item(std::string_view name) const {
    for (Item i = 0; i < items.size(); ++i) {
      if (items[i] == name) return i;
    }
    throw InvalidInput("unknown item '" + std::string(name) + "'");
  }

  std::size_t agent(std::string_view name) const {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (agents[i] == name) return i;
    }
    throw InvalidInput("unknown agent '" + std::string(name) + "'");
  }
};

// Default names: items 1..M, agents A, B, ... (then a1, a2, ... past Z).
inline std::vector<std::string> default_item_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= count; ++i) names.push_back(std::to_string(i));
  return names;
}

inline std::vector<std::string> default_agent_names(std::size_t count) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) {
    names.push_back(count <= 26 ? std::string(1, static_cast<char>('A' + i)) : "a" + std::to_string(i + 1));
  }
  return names;
}

inline Profile make_profile(Instance instance) {
  const std::size_t m = instance.item_count();
  const std::size_t n = instance.agent_count();
  return {std::move(instance), default_item_names(m), default_agent_names(n)};
}

namespace detail {

inline void require_unique(const std::vector<std::string>& names, const char* what) {
  std::map<std::string, int> seen;
  for (const auto& name : names) {
    if (name.empty()) throw InvalidInput(std::string(what) + " names must be non-empty");
    if (++seen[name] > 1) throw InvalidInput(std::string("duplicate ") + what + " name '" + name + "'");
  }
}

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline std::size_t parse_count(std::string_view text, const char* what) {
  std::size_t value = 0;
  const std::string t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw InvalidInput(std::string("bad ") + what + " '" + t + "'");
  }
  return value;
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidInput("'" + path + "': " + e.what());
  }
}

}  // namespace detail

inline Profile profile_from_json(const json& doc) {
  try {
    const Kind kind = parse_kind(doc.at("kind").get<std::string>());
    std::vector<std::string> items = doc.at("items").get<std::vector<std::string>>();
    detail::require_unique(items, "item");
    if (items.empty()) throw InvalidInput("a profile needs at least one item");
    std::vector<std::string> agents;
    std::vector<Ranking> rankings;
    Profile lookup{Instance(kind, {Ranking::descending(items.size())}), items, {}};
    for (const json& agent : doc.at("agents")) {
      agents.push_back(agent.at("name").get<std::string>());
      std::vector<Item> order;
      for (const json& name : agent.at("ranking")) order.push_back(lookup.item(name.get<std::string>()));
      if (order.size() != items.size()) {
        throw InvalidInput("ranking of '" + agents.back() + "' is not a permutation of the items");
      }
      rankings.emplace_back(std::move(order));
    }
    detail::require_unique(agents, "agent");
    if (agents.empty()) throw InvalidInput("a profile needs at least one agent");
    return {Instance(kind, std::move(rankings)), std::move(items), std::move(agents)};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed profile: ") + e.what());
  }
}

inline json profile_to_json(const Profile& profile) {
  json agents = json::array();
  for (std::size_t i = 0; i < profile.agents.size(); ++i) {
    json ranking = json::array();
    for (Item item : profile.instance.ranking(i).order()) ranking.push_back(profile.items[item]);
    agents.push_back({{"name", profile.agents[i]}, {"ranking", ranking}});
  }
  return {{"kind", std::string(to_string(profile.instance.kind()))}, {"items", profile.items}, {"agents", agents}};
}

inline Profile read_profile(const std::string& path) { return profile_from_json(detail::read_json_file(path)); }

// "a,b*2,c": item names with optional multiplicities.
inline MultiBundle parse_bundle(const Profile& profile, std::string_view text) {
  MultiBundle bundle;
  std::stringstream ss{std::string(text)};
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = detail::trim(token);
    if (token.empty()) continue;
    std::size_t copies = 1;
    if (const auto star = token.rfind('*'); star != std::string::npos) {
      copies = detail::parse_count(std::string_view(token).substr(star + 1), "multiplicity");
      if (copies == 0) throw InvalidInput("multiplicity must be positive in '" + token + "'");
      token = detail::trim(std::string_view(token).substr(0, star));
    }
    bundle.add(profile.item(token), copies);
  }
  return bundle;
}

inline std::string format_bundle(const Profile& profile, const MultiBundle& bundle) {
  std::string out;
  for (const auto& [item, count] : bundle) {
    if (!out.empty()) out += ",";
    out += profile.items[item];
    if (count > 1) out += "*" + std::to_string(count);
  }
  return out;
}

// {"agent": [items...]}; every item must appear exactly once.
inline Allocation allocation_from_json(const Profile& profile, const json& doc) {
  if (!doc.is_object()) throw InvalidInput("an allocation must be a JSON object");
  std::vector<std::vector<Item>> bundles(profile.agents.size());
  try {
    for (const auto& [name, items] : doc.items()) {
      auto& bundle = bundles[profile.agent(name)];
      for (const json& item : items) bundle.push_back(profile.item(item.get<std::string>()));
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed allocation: ") + e.what());
  }
  return Allocation(std::move(bundles), profile.items.size());
}

inline json allocation_to_json(const Profile& profile, const Allocation& alloc) {
  json doc = json::object();
  for (std::size_t i = 0; i < alloc.agent_count(); ++i) {
    json items = json::array();
    for (Item item : alloc.bundle(i).items()) items.push_back(profile.items[item]);
    doc[profile.agents[i]] = items;
  }
  return doc;
}

inline X3CInstance x3c_from_json(const json& doc) {
  try {
    X3CInstance x3c;
    x3c.base_size = doc.at("base_size").get<std::size_t>();
    for (const json& t : doc.at("triplets")) {
      const auto elements = t.get<std::vector<std::size_t>>();
      if (elements.size() != 3) throw InvalidInput("every triplet needs exactly 3 elements");
      x3c.triplets.push_back({elements[0], elements[1], elements[2]});
    }
    x3c.validate();
    return x3c;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed X3C instance: ") + e.what());
  }
}

inline json x3c_to_json(const X3CInstance& x3c) {
  json triplets = json::array();
  for (const Triplet& t : x3c.triplets) triplets.push_back({t[0], t[1], t[2]});
  return {{"base_size", x3c.base_size}, {"triplets", triplets}};
}

// Reduced instances get readable names: m<e>, d<i>.<r>, x<j>.<r>.
inline Profile reduced_profile(const ReducedInstance& reduced) {
  const std::size_t m = reduced.instance.item_count();
  std::vector<std::string> items(m);
  const std::size_t main_count = m - 3 * reduced.dummy.size() - 3 * reduced.aux.size();
  for (Item e = 0; e < main_count; ++e) items[e] = "m" + std::to_string(e + 1);
  for (std::size_t i = 0; i < reduced.dummy.size(); ++i) {
    for (std::size_t r = 0; r < 3; ++r) items[reduced.dummy[i][r]] = "d" + std::to_string(i + 1) + "." + std::to_string(r + 1);
  }
  const std::size_t first_aux = reduced.dummy.size() - reduced.aux.size() + 1;
  for (std::size_t j = 0; j < reduced.aux.size(); ++j) {
    for (std::size_t r = 0; r < 3; ++r) {
      items[reduced.aux[j][r]] = "x" + std::to_string(first_aux + j) + "." + std::to_string(r + 1);
    }
  }
  std::vector<std::string> agents;
  for (std::size_t i = 0; i < reduced.agents.size(); ++i) {
    for (std::size_t r = 0; r < 3; ++r) agents.push_back("agent" + std::to_string(i + 1) + "." + std::to_string(r + 1));
  }
  return {reduced.instance, std::move(items), std::move(agents)};
}

// PrefLib strict orders: "# ALTERNATIVE NAME k: name" headers and
// "count: a,b,c" vote lines, each expanding to `count` agents.
inline Profile read_preflib_soc(std::istream& in, Kind kind = Kind::goods) {
  std::map<std::size_t, std::string> names;
  std::vector<std::vector<std::size_t>> votes;
  std::size_t max_alternative = 0;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      constexpr std::string_view tag = "# ALTERNATIVE NAME ";
      if (t.rfind(tag, 0) == 0) {
        const auto colon = t.find(':');
        if (colon == std::string::npos) throw InvalidInput("bad PrefLib header '" + t + "'");
        names[detail::parse_count(std::string_view(t).substr(tag.size(), colon - tag.size()), "alternative")] =
            detail::trim(std::string_view(t).substr(colon + 1));
      }
      continue;
    }
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw InvalidInput("bad PrefLib vote line '" + t + "'");
    const std::size_t count = detail::parse_count(std::string_view(t).substr(0, colon), "vote count");
    std::vector<std::size_t> order;
    std::stringstream ss(t.substr(colon + 1));
    std::string token;
    while (std::getline(ss, token, ',')) {
      if (token.find('{') != std::string::npos) throw Unsupported("PrefLib ties are not strict orders");
      order.push_back(detail::parse_count(token, "alternative"));
      max_alternative = std::max(max_alternative, order.back());
    }
    for (std::size_t c = 0; c < count; ++c) votes.push_back(order);
  }
  if (votes.empty()) throw InvalidInput("PrefLib file has no votes");
  std::vector<std::string> items;
  for (std::size_t a = 1; a <= max_alternative; ++a) items.push_back(names.count(a) ? names[a] : std::to_string(a));
  detail::require_unique(items, "item");
  std::vector<Ranking> rankings;
  for (const auto& vote : votes) {
    std::vector<Item> order;
    for (std::size_t a : vote) {
      if (a == 0) throw InvalidInput("PrefLib alternatives are numbered from 1");
      order.push_back(a - 1);
    }
    if (order.size() != items.size()) throw InvalidInput("PrefLib vote is not a complete strict order");
    rankings.emplace_back(std::move(order));
  }
  const std::size_t n = rankings.size();
  return {Instance(kind, std::move(rankings)), std::move(items), default_agent_names(n)};
}

}  // namespace ddfair
