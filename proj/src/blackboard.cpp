#include "ibenet/blackboard.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <tuple>

#include "json.hpp"

namespace ibenet {

namespace {

constexpr std::array<std::string_view, 6> kCognitiveNames = {
    "external-perceptions",       "perceptual-persistents", "consummatory-preferents",
    "drive/perception-congruents", "potential-actions",      "actions",
};

constexpr std::array<std::string_view, 4> kMotivationalNames = {
    "internal-perceptions",
    "external-perceptions",
    "propio/extero/drive-congruents",
    "drive",
};

std::map<std::string, SolutionElement>& level_storage(NodeState& node, const LevelId& level) {
  if (level.node() != node.node_id) {
    throw StructuralError("level " + level.qualified_name() + " does not belong to the " +
                          std::string(to_string(node.node_id)) + " node");
  }
  return node.levels[static_cast<std::size_t>(level.index())];
}

const std::map<std::string, SolutionElement>& level_storage(const NodeState& node,
                                                             const LevelId& level) {
  return level_storage(const_cast<NodeState&>(node), level);
}

void deliver(NodeState& node, const Transmission& t) {
  const auto receptor = node.receptors.find(t.channel);
  if (receptor == node.receptors.end()) {
    throw StructuralError("no receptor '" + t.channel + "' on the " +
                          std::string(to_string(node.node_id)) + " node");
  }
  if (!receptor->second.contains(t.destination)) {
    throw StructuralError("receptor '" + t.channel + "' cannot write " +
                          t.destination.qualified_name());
  }
  clear_level(node, t.destination);
  for (const auto& e : t.elements) post_element(node, t.destination, e);
}

std::string binding_key(const Instantiation& inst) {
  std::string key;
  for (const auto& e : inst.bound) {
    key += e.id;
    key += '\x1f';
  }
  return key;
}

void run_behaviour(NodeState& node, const InternalBehaviour& beh) {
  struct Candidate {
    std::string rule_id;
    std::string key;
    Instantiation inst;
    std::vector<SolutionElement> writes;
  };
  // Every rule sees the node as it was when the behaviour started.
  std::vector<Candidate> candidates;
  for (const auto& rule : beh.rules) {
    for (auto& inst : rule.condition(node)) {
      auto writes = rule.action(node, inst);
      auto key = binding_key(inst);
      candidates.push_back({rule.id, std::move(key), std::move(inst), std::move(writes)});
    }
  }

  std::vector<SolutionElement> commit;
  if (beh.uses_reac) {
    const Candidate* best = nullptr;
    Certainty best_act;
    for (const auto& c : candidates) {
      const Certainty act = c.writes.empty() ? Certainty{} : c.writes.front().certainty;
      Reac reac{beh.id, c.rule_id, act, {}, node.cycle};
      for (const auto& e : c.inst.bound) reac.bound_elements.push_back(e.id);
      node.reacs.push_back(std::move(reac));
      const bool better =
          best == nullptr || act > best_act ||
          (act == best_act && std::tie(c.rule_id, c.key) < std::tie(best->rule_id, best->key));
      if (better) {
        best = &c;
        best_act = act;
      }
    }
    if (best != nullptr) commit = best->writes;
  } else {
    for (auto& c : candidates) {
      for (auto& w : c.writes) commit.push_back(std::move(w));
    }
  }

  for (const auto& level : beh.rebuilds) clear_level(node, level);
  for (auto& w : commit) post_element(node, std::move(w));
}

std::vector<Transmission> collect_emissions(const NodeState& node) {
  std::vector<Transmission> out;
  for (const auto& channel : node.transmitters) {
    // Routes sharing a destination travel as one snapshot.
    std::map<LevelId, std::pair<bool, std::vector<SolutionElement>>> by_destination;
    for (const auto& route : channel.routes) {
      auto& [active, elements] = by_destination[route.to];
      if (node.dirty.contains(route.from)) active = true;
      for (const auto& [id, e] : level_storage(node, route.from)) {
        if (route.element_id && *route.element_id != id) continue;
        SolutionElement copy = e;
        copy.level = route.to;
        elements.push_back(std::move(copy));
      }
    }
    for (auto& [dest, entry] : by_destination) {
      if (!entry.first) continue;
      out.push_back({channel.id, dest, std::move(entry.second)});
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(NodeId node) {
  return node == NodeId::Cognitive ? "cognitive" : "motivational";
}

LevelId LevelId::parse(NodeId node, std::string_view name) {
  if (node == NodeId::Cognitive) {
    for (std::size_t i = 0; i < kCognitiveNames.size(); ++i) {
      if (kCognitiveNames[i] == name) return LevelId(static_cast<CognitiveLevel>(i));
    }
  } else {
    for (std::size_t i = 0; i < kMotivationalNames.size(); ++i) {
      if (kMotivationalNames[i] == name) return LevelId(static_cast<MotivationalLevel>(i));
    }
  }
  throw StructuralError("unknown " + std::string(to_string(node)) + " level '" +
                        std::string(name) + "'");
}

LevelId LevelId::parse(std::string_view qualified) {
  const auto slash = qualified.find('/');
  if (slash == std::string_view::npos) {
    throw StructuralError("level name '" + std::string(qualified) + "' lacks a node prefix");
  }
  const auto node_name = qualified.substr(0, slash);
  NodeId node;
  if (node_name == "cognitive") {
    node = NodeId::Cognitive;
  } else if (node_name == "motivational") {
    node = NodeId::Motivational;
  } else {
    throw StructuralError("unknown node '" + std::string(node_name) + "'");
  }
  return parse(node, qualified.substr(slash + 1));
}

std::string_view LevelId::name() const {
  const auto i = static_cast<std::size_t>(index_);
  return node_ == NodeId::Cognitive ? kCognitiveNames[i] : kMotivationalNames[i];
}

std::string LevelId::qualified_name() const {
  return std::string(to_string(node_)) + "/" + std::string(name());
}

Certainty::Certainty(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InputError("certainty " + std::to_string(value) + " outside [0,1]");
  }
}

Certainty Certainty::clamped(double value) noexcept {
  Certainty c;
  c.value_ = std::isnan(value) ? 0.0 : std::clamp(value, 0.0, 1.0);
  return c;
}

double SolutionElement::number(const std::string& key, double fallback) const {
  const auto it = attrs.find(key);
  if (it == attrs.end()) return fallback;
  if (const auto* d = std::get_if<double>(&it->second)) return *d;
  return fallback;
}

std::string SolutionElement::text(const std::string& key, std::string fallback) const {
  const auto it = attrs.find(key);
  if (it == attrs.end()) return fallback;
  if (const auto* s = std::get_if<std::string>(&it->second)) return *s;
  return fallback;
}

NodeState::NodeState(NodeId id)
    : node_id(id), levels(static_cast<std::size_t>(level_count(id))) {}

void post_element(NodeState& node, const LevelId& level, SolutionElement elem) {
  auto& storage = level_storage(node, level);
  elem.level = level;
  elem.tick = node.cycle;
  const std::string key = elem.id;
  storage.insert_or_assign(key, std::move(elem));
  node.dirty.insert(level);
}

void clear_level(NodeState& node, const LevelId& level) {
  auto& storage = level_storage(node, level);
  storage.clear();
  node.dirty.insert(level);
}

std::vector<SolutionElement> read_elements(const NodeState& node, const LevelId& level,
                                           std::optional<std::string_view> id_filter) {
  const auto& storage = level_storage(node, level);
  std::vector<SolutionElement> out;
  if (id_filter) {
    const auto it = storage.find(std::string(*id_filter));
    if (it != storage.end()) out.push_back(it->second);
    return out;
  }
  out.reserve(storage.size());
  for (const auto& [id, e] : storage) out.push_back(e);
  return out;
}

const SolutionElement* find_element(const NodeState& node, const LevelId& level,
                                    std::string_view id) {
  const auto& storage = level_storage(node, level);
  const auto it = storage.find(std::string(id));
  return it == storage.end() ? nullptr : &it->second;
}

void add_interface(NodeState& node, std::string id, const LevelId& level) {
  level_storage(node, level);
  node.receptors[std::move(id)].insert(level);
}

std::string connect(NodeState& sender, NodeState& receiver, std::vector<Route> routes) {
  for (const auto& r : routes) {
    if (r.from.node() != sender.node_id) {
      throw StructuralError("route source " + r.from.qualified_name() +
                            " is not a level of the sender");
    }
    if (r.to.node() != receiver.node_id) {
      throw StructuralError("route destination " + r.to.qualified_name() +
                            " is not a level of the receiver");
    }
  }
  std::string id = std::string(to_string(sender.node_id)) + "->" +
                   std::string(to_string(receiver.node_id)) + "#" +
                   std::to_string(sender.transmitters.size());
  auto& allowed = receiver.receptors[id];
  for (const auto& r : routes) allowed.insert(r.to);
  sender.transmitters.push_back({id, sender.node_id, receiver.node_id, std::move(routes)});
  return id;
}

std::string connect(NodeState& sender, NodeState& receiver,
                    const std::vector<std::pair<std::string, std::string>>& level_map) {
  std::vector<Route> routes;
  routes.reserve(level_map.size());
  for (const auto& [from, to] : level_map) {
    routes.push_back({LevelId::parse(from), LevelId::parse(to), std::nullopt});
  }
  return connect(sender, receiver, std::move(routes));
}

std::vector<Transmission> run_cycle(NodeState& node, std::span<const Transmission> deliveries) {
  std::vector<std::string> all;
  all.reserve(node.behaviours.size());
  for (const auto& b : node.behaviours) all.push_back(b.id);
  return run_cycle(node, deliveries, all);
}

std::vector<Transmission> run_cycle(NodeState& node, std::span<const Transmission> deliveries,
                                    std::span<const std::string> behaviour_ids) {
  ++node.cycle;
  node.reacs.clear();
  node.dirty.clear();
  for (const auto& t : deliveries) deliver(node, t);
  for (const auto& beh : node.behaviours) {
    if (std::find(behaviour_ids.begin(), behaviour_ids.end(), beh.id) == behaviour_ids.end()) {
      continue;
    }
    run_behaviour(node, beh);
  }
  return collect_emissions(node);
}

std::string serialize(const NodeState& node) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["node"] = to_string(node.node_id);
  j["cycle"] = node.cycle;
  ordered_json levels = ordered_json::object();
  for (int i = 0; i < level_count(node.node_id); ++i) {
    const LevelId level = node.node_id == NodeId::Cognitive
                              ? LevelId(static_cast<CognitiveLevel>(i))
                              : LevelId(static_cast<MotivationalLevel>(i));
    ordered_json elems = ordered_json::array();
    for (const auto& [id, e] : node.levels[static_cast<std::size_t>(i)]) {
      ordered_json attrs = ordered_json::object();
      for (const auto& [k, v] : e.attrs) {
        std::visit([&](const auto& x) { attrs[k] = x; }, v);
      }
      elems.push_back({{"id", id},
                       {"certainty", e.certainty.value()},
                       {"tick", e.tick},
                       {"attrs", std::move(attrs)}});
    }
    levels[std::string(level.name())] = std::move(elems);
  }
  j["levels"] = std::move(levels);
  ordered_json behaviours = ordered_json::array();
  for (const auto& b : node.behaviours) {
    ordered_json rules = ordered_json::array();
    for (const auto& r : b.rules) rules.push_back(r.id);
    behaviours.push_back({{"id", b.id}, {"uses_reac", b.uses_reac}, {"rules", rules}});
  }
  j["behaviours"] = std::move(behaviours);
  ordered_json reacs = ordered_json::array();
  for (const auto& r : node.reacs) {
    reacs.push_back({{"behaviour", r.behaviour_id},
                     {"rule", r.rule_id},
                     {"activation", r.activation.value()},
                     {"bound", r.bound_elements},
                     {"tick", r.tick}});
  }
  j["reacs"] = std::move(reacs);
  ordered_json channels = ordered_json::array();
  for (const auto& c : node.transmitters) {
    ordered_json routes = ordered_json::array();
    for (const auto& r : c.routes) {
      routes.push_back({{"from", r.from.qualified_name()},
                        {"to", r.to.qualified_name()},
                        {"element", r.element_id ? ordered_json(*r.element_id) : ordered_json()}});
    }
    channels.push_back({{"id", c.id}, {"routes", std::move(routes)}});
  }
  j["transmitters"] = std::move(channels);
  return j.dump();
}

}  // namespace ibenet
