#include "ibenet/cognitive.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <tuple>

namespace ibenet {

namespace {

constexpr std::array<std::string_view, 8> kActionNames = {
    "wander", "explore-for", "approach", "avoid-obstacles", "rest", "eat", "drink", "runaway",
};

constexpr std::array<std::string_view, 3> kSourceNames = {"reflex", "motivated", "default"};

int source_rank(ActionSource s) { return static_cast<int>(s); }

ActionKind consummatory_kind(const std::string& name) {
  if (name == "drink") return ActionKind::Drink;
  if (name == "rest") return ActionKind::Rest;
  return ActionKind::Eat;
}

// Strict weak order: true when `a` should be selected over `b`.
bool outranks(const PotentialAction& a, const PotentialAction& b) {
  if (a.priority != b.priority) return a.priority > b.priority;
  if (a.source != b.source) return source_rank(a.source) < source_rank(b.source);
  return a.id() < b.id();
}

const Percept* strongest_of(std::span<const Percept> direct, std::string_view kind) {
  const Percept* best = nullptr;
  for (const auto& p : direct) {
    if (p.stimulus_id != kind || p.certainty <= 0.0) continue;
    if (best == nullptr || p.certainty > best->certainty ||
        (p.certainty == best->certainty && p.element_id() < best->element_id())) {
      best = &p;
    }
  }
  return best;
}

std::vector<Percept> percepts_on(const NodeState& node, const LevelId& level) {
  std::vector<Percept> out;
  for (const auto& e : read_elements(node, level)) out.push_back(percept_from_element(e));
  return out;
}

}  // namespace

std::string Percept::element_id() const {
  return stimulus_id + "#" + std::to_string(object_id);
}

std::vector<PersistentPercept> persist_percepts(std::span<const Percept> direct,
                                                std::span<const PersistentPercept> previous,
                                                double rho) {
  if (!(rho > 0.0 && rho < 1.0)) throw InputError("persistence decay rho must lie in (0,1)");
  std::map<std::string, PersistentPercept> merged;
  for (const auto& old : previous) {
    PersistentPercept decayed = old;
    decayed.percept.certainty *= rho;
    decayed.age += 1;
    merged.insert_or_assign(old.percept.element_id(), decayed);
  }
  for (const auto& p : direct) merged.insert_or_assign(p.element_id(), PersistentPercept{p, 0});

  std::vector<PersistentPercept> out;
  for (auto& [id, p] : merged) {
    if (p.percept.certainty >= kPersistenceFloor) out.push_back(std::move(p));
  }
  return out;
}

std::string_view to_string(ActionKind kind) {
  return kActionNames[static_cast<std::size_t>(kind)];
}

std::string_view to_string(ActionSource source) {
  return kSourceNames[static_cast<std::size_t>(source)];
}

ActionKind parse_action_kind(std::string_view name) {
  for (std::size_t i = 0; i < kActionNames.size(); ++i) {
    if (kActionNames[i] == name) return static_cast<ActionKind>(i);
  }
  throw InputError("unknown action '" + std::string(name) + "'");
}

ActionSource parse_action_source(std::string_view name) {
  for (std::size_t i = 0; i < kSourceNames.size(); ++i) {
    if (kSourceNames[i] == name) return static_cast<ActionSource>(i);
  }
  throw InputError("unknown action source '" + std::string(name) + "'");
}

std::string PotentialAction::id() const {
  std::string out(to_string(kind));
  if (kind == ActionKind::ExploreFor || kind == ActionKind::Approach) {
    out += "(" + target_kind + ")";
  }
  return out;
}

bool is_consummatory(ActionKind kind) {
  return kind == ActionKind::Eat || kind == ActionKind::Drink || kind == ActionKind::Rest;
}

std::vector<PotentialAction> attend_to_preferences(const CongruenceBehaviour* preferred,
                                                   double congruent_certainty,
                                                   std::span<const PersistentPercept> persistents,
                                                   double contact_range) {
  if (preferred == nullptr) {
    return {{ActionKind::Wander, {}, std::nullopt, kDefaultPriority, ActionSource::Default}};
  }
  const double priority = Certainty::clamped(congruent_certainty).value();

  const PersistentPercept* target = nullptr;
  double target_score = 0.0;
  for (const auto& p : persistents) {
    const auto fa = preferred->couplings.find(p.percept.stimulus_id);
    if (fa == preferred->couplings.end() || p.percept.certainty <= 0.0) continue;
    const double score = fa->second * p.percept.certainty;
    const bool better =
        target == nullptr ||
        std::tuple(score, p.percept.certainty) > std::tuple(target_score, target->percept.certainty) ||
        (score == target_score && p.percept.certainty == target->percept.certainty &&
         p.percept.element_id() < target->percept.element_id());
    if (better) {
      target = &p;
      target_score = score;
    }
  }

  if (target == nullptr) {
    return {{ActionKind::ExploreFor, preferred->primary_stimulus(), std::nullopt, priority,
             ActionSource::Motivated}};
  }
  const auto& seen = target->percept;
  const ActionKind kind = seen.distance <= contact_range
                              ? consummatory_kind(preferred->consummatory)
                              : ActionKind::Approach;
  return {{kind, seen.stimulus_id, seen.object_id, priority, ActionSource::Motivated}};
}

std::vector<PotentialAction> reflex_actions(std::span<const Percept> direct, double g_runaway,
                                            double g_avoid) {
  std::vector<PotentialAction> out;
  if (const auto* blob = strongest_of(direct, "blob")) {
    out.push_back({ActionKind::Runaway, "blob", blob->object_id,
                   Certainty::clamped(g_runaway * blob->certainty).value(), ActionSource::Reflex});
  }
  if (const auto* obstacle = strongest_of(direct, "obstacle")) {
    out.push_back({ActionKind::AvoidObstacles, "obstacle", obstacle->object_id,
                   Certainty::clamped(g_avoid * obstacle->certainty).value(),
                   ActionSource::Reflex});
  }
  return out;
}

std::vector<PotentialAction> inhibit_reflexes(std::span<const PotentialAction> motivated,
                                              std::span<const PotentialAction> reflex) {
  double threshold = 0.0;
  for (const auto& m : motivated) threshold = std::max(threshold, m.priority);
  std::vector<PotentialAction> out(motivated.begin(), motivated.end());
  for (const auto& r : reflex) {
    if (r.priority >= threshold) out.push_back(r);
  }
  return out;
}

PotentialAction select_external_behaviour(std::span<const PotentialAction> candidates) {
  if (candidates.empty()) throw StructuralError("external behaviour selector got no candidates");
  const auto* best = &candidates.front();
  for (const auto& c : candidates) {
    if (outranks(c, *best)) best = &c;
  }
  return *best;
}

SolutionElement to_element(const Percept& p, const LevelId& level) {
  SolutionElement e;
  e.id = p.element_id();
  e.level = level;
  e.certainty = Certainty::clamped(p.certainty);
  e.attrs = {{"kind", p.stimulus_id},
             {"object", static_cast<double>(p.object_id)},
             {"bearing", p.bearing},
             {"distance", p.distance}};
  return e;
}

Percept percept_from_element(const SolutionElement& e) {
  return {e.text("kind"), static_cast<int>(e.number("object", -1)), e.certainty.value(),
          e.number("bearing"), e.number("distance")};
}

SolutionElement to_element(const PersistentPercept& p, const LevelId& level) {
  auto e = to_element(p.percept, level);
  e.attrs["age"] = static_cast<double>(p.age);
  return e;
}

PersistentPercept persistent_from_element(const SolutionElement& e) {
  return {percept_from_element(e), static_cast<int>(e.number("age"))};
}

SolutionElement to_element(const PotentialAction& a, const LevelId& level) {
  SolutionElement e;
  e.id = a.id();
  e.level = level;
  e.certainty = Certainty::clamped(a.priority);
  e.attrs = {{"action", std::string(to_string(a.kind))},
             {"target", a.target_kind},
             {"source", std::string(to_string(a.source))}};
  if (a.target_object) e.attrs["object"] = static_cast<double>(*a.target_object);
  return e;
}

PotentialAction action_from_element(const SolutionElement& e) {
  PotentialAction a;
  a.kind = parse_action_kind(e.text("action"));
  a.target_kind = e.text("target");
  if (e.attrs.contains("object")) a.target_object = static_cast<int>(e.number("object"));
  a.priority = e.certainty.value();
  a.source = parse_action_source(e.text("source"));
  return a;
}

std::vector<InternalBehaviour> make_cognitive_behaviours(
    const std::vector<CongruenceBehaviour>& drives, const CognitiveParams& params) {
  std::vector<InternalBehaviour> out;

  {
    InternalBehaviour beh{kPersistenceBehaviour, {}, false,
                          {CognitiveLevel::PerceptualPersistents}};
    ElementaryBehaviour rule;
    rule.id = "persist";
    rule.condition = [](const NodeState& node) {
      return std::vector<Instantiation>{{read_elements(node, CognitiveLevel::ExternalPerceptions)}};
    };
    rule.action = [rho = params.rho](const NodeState& node, const Instantiation& inst) {
      std::vector<Percept> direct;
      for (const auto& e : inst.bound) direct.push_back(percept_from_element(e));
      std::vector<PersistentPercept> previous;
      for (const auto& e : read_elements(node, CognitiveLevel::PerceptualPersistents)) {
        previous.push_back(persistent_from_element(e));
      }
      std::vector<SolutionElement> writes;
      for (const auto& p : persist_percepts(direct, previous, rho)) {
        writes.push_back(to_element(p, CognitiveLevel::PerceptualPersistents));
      }
      return writes;
    };
    beh.rules.push_back(std::move(rule));
    out.push_back(std::move(beh));
  }

  {
    InternalBehaviour beh{kAttentionBehaviour, {}, false,
                          {CognitiveLevel::DrivePerceptionCongruents}};
    ElementaryBehaviour rule;
    rule.id = "attend";
    rule.condition = [](const NodeState& node) {
      Instantiation inst;
      if (const auto* pref =
              find_element(node, CognitiveLevel::ConsummatoryPreferents, kPreferenceElement)) {
        inst.bound.push_back(*pref);
      }
      return std::vector<Instantiation>{std::move(inst)};
    };
    rule.action = [drives, contact = params.contact_range](const NodeState& node,
                                                           const Instantiation& inst) {
      const CongruenceBehaviour* preferred = nullptr;
      double certainty = 0.0;
      if (!inst.bound.empty()) {
        const auto drive_id = inst.bound.front().text("drive");
        const auto it = std::find_if(drives.begin(), drives.end(),
                                     [&](const auto& d) { return d.drive_id == drive_id; });
        if (it != drives.end()) {
          preferred = &*it;
          certainty = inst.bound.front().certainty.value();
        }
      }
      std::vector<PersistentPercept> persistents;
      for (const auto& e : read_elements(node, CognitiveLevel::PerceptualPersistents)) {
        persistents.push_back(persistent_from_element(e));
      }
      std::vector<SolutionElement> writes;
      for (const auto& a : attend_to_preferences(preferred, certainty, persistents, contact)) {
        writes.push_back(to_element(a, CognitiveLevel::DrivePerceptionCongruents));
      }
      return writes;
    };
    beh.rules.push_back(std::move(rule));
    out.push_back(std::move(beh));
  }

  {
    InternalBehaviour beh{kInhibitionBehaviour, {}, false, {CognitiveLevel::PotentialActions}};
    ElementaryBehaviour rule;
    rule.id = "inhibit";
    rule.condition = [](const NodeState& node) {
      return std::vector<Instantiation>{
          {read_elements(node, CognitiveLevel::DrivePerceptionCongruents)}};
    };
    rule.action = [g_r = params.g_runaway, g_o = params.g_avoid](const NodeState& node,
                                                                 const Instantiation& inst) {
      std::vector<PotentialAction> motivated;
      for (const auto& e : inst.bound) motivated.push_back(action_from_element(e));
      const auto direct = percepts_on(node, CognitiveLevel::ExternalPerceptions);
      const auto reflex = reflex_actions(direct, g_r, g_o);
      std::vector<SolutionElement> writes;
      for (const auto& a : inhibit_reflexes(motivated, reflex)) {
        writes.push_back(to_element(a, CognitiveLevel::PotentialActions));
      }
      return writes;
    };
    beh.rules.push_back(std::move(rule));
    out.push_back(std::move(beh));
  }

  {
    // One rule per source; rule ids sort in source-rank order so the control
    // mechanism's lexicographic tie-break prefers reflexes.
    InternalBehaviour beh{kSelectorBehaviour, {}, true, {CognitiveLevel::Actions}};
    for (const auto source : {ActionSource::Reflex, ActionSource::Motivated, ActionSource::Default}) {
      ElementaryBehaviour rule;
      rule.id = std::to_string(source_rank(source) + 1) + "-" + std::string(to_string(source));
      rule.condition = [source](const NodeState& node) {
        std::vector<Instantiation> out;
        for (const auto& e : read_elements(node, CognitiveLevel::PotentialActions)) {
          if (e.text("source") == to_string(source)) out.push_back({{e}});
        }
        return out;
      };
      rule.action = [](const NodeState&, const Instantiation& inst) {
        auto chosen = inst.bound.front();
        chosen.level = CognitiveLevel::Actions;
        return std::vector<SolutionElement>{std::move(chosen)};
      };
      beh.rules.push_back(std::move(rule));
    }
    out.push_back(std::move(beh));
  }

  return out;
}

}  // namespace ibenet
