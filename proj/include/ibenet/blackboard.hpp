#pragma once
//
// Blackboard node kernel.
//
// A node owns a fixed set of abstraction levels. Knowledge sources are
// packaged as internal behaviours (ordered lists of production rules). Rules
// that use activation registers (REACs) compete inside their behaviour and
// only the strongest register fires; the remaining rules fire whenever their
// condition matches. Nodes talk to each other through transmitter/receptor
// channels that deliver level snapshots on the receiver's next cycle.
//

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "ibenet/errors.hpp"

namespace ibenet {

enum class NodeId { Cognitive, Motivational };

enum class CognitiveLevel {
  ExternalPerceptions,
  PerceptualPersistents,
  ConsummatoryPreferents,
  DrivePerceptionCongruents,
  PotentialActions,
  Actions,
};

enum class MotivationalLevel {
  InternalPerceptions,
  ExternalPerceptions,
  Congruents,
  Drive,
};

std::string_view to_string(NodeId node);
constexpr int level_count(NodeId node) { return node == NodeId::Cognitive ? 6 : 4; }

/// One level of one node. Only the six cognitive and four motivational levels
/// are constructible; string lookups of anything else throw StructuralError.
class LevelId {
 public:
  constexpr LevelId() = default;
  constexpr LevelId(CognitiveLevel level)  // NOLINT(google-explicit-constructor)
      : node_(NodeId::Cognitive), index_(static_cast<int>(level)) {}
  constexpr LevelId(MotivationalLevel level)  // NOLINT(google-explicit-constructor)
      : node_(NodeId::Motivational), index_(static_cast<int>(level)) {}

  /// Accepts "cognitive/perceptual-persistents" style names.
  static LevelId parse(std::string_view qualified);
  static LevelId parse(NodeId node, std::string_view name);

  constexpr NodeId node() const { return node_; }
  constexpr int index() const { return index_; }
  std::string_view name() const;
  std::string qualified_name() const;

  constexpr auto operator<=>(const LevelId&) const = default;

 private:
  NodeId node_ = NodeId::Cognitive;
  int index_ = 0;
};

/// Normalised signal strength in [0,1].
class Certainty {
 public:
  constexpr Certainty() = default;
  explicit Certainty(double value);

  static Certainty clamped(double value) noexcept;

  constexpr double value() const { return value_; }
  constexpr auto operator<=>(const Certainty&) const = default;

 private:
  double value_ = 0.0;
};

using AttrValue = std::variant<double, std::string>;
using Attributes = std::map<std::string, AttrValue>;

struct SolutionElement {
  std::string id;
  LevelId level;
  Certainty certainty;
  std::int64_t tick = 0;
  Attributes attrs;

  double number(const std::string& key, double fallback = 0.0) const;
  std::string text(const std::string& key, std::string fallback = {}) const;
};

struct NodeState;

/// One matching of a rule condition: the elements it bound.
struct Instantiation {
  std::vector<SolutionElement> bound;
};

using RuleCondition = std::function<std::vector<Instantiation>(const NodeState&)>;
using RuleAction =
    std::function<std::vector<SolutionElement>(const NodeState&, const Instantiation&)>;

/// A production rule: if <condition> then <action>.
struct ElementaryBehaviour {
  std::string id;
  RuleCondition condition;
  RuleAction action;
};

struct InternalBehaviour {
  std::string id;
  std::vector<ElementaryBehaviour> rules;
  bool uses_reac = false;
  // Levels this behaviour recomputes from scratch: cleared whenever the
  // behaviour runs, before its writes are posted.
  std::vector<LevelId> rebuilds;
};

/// Activation state register. Activation is the certainty of the first element
/// the rule's action would write.
struct Reac {
  std::string behaviour_id;
  std::string rule_id;
  Certainty activation;
  std::vector<std::string> bound_elements;
  std::int64_t tick = 0;
};

struct Route {
  LevelId from;
  LevelId to;
  std::optional<std::string> element_id;  // restrict to one element id
};

struct Channel {
  std::string id;
  NodeId sender = NodeId::Cognitive;
  NodeId receiver = NodeId::Motivational;
  std::vector<Route> routes;
};

/// Snapshot of a source level addressed to one destination level. Delivery
/// replaces the destination level's contents.
struct Transmission {
  std::string channel;
  LevelId destination;
  std::vector<SolutionElement> elements;
};

struct NodeState {
  explicit NodeState(NodeId id);

  NodeId node_id;
  std::int64_t cycle = 0;
  std::vector<std::map<std::string, SolutionElement>> levels;
  std::vector<InternalBehaviour> behaviours;
  std::vector<Reac> reacs;
  std::vector<Channel> transmitters;
  // Receptor id (channel or sensor interface) -> levels it may write.
  std::map<std::string, std::set<LevelId>> receptors;
  std::set<LevelId> dirty;  // levels written during the current cycle
};

void post_element(NodeState& node, const LevelId& level, SolutionElement elem);
inline void post_element(NodeState& node, SolutionElement elem) {
  const LevelId level = elem.level;
  post_element(node, level, std::move(elem));
}

void clear_level(NodeState& node, const LevelId& level);

/// Elements of one level ordered by id.
std::vector<SolutionElement> read_elements(const NodeState& node, const LevelId& level,
                                           std::optional<std::string_view> id_filter = {});

const SolutionElement* find_element(const NodeState& node, const LevelId& level,
                                    std::string_view id);

/// Registers a sensor interface (exteroceptor, proprioceptor) feeding `level`.
void add_interface(NodeState& node, std::string id, const LevelId& level);

std::string connect(NodeState& sender, NodeState& receiver, std::vector<Route> routes);
/// Same, with levels given as "node/level" strings.
std::string connect(NodeState& sender, NodeState& receiver,
                    const std::vector<std::pair<std::string, std::string>>& level_map);

/// Runs every behaviour in declared order and returns transmitter emissions.
std::vector<Transmission> run_cycle(NodeState& node, std::span<const Transmission> deliveries);
/// Runs only the named behaviours (still in declared order).
std::vector<Transmission> run_cycle(NodeState& node, std::span<const Transmission> deliveries,
                                    std::span<const std::string> behaviour_ids);

/// Stable textual form of everything except rule closures.
std::string serialize(const NodeState& node);

}  // namespace ibenet
