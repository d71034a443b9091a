#pragma once
//
// Cognitive node: perceptual persistence, attention to preferences, reflex
// response inhibition and the external behaviours selector.
//

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ibenet/blackboard.hpp"
#include "ibenet/motivational.hpp"

namespace ibenet {

struct Percept {
  std::string stimulus_id;  // object kind: food, water, grass, blob, obstacle, spot
  int object_id = -1;
  double certainty = 0.0;
  double bearing = 0.0;   // absolute world angle, radians
  double distance = 0.0;  // to the object's surface

  /// Blackboard element id, unique per perceived object ("food#3").
  std::string element_id() const;
};

struct PersistentPercept {
  Percept percept;
  int age = 0;  // cycles since last direct perception
};

inline constexpr double kPersistenceFloor = 0.01;
inline constexpr double kDefaultPriority = 0.05;

/// Refreshes directly perceived stimuli and decays the rest by `rho`; entries
/// below kPersistenceFloor are forgotten. Output is ordered by element id.
std::vector<PersistentPercept> persist_percepts(std::span<const Percept> direct,
                                                std::span<const PersistentPercept> previous,
                                                double rho);

enum class ActionKind { Wander, ExploreFor, Approach, AvoidObstacles, Rest, Eat, Drink, Runaway };
enum class ActionSource { Reflex, Motivated, Default };

std::string_view to_string(ActionKind kind);
std::string_view to_string(ActionSource source);
ActionKind parse_action_kind(std::string_view name);
ActionSource parse_action_source(std::string_view name);

struct PotentialAction {
  ActionKind kind = ActionKind::Wander;
  std::string target_kind;  // explore-for / approach parameter, or consumed kind
  std::optional<int> target_object;
  double priority = 0.0;
  ActionSource source = ActionSource::Default;

  /// "wander", "approach(food)", "explore-for(water)", ...
  std::string id() const;

  bool operator==(const PotentialAction&) const = default;
};

bool is_consummatory(ActionKind kind);

/// One motivated (or default wander) action for the transmitted preference.
/// `preferred` is null when the motivational node selected nothing.
std::vector<PotentialAction> attend_to_preferences(const CongruenceBehaviour* preferred,
                                                   double congruent_certainty,
                                                   std::span<const PersistentPercept> persistents,
                                                   double contact_range);

/// Runaway from the strongest blob and obstacle avoidance, gain-scaled.
std::vector<PotentialAction> reflex_actions(std::span<const Percept> direct, double g_runaway,
                                            double g_avoid);

/// Motivated actions pass untouched; a reflex survives only if its priority
/// reaches the strongest motivated priority.
std::vector<PotentialAction> inhibit_reflexes(std::span<const PotentialAction> motivated,
                                              std::span<const PotentialAction> reflex);

/// Highest priority wins; ties go reflex > motivated > default, then action id.
PotentialAction select_external_behaviour(std::span<const PotentialAction> candidates);

// Element encoding shared with the network layer.
SolutionElement to_element(const Percept& p, const LevelId& level);
Percept percept_from_element(const SolutionElement& e);
SolutionElement to_element(const PersistentPercept& p, const LevelId& level);
PersistentPercept persistent_from_element(const SolutionElement& e);
SolutionElement to_element(const PotentialAction& a, const LevelId& level);
PotentialAction action_from_element(const SolutionElement& e);

struct CognitiveParams {
  double rho = 0.9;
  double contact_range = 1.0;
  double g_runaway = 1.0;
  double g_avoid = 0.8;
};

inline constexpr const char* kPersistenceBehaviour = "perceptual-persistence";
inline constexpr const char* kAttentionBehaviour = "attention-to-preferences";
inline constexpr const char* kInhibitionBehaviour = "reflex-response-inhibition";
inline constexpr const char* kSelectorBehaviour = "external-behaviours-selector";

std::vector<InternalBehaviour> make_cognitive_behaviours(
    const std::vector<CongruenceBehaviour>& drives, const CognitiveParams& params);

}  // namespace ibenet
