#pragma once
//
// Internal behaviour network: the cognitive and motivational nodes wired
// together, plus sensors and the per-tick pipeline.
//
// One tick runs three node cycles:
//   cognitive   exteroceptors -> external perceptions, perceptual persistence
//   motivational persistents + proprioceptors -> congruence -> preference
//   cognitive   preference -> attention, reflex inhibition, behaviour selection
// Channels deliver on the receiver's next cycle, so a percept seen at tick t
// can drive the action chosen at tick t.
//

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ibenet/blackboard.hpp"
#include "ibenet/cognitive.hpp"
#include "ibenet/motivational.hpp"

namespace ibenet {

struct SensorFrame {
  std::vector<Percept> external;          // exteroceptors
  std::map<std::string, double> internal;  // proprioceptors: drive id -> O^E
};

struct NetworkConfig {
  std::vector<CongruenceBehaviour> drives;
  double alpha = 0.0;
  std::map<std::string, double> alpha_overrides;  // per-drive alpha
  double lambda = 0.3;
  double rho = 0.9;
  double contact_range = 1.0;
  double g_runaway = 1.0;
  double g_avoid = 0.8;

  void validate() const;
  /// Drives with their effective alpha filled in.
  std::vector<CongruenceBehaviour> resolved_drives() const;
};

struct CongruenceRecord {
  std::string drive_id;
  double o_e = 0.0;
  StimulusSignals o_s;  // coupled kinds only
  double o_d = 0.0;
  double raw = 0.0;        // unclamped congruence, also for rules that did not fire
  double certainty = 0.0;  // stored on the congruents level
  bool fired = false;
};

struct Preference {
  std::string drive_id;
  double certainty = 0.0;
};

struct CycleReport {
  std::int64_t tick = 0;
  std::vector<Percept> percepts;
  StimulusSignals stimuli;  // per-kind signal on the motivational node
  std::map<std::string, double> internal;
  std::map<std::string, double> drive_in;   // O^D used this tick
  std::vector<CongruenceRecord> congruents;
  std::map<std::string, double> drive_out;  // O^D posted for the next tick
  std::optional<Preference> preference;
  std::vector<PotentialAction> candidates;
  PotentialAction selected;
  std::vector<Reac> reacs;
};

struct NetworkState {
  NetworkConfig config;
  std::vector<CongruenceBehaviour> drives;
  NodeState cognitive{NodeId::Cognitive};
  NodeState motivational{NodeId::Motivational};
  std::vector<Transmission> cognitive_inbox;
  std::vector<Transmission> motivational_inbox;
  std::int64_t tick = 0;
};

struct StepResult {
  PotentialAction selected;
  CycleReport report;
};

inline constexpr const char* kExteroceptors = "exteroceptors";
inline constexpr const char* kProprioceptors = "proprioceptors";

/// Fresh network: empty levels, zero drives, tick 0. Throws ConfigError.
NetworkState reset(const NetworkConfig& config);

/// Throws InputError on a malformed frame.
StepResult step(NetworkState& net, const SensorFrame& frame);

}  // namespace ibenet
