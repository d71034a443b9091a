#pragma once
//
// Motivational node: propio/extero/drive congruence and the consummatory
// preferences selector.
//
// Congruence combines, for every drive i,
//
//   A_i = O_i^E * (alpha + sum_j Fa_ij * O_j^S) + O_i^D
//
// where O^E is the proprioceptive need, O^S the external signals coupled to
// the drive with strengths Fa, and O^D the drive-level feedback.
//

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ibenet/blackboard.hpp"

namespace ibenet {

using StimulusSignals = std::map<std::string, double>;

struct CongruenceBehaviour {
  std::string drive_id;
  double alpha = 0.0;
  std::map<std::string, double> couplings;  // stimulus kind -> Fa
  std::string consummatory = "eat";         // eat | drink | rest

  /// Throws ConfigError on alpha outside [0,1], negative or missing couplings.
  void validate() const;
  /// Coupled kind with the largest Fa (ties: lexicographically first).
  const std::string& primary_stimulus() const;
};

/// Congruence value, unclamped. Stimuli without a coupling contribute nothing and
/// are appended to `ignored` when given.
double evaluate_congruence(const CongruenceBehaviour& beh, double o_e, const StimulusSignals& o_s,
                           double o_d, std::vector<std::string>* ignored = nullptr);

/// Firing condition of a congruence rule. With alpha == 0 both the need and a
/// coupled external signal must be non-zero; otherwise the need suffices.
bool congruence_condition(const CongruenceBehaviour& beh, double o_e, const StimulusSignals& o_s);

struct DriveState {
  std::string drive_id;
  Certainty value;
  double lambda = 0.3;
};

/// Drive feedback for the next cycle: lambda * previous congruent certainty,
/// forced to zero once the need is satisfied.
DriveState update_drive(const DriveState& d, Certainty prev_congruent, Certainty o_e_now);

struct CongruentElement {
  std::string drive_id;
  Certainty certainty;
  std::int64_t tick = 0;
};

/// Drive with the strongest positive congruent; ties go to the
/// lexicographically smallest drive id.
std::optional<std::string> select_consummatory_preference(
    std::span<const CongruentElement> congruents);

/// Per-kind external signal: strongest element of each kind (element attr "kind").
StimulusSignals aggregate_stimuli(std::span<const SolutionElement> percepts);

inline constexpr const char* kPreferenceElement = "consummatory-preference";

// Node wiring. The congruence behaviour writes one C_i per firing rule; the
// selector (REAC based) posts the winner plus D_i for every drive.
InternalBehaviour make_congruence_behaviour(const std::vector<CongruenceBehaviour>& drives);
InternalBehaviour make_preference_selector(const std::vector<CongruenceBehaviour>& drives,
                                           double lambda);

}  // namespace ibenet
