#include "ibenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ibenet {

namespace {

const std::vector<std::string> kAfferentPass = {kPersistenceBehaviour};
const std::vector<std::string> kEfferentPass = {kAttentionBehaviour, kInhibitionBehaviour,
                                                kSelectorBehaviour};

void validate_frame(const NetworkState& net, const SensorFrame& frame) {
  for (const auto& d : net.drives) {
    if (!frame.internal.contains(d.drive_id)) {
      throw InputError("sensor frame lacks internal state '" + d.drive_id + "'");
    }
  }
  for (const auto& [id, v] : frame.internal) {
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("internal state '" + id + "' outside [0,1]");
  }
  std::set<std::string> seen;
  for (const auto& p : frame.external) {
    if (p.stimulus_id.empty()) throw InputError("percept without stimulus kind");
    if (!(p.certainty >= 0.0 && p.certainty <= 1.0)) {
      throw InputError("percept " + p.element_id() + " certainty outside [0,1]");
    }
    if (!std::isfinite(p.bearing) || !(p.distance >= 0.0)) {
      throw InputError("percept " + p.element_id() + " has invalid geometry");
    }
    if (!seen.insert(p.element_id()).second) {
      throw InputError("percept " + p.element_id() + " reported twice");
    }
  }
}

void dispatch(NetworkState& net, std::vector<Transmission> emissions) {
  for (auto& t : emissions) {
    if (net.motivational.receptors.contains(t.channel)) {
      net.motivational_inbox.push_back(std::move(t));
    } else if (net.cognitive.receptors.contains(t.channel)) {
      net.cognitive_inbox.push_back(std::move(t));
    } else {
      throw StructuralError("emission on unconnected channel '" + t.channel + "'");
    }
  }
}

std::map<std::string, double> drive_level(const NodeState& mot,
                                          const std::vector<CongruenceBehaviour>& drives) {
  std::map<std::string, double> out;
  for (const auto& d : drives) {
    const auto* e = find_element(mot, MotivationalLevel::Drive, d.drive_id);
    out[d.drive_id] = e == nullptr ? 0.0 : e->certainty.value();
  }
  return out;
}

}  // namespace

void NetworkConfig::validate() const {
  if (drives.empty()) throw ConfigError("network needs at least one drive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
  std::set<std::string> ids;
  for (const auto& d : drives) {
    if (!ids.insert(d.drive_id).second) throw ConfigError("duplicate drive '" + d.drive_id + "'");
  }
  for (const auto& [id, a] : alpha_overrides) {
    if (!ids.contains(id)) throw ConfigError("alpha override for unknown drive '" + id + "'");
    if (!(a >= 0.0 && a <= 1.0)) {
      throw ConfigError("alpha override for '" + id + "' must lie in [0,1]");
    }
  }
  for (const auto& d : resolved_drives()) d.validate();
  if (!(lambda >= 0.0 && lambda < 1.0)) throw ConfigError("lambda must lie in [0,1)");
  if (!(rho > 0.0 && rho < 1.0)) throw ConfigError("rho must lie in (0,1)");
  if (!(contact_range > 0.0)) throw ConfigError("contact_range must be positive");
  if (!(g_runaway >= 0.0) || !(g_avoid >= 0.0)) throw ConfigError("reflex gains must be >= 0");
}

std::vector<CongruenceBehaviour> NetworkConfig::resolved_drives() const {
  auto out = drives;
  for (auto& d : out) {
    const auto it = alpha_overrides.find(d.drive_id);
    d.alpha = it == alpha_overrides.end() ? alpha : it->second;
  }
  return out;
}

NetworkState reset(const NetworkConfig& config) {
  config.validate();
  NetworkState net;
  net.config = config;
  net.drives = config.resolved_drives();

  net.motivational.behaviours = {make_congruence_behaviour(net.drives),
                                 make_preference_selector(net.drives, config.lambda)};
  net.cognitive.behaviours = make_cognitive_behaviours(
      net.drives, {config.rho, config.contact_range, config.g_runaway, config.g_avoid});

  add_interface(net.cognitive, kExteroceptors, CognitiveLevel::ExternalPerceptions);
  add_interface(net.motivational, kProprioceptors, MotivationalLevel::InternalPerceptions);
  connect(net.cognitive, net.motivational,
          {{CognitiveLevel::PerceptualPersistents, MotivationalLevel::ExternalPerceptions, {}}});
  connect(net.motivational, net.cognitive,
          {{MotivationalLevel::Drive, CognitiveLevel::ConsummatoryPreferents,
            std::string(kPreferenceElement)}});
  return net;
}

StepResult step(NetworkState& net, const SensorFrame& frame) {
  validate_frame(net, frame);
  CycleReport report;
  report.tick = net.tick;
  report.percepts = frame.external;
  report.internal = frame.internal;

  // Afferent cognitive pass.
  Transmission extero{kExteroceptors, CognitiveLevel::ExternalPerceptions, {}};
  for (const auto& p : frame.external) {
    extero.elements.push_back(to_element(p, CognitiveLevel::ExternalPerceptions));
  }
  auto inbox = std::exchange(net.cognitive_inbox, {});
  inbox.push_back(std::move(extero));
  dispatch(net, run_cycle(net.cognitive, inbox, kAfferentPass));

  // Motivational cycle.
  Transmission proprio{kProprioceptors, MotivationalLevel::InternalPerceptions, {}};
  for (const auto& [id, v] : frame.internal) {
    SolutionElement e;
    e.id = id;
    e.certainty = Certainty(v);
    proprio.elements.push_back(std::move(e));
  }
  report.drive_in = drive_level(net.motivational, net.drives);
  inbox = std::exchange(net.motivational_inbox, {});
  inbox.push_back(std::move(proprio));
  dispatch(net, run_cycle(net.motivational, inbox));

  report.stimuli = aggregate_stimuli(
      read_elements(net.motivational, MotivationalLevel::ExternalPerceptions));
  for (const auto& d : net.drives) {
    CongruenceRecord rec;
    rec.drive_id = d.drive_id;
    rec.o_e = report.internal.at(d.drive_id);
    for (const auto& [kind, fa] : d.couplings) {
      const auto it = report.stimuli.find(kind);
      rec.o_s[kind] = it == report.stimuli.end() ? 0.0 : it->second;
    }
    rec.o_d = report.drive_in.at(d.drive_id);
    rec.raw = evaluate_congruence(d, rec.o_e, rec.o_s, rec.o_d);
    if (const auto* c = find_element(net.motivational, MotivationalLevel::Congruents, d.drive_id)) {
      rec.fired = true;
      rec.raw = c->number("raw");
      rec.certainty = c->certainty.value();
    }
    report.congruents.push_back(std::move(rec));
  }
  report.drive_out = drive_level(net.motivational, net.drives);
  if (const auto* pref =
          find_element(net.motivational, MotivationalLevel::Drive, kPreferenceElement)) {
    report.preference = Preference{pref->text("drive"), pref->certainty.value()};
  }
  report.reacs = net.motivational.reacs;

  // Efferent cognitive pass.
  inbox = std::exchange(net.cognitive_inbox, {});
  dispatch(net, run_cycle(net.cognitive, inbox, kEfferentPass));

  for (const auto& e : read_elements(net.cognitive, CognitiveLevel::PotentialActions)) {
    report.candidates.push_back(action_from_element(e));
  }
  const auto actions = read_elements(net.cognitive, CognitiveLevel::Actions);
  if (actions.size() != 1) {
    throw StructuralError("expected exactly one selected action, found " +
                          std::to_string(actions.size()));
  }
  report.selected = action_from_element(actions.front());
  report.reacs.insert(report.reacs.end(), net.cognitive.reacs.begin(), net.cognitive.reacs.end());

  ++net.tick;
  return {report.selected, std::move(report)};
}

}  // namespace ibenet
