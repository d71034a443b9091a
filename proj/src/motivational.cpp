#include "ibenet/motivational.hpp"

#include <algorithm>
#include <cmath>

namespace ibenet {

namespace {

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string(what) + " = " + std::to_string(v) + " outside [0,1]");
  }
}

double read_certainty(const NodeState& node, const LevelId& level, const std::string& id) {
  const auto* e = find_element(node, level, id);
  return e == nullptr ? 0.0 : e->certainty.value();
}

StimulusSignals coupled_signals(const CongruenceBehaviour& beh, const StimulusSignals& all) {
  StimulusSignals out;
  for (const auto& [kind, fa] : beh.couplings) {
    const auto it = all.find(kind);
    out[kind] = it == all.end() ? 0.0 : it->second;
  }
  return out;
}

}  // namespace

void CongruenceBehaviour::validate() const {
  if (drive_id.empty()) throw ConfigError("drive id is empty");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ConfigError("drive '" + drive_id + "': alpha must lie in [0,1]");
  }
  if (couplings.empty()) {
    throw ConfigError("drive '" + drive_id + "': needs at least one coupled stimulus");
  }
  for (const auto& [kind, fa] : couplings) {
    if (!(fa >= 0.0) || !std::isfinite(fa)) {
      throw ConfigError("drive '" + drive_id + "': coupling '" + kind + "' must be >= 0");
    }
  }
  if (consummatory != "eat" && consummatory != "drink" && consummatory != "rest") {
    throw ConfigError("drive '" + drive_id + "': consummatory action must be eat, drink or rest");
  }
}

const std::string& CongruenceBehaviour::primary_stimulus() const {
  const auto best = std::max_element(couplings.begin(), couplings.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; });
  return best->first;
}

double evaluate_congruence(const CongruenceBehaviour& beh, double o_e, const StimulusSignals& o_s,
                           double o_d, std::vector<std::string>* ignored) {
  require_unit(o_e, "O^E");
  require_unit(o_d, "O^D");
  double coupled = 0.0;
  for (const auto& [kind, signal] : o_s) {
    require_unit(signal, "O^S");
    const auto it = beh.couplings.find(kind);
    if (it == beh.couplings.end()) {
      if (ignored != nullptr) ignored->push_back(kind);
      continue;
    }
    coupled += it->second * signal;
  }
  return o_e * (beh.alpha + coupled) + o_d;
}

bool congruence_condition(const CongruenceBehaviour& beh, double o_e, const StimulusSignals& o_s) {
  require_unit(o_e, "O^E");
  if (o_e == 0.0) return false;
  if (beh.alpha != 0.0) return true;
  return std::any_of(o_s.begin(), o_s.end(), [&](const auto& kv) {
    return beh.couplings.contains(kv.first) && kv.second != 0.0;
  });
}

DriveState update_drive(const DriveState& d, Certainty prev_congruent, Certainty o_e_now) {
  DriveState next = d;
  next.value = o_e_now.value() > 0.0 ? Certainty::clamped(d.lambda * prev_congruent.value())
                                     : Certainty{};
  return next;
}

std::optional<std::string> select_consummatory_preference(
    std::span<const CongruentElement> congruents) {
  const CongruentElement* best = nullptr;
  for (const auto& c : congruents) {
    if (c.certainty.value() <= 0.0) continue;
    if (best == nullptr || c.certainty > best->certainty ||
        (c.certainty == best->certainty && c.drive_id < best->drive_id)) {
      best = &c;
    }
  }
  if (best == nullptr) return std::nullopt;
  return best->drive_id;
}

StimulusSignals aggregate_stimuli(std::span<const SolutionElement> percepts) {
  StimulusSignals out;
  for (const auto& e : percepts) {
    const std::string kind = e.text("kind", e.id);
    auto& slot = out[kind];
    slot = std::max(slot, e.certainty.value());
  }
  return out;
}

InternalBehaviour make_congruence_behaviour(const std::vector<CongruenceBehaviour>& drives) {
  InternalBehaviour beh;
  beh.id = "propio/extero/drive-congruence";
  beh.uses_reac = false;
  beh.rebuilds = {MotivationalLevel::Congruents};
  for (const auto& drive : drives) {
    ElementaryBehaviour rule;
    rule.id = drive.drive_id;
    rule.condition = [drive](const NodeState& node) -> std::vector<Instantiation> {
      const auto* need = find_element(node, MotivationalLevel::InternalPerceptions, drive.drive_id);
      if (need == nullptr) return {};
      const auto percepts = read_elements(node, MotivationalLevel::ExternalPerceptions);
      const auto signals = coupled_signals(drive, aggregate_stimuli(percepts));
      if (!congruence_condition(drive, need->certainty.value(), signals)) return {};
      Instantiation inst;
      inst.bound.push_back(*need);
      for (const auto& p : percepts) {
        if (drive.couplings.contains(p.text("kind", p.id))) inst.bound.push_back(p);
      }
      return {inst};
    };
    rule.action = [drive](const NodeState& node, const Instantiation& inst) {
      const double o_e = inst.bound.front().certainty.value();
      const auto signals = coupled_signals(
          drive, aggregate_stimuli(std::span(inst.bound).subspan(1)));
      const double o_d = read_certainty(node, MotivationalLevel::Drive, drive.drive_id);
      const double raw = evaluate_congruence(drive, o_e, signals, o_d);
      SolutionElement c;
      c.id = drive.drive_id;
      c.level = MotivationalLevel::Congruents;
      c.certainty = Certainty::clamped(raw);
      c.attrs = {{"raw", raw}, {"o_e", o_e}, {"o_d", o_d}, {"alpha", drive.alpha}};
      for (const auto& [kind, s] : signals) c.attrs["s:" + kind] = s;
      return std::vector<SolutionElement>{std::move(c)};
    };
    beh.rules.push_back(std::move(rule));
  }
  return beh;
}

InternalBehaviour make_preference_selector(const std::vector<CongruenceBehaviour>& drives,
                                           double lambda) {
  InternalBehaviour beh;
  beh.id = "consummatory-preferences-selector";
  beh.uses_reac = true;
  beh.rebuilds = {MotivationalLevel::Drive};
  std::vector<std::string> ids;
  for (const auto& d : drives) ids.push_back(d.drive_id);

  for (const auto& drive : drives) {
    ElementaryBehaviour rule;
    rule.id = drive.drive_id;
    rule.condition = [id = drive.drive_id](const NodeState& node) -> std::vector<Instantiation> {
      const auto* c = find_element(node, MotivationalLevel::Congruents, id);
      if (c == nullptr || c->certainty.value() <= 0.0) return {};
      return {Instantiation{{*c}}};
    };
    rule.action = [ids, lambda](const NodeState& node, const Instantiation& inst) {
      const auto& winner = inst.bound.front();
      std::vector<SolutionElement> writes;
      SolutionElement pref;
      pref.id = kPreferenceElement;
      pref.level = MotivationalLevel::Drive;
      pref.certainty = winner.certainty;
      pref.attrs = {{"drive", winner.id}};
      writes.push_back(std::move(pref));
      for (const auto& id : ids) {
        const DriveState current{id, Certainty{}, lambda};
        const auto next = update_drive(
            current, Certainty(read_certainty(node, MotivationalLevel::Congruents, id)),
            Certainty(read_certainty(node, MotivationalLevel::InternalPerceptions, id)));
        SolutionElement d;
        d.id = id;
        d.level = MotivationalLevel::Drive;
        d.certainty = next.value;
        writes.push_back(std::move(d));
      }
      return writes;
    };
    beh.rules.push_back(std::move(rule));
  }
  return beh;
}

}  // namespace ibenet
