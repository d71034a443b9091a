// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "ibenet/harness.hpp"

using namespace ibenet;

namespace {

const std::filesystem::path kScenarios = IBENET_SCENARIO_DIR;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Tuple {
  double alpha, o_e, o_d;
  std::vector<double> fa, o_s;
};

Tuple random_tuple(std::mt19937_64& gen, double alpha_lo, double alpha_hi, double p_zero) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> width(1, 5);
  std::bernoulli_distribution zero(p_zero);
  auto draw = [&] { return zero(gen) ? 0.0 : u(gen); };
  Tuple t;
  t.alpha = alpha_lo + (alpha_hi - alpha_lo) * u(gen);
  t.o_e = draw();
  t.o_d = draw();
  const int n = width(gen);
  for (int j = 0; j < n; ++j) {
    t.fa.push_back(zero(gen) ? 0.0 : 2.0 * u(gen));
    t.o_s.push_back(draw());
  }
  return t;
}

CongruenceBehaviour behaviour(const Tuple& t) {
  CongruenceBehaviour b{"need", t.alpha, {}, "eat"};
  for (std::size_t j = 0; j < t.fa.size(); ++j) b.couplings["s" + std::to_string(j)] = t.fa[j];
  return b;
}

StimulusSignals signals(const Tuple& t) {
  StimulusSignals s;
  for (std::size_t j = 0; j < t.o_s.size(); ++j) s["s" + std::to_string(j)] = t.o_s[j];
  return s;
}

// Runs the congruence behaviour on a motivational node and returns the
// congruent element, if the rule fired.
std::optional<SolutionElement> engine_congruent(const Tuple& t) {
  const auto b = behaviour(t);
  NodeState m(NodeId::Motivational);
  m.behaviours.push_back(make_congruence_behaviour({b}));
  auto post = [&](std::string id, MotivationalLevel level, double c, std::string kind = {}) {
    SolutionElement e;
    e.id = std::move(id);
    e.level = level;
    e.certainty = Certainty(c);
    if (!kind.empty()) e.attrs["kind"] = kind;
    post_element(m, e);
  };
  post("need", MotivationalLevel::InternalPerceptions, t.o_e);
  post("need", MotivationalLevel::Drive, t.o_d);
  for (std::size_t j = 0; j < t.o_s.size(); ++j) {
    const std::string kind = "s" + std::to_string(j);
    post(kind + "#" + std::to_string(j), MotivationalLevel::ExternalPerceptions, t.o_s[j], kind);
  }
  run_cycle(m, {});
  if (const auto* c = find_element(m, MotivationalLevel::Congruents, "need")) return *c;
  return std::nullopt;
}

// Independent evaluation: coupled terms summed in a shuffled order in long
// double, the alpha term folded in last.
double oracle(const Tuple& t, std::mt19937_64& gen) {
  std::vector<std::size_t> order(t.fa.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), gen);
  long double product = 0.0L;
  for (auto j : order) product += static_cast<long double>(t.o_e) * t.fa[j] * t.o_s[j];
  return static_cast<double>(static_cast<long double>(t.o_d) + product +
                             static_cast<long double>(t.o_e) * t.alpha);
}

Verdict eq1_oracle() {
  std::mt19937_64 gen(1001), shuffle(77);
  double worst = 0.0;
  int fired = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto t = random_tuple(gen, 0.0, 1.0, 0.1);
    const double want = oracle(t, shuffle);
    worst = std::max(worst, std::abs(evaluate_congruence(behaviour(t), t.o_e, signals(t), t.o_d) - want));
    if (const auto c = engine_congruent(t)) {
      ++fired;
      worst = std::max(worst, std::abs(c->number("raw") - want));
      worst = std::max(worst, std::abs(c->certainty.value() - std::clamp(want, 0.0, 1.0)));
    }
  }
  return {worst <= 1e-9, fmt("10000 tuples (%d fired on the node), max |diff| = %.3g", fired, worst)};
}

Verdict gating() {
  std::mt19937_64 gen(2002);
  int violations = 0, positives = 0;
  for (int i = 0; i < 10000; ++i) {
    auto t = random_tuple(gen, 0.0, 0.0, 0.3);
    t.o_d = 0.0;
    double coupled = 0.0;
    for (std::size_t j = 0; j < t.fa.size(); ++j) coupled += t.fa[j] * t.o_s[j];
    const auto c = engine_congruent(t);
    const bool active = c && c->certainty.value() > 0.0;
    positives += active;
    if (active != (t.o_e > 0.0 && coupled > 0.0)) ++violations;
  }
  return {violations == 0, fmt("10000 samples, %d active, %d violations", positives, violations)};
}

Verdict motivated_activation() {
  std::mt19937_64 gen(3003);
  int mismatches = 0, unfired = 0;
  for (int i = 0; i < 10000; ++i) {
    auto t = random_tuple(gen, 0.9, 1.0, 0.1);
    if (i % 4 == 0) t.alpha = 1.0;
    t.o_d = 0.0;
    std::fill(t.o_s.begin(), t.o_s.end(), 0.0);
    const auto c = engine_congruent(t);
    if (t.o_e != 0.0 && !c) ++unfired;
    const double value = c ? c->number("raw") : 0.0;
    if (value != t.alpha * t.o_e) ++mismatches;
    if (!congruence_condition(behaviour(t), t.o_e, signals(t)) && t.o_e != 0.0) ++unfired;
  }
  return {mismatches == 0 && unfired == 0,
          fmt("10000 samples, %d inexact values, %d unsatisfied conditions", mismatches, unfired)};
}

Verdict satiety() {
  const auto s = load_scenario(kScenarios / "satiety.json");
  int sated = 0, violations = 0;
  for (double alpha : {0.0, 0.5, 1.0}) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto t = run_scenario(s, alpha, seed);
      for (std::size_t i = 0; i + 1 < t.records.size(); ++i) {
        const auto& now = t.records[i];
        const auto& next = t.records[i + 1];
        if (now.report.selected.kind != ActionKind::Eat || next.animat.hunger != 0.0) continue;
        ++sated;
        for (const auto& c : next.report.congruents) {
          if (c.drive_id == "hunger" && c.certainty != 0.0) ++violations;
        }
      }
    }
  }
  return {sated > 0 && violations == 0,
          fmt("%d satiation events over 30 runs, %d nonzero congruents", sated, violations)};
}

bool perceives(const TraceRecord& r, std::string_view kind) {
  return std::any_of(r.report.percepts.begin(), r.report.percepts.end(),
                     [&](const auto& p) { return p.stimulus_id == kind; });
}

Verdict canonical_alpha0(const Scenario& s) {
  int ok = 0;
  std::string why;
  for (int r = 0; r < 20; ++r) {
    const auto seed = s.seeds.front() + static_cast<std::uint64_t>(r);
    const auto t = run_scenario(s, 0.0, seed);
    bool good = perceives(t.records.front(), "water") && !perceives(t.records.front(), "food");
    for (const auto& rec : t.records) {
      if (is_consummatory(rec.report.selected.kind)) {
        good = good && rec.report.selected.kind == ActionKind::Drink;
        break;
      }
    }
    for (const auto& rec : t.records) {
      if (perceives(rec, "food")) break;
      const auto id = rec.report.selected.id();
      if (id == "explore-for(food)" || id == "eat") {
        good = false;
        break;
      }
    }
    ok += good;
    if (!good && why.empty()) why = fmt(", first failing seed %llu", static_cast<unsigned long long>(seed));
  }
  return {ok == 20, fmt("%d/20 seeds drink first and never seek food unseen%s", ok, why.c_str())};
}

Verdict canonical_alpha09(const Scenario& s) {
  int ok = 0;
  for (int r = 0; r < 20; ++r) {
    const auto t = run_scenario(s, 0.9, s.seeds.front() + static_cast<std::uint64_t>(r));
    if (t.records.front().report.selected.id() != "explore-for(food)") continue;
    const auto found = std::find_if(t.records.begin(), t.records.end(),
                                    [](const auto& rec) { return perceives(rec, "food"); });
    const bool ate = std::any_of(found, t.records.end(), [](const auto& rec) {
      return rec.report.selected.kind == ActionKind::Eat;
    });
    ok += ate;
  }
  return {ok >= 18, fmt("%d/20 seeds explore on tick 0 and eat after discovery (need >= 18)", ok)};
}

Verdict rtime_hypothesis(const Scenario& s) {
  const auto table = sweep_alpha(s, {0.0, 0.25, 0.5, 0.75, 1.0}, 20);
  const auto summary = table.summary();
  const double rho = table.spearman();
  std::string medians;
  for (const auto& row : summary) medians += fmt(" %g:%g", row.alpha, row.median_rtime);
  const bool pass = rho <= -0.8 && summary.back().median_rtime < summary.front().median_rtime;
  return {pass, fmt("spearman %.4f, medians%s", rho, medians.c_str())};
}

Verdict persistence(const Scenario& s) {
  int runs = 0, worst_switches = 0, oscillations = 0;
  for (double alpha : {0.0, 0.3, 0.6, 0.9}) {
    for (double food : {0.3, 0.5, 0.7}) {
      for (double water : {0.3, 0.5, 0.7}) {
        auto cfg = s.network;
        cfg.alpha = alpha;
        cfg.alpha_overrides.clear();
        auto net = reset(cfg);
        SensorFrame frame;
        frame.internal = {{"hunger", 0.6}, {"thirst", 0.55}};
        frame.external = {{"food", 1, food, 0.5, 6.0}, {"water", 2, water, -0.5, 6.0}};
        std::vector<std::string> winners;
        for (int t = 0; t < 200; ++t) {
          const auto r = step(net, frame);
          winners.push_back(r.report.preference ? r.report.preference->drive_id : "");
        }
        int switches = 0;
        for (std::size_t t = 1; t < winners.size(); ++t) switches += winners[t] != winners[t - 1];
        for (std::size_t t = 2; t < winners.size(); ++t) {
          oscillations += winners[t] == winners[t - 2] && winners[t] != winners[t - 1];
        }
        worst_switches = std::max(worst_switches, switches);
        ++runs;
      }
    }
  }
  return {worst_switches <= 1 && oscillations == 0,
          fmt("%d constant-input runs, max %d switches, %d period-2 episodes", runs, worst_switches,
              oscillations)};
}

Verdict aversive() {
  const auto s = load_scenario(kScenarios / "aversive.json");
  const auto insert = std::find_if(s.events.begin(), s.events.end(), [](const auto& e) {
    return e.op == EventOp::Insert && e.object.kind == ObjectKind::Blob;
  });
  if (insert == s.events.end()) return {false, "scenario has no blob insertion"};
  const auto at = static_cast<std::size_t>(insert->tick);
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto t = run_scenario(s, std::nullopt, seed);
    const bool eating = t.records[at - 1].report.selected.kind == ActionKind::Eat;
    const bool in_range = perceives(t.records[at], "blob");
    const bool ran = t.records[at].report.selected.kind == ActionKind::Runaway ||
                     t.records[at + 1].report.selected.kind == ActionKind::Runaway;
    ok += eating && in_range && ran;
  }
  return {ok == 20, fmt("%d/20 seeds interrupt eating with runaway within 1 tick", ok)};
}

Verdict quality() {
  const auto s = load_scenario(kScenarios / "quality.json");
  int best_id = -1;
  double best_q = -1.0;
  for (const auto& o : s.objects) {
    if (o.kind == ObjectKind::Food && o.quality > best_q) {
      best_q = o.quality;
      best_id = o.id;
    }
  }
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto t = run_scenario(s, std::nullopt, seed);
    const auto& first = t.records.front();
    const bool both_visible =
        std::count_if(first.report.percepts.begin(), first.report.percepts.end(),
                      [](const auto& p) { return p.stimulus_id == "food"; }) == 2;
    const auto approach = std::find_if(t.records.begin(), t.records.end(), [](const auto& r) {
      return r.report.selected.kind == ActionKind::Approach;
    });
    ok += both_visible && approach != t.records.end() &&
          approach->report.selected.target_object == best_id;
  }
  return {ok >= 95, fmt("%d/100 seeds approach the quality %.1f source first (need >= 95)", ok, best_q)};
}

Verdict determinism(const Scenario& s) {
  const auto dir = std::filesystem::temp_directory_path() / "ibenet_acceptance";
  std::filesystem::create_directories(dir);
  bool same = true;
  for (double alpha : {0.0, 0.9}) {
    emit(run_scenario(s, alpha, 7), dir / "a.jsonl");
    emit(run_scenario(s, alpha, 7), dir / "b.jsonl");
    same = same && read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl");
  }
  std::string how = "in-process";
#ifdef IBENET_CLI
  for (const char* name : {"c.jsonl", "d.jsonl"}) {
    const std::string cmd = std::string("\"") + IBENET_CLI + "\" run \"" +
                            (kScenarios / "canonical.json").string() + "\" --alpha 0.9 --seed 7 --trace \"" +
                            (dir / name).string() + "\" > /dev/null";
    same = same && std::system(cmd.c_str()) == 0;
  }
  same = same && read_file(dir / "c.jsonl") == read_file(dir / "d.jsonl") &&
         !read_file(dir / "c.jsonl").empty();
  same = same && read_file(dir / "c.jsonl") == read_file(dir / "b.jsonl");
  how += " and two CLI processes";
#endif
  return {same, "identical trace bytes (" + how + ")"};
}

}  // namespace

int main() {
  const auto canonical = load_scenario(kScenarios / "canonical.json");
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"congruence oracle equivalence", eq1_oracle},
      {"gating at alpha = 0", gating},
      {"motivated activation at alpha ~ 1", motivated_activation},
      {"satiety", satiety},
      {"canonical scenario, alpha = 0", [&] { return canonical_alpha0(canonical); }},
      {"canonical scenario, alpha = 0.9", [&] { return canonical_alpha09(canonical); }},
      {"reaction time falls with alpha", [&] { return rtime_hypothesis(canonical); }},
      {"preference persistence", [&] { return persistence(canonical); }},
      {"aversive interruption", aversive},
      {"quality discrimination", quality},
      {"trace determinism", [&] { return determinism(canonical); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2zu %-34s %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), v.detail.c_str(), secs);
    failed += !v.pass;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
              criteria.size());
  return failed == 0 ? 0 : 1;
}
