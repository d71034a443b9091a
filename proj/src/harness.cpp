#include "ibenet/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace ibenet {

namespace {

using nlohmann::ordered_json;

ordered_json to_json(const PotentialAction& a) {
  ordered_json j;
  j["action"] = a.id();
  j["priority"] = a.priority;
  j["source"] = to_string(a.source);
  j["object"] = a.target_object ? ordered_json(*a.target_object) : ordered_json();
  return j;
}

ordered_json to_json(const TraceRecord& r) {
  const auto& rep = r.report;
  ordered_json j;
  j["tick"] = rep.tick;
  j["position"] = {r.animat.position.x, r.animat.position.y};
  j["heading"] = r.animat.heading;
  j["internal"] = {{"hunger", r.animat.hunger},
                   {"thirst", r.animat.thirst},
                   {"fatigue", r.animat.fatigue}};
  j["qualities"] = {{"strength", r.animat.strength}, {"lucidity", r.animat.lucidity}};
  ordered_json percepts = ordered_json::array();
  for (const auto& p : rep.percepts) {
    percepts.push_back({{"id", p.element_id()}, {"certainty", p.certainty}});
  }
  j["percepts"] = std::move(percepts);
  j["stimuli"] = rep.stimuli;
  ordered_json congruents = ordered_json::array();
  for (const auto& c : rep.congruents) {
    congruents.push_back({{"drive", c.drive_id},
                          {"o_e", c.o_e},
                          {"o_s", c.o_s},
                          {"o_d", c.o_d},
                          {"raw", c.raw},
                          {"certainty", c.certainty},
                          {"fired", c.fired}});
  }
  j["congruents"] = std::move(congruents);
  j["drives"] = rep.drive_out;
  j["preference"] = rep.preference
                        ? ordered_json{{"drive", rep.preference->drive_id},
                                       {"certainty", rep.preference->certainty}}
                        : ordered_json();
  ordered_json candidates = ordered_json::array();
  for (const auto& a : rep.candidates) candidates.push_back(to_json(a));
  j["candidates"] = std::move(candidates);
  j["selected"] = to_json(rep.selected);
  j["fault"] = r.fault;
  return j;
}

std::string format_alpha(double a) {
  std::ostringstream os;
  os.precision(17);
  os << a;
  return os.str();
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double avg = (static_cast<double>(i + k) / 2.0) + 1.0;
    for (std::size_t m = i; m <= k; ++m) r[order[m]] = avg;
    i = k + 1;
  }
  return r;
}

}  // namespace

Trace run_scenario(const Scenario& s, std::optional<double> alpha_override, std::uint64_t seed) {
  NetworkConfig cfg = s.network;
  if (alpha_override) {
    cfg.alpha = *alpha_override;
    cfg.alpha_overrides.clear();
  }
  auto net = reset(cfg);
  auto world = make_world(s.world, s.animat, s.objects, s.events, seed);

  Trace trace;
  trace.scenario = s.name;
  trace.alpha = cfg.alpha;
  trace.seed = seed;
  trace.max_ticks = s.max_ticks;
  trace.records.reserve(static_cast<std::size_t>(s.max_ticks));
  for (std::int64_t t = 0; t < s.max_ticks; ++t) {
    for (const auto& obj : world.objects) trace.onsets.try_emplace(std::string(to_string(obj.kind)), t);
    const auto frame = sense(world);
    auto result = step(net, frame);
    TraceRecord rec{world.animat, std::move(result.report), false};
    rec.fault = world_step(world, result.selected).fault;
    trace.records.push_back(std::move(rec));
  }
  return trace;
}

std::optional<std::int64_t> ReactionTimeRecord::rtime() const {
  if (!action_tick) return std::nullopt;
  return *action_tick - stimulus_tick;
}

ReactionTimeRecord measure_rtime(const Trace& t, std::string_view stimulus_kind,
                                 std::string_view target_action) {
  const auto onset = t.onsets.find(std::string(stimulus_kind));
  if (onset == t.onsets.end()) {
    throw QueryError("stimulus '" + std::string(stimulus_kind) + "' never present in the trace");
  }
  ReactionTimeRecord rec{std::string(stimulus_kind), std::string(target_action), onset->second,
                         std::nullopt};
  for (const auto& r : t.records) {
    if (r.report.tick < rec.stimulus_tick) continue;
    if (r.report.selected.id() == target_action) {
      rec.action_tick = r.report.tick;
      break;
    }
  }
  return rec;
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

std::vector<SweepSummaryRow> SweepTable::summary() const {
  std::vector<SweepSummaryRow> out;
  std::vector<std::vector<double>> samples;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.alpha == row.alpha; });
    if (it == out.end()) {
      out.push_back({row.alpha, 0, 0, 0.0});
      samples.emplace_back();
      it = out.end() - 1;
    }
    auto& bucket = samples[static_cast<std::size_t>(it - out.begin())];
    it->runs += 1;
    if (row.rtime) it->resolved += 1;
    bucket.push_back(static_cast<double>(row.rtime.value_or(max_ticks)));
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].median_rtime = median(samples[i]);
  return out;
}

double SweepTable::spearman() const {
  std::vector<double> alphas, medians;
  for (const auto& s : summary()) {
    alphas.push_back(s.alpha);
    medians.push_back(s.median_rtime);
  }
  return spearman_correlation(alphas, medians);
}

SweepTable sweep_alpha(const Scenario& s, const std::vector<double>& alphas, int repeats) {
  if (repeats < 1) throw InputError("repeats must be >= 1");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw InputError("alpha " + format_alpha(a) + " outside [0,1]");
  }
  SweepTable table;
  table.max_ticks = s.max_ticks;
  const std::uint64_t base = s.seeds.front();
  for (double a : alphas) {
    for (int r = 0; r < repeats; ++r) {
      const std::uint64_t seed = base + static_cast<std::uint64_t>(r);
      const auto trace = run_scenario(s, a, seed);
      const auto rt = measure_rtime(trace, s.rtime.stimulus, s.rtime.action);
      table.rows.push_back({a, seed, rt.rtime()});
    }
  }
  return table;
}

std::string format_trace_lines(const Trace& t) {
  std::string out;
  for (const auto& r : t.records) {
    out += to_json(r).dump();
    out += '\n';
  }
  return out;
}

std::string format_csv(const SweepTable& table) {
  std::string out = "alpha,seed,rtime,resolved\n";
  for (const auto& row : table.rows) {
    out += format_alpha(row.alpha) + "," + std::to_string(row.seed) + "," +
           (row.rtime ? std::to_string(*row.rtime) : std::string()) + "," +
           (row.rtime ? "1" : "0") + "\n";
  }
  return out;
}

std::string format_summary_csv(const SweepTable& table) {
  std::string out = "alpha,runs,resolved,median_rtime\n";
  for (const auto& s : table.summary()) {
    std::ostringstream os;
    os.precision(17);
    os << s.median_rtime;
    out += format_alpha(s.alpha) + "," + std::to_string(s.runs) + "," +
           std::to_string(s.resolved) + "," + os.str() + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& destination, std::string_view content) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(destination.string() + ": cannot open for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError(destination.string() + ": write failed");
}

}  // namespace ibenet
