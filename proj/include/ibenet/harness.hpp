#pragma once
//
// Experiment harness: scenario files, deterministic runs, reaction times,
// alpha sweeps and trace/CSV output. See docs/formats.md for the file schemas.
//

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ibenet/animat.hpp"
#include "ibenet/network.hpp"

namespace ibenet {

struct RtimeQuery {
  std::string stimulus = "food";
  std::string action = "eat";
};

struct Scenario {
  std::string name;
  NetworkConfig network;
  WorldParams world;
  AnimatState animat;
  std::vector<WorldObject> objects;
  std::vector<ScheduledEvent> events;
  std::int64_t max_ticks = 0;
  std::vector<std::uint64_t> seeds;
  RtimeQuery rtime;

  /// Throws LoadError naming the offending field.
  void validate() const;
};

/// Parses the JSON scenario schema. Errors carry the field path.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct TraceRecord {
  AnimatState animat;  // state the tick was sensed in
  CycleReport report;
  bool fault = false;
};

struct Trace {
  std::string scenario;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::int64_t max_ticks = 0;
  std::map<std::string, std::int64_t> onsets;  // object kind -> first tick present
  std::vector<TraceRecord> records;
};

/// Runs `s` from a fresh network and world. `alpha_override` replaces the
/// global alpha and every per-drive override.
Trace run_scenario(const Scenario& s, std::optional<double> alpha_override, std::uint64_t seed);

struct ReactionTimeRecord {
  std::string stimulus_kind;
  std::string target_action;
  std::int64_t stimulus_tick = 0;
  std::optional<std::int64_t> action_tick;

  bool resolved() const { return action_tick.has_value(); }
  std::optional<std::int64_t> rtime() const;
};

/// Cycles from the stimulus' first presence to the first selection of
/// `target_action` (an action id such as "eat" or "approach(food)").
/// Throws QueryError when the stimulus never appears.
ReactionTimeRecord measure_rtime(const Trace& t, std::string_view stimulus_kind,
                                 std::string_view target_action);

struct SweepRow {
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::int64_t> rtime;
};

struct SweepSummaryRow {
  double alpha = 0.0;
  int runs = 0;
  int resolved = 0;
  double median_rtime = 0.0;  // unresolved runs count as max_ticks
};

struct SweepTable {
  std::int64_t max_ticks = 0;
  std::vector<SweepRow> rows;

  std::vector<SweepSummaryRow> summary() const;
  /// Spearman rank correlation between alpha and median RTIME.
  double spearman() const;
};

SweepTable sweep_alpha(const Scenario& s, const std::vector<double>& alphas, int repeats);

double median(std::vector<double> values);
double spearman_correlation(const std::vector<double>& x, const std::vector<double>& y);

std::string format_trace_lines(const Trace& t);
std::string format_csv(const SweepTable& table);
std::string format_summary_csv(const SweepTable& table);

/// Writes `content` to `destination`; throws IoError naming the path.
void write_text(const std::filesystem::path& destination, std::string_view content);

inline void emit(const Trace& t, const std::filesystem::path& destination) {
  write_text(destination, format_trace_lines(t));
}
inline void emit(const SweepTable& table, const std::filesystem::path& destination) {
  write_text(destination, format_csv(table));
}

}  // namespace ibenet
