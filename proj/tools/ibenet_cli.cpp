// ibenet: run scenarios and alpha sweeps from the command line.

#include <cstdio>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ibenet/harness.hpp"

namespace {

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw ibenet::InputError("bad alpha list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ibenet::InputError("empty alpha list");
  return out;
}

int run_command(const std::string& file, std::optional<double> alpha, std::optional<std::uint64_t> seed,
                std::optional<std::int64_t> ticks, const std::string& trace_path) {
  auto scenario = ibenet::load_scenario(file);
  if (ticks) {
    scenario.max_ticks = *ticks;
    scenario.validate();
  }
  const auto trace = ibenet::run_scenario(scenario, alpha, seed.value_or(scenario.seeds.front()));
  if (!trace_path.empty()) ibenet::emit(trace, trace_path);

  std::map<std::string, int> counts;
  for (const auto& r : trace.records) ++counts[r.report.selected.id()];
  std::cout << "scenario " << trace.scenario << " alpha=" << trace.alpha << " seed=" << trace.seed
            << " ticks=" << trace.records.size() << "\n";
  for (const auto& [action, n] : counts) std::cout << "  " << action << ": " << n << "\n";
  const auto rt = ibenet::measure_rtime(trace, scenario.rtime.stimulus, scenario.rtime.action);
  std::cout << "rtime(" << rt.stimulus_kind << " -> " << rt.target_action << "): ";
  if (rt.resolved()) {
    std::cout << *rt.rtime() << " (stimulus at " << rt.stimulus_tick << ")\n";
  } else {
    std::cout << "unresolved\n";
  }
  return 0;
}

int sweep_command(const std::string& file, const std::string& alphas, int repeats,
                  const std::string& out_path, const std::string& summary_path) {
  const auto scenario = ibenet::load_scenario(file);
  const auto table = ibenet::sweep_alpha(scenario, parse_list(alphas), repeats);
  ibenet::emit(table, out_path);
  if (!summary_path.empty()) ibenet::write_text(summary_path, ibenet::format_summary_csv(table));
  for (const auto& s : table.summary()) {
    std::cout << "alpha=" << s.alpha << " resolved=" << s.resolved << "/" << s.runs
              << " median_rtime=" << s.median_rtime << "\n";
  }
  std::cout << "spearman(alpha, median rtime) = " << table.spearman() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Internal behaviour network simulator"};
  app.require_subcommand(1);

  std::string file;
  std::optional<double> alpha;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> ticks;
  std::string trace_path;
  auto* run = app.add_subcommand("run", "Run one scenario and report its reaction time");
  run->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);
  run->add_option("--alpha", alpha, "Override alpha for every drive")->check(CLI::Range(0.0, 1.0));
  run->add_option("--seed", seed, "Random seed (default: first scenario seed)");
  run->add_option("--ticks", ticks, "Override max_ticks");
  run->add_option("--trace", trace_path, "Write the per-tick trace (JSON lines)");

  std::string alphas;
  int repeats = 1;
  std::string out_path;
  std::string summary_path;
  auto* sweep = app.add_subcommand("sweep", "Measure reaction time across alpha values");
  sweep->add_option("scenario", file, "Scenario file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--alphas", alphas, "Comma separated alpha values")->required();
  sweep->add_option("--repeats", repeats, "Seeds per alpha")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--out", out_path, "CSV with one row per run")->required();
  sweep->add_option("--summary", summary_path, "CSV with per-alpha medians");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(file, alpha, seed, ticks, trace_path);
    return sweep_command(file, alphas, repeats, out_path, summary_path);
  } catch (const ibenet::LoadError& e) {
    std::cerr << "load error: " << e.what() << "\n";
    return 2;
  } catch (const ibenet::QueryError& e) {
    std::cerr << "query error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
