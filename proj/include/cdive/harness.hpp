// SPDX-License-Identifier: Apache-2.0
//
// Benchmark runner and the metrics used to compare solver settings.

#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdive/bnb.hpp"

namespace cdive {

struct PrimalEvent {
  double time = 0.0;
  std::optional<double> value;
};

struct DualEvent {
  double time = 0.0;
  double value = -kInf;
};

/// 1 when there is no value, the reference is missing, or the signs
/// differ; otherwise |v - ref| / max(|v|, |ref|, 1e-9).
double gap(std::optional<double> value, std::optional<double> ref);

/// Integral of the piecewise-constant gap over [0, horizon]; the gap is 1
/// before the first event.
double primal_integral(const std::vector<PrimalEvent>& events, double horizon,
                       std::optional<double> ref);
double dual_integral(const std::vector<DualEvent>& events, double horizon,
                     std::optional<double> ref);

/// exp(mean(log(v + shift))) - shift. Throws on empty input.
double shifted_geomean(const std::vector<double>& values, double shift);

struct RunRecord {
  std::string instance;
  std::uint64_t seed = 0;
  std::string setting;
  std::string status;
  double time = 0.0;
  long nodes = 0;
  /// Minimization sense, offset included; empty without a solution.
  std::optional<double> objective;
  double bound = -kInf;
  long node_conflicts = 0;
  std::map<std::string, long> conflicts;
  std::map<std::string, long> solutions;
  std::map<std::string, long> improving;
  std::map<std::string, double> depth;
  std::map<std::string, int> dive_calls;
  double primal_integral = 0.0;
  double dual_integral = 0.0;
  /// Raw timeline, used for the integrals.
  std::vector<TimelineEvent> timeline;
  std::string error;

  bool solved() const { return status == "optimal" || status == "infeasible"; }
};

struct ProfilePoint {
  double tau = 1.0;
  double fraction = 0.0;
};

/// For each setting, the fraction of (instance, seed) cells with
/// time <= tau * best time; unsolved cells count as infinite time.
/// Throws when settings do not cover the same grid.
std::map<std::string, std::vector<ProfilePoint>> performance_profile(
    const std::vector<RunRecord>& records, const std::vector<double>& taus);

struct NamedSetting {
  std::string name;
  SolverConfig config;
};

struct BenchmarkSpec {
  std::vector<std::string> instances;
  std::vector<NamedSetting> settings;
  std::vector<std::uint64_t> seeds{0};
  int workers = 1;
  /// Divides the 10/100/1000 s bracket thresholds.
  double bracket_divisor = 100.0;
};

/// Reads settings from JSON: {"time_limit": s, "node_limit": n,
/// "bracket_divisor": d, "settings": [{"name": .., "heuristics": "farkas,coef",
/// "kappa": .., "dive_freq": .., "time_limit": .., "node_limit": ..}]}.
std::vector<NamedSetting> load_settings(const std::string& json_text, double* bracket_divisor = nullptr);

/// Runs every (instance, seed, setting) cell. Records come back in grid
/// order regardless of worker count; integrals use the best objective seen
/// on the instance as reference. `on_record` is called from one thread.
std::vector<RunRecord> run_benchmark(const BenchmarkSpec& spec,
                                     const std::function<void(const RunRecord&)>& on_record = {});

/// Same, for problems already in memory.
std::vector<RunRecord> run_benchmark(const std::vector<Problem>& problems,
                                     const std::vector<NamedSetting>& settings,
                                     const std::vector<std::uint64_t>& seeds, int workers,
                                     const std::function<void(const RunRecord&)>& on_record = {});

RunRecord make_record(const Problem& p, const std::string& instance, std::uint64_t seed, const std::string& setting,
                      const SolveResult& res);

/// Fills the integrals from the timelines; reference = best objective per instance.
void attach_integrals(std::vector<RunRecord>& records, double horizon);

void write_csv_header(std::ostream& os);
void write_csv(std::ostream& os, const RunRecord& r);
/// One JSON object per line with the timeline of the run.
void write_trace(std::ostream& os, const RunRecord& r);

struct AggregateRow {
  std::string group;
  std::string setting;
  int cells = 0;
  int solved = 0;
  double time_sgm = 0.0;
  double nodes_sgm = 0.0;
  long conflicts = 0;
  double mean_depth = 0.0;
};

/// Groups: "all", "affected" (node counts differ among settings) and
/// "[k,tilim]" for k in {10, 100, 1000} / divisor (solved by some setting,
/// every setting took at least that long).
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, double bracket_divisor);

void write_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows);

}  // namespace cdive
