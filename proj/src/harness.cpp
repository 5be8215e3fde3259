// SPDX-License-Identifier: Apache-2.0

#include "cdive/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cdive/mps.hpp"
#include "json.hpp"

namespace cdive {

double gap(std::optional<double> value, std::optional<double> ref) {
  if (!value || !ref || !std::isfinite(*value) || !std::isfinite(*ref)) return 1.0;
  if ((*value < 0.0 && *ref > 0.0) || (*value > 0.0 && *ref < 0.0)) return 1.0;
  const double denom = std::max({std::abs(*value), std::abs(*ref), 1e-9});
  return std::min(1.0, std::abs(*value - *ref) / denom);
}

namespace {

template <typename Event, typename Value>
double integrate(const std::vector<Event>& events, double horizon, std::optional<double> ref, Value value_of) {
  double area = 0.0;
  double prev = 0.0;
  double g = 1.0;
  for (const Event& e : events) {
    const double t = std::clamp(e.time, 0.0, horizon);
    area += g * (t - prev);
    prev = t;
    g = gap(value_of(e), ref);
  }
  area += g * (horizon - prev);
  return area;
}

}  // namespace

double primal_integral(const std::vector<PrimalEvent>& events, double horizon, std::optional<double> ref) {
  return integrate(events, horizon, ref, [](const PrimalEvent& e) { return e.value; });
}

double dual_integral(const std::vector<DualEvent>& events, double horizon, std::optional<double> ref) {
  return integrate(events, horizon, ref, [](const DualEvent& e) -> std::optional<double> {
    if (!std::isfinite(e.value)) return std::nullopt;
    return e.value;
  });
}

double shifted_geomean(const std::vector<double>& values, double shift) {
  if (values.empty()) throw std::invalid_argument("shifted_geomean of an empty set");
  double s = 0.0;
  for (double v : values) {
    if (v < 0.0) throw std::invalid_argument("shifted_geomean needs nonnegative values");
    s += std::log(v + shift);
  }
  return std::exp(s / static_cast<double>(values.size())) - shift;
}

namespace {

using CellKey = std::pair<std::string, std::uint64_t>;

std::vector<std::string> setting_order(const std::vector<RunRecord>& records) {
  std::vector<std::string> out;
  for (const RunRecord& r : records)
    if (std::find(out.begin(), out.end(), r.setting) == out.end()) out.push_back(r.setting);
  return out;
}

std::map<CellKey, std::map<std::string, const RunRecord*>> cells_of(const std::vector<RunRecord>& records) {
  std::map<CellKey, std::map<std::string, const RunRecord*>> cells;
  for (const RunRecord& r : records) cells[{r.instance, r.seed}][r.setting] = &r;
  return cells;
}

}  // namespace

std::map<std::string, std::vector<ProfilePoint>> performance_profile(const std::vector<RunRecord>& records,
                                                                     const std::vector<double>& taus) {
  const auto settings = setting_order(records);
  const auto cells = cells_of(records);
  for (const auto& [key, by_setting] : cells)
    if (by_setting.size() != settings.size())
      throw std::invalid_argument("grid mismatch at instance " + key.first);
  std::map<std::string, std::vector<ProfilePoint>> out;
  const double total = static_cast<double>(cells.size());
  for (const std::string& s : settings) {
    auto& curve = out[s];
    for (double tau : taus) {
      int count = 0;
      for (const auto& [key, by_setting] : cells) {
        double best = kInf;
        for (const auto& [name, r] : by_setting)
          if (r->solved()) best = std::min(best, r->time);
        const RunRecord* mine = by_setting.at(s);
        if (mine->solved() && std::isfinite(best) && mine->time <= tau * best) ++count;
      }
      curve.push_back({tau, total > 0 ? count / total : 0.0});
    }
  }
  return out;
}

std::vector<NamedSetting> load_settings(const std::string& json_text, double* bracket_divisor) {
  using nlohmann::json;
  const json doc = json::parse(json_text);
  SolverConfig base;
  if (doc.contains("time_limit")) base.time_limit = doc["time_limit"].get<double>();
  if (doc.contains("node_limit")) base.node_limit = doc["node_limit"].get<long>();
  if (bracket_divisor && doc.contains("bracket_divisor")) *bracket_divisor = doc["bracket_divisor"].get<double>();
  if (!doc.contains("settings") || !doc["settings"].is_array())
    throw std::invalid_argument("settings file needs a \"settings\" array");
  static const std::set<std::string> known{"name",      "heuristics", "kappa",        "dive_freq",
                                           "time_limit", "node_limit", "pool_capacity"};
  std::vector<NamedSetting> out;
  for (const json& s : doc["settings"]) {
    for (auto it = s.begin(); it != s.end(); ++it)
      if (!known.count(it.key())) throw std::invalid_argument("unknown setting key '" + it.key() + "'");
    NamedSetting ns;
    ns.name = s.at("name").get<std::string>();
    ns.config = base;
    if (s.contains("heuristics")) {
      const json& h = s["heuristics"];
      std::string list;
      if (h.is_array()) {
        for (const json& x : h) list += x.get<std::string>() + ",";
      } else {
        list = h.get<std::string>();
      }
      ns.config.set_heuristics(list);
    }
    if (s.contains("kappa")) ns.config.kappa = s["kappa"].get<double>();
    if (s.contains("dive_freq")) ns.config.dive_freq = s["dive_freq"].get<int>();
    if (s.contains("time_limit")) ns.config.time_limit = s["time_limit"].get<double>();
    if (s.contains("node_limit")) ns.config.node_limit = s["node_limit"].get<long>();
    if (s.contains("pool_capacity")) ns.config.pool_capacity = s["pool_capacity"].get<int>();
    out.push_back(std::move(ns));
  }
  return out;
}

RunRecord make_record(const Problem& p, const std::string& instance, std::uint64_t seed, const std::string& setting,
                      const SolveResult& res) {
  RunRecord r;
  r.instance = instance;
  r.seed = seed;
  r.setting = setting;
  r.status = to_string(res.status);
  r.time = res.stats.time;
  r.nodes = res.stats.nodes;
  if (res.incumbent) r.objective = res.objective + p.objective_offset();
  r.bound = std::isfinite(res.bound) ? res.bound + p.objective_offset() : res.bound;
  r.node_conflicts = res.stats.node_conflicts;
  for (const auto& [name, t] : res.stats.dives) {
    r.conflicts[name] = t.conflicts;
    r.solutions[name] = t.solutions;
    r.improving[name] = t.improving;
    r.depth[name] = t.mean_depth();
    r.dive_calls[name] = t.calls;
  }
  r.timeline = res.stats.timeline;
  return r;
}

void attach_integrals(std::vector<RunRecord>& records, double horizon) {
  std::map<std::string, double> ref;
  std::map<std::string, double> longest;
  for (const RunRecord& r : records) {
    if (r.objective) {
      auto it = ref.find(r.instance);
      if (it == ref.end() || *r.objective < it->second) ref[r.instance] = *r.objective;
    }
    longest[r.instance] = std::max(longest[r.instance], r.time);
  }
  for (RunRecord& r : records) {
    const double T = std::isfinite(horizon) && horizon > 0 ? horizon : longest[r.instance];
    std::optional<double> rf;
    if (auto it = ref.find(r.instance); it != ref.end()) rf = it->second;
    std::vector<PrimalEvent> pe;
    std::vector<DualEvent> de;
    for (const TimelineEvent& e : r.timeline) {
      pe.push_back({e.time, e.primal});
      de.push_back({e.time, e.dual});
    }
    r.primal_integral = primal_integral(pe, T, rf);
    r.dual_integral = dual_integral(de, T, rf);
  }
}

namespace {

RunRecord run_cell(const Problem& p, const NamedSetting& s, std::uint64_t seed) {
  SolverConfig cfg = s.config;
  cfg.seed = seed;
  try {
    return make_record(p, p.name(), seed, s.name, solve(p, cfg));
  } catch (const std::exception& e) {
    RunRecord r;
    r.instance = p.name();
    r.seed = seed;
    r.setting = s.name;
    r.status = "error";
    r.error = e.what();
    return r;
  }
}

double common_horizon(const std::vector<NamedSetting>& settings) {
  double h = 0.0;
  for (const NamedSetting& s : settings) h = std::max(h, s.config.time_limit);
  return h;
}

}  // namespace

std::vector<RunRecord> run_benchmark(const std::vector<Problem>& problems, const std::vector<NamedSetting>& settings,
                                     const std::vector<std::uint64_t>& seeds, int workers,
                                     const std::function<void(const RunRecord&)>& on_record) {
  struct Cell {
    std::size_t problem;
    std::uint64_t seed;
    std::size_t setting;
  };
  std::vector<Cell> grid;
  for (std::size_t i = 0; i < problems.size(); ++i)
    for (std::uint64_t seed : seeds)
      for (std::size_t s = 0; s < settings.size(); ++s) grid.push_back({i, seed, s});
  std::vector<RunRecord> records(grid.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      const Cell& c = grid[k];
      records[k] = run_cell(problems[c.problem], settings[c.setting], c.seed);
    }
  };
  const int threads = std::max(1, workers);
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  attach_integrals(records, common_horizon(settings));
  if (on_record)
    for (const RunRecord& r : records) on_record(r);
  return records;
}

std::vector<RunRecord> run_benchmark(const BenchmarkSpec& spec, const std::function<void(const RunRecord&)>& on_record) {
  std::vector<Problem> problems;
  std::vector<RunRecord> failed;
  for (const std::string& path : spec.instances) {
    try {
      Problem p = normalize(parse_mps_file(path));
      ProblemData d = p.to_data();
      d.name = std::filesystem::path(path).stem().string();
      problems.emplace_back(std::move(d));
    } catch (const std::exception& e) {
      for (std::uint64_t seed : spec.seeds)
        for (const NamedSetting& s : spec.settings) {
          RunRecord r;
          r.instance = std::filesystem::path(path).stem().string();
          r.seed = seed;
          r.setting = s.name;
          r.status = "error";
          r.error = e.what();
          failed.push_back(std::move(r));
        }
    }
  }
  std::vector<RunRecord> records = run_benchmark(problems, spec.settings, spec.seeds, spec.workers, {});
  records.insert(records.end(), failed.begin(), failed.end());
  if (on_record)
    for (const RunRecord& r : records) on_record(r);
  return records;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string num(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

}  // namespace

void write_csv_header(std::ostream& os) {
  os << "instance,seed,setting,status,time,nodes,objective,bound,node_conflicts";
  for (const std::string& h : heuristic_names())
    os << ",calls_" << h << ",conflicts_" << h << ",solutions_" << h << ",improving_" << h << ",depth_" << h;
  os << ",primal_integral,dual_integral\n";
}

void write_csv(std::ostream& os, const RunRecord& r) {
  auto get = [](const auto& m, const std::string& k) {
    auto it = m.find(k);
    return it == m.end() ? typename std::decay_t<decltype(m)>::mapped_type{} : it->second;
  };
  os << csv_field(r.instance) << ',' << r.seed << ',' << csv_field(r.setting) << ',' << r.status << ','
     << num(r.time) << ',' << r.nodes << ',' << (r.objective ? num(*r.objective) : "") << ',' << num(r.bound)
     << ',' << r.node_conflicts;
  for (const std::string& h : heuristic_names())
    os << ',' << get(r.dive_calls, h) << ',' << get(r.conflicts, h) << ',' << get(r.solutions, h) << ','
       << get(r.improving, h) << ',' << num(get(r.depth, h));
  os << ',' << num(r.primal_integral) << ',' << num(r.dual_integral) << '\n';
}

void write_trace(std::ostream& os, const RunRecord& r) {
  using nlohmann::json;
  json events = json::array();
  for (const TimelineEvent& e : r.timeline) {
    json ev{{"t", e.time}};
    ev["primal"] = e.primal ? json(*e.primal) : json(nullptr);
    ev["dual"] = std::isfinite(e.dual) ? json(e.dual) : json(nullptr);
    events.push_back(ev);
  }
  json line{{"instance", r.instance}, {"seed", r.seed}, {"setting", r.setting}, {"status", r.status},
            {"events", events}};
  os << line.dump() << '\n';
}

std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records, double bracket_divisor) {
  const auto settings = setting_order(records);
  const auto cells = cells_of(records);
  std::vector<std::pair<std::string, std::vector<CellKey>>> groups;
  std::vector<CellKey> all;
  std::vector<CellKey> affected;
  for (const auto& [key, by_setting] : cells) {
    all.push_back(key);
    std::set<long> nodes;
    for (const auto& [name, r] : by_setting) nodes.insert(r->nodes);
    if (nodes.size() > 1) affected.push_back(key);
  }
  groups.push_back({"all", all});
  groups.push_back({"affected", affected});
  for (double k : {10.0, 100.0, 1000.0}) {
    const double limit = k / bracket_divisor;
    std::vector<CellKey> in;
    for (const auto& [key, by_setting] : cells) {
      bool any_solved = false;
      bool all_slow = true;
      for (const auto& [name, r] : by_setting) {
        any_solved = any_solved || r->solved();
        all_slow = all_slow && r->time >= limit;
      }
      if (any_solved && all_slow) in.push_back(key);
    }
    std::ostringstream name;
    name << '[' << limit << ",tilim]";
    groups.push_back({name.str(), in});
  }
  std::vector<AggregateRow> out;
  for (const auto& [group, keys] : groups) {
    for (const std::string& s : settings) {
      AggregateRow row;
      row.group = group;
      row.setting = s;
      std::vector<double> times;
      std::vector<double> nodes;
      long calls = 0;
      double depth_sum = 0.0;
      for (const CellKey& key : keys) {
        auto it = cells.at(key).find(s);
        if (it == cells.at(key).end()) continue;
        const RunRecord& r = *it->second;
        ++row.cells;
        if (r.solved()) ++row.solved;
        times.push_back(r.time);
        nodes.push_back(static_cast<double>(r.nodes));
        for (const auto& [h, c] : r.conflicts) row.conflicts += c;
        for (const auto& [h, d] : r.depth) {
          const int n = r.dive_calls.count(h) ? r.dive_calls.at(h) : 0;
          calls += n;
          depth_sum += d * n;
        }
      }
      if (!times.empty()) {
        row.time_sgm = shifted_geomean(times, 1.0);
        row.nodes_sgm = shifted_geomean(nodes, 100.0);
      }
      row.mean_depth = calls ? depth_sum / static_cast<double>(calls) : 0.0;
      out.push_back(row);
    }
  }
  return out;
}

void write_aggregate(std::ostream& os, const std::vector<AggregateRow>& rows) {
  os << "group,setting,cells,solved,time_sgm,nodes_sgm,conflicts,mean_depth\n";
  for (const AggregateRow& r : rows)
    os << csv_field(r.group) << ',' << csv_field(r.setting) << ',' << r.cells << ',' << r.solved << ','
       << num(r.time_sgm) << ',' << num(r.nodes_sgm) << ',' << r.conflicts << ',' << num(r.mean_depth) << '\n';
}

}  // namespace cdive
