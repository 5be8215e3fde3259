// SPDX-License-Identifier: Apache-2.0
//
// cdive solve | bench | gen

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cdive/bnb.hpp"
#include "cdive/generator.hpp"
#include "cdive/harness.hpp"
#include "cdive/mps.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stoull(tok));
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_solve(const std::string& file, const std::string& heuristics, double kappa, double time_limit,
              long node_limit, std::uint64_t seed, bool as_json) {
  const cdive::RawProblem raw = cdive::parse_mps_file(file);
  const cdive::Problem p = cdive::normalize(raw);
  cdive::SolverConfig cfg;
  cfg.set_heuristics(heuristics);
  cfg.kappa = kappa;
  cfg.time_limit = time_limit;
  cfg.node_limit = node_limit;
  cfg.seed = seed;
  const cdive::SolveResult res = cdive::solve(p, cfg);

  std::optional<double> obj;
  if (res.incumbent) obj = p.user_objective(res.objective);
  if (as_json) {
    nlohmann::json j;
    j["instance"] = p.name();
    j["status"] = cdive::to_string(res.status);
    j["objective"] = obj ? nlohmann::json(*obj) : nlohmann::json(nullptr);
    j["bound"] = std::isfinite(res.bound) ? nlohmann::json(p.user_objective(res.bound)) : nlohmann::json(nullptr);
    j["nodes"] = res.stats.nodes;
    j["time"] = res.stats.time;
    j["node_conflicts"] = res.stats.node_conflicts;
    nlohmann::json dives = nlohmann::json::object();
    for (const auto& [name, t] : res.stats.dives)
      dives[name] = {{"calls", t.calls},         {"conflicts", t.conflicts}, {"solutions", t.solutions},
                     {"improving", t.improving}, {"mean_depth", t.mean_depth()}};
    j["dives"] = dives;
    if (res.incumbent) {
      nlohmann::json x = nlohmann::json::object();
      for (int k = 0; k < p.n(); ++k)
        if (res.incumbent->values[static_cast<std::size_t>(k)] != 0.0)
          x[p.var_name(k)] = res.incumbent->values[static_cast<std::size_t>(k)];
      j["solution"] = x;
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "status     " << cdive::to_string(res.status) << '\n';
    if (obj) std::cout << "objective  " << std::setprecision(12) << *obj << '\n';
    std::cout << "nodes      " << res.stats.nodes << '\n'
              << "time       " << res.stats.time << " s\n"
              << "conflicts  " << res.stats.node_conflicts << " (nodes)\n";
    for (const auto& [name, t] : res.stats.dives)
      std::cout << "dive " << std::left << std::setw(9) << name << std::right << " calls=" << t.calls
                << " conflicts=" << t.conflicts << " solutions=" << t.solutions << " depth=" << t.mean_depth()
                << '\n';
  }
  return res.status == cdive::SolveStatus::Limit ? 2 : 0;
}

int run_bench(const std::string& dir, const std::string& settings_file, const std::string& seeds,
              const std::string& out, int workers, const std::string& trace, const std::string& aggregate_out) {
  cdive::BenchmarkSpec spec;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".mps" || ext == ".MPS")) spec.instances.push_back(e.path().string());
  }
  std::sort(spec.instances.begin(), spec.instances.end());
  if (spec.instances.empty()) throw std::runtime_error("no .mps files in " + dir);
  spec.settings = cdive::load_settings(read_file(settings_file), &spec.bracket_divisor);
  spec.seeds = parse_seeds(seeds);
  spec.workers = workers;

  std::ofstream csv(out);
  if (!csv) throw std::runtime_error("cannot write " + out);
  std::ofstream tr;
  if (!trace.empty()) tr.open(trace);
  cdive::write_csv_header(csv);
  const auto records = cdive::run_benchmark(spec, [&](const cdive::RunRecord& r) {
    cdive::write_csv(csv, r);
    if (tr.is_open()) cdive::write_trace(tr, r);
    if (!r.error.empty()) std::cerr << r.instance << ": " << r.error << '\n';
  });
  const auto rows = cdive::aggregate(records, spec.bracket_divisor);
  if (!aggregate_out.empty()) {
    std::ofstream agg(aggregate_out);
    cdive::write_aggregate(agg, rows);
  } else {
    cdive::write_aggregate(std::cout, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIP solver with Farkas, coefficient and conflict diving"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve one MPS file");
  std::string file;
  std::string heuristics = "none";
  double kappa = cdive::kDefaultKappa;
  double time_limit = cdive::kInf;
  long node_limit = -1;
  std::uint64_t seed = 0;
  bool as_json = false;
  solve->add_option("file", file, "MPS file")->required()->check(CLI::ExistingFile);
  solve->add_option("--heuristics", heuristics, "Comma list of farkas,coef,conflict, or all/none");
  solve->add_option("--kappa", kappa, "Conflict lock weight")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--time-limit", time_limit, "Seconds");
  solve->add_option("--node-limit", node_limit, "Nodes; negative means none");
  solve->add_option("--seed", seed, "Column permutation seed");
  solve->add_flag("--json", as_json, "Print the result as JSON");

  auto* bench = app.add_subcommand("bench", "Run settings x seeds over a directory of MPS files");
  std::string dir;
  std::string settings_file;
  std::string seeds = "0";
  std::string out = "results.csv";
  int workers = 1;
  std::string trace;
  std::string aggregate_out;
  bench->add_option("dir", dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  bench->add_option("--settings", settings_file, "JSON settings file")->required()->check(CLI::ExistingFile);
  bench->add_option("--seeds", seeds, "Comma list of seeds");
  bench->add_option("--out", out, "CSV output");
  bench->add_option("--workers", workers, "Parallel searches")->check(CLI::PositiveNumber);
  bench->add_option("--trace", trace, "JSONL timeline output");
  bench->add_option("--aggregate", aggregate_out, "Aggregate table output (default stdout)");

  auto* gen = app.add_subcommand("gen", "Write the generated experiment suite as MPS files");
  std::string gen_dir;
  int count = 30;
  std::uint64_t gen_seed = 1;
  gen->add_option("dir", gen_dir, "Output directory")->required();
  gen->add_option("--count", count, "Instances")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) return run_solve(file, heuristics, kappa, time_limit, node_limit, seed, as_json);
    if (*bench) return run_bench(dir, settings_file, seeds, out, workers, trace, aggregate_out);
    if (*gen) {
      fs::create_directories(gen_dir);
      for (const std::string& path : cdive::write_suite(cdive::experiment_suite(count, gen_seed), gen_dir))
        std::cout << path << '\n';
      return 0;
    }
  } catch (const cdive::MpsError& e) {
    std::cerr << "mps: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
