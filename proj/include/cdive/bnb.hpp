// SPDX-License-Identifier: Apache-2.0
//
// LP-based branch-and-bound with node propagation, conflict analysis of
// infeasible nodes, an objective cutoff row, and scheduled dives.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cdive/conflict.hpp"
#include "cdive/diving.hpp"
#include "cdive/lp.hpp"
#include "cdive/problem.hpp"

namespace cdive {

struct SolverConfig {
  double time_limit = kInf;
  long node_limit = -1;
  bool farkas = false;
  bool coef = false;
  bool conflict = false;
  double kappa = kDefaultKappa;
  int dive_freq = 10;
  std::uint64_t seed = 0;
  int pool_capacity = 10000;
  /// Every this many nodes the best-bound open node is taken instead of
  /// the DFS successor.
  int best_bound_interval = 100;
  int lp_iter_limit = 100000;
  int dive_lp_iter_limit = 10000;
  bool record_timeline = true;

  /// Enables heuristics from a list such as "farkas,coef"; "none" and ""
  /// disable all. Throws std::invalid_argument on unknown names.
  void set_heuristics(const std::string& list);
  std::string heuristics() const;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, Limit };

const char* to_string(SolveStatus s);

struct DiveTotals {
  int calls = 0;
  long lp_solves = 0;
  long conflicts = 0;
  /// Dives that found at least one feasible point.
  int successful = 0;
  long solutions = 0;
  /// Points that improved the incumbent.
  long improving = 0;
  long depth_sum = 0;
  double mean_depth() const { return calls ? static_cast<double>(depth_sum) / calls : 0.0; }
};

struct TimelineEvent {
  double time = 0.0;
  /// Incumbent objective in the minimization sense, offset included.
  std::optional<double> primal;
  /// Global lower bound in the same sense; -inf before the root LP.
  double dual = -kInf;
};

struct SearchStats {
  long nodes = 0;
  long lp_solves = 0;
  long lp_iterations = 0;
  long node_conflicts = 0;
  long lp_failures = 0;
  long pruned_infeasible = 0;
  long pruned_bound = 0;
  long max_depth = 0;
  double time = 0.0;
  std::map<std::string, DiveTotals> dives;
  std::vector<TimelineEvent> timeline;
  PoolStats pool;
  /// Lock sign rule failures over the pool (must stay 0).
  long lock_sign_failures = 0;
  bool root_farkas_success = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::Limit;
  /// In the variable order of the input problem.
  std::optional<Point> incumbent;
  /// Internal (minimization) objective of the incumbent.
  double objective = kInf;
  /// Global lower bound, internal sense.
  double bound = -kInf;
  SearchStats stats;
  /// Final pool, in the variable order of the input problem.
  std::vector<ConflictConstraint> conflicts;
};

/// Optional hooks for tests.
struct SolveHooks {
  /// Conflicts installed in the pool before the search starts.
  std::vector<ConflictConstraint> initial_conflicts;
  /// Incumbent known before the search starts.
  std::optional<std::vector<double>> initial_solution;
  /// Called after every dive with the pool and the LP rows it used.
  std::function<void(const Problem& lp_problem, const ConflictPool& pool)> after_dive;
  /// Called when a node is pruned by bound with (node bound, incumbent objective, delta).
  std::function<void(double, double, double)> on_bound_prune;
};

SolveResult solve(const Problem& p, const SolverConfig& config, const SolveHooks& hooks = {});

/// Improvement margin required from the next incumbent.
double cutoff_delta(const Problem& p, double objective);

/// Row -c^T x >= -(objective - delta) appended to `p`.
Problem install_cutoff(const Problem& p, double objective);

struct BranchChoice {
  int var = -1;
  double value = 0.0;
  bool up_first = false;
};

/// Most fractional integer variable, lowest index on ties.
std::optional<BranchChoice> branch(const Problem& p, std::span<const double> x,
                                   double int_tol = kDefaultIntTol);

struct ScheduleInput {
  bool farkas = false;
  bool coef = false;
  bool conflict = false;
  bool zero_objective = false;
  int depth = 0;
  int dive_freq = 10;
  bool root_farkas_success = false;
};

/// Names of the dives to run at a node, in execution order.
std::vector<std::string> heuristic_schedule(const ScheduleInput& in);

/// Column permutation used for a seed; identity for seed 0. perm[k] is the
/// input index of permuted variable k.
std::vector<int> seed_permutation(int n, std::uint64_t seed);
Problem permute_columns(const Problem& p, const std::vector<int>& perm);

}  // namespace cdive
