// SPDX-License-Identifier: Apache-2.0
//
// Generic diving procedure: repeatedly fix the best-scored fractional
// candidate in its rounding direction, propagate, re-solve the LP when due,
// and undo one level when the subproblem turns out infeasible.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdive/conflict.hpp"
#include "cdive/heuristics.hpp"
#include "cdive/lp.hpp"
#include "cdive/propagation.hpp"

namespace cdive {

struct DivePolicy {
  bool lp_every_node = false;
  /// LP is re-solved once more than this fraction of n bounds changed.
  double lp_trigger_fraction = 0.15;
  std::optional<int> max_dive_depth;
  bool propagate = true;
  int lp_iter_limit = 10000;
  /// Abort after this many consecutive infeasible fixings; 0 disables.
  int max_consecutive_failures = 0;

  static DivePolicy every_node();
  static DivePolicy triggered();
};

bool lp_resolve_due(const DivePolicy& policy, int changes_since_lp, int n);

/// Rounds integer variables to the nearest integer and keeps the point iff
/// it is feasible for `p`.
std::optional<Point> round_to_solution(const Problem& p, std::span<const double> x,
                                       double feas_tol = kDefaultFeasTol,
                                       double int_tol = kDefaultIntTol);

enum class DiveEnd { Integral, CandidatesExhausted, DepthLimit, LpFailure, Failures };

const char* to_string(DiveEnd e);

struct DiveStats {
  /// Fixings in effect when the dive ended.
  int depth = 0;
  /// Includes the LP the dive started from.
  int lp_solves = 0;
  long lp_iterations = 0;
  int fixings = 0;
  int backtracks = 0;
  int lp_infeasible = 0;
  int prop_infeasible = 0;
  int conflicts = 0;
  int solutions = 0;
  int prefixed = 0;
  DiveEnd end = DiveEnd::CandidatesExhausted;
};

struct DiveInput {
  /// Model used for feasibility of found points.
  const Problem* model = nullptr;
  /// Rows seen by LP and propagation: the model plus the cutoff row, if any.
  const Problem* lp_problem = nullptr;
  int cutoff_row = -1;
  ConflictPool* pool = nullptr;
  const LockTable* vlocks = nullptr;
  double kappa = kDefaultKappa;
  LocalBounds bounds;
  /// Optimal LP solution at `bounds` the dive starts from.
  std::vector<double> x;
  Basis basis;
  int node_depth = 0;
};

struct DiveResult {
  /// Feasible points in the order found; the last one is the dive's end
  /// point when the dive finished integral.
  std::vector<Point> solutions;
  DiveStats stats;
  /// Bounds when the dive ended; replaying `trail` backwards restores the
  /// start bounds.
  LocalBounds final_bounds;
  std::vector<BoundChange> trail;
};

DiveResult dive(const DiveInput& in, const HeuristicSpec& spec, const DivePolicy& policy);

}  // namespace cdive
