// SPDX-License-Identifier: Apache-2.0
//
// Activity-based bound tightening on >= rows.

#pragma once

#include <span>
#include <vector>

#include "cdive/problem.hpp"

namespace cdive {

class ConflictPool;

enum class BoundSide { Lower, Upper };

enum class ReasonKind { Branching, DivingFix, Propagation, ConflictPropagation, Cutoff, PreFix };

struct Reason {
  ReasonKind kind = ReasonKind::Propagation;
  /// Row index or conflict id, -1 otherwise.
  int id = -1;
  bool operator==(const Reason&) const = default;
};

struct BoundChange {
  int var = -1;
  BoundSide side = BoundSide::Lower;
  double old_value = 0.0;
  double new_value = 0.0;
  Reason reason;
  bool operator==(const BoundChange&) const = default;
};

void apply(LocalBounds& bounds, const BoundChange& ch);
/// Undoes `trail` in reverse order.
void undo(LocalBounds& bounds, std::span<const BoundChange> trail);

/// Builds the change that moves one bound of `var` to `value`.
BoundChange make_change(const LocalBounds& bounds, int var, BoundSide side, double value,
                        Reason reason);

struct PropOptions {
  double feas_tol = 1e-6;
  double int_tol = 1e-6;
  double prop_eps = 1e-7;
  int round_limit = 100;
  /// Row of the problem that carries the objective cutoff, or -1.
  int cutoff_row = -1;
};

struct RowPropagation {
  bool infeasible = false;
  std::vector<BoundChange> changes;
};

/// Deductions of the single row a^T x >= rhs against `bounds`, which are
/// left untouched. `is_int` is indexed by variable.
RowPropagation propagate_row(SparseSpan row, double rhs, const LocalBounds& bounds,
                             const std::vector<bool>& is_int, Reason reason,
                             const PropOptions& opts = {});

struct PropResult {
  bool infeasible = false;
  /// Violated row when infeasible: model row index or conflict id.
  bool conflict_row = false;
  int row = -1;
  /// Changes applied to the bounds, in order.
  std::vector<BoundChange> trail;
  /// Pool entries that tightened a bound or were found violated.
  std::vector<int> conflict_hits;
  int rounds = 0;
};

/// Propagates the rows of `p` and of `pool` (may be null) until fixpoint,
/// applying the changes to `bounds`. With `seeds` non-empty only rows
/// touching those variables start out queued.
PropResult propagate(const Problem& p, const ConflictPool* pool, LocalBounds& bounds,
                     const PropOptions& opts = {}, std::span<const int> seeds = {});

}  // namespace cdive
