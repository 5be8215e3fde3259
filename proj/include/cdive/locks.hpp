// SPDX-License-Identifier: Apache-2.0
//
// Variable locks of a row set in >= form: a positive coefficient locks the
// variable downwards, a negative one upwards.

#pragma once

#include <span>
#include <vector>

#include "cdive/problem.hpp"

namespace cdive {

class ConflictPool;

struct LockTable {
  std::vector<int> down;
  std::vector<int> up;

  static LockTable zeros(int n);
  int size() const { return static_cast<int>(down.size()); }
  /// +1 (or `sign`) per signed nonzero of `row`.
  void add_row(SparseSpan row, int sign = 1);
  bool operator==(const LockTable&) const = default;
};

LockTable compute_locks(int n, std::span<const SparseSpan> rows);
/// Locks of the model rows.
LockTable compute_locks(const Problem& p);
/// Conflict locks, recomputed from scratch over the pool.
LockTable compute_locks(const ConflictPool& pool, int n);

struct WeightedLocks {
  double kappa = 0.75;
  std::vector<double> down;
  std::vector<double> up;
};

inline constexpr double kDefaultKappa = 0.75;

/// omega = kappa * conflict + (1 - kappa) * variable.
/// Throws std::invalid_argument unless 0 <= kappa <= 1.
WeightedLocks weighted_locks(const LockTable& var, const LockTable& conf,
                             double kappa);

}  // namespace cdive
