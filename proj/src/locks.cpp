// SPDX-License-Identifier: Apache-2.0

#include "cdive/locks.hpp"

#include <stdexcept>

#include "cdive/conflict.hpp"

namespace cdive {

LockTable LockTable::zeros(int n) {
  LockTable t;
  t.down.assign(static_cast<std::size_t>(n), 0);
  t.up.assign(static_cast<std::size_t>(n), 0);
  return t;
}

void LockTable::add_row(SparseSpan row, int sign) {
  for (std::size_t k = 0; k < row.size(); ++k) {
    const auto j = static_cast<std::size_t>(row.index[k]);
    if (row.value[k] > 0.0)
      down[j] += sign;
    else if (row.value[k] < 0.0)
      up[j] += sign;
  }
}

LockTable compute_locks(int n, std::span<const SparseSpan> rows) {
  LockTable t = LockTable::zeros(n);
  for (SparseSpan r : rows) t.add_row(r);
  return t;
}

LockTable compute_locks(const Problem& p) {
  LockTable t = LockTable::zeros(p.n());
  for (int i = 0; i < p.m(); ++i) t.add_row(p.row(i));
  return t;
}

LockTable compute_locks(const ConflictPool& pool, int n) {
  LockTable t = LockTable::zeros(n);
  for (const ConflictConstraint* cc : pool.entries()) t.add_row(cc->row.view());
  return t;
}

WeightedLocks weighted_locks(const LockTable& var, const LockTable& conf, double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  if (var.size() != conf.size()) throw std::invalid_argument("lock tables differ in size");
  WeightedLocks w;
  w.kappa = kappa;
  const std::size_t n = static_cast<std::size_t>(var.size());
  w.down.resize(n);
  w.up.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    w.down[j] = kappa * conf.down[j] + (1.0 - kappa) * var.down[j];
    w.up[j] = kappa * conf.up[j] + (1.0 - kappa) * var.up[j];
  }
  return w;
}

}  // namespace cdive
