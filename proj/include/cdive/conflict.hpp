// SPDX-License-Identifier: Apache-2.0
//
// Farkas proofs (y^T A) x >= y^T b of infeasible subproblems and the pool
// that keeps them for propagation and conflict locks.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cdive/locks.hpp"
#include "cdive/lp.hpp"
#include "cdive/problem.hpp"

namespace cdive {

enum class ConflictOrigin { Node, Dive };

struct ConflictConstraint {
  int id = -1;
  SparseVector row;
  double rhs = 0.0;
  ConflictOrigin origin = ConflictOrigin::Node;
  /// Heuristic name for dive conflicts, empty otherwise.
  std::string source;
  int depth = 0;
  int age = 0;
  /// Set when the proof used the objective cutoff row: the inequality is
  /// only valid for points with c^T x <= *cutoff_bound.
  std::optional<double> cutoff_bound;
};

/// Max activity of `row` over the box; +inf if unbounded.
double max_activity(SparseSpan row, const LocalBounds& bounds);

struct ProofResult {
  FarkasCheck check;
  /// Valid proof with at least one nonzero.
  std::optional<ConflictConstraint> proof;
  /// Row vanished entirely: 0 >= rhs > 0.
  bool empty_support = false;
};

/// `cutoff_row` is the index of the objective cutoff row in `p`, or -1.
ProofResult build_farkas_proof(const Problem& p, const LocalBounds& bounds,
                               const FarkasRay& ray, int cutoff_row = -1,
                               double farkas_tol = 1e-6);

/// First j where the proof has a sign no row of `p` has in column j, or -1.
int lock_sign_violation(const Problem& p, const ConflictConstraint& cc);

enum class PoolAdd { Admitted, Evicted, Replaced, Rejected };

struct PoolAddResult {
  PoolAdd status = PoolAdd::Rejected;
  int id = -1;
  /// Evicted or replaced entry.
  int victim = -1;
};

struct PoolStats {
  long admitted = 0;
  long rejected = 0;
  long evicted = 0;
  long replaced = 0;
};

class ConflictPool {
 public:
  explicit ConflictPool(int n, int capacity = 10000);

  int n() const { return n_; }
  int capacity() const { return capacity_; }
  int size() const { return live_; }
  /// Id the next admitted constraint receives.
  int next_id() const { return next_id_; }

  /// Proportional rows with a rhs that is not stronger are rejected; a
  /// stronger one replaces the old entry. At capacity the entry with the
  /// highest age goes, the oldest among ties.
  PoolAddResult add(ConflictConstraint cc);

  /// Slots are stable while an entry lives; `slot_count()` bounds them.
  int slot_count() const { return static_cast<int>(slots_.size()); }
  const ConflictConstraint* at_slot(int slot) const;
  const std::vector<int>& slots_with(int j) const { return occurs_[static_cast<std::size_t>(j)]; }

  const ConflictConstraint* find(int id) const;
  /// Live entries ordered by id.
  std::vector<const ConflictConstraint*> entries() const;

  /// Ages every entry not listed in `hit_ids` and resets the listed ones.
  void tick(const std::vector<int>& hit_ids);

  const LockTable& locks() const { return locks_; }
  const PoolStats& stats() const { return stats_; }

  /// One line per constraint.
  void dump(std::ostream& os, const Problem* names = nullptr) const;

 private:
  void remove_slot(int slot);
  int insert(ConflictConstraint cc);

  int n_;
  int capacity_;
  int live_ = 0;
  int next_id_ = 0;
  std::vector<std::optional<ConflictConstraint>> slots_;
  std::vector<int> free_;
  std::vector<std::vector<int>> occurs_;
  LockTable locks_;
  PoolStats stats_;
};

/// Row that propagation found violated.
struct ViolatedRow {
  bool conflict = false;
  /// Model row index, or conflict id.
  int id = -1;
};

using InfeasibilityCause = std::variant<FarkasRay, ViolatedRow>;

struct AnalysisResult {
  FarkasCheck check;
  bool empty_support = false;
  PoolAddResult added;
  /// Constraint that entered the pool, if any.
  std::optional<ConflictConstraint> created;
};

struct ConflictSite {
  ConflictOrigin origin = ConflictOrigin::Node;
  std::string source;
  int depth = 0;
  int cutoff_row = -1;
};

AnalysisResult analyze_infeasibility(const Problem& p, ConflictPool& pool,
                                     const LocalBounds& bounds,
                                     const InfeasibilityCause& cause,
                                     const ConflictSite& site);

}  // namespace cdive
