// SPDX-License-Identifier: Apache-2.0

#include "cdive/propagation.hpp"

#include <algorithm>
#include <cmath>

#include "cdive/conflict.hpp"

namespace cdive {

void apply(LocalBounds& bounds, const BoundChange& ch) {
  auto& v = ch.side == BoundSide::Lower ? bounds.lower : bounds.upper;
  v[static_cast<std::size_t>(ch.var)] = ch.new_value;
}

void undo(LocalBounds& bounds, std::span<const BoundChange> trail) {
  for (auto it = trail.rbegin(); it != trail.rend(); ++it) {
    auto& v = it->side == BoundSide::Lower ? bounds.lower : bounds.upper;
    v[static_cast<std::size_t>(it->var)] = it->old_value;
  }
}

BoundChange make_change(const LocalBounds& bounds, int var, BoundSide side, double value,
                        Reason reason) {
  const auto j = static_cast<std::size_t>(var);
  const double old = side == BoundSide::Lower ? bounds.lower[j] : bounds.upper[j];
  return {var, side, old, value, reason};
}

namespace {
constexpr double kHuge = 1e12;
}

RowPropagation propagate_row(SparseSpan row, double rhs, const LocalBounds& bounds,
                             const std::vector<bool>& is_int, Reason reason,
                             const PropOptions& opts) {
  RowPropagation out;
  const double* lower = bounds.lower.data();
  const double* upper = bounds.upper.data();
  double finite_act = 0.0;
  // Largest |a_j| (ub_j - lb_j); no bound moves while the slack covers it.
  double widest = 0.0;
  int n_inf = 0;
  std::size_t inf_k = 0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const auto j = static_cast<std::size_t>(row.index[k]);
    const double a = row.value[k];
    const double b = a > 0.0 ? upper[j] : lower[j];
    widest = std::max(widest, std::abs(a) * (upper[j] - lower[j]));
    if (!std::isfinite(b)) {
      ++n_inf;
      inf_k = k;
    } else {
      finite_act += a * b;
    }
  }
  if (n_inf == 0 && finite_act < rhs - opts.feas_tol) {
    out.infeasible = true;
    return out;
  }
  if (n_inf >= 2) return out;
  if (n_inf == 0 && finite_act - rhs >= widest) return out;

  for (std::size_t k = 0; k < row.size(); ++k) {
    if (n_inf == 1 && k != inf_k) continue;
    const int var = row.index[k];
    const auto j = static_cast<std::size_t>(var);
    const double a = row.value[k];
    const double lo = bounds.lower[j];
    const double up = bounds.upper[j];
    const double residual = n_inf == 1 ? finite_act : finite_act - a * (a > 0.0 ? up : lo);
    const double v = (rhs - residual) / a;
    if (!std::isfinite(v) || std::abs(v) > kHuge) continue;
    const bool integral = is_int[j];
    if (a > 0.0) {
      double nl = integral ? std::ceil(v - opts.int_tol) : v;
      const double need = integral ? 0.5 : opts.prop_eps * std::max(1.0, std::abs(lo));
      if (!(nl > lo + need) && std::isfinite(lo)) continue;
      if (nl > up) {
        if (nl > up + opts.feas_tol) {
          out.infeasible = true;
          out.changes.clear();
          return out;
        }
        nl = up;
        if (!(nl > lo)) continue;
      }
      out.changes.push_back({var, BoundSide::Lower, lo, nl, reason});
    } else {
      double nu = integral ? std::floor(v + opts.int_tol) : v;
      const double need = integral ? 0.5 : opts.prop_eps * std::max(1.0, std::abs(up));
      if (!(nu < up - need) && std::isfinite(up)) continue;
      if (nu < lo) {
        if (nu < lo - opts.feas_tol) {
          out.infeasible = true;
          out.changes.clear();
          return out;
        }
        nu = lo;
        if (!(nu < up)) continue;
      }
      out.changes.push_back({var, BoundSide::Upper, up, nu, reason});
    }
  }
  return out;
}

PropResult propagate(const Problem& p, const ConflictPool* pool, LocalBounds& bounds,
                     const PropOptions& opts, std::span<const int> seeds) {
  PropResult res;
  std::vector<bool> is_int(static_cast<std::size_t>(p.n()));
  for (int j = 0; j < p.n(); ++j) is_int[static_cast<std::size_t>(j)] = p.is_integer(j);

  const std::size_t m = static_cast<std::size_t>(p.m());
  const std::size_t slots = pool ? static_cast<std::size_t>(pool->slot_count()) : 0;
  std::vector<char> row_next(m, seeds.empty() ? 1 : 0);
  std::vector<char> slot_next(slots, seeds.empty() ? 1 : 0);
  auto touch = [&](int j) {
    SparseSpan col = p.col(j);
    for (int i : col.index) row_next[static_cast<std::size_t>(i)] = 1;
    if (pool)
      for (int s : pool->slots_with(j)) slot_next[static_cast<std::size_t>(s)] = 1;
  };
  for (int j : seeds) touch(j);

  std::vector<char> row_now;
  std::vector<char> slot_now;
  auto any = [](const std::vector<char>& v) {
    for (char c : v)
      if (c) return true;
    return false;
  };
  auto take = [&](const RowPropagation& rp) {
    for (const BoundChange& ch : rp.changes) {
      // Earlier changes in this batch may already have moved the bound.
      BoundChange cur = make_change(bounds, ch.var, ch.side, ch.new_value, ch.reason);
      const bool tighter = ch.side == BoundSide::Lower ? cur.new_value > cur.old_value
                                                       : cur.new_value < cur.old_value;
      if (!tighter) continue;
      apply(bounds, cur);
      res.trail.push_back(cur);
      touch(ch.var);
    }
  };

  while ((any(row_next) || any(slot_next)) && res.rounds < opts.round_limit) {
    ++res.rounds;
    row_now.swap(row_next);
    slot_now.swap(slot_next);
    row_next.assign(m, 0);
    slot_next.assign(slots, 0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!row_now[i]) continue;
      const int row = static_cast<int>(i);
      const Reason why = row == opts.cutoff_row ? Reason{ReasonKind::Cutoff, row}
                                                : Reason{ReasonKind::Propagation, row};
      RowPropagation rp = propagate_row(p.row(row), p.rhs()[row], bounds, is_int, why, opts);
      if (rp.infeasible) {
        res.infeasible = true;
        res.row = row;
        return res;
      }
      take(rp);
    }
    for (std::size_t s = 0; s < slots; ++s) {
      if (!slot_now[s]) continue;
      const ConflictConstraint* cc = pool->at_slot(static_cast<int>(s));
      if (!cc) continue;
      RowPropagation rp = propagate_row(cc->row.view(), cc->rhs, bounds, is_int,
                                        {ReasonKind::ConflictPropagation, cc->id}, opts);
      if (rp.infeasible) {
        res.infeasible = true;
        res.conflict_row = true;
        res.row = cc->id;
        res.conflict_hits.push_back(cc->id);
        return res;
      }
      if (!rp.changes.empty()) res.conflict_hits.push_back(cc->id);
      take(rp);
    }
  }
  return res;
}

}  // namespace cdive
