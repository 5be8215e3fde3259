// SPDX-License-Identifier: Apache-2.0

#include "cdive/diving.hpp"

#include <algorithm>
#include <cmath>

namespace cdive {

DivePolicy DivePolicy::every_node() {
  DivePolicy p;
  p.lp_every_node = true;
  return p;
}

DivePolicy DivePolicy::triggered() { return DivePolicy{}; }

bool lp_resolve_due(const DivePolicy& policy, int changes_since_lp, int n) {
  if (policy.lp_every_node) return true;
  return changes_since_lp > policy.lp_trigger_fraction * n;
}

std::optional<Point> round_to_solution(const Problem& p, std::span<const double> x, double feas_tol,
                                       double int_tol) {
  std::vector<double> v(x.begin(), x.end());
  for (int j : p.integers()) v[static_cast<std::size_t>(j)] = std::round(v[static_cast<std::size_t>(j)]);
  if (!check_feasible(p, v, feas_tol, int_tol).feasible()) return std::nullopt;
  return make_point(p, std::move(v));
}

const char* to_string(DiveEnd e) {
  switch (e) {
    case DiveEnd::Integral:
      return "integral";
    case DiveEnd::CandidatesExhausted:
      return "exhausted";
    case DiveEnd::DepthLimit:
      return "depth-limit";
    case DiveEnd::LpFailure:
      return "lp-failure";
    case DiveEnd::Failures:
      return "failures";
  }
  return "?";
}

namespace {

class Diver {
 public:
  Diver(const DiveInput& in, const HeuristicSpec& spec, const DivePolicy& policy)
      : in_(in), model_(*in.model), lp_(*in.lp_problem), spec_(spec), policy_(policy),
        bounds_(in.bounds), x_(in.x), basis_(in.basis),
        excluded_(static_cast<std::size_t>(model_.n()), 0) {
    popts_.cutoff_row = in.cutoff_row;
    refresh_locks();
  }

  DiveResult run() {
    stats_.lp_solves = 1;
    record(x_);
    refresh_candidates();
    if (cands_.empty()) {
      stats_.end = DiveEnd::Integral;
      return finish();
    }
    prefix_unlocked();

    int failures = 0;
    for (;;) {
      if (cands_.empty()) {
        final_solve();
        break;
      }
      if (policy_.max_dive_depth && static_cast<int>(batches_.size()) >= *policy_.max_dive_depth) {
        stats_.end = DiveEnd::DepthLimit;
        break;
      }
      const int j = select();
      cands_.erase(std::find(cands_.begin(), cands_.end(), j));
      excluded_[static_cast<std::size_t>(j)] = 1;
      const RoundDir dir = spec_.round(j, context());
      ++stats_.fixings;

      const std::size_t start = trail_.size();
      const int prev_changes = changes_;
      bool infeasible = !fix(j, dir);
      if (!infeasible && policy_.propagate) {
        const int seed[] = {j};
        PropResult pr = propagate(lp_, in_.pool, bounds_, popts_, seed);
        trail_.insert(trail_.end(), pr.trail.begin(), pr.trail.end());
        if (pr.infeasible) {
          infeasible = true;
          ++stats_.prop_infeasible;
        }
      }
      changes_ = prev_changes + static_cast<int>(trail_.size() - start);
      if (infeasible) {
        backtrack(start, prev_changes);
        if (give_up(++failures)) break;
        continue;
      }
      batches_.push_back(start);
      drop_fixed();

      if (!lp_resolve_due(policy_, changes_, model_.n()) && !(cands_.empty() && changes_ > 0)) {
        failures = 0;
        continue;
      }
      LpResult r = solve();
      if (r.status == LpStatus::Infeasible) {
        analyze(*r.ray);
        batches_.pop_back();
        backtrack(start, prev_changes);
        if (give_up(++failures)) break;
        continue;
      }
      if (r.status != LpStatus::Optimal) {
        stats_.end = DiveEnd::LpFailure;
        break;
      }
      failures = 0;
      accept(std::move(r));
      if (cands_.empty()) {
        stats_.end = DiveEnd::Integral;
        break;
      }
    }
    return finish();
  }

 private:
  DiveContext context() const {
    DiveContext ctx;
    ctx.c = model_.objective();
    ctx.x = x_;
    ctx.bounds = &bounds_;
    ctx.vlocks = in_.vlocks;
    ctx.wlocks = &wlocks_;
    return ctx;
  }

  void refresh_locks() {
    if (spec_.uses_conflict_locks) wlocks_ = weighted_locks(*in_.vlocks, in_.pool->locks(), in_.kappa);
  }

  void record(std::span<const double> x) {
    if (auto pt = round_to_solution(model_, x)) {
      ++stats_.solutions;
      solutions_.push_back(std::move(*pt));
    }
  }

  bool fixed(int j) const {
    const auto jj = static_cast<std::size_t>(j);
    return bounds_.lower[jj] == bounds_.upper[jj];
  }

  void refresh_candidates() {
    cands_.clear();
    for (int j : model_.integers()) {
      if (excluded_[static_cast<std::size_t>(j)] || fixed(j)) continue;
      if (!is_integral(x_[static_cast<std::size_t>(j)])) cands_.push_back(j);
    }
  }

  void drop_fixed() {
    std::erase_if(cands_, [&](int j) { return fixed(j); });
  }

  // Integer candidates without any lock go to their objective-best bound.
  void prefix_unlocked() {
    const std::size_t start = trail_.size();
    std::vector<int> moved;
    for (int j : cands_) {
      const auto jj = static_cast<std::size_t>(j);
      const double cj = model_.objective()[j];
      if (cj == 0.0 || in_.vlocks->down[jj] != 0 || in_.vlocks->up[jj] != 0) continue;
      BoundChange ch;
      if (cj < 0.0) {
        const double v = std::isfinite(bounds_.upper[jj]) ? bounds_.upper[jj] : std::ceil(x_[jj]);
        ch = make_change(bounds_, j, BoundSide::Lower, v, {ReasonKind::PreFix, -1});
      } else {
        const double v = std::isfinite(bounds_.lower[jj]) ? bounds_.lower[jj] : std::floor(x_[jj]);
        ch = make_change(bounds_, j, BoundSide::Upper, v, {ReasonKind::PreFix, -1});
      }
      apply(bounds_, ch);
      trail_.push_back(ch);
      moved.push_back(j);
    }
    if (moved.empty()) return;
    bool ok = true;
    if (policy_.propagate) {
      PropResult pr = propagate(lp_, in_.pool, bounds_, popts_, moved);
      trail_.insert(trail_.end(), pr.trail.begin(), pr.trail.end());
      ok = !pr.infeasible;
    }
    if (!ok) {
      undo(bounds_, std::span(trail_).subspan(start));
      trail_.resize(start);
      return;
    }
    for (int j : moved) excluded_[static_cast<std::size_t>(j)] = 1;
    stats_.prefixed = static_cast<int>(moved.size());
    changes_ += static_cast<int>(trail_.size() - start);
    std::erase_if(cands_, [&](int j) { return excluded_[static_cast<std::size_t>(j)] || fixed(j); });
  }

  int select() const {
    const DiveContext ctx = context();
    int best = -1;
    double best_score = 0.0;
    for (int j : cands_) {
      const double s = spec_.score(j, ctx);
      if (best < 0 || s > best_score) {
        best = j;
        best_score = s;
      }
    }
    return best;
  }

  // False when the fixing contradicts the current bounds.
  bool fix(int j, RoundDir dir) {
    const auto jj = static_cast<std::size_t>(j);
    const double xj = x_[jj];
    if (dir == RoundDir::Up) {
      const double v = std::ceil(xj - kDefaultIntTol);
      if (v > bounds_.upper[jj]) return false;
      if (v > bounds_.lower[jj]) {
        trail_.push_back(make_change(bounds_, j, BoundSide::Lower, v, {ReasonKind::DivingFix, -1}));
        apply(bounds_, trail_.back());
      }
    } else {
      const double v = std::floor(xj + kDefaultIntTol);
      if (v < bounds_.lower[jj]) return false;
      if (v < bounds_.upper[jj]) {
        trail_.push_back(make_change(bounds_, j, BoundSide::Upper, v, {ReasonKind::DivingFix, -1}));
        apply(bounds_, trail_.back());
      }
    }
    return true;
  }

  void backtrack(std::size_t start, int prev_changes) {
    undo(bounds_, std::span(trail_).subspan(start));
    trail_.resize(start);
    changes_ = prev_changes;
    ++stats_.backtracks;
  }

  bool give_up(int failures) {
    if (policy_.max_consecutive_failures > 0 && failures >= policy_.max_consecutive_failures) {
      stats_.end = DiveEnd::Failures;
      return true;
    }
    return false;
  }

  LpResult solve() {
    LpOptions o;
    o.iter_limit = policy_.lp_iter_limit;
    LpResult r = solve_lp(lp_, bounds_, &basis_, o);
    ++stats_.lp_solves;
    stats_.lp_iterations += r.iterations;
    return r;
  }

  void analyze(const FarkasRay& ray) {
    ++stats_.lp_infeasible;
    ConflictSite site{ConflictOrigin::Dive, spec_.name, in_.node_depth + static_cast<int>(batches_.size()),
                      in_.cutoff_row};
    AnalysisResult a = analyze_infeasibility(lp_, *in_.pool, bounds_, ray, site);
    if (a.created) {
      ++stats_.conflicts;
      refresh_locks();
    }
  }

  void accept(LpResult r) {
    x_ = std::move(r.x);
    basis_ = std::move(r.basis);
    changes_ = 0;
    record(x_);
    refresh_candidates();
  }

  // Candidates ran out: make sure the reference point matches the bounds.
  void final_solve() {
    stats_.end = DiveEnd::CandidatesExhausted;
    if (changes_ == 0) return;
    LpResult r = solve();
    if (r.status == LpStatus::Infeasible) {
      analyze(*r.ray);
      return;
    }
    if (r.status != LpStatus::Optimal) {
      stats_.end = DiveEnd::LpFailure;
      return;
    }
    accept(std::move(r));
    if (cands_.empty()) stats_.end = DiveEnd::Integral;
  }

  DiveResult finish() {
    DiveResult res;
    stats_.depth = static_cast<int>(batches_.size());
    res.stats = stats_;
    res.solutions = std::move(solutions_);
    res.final_bounds = bounds_;
    res.trail = std::move(trail_);
    return res;
  }

  const DiveInput& in_;
  const Problem& model_;
  const Problem& lp_;
  const HeuristicSpec& spec_;
  DivePolicy policy_;
  PropOptions popts_;
  LocalBounds bounds_;
  std::vector<double> x_;
  Basis basis_;
  WeightedLocks wlocks_;
  std::vector<char> excluded_;
  std::vector<int> cands_;
  std::vector<BoundChange> trail_;
  std::vector<std::size_t> batches_;
  std::vector<Point> solutions_;
  DiveStats stats_;
  int changes_ = 0;
};

}  // namespace

DiveResult dive(const DiveInput& in, const HeuristicSpec& spec, const DivePolicy& policy) {
  if (!(policy.lp_trigger_fraction > 0.0 && policy.lp_trigger_fraction <= 1.0))
    throw std::invalid_argument("lp_trigger_fraction must lie in (0, 1]");
  return Diver(in, spec, policy).run();
}

}  // namespace cdive
