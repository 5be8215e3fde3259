// SPDX-License-Identifier: Apache-2.0

#include "cdive/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "cdive/propagation.hpp"

namespace cdive {

void SolverConfig::set_heuristics(const std::string& list) {
  farkas = coef = conflict = false;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (item.empty() || item == "none") continue;
    if (item == "all") {
      farkas = coef = conflict = true;
    } else if (item == "farkas") {
      farkas = true;
    } else if (item == "coef") {
      coef = true;
    } else if (item == "conflict") {
      conflict = true;
    } else {
      throw std::invalid_argument("unknown heuristic '" + item + "'");
    }
  }
}

std::string SolverConfig::heuristics() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(farkas, "farkas");
  add(coef, "coef");
  add(conflict, "conflict");
  return out.empty() ? "none" : out;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::Unbounded:
      return "unbounded";
    case SolveStatus::Limit:
      return "limit";
  }
  return "?";
}

double cutoff_delta(const Problem& p, double objective) {
  bool integral = true;
  for (int j = 0; j < p.n() && integral; ++j) {
    const double cj = p.objective()[j];
    integral = p.is_integer(j) ? cj == std::round(cj) : cj == 0.0;
  }
  return integral ? 1.0 : 1e-6 * (1.0 + std::abs(objective));
}

Problem install_cutoff(const Problem& p, double objective) {
  SparseVector row;
  for (int j = 0; j < p.n(); ++j)
    if (p.objective()[j] != 0.0) row.push(j, -p.objective()[j]);
  return p.with_row(row, -(objective - cutoff_delta(p, objective)), "cutoff");
}

std::optional<BranchChoice> branch(const Problem& p, std::span<const double> x, double int_tol) {
  std::optional<BranchChoice> best;
  double best_dist = -1.0;
  for (int j : p.integers()) {
    const double v = x[static_cast<std::size_t>(j)];
    if (is_integral(v, int_tol)) continue;
    const double phi = fractionality(v);
    const double dist = std::min(phi, 1.0 - phi);
    if (dist > best_dist) {
      best_dist = dist;
      best = BranchChoice{j, v, phi >= 0.5};
    }
  }
  return best;
}

std::vector<std::string> heuristic_schedule(const ScheduleInput& in) {
  std::vector<std::string> out;
  const bool on_freq = in.dive_freq > 0 && in.depth % in.dive_freq == 0;
  if (in.farkas && !in.zero_objective) {
    if (in.depth == 0 || (in.root_farkas_success && on_freq)) out.push_back("farkas");
  }
  if (in.coef && on_freq) out.push_back("coef");
  if (in.conflict && on_freq) out.push_back("conflict");
  return out;
}

std::vector<int> seed_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
  }
  return perm;
}

Problem permute_columns(const Problem& p, const std::vector<int>& perm) {
  ProblemData src = p.to_data();
  ProblemData d = src;
  std::vector<int> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[static_cast<std::size_t>(perm[k])] = static_cast<int>(k);
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const auto j = static_cast<std::size_t>(perm[k]);
    d.objective[k] = src.objective[j];
    d.lower[k] = src.lower[j];
    d.upper[k] = src.upper[j];
    d.integer[k] = src.integer[j];
    d.var_names[k] = src.var_names[j];
  }
  for (Triplet& t : d.entries) t.col = inv[static_cast<std::size_t>(t.col)];
  return Problem(std::move(d));
}

namespace {

struct PathNode {
  std::shared_ptr<const PathNode> parent;
  BoundChange change;
};

struct OpenNode {
  std::shared_ptr<const PathNode> path;
  int depth = 0;
  double bound = -kInf;
  std::shared_ptr<const Basis> warm;
  long order = 0;
};

class Search {
 public:
  Search(const Problem& p, const SolverConfig& cfg, const SolveHooks& hooks)
      : input_(p), cfg_(cfg), hooks_(hooks), perm_(seed_permutation(p.n(), cfg.seed)),
        model_(permute_columns(p, perm_)), lp_problem_(model_), pool_(model_.n(), cfg.pool_capacity),
        vlocks_(compute_locks(model_)), start_(std::chrono::steady_clock::now()) {
    inv_.resize(perm_.size());
    for (std::size_t k = 0; k < perm_.size(); ++k) inv_[static_cast<std::size_t>(perm_[k])] = static_cast<int>(k);
  }

  SolveResult run() {
    for (const ConflictConstraint& cc : hooks_.initial_conflicts) {
      ConflictConstraint c = cc;
      for (int& j : c.row.index) j = inv_[static_cast<std::size_t>(j)];
      sort_row(c.row);
      pool_.add(std::move(c));
    }
    if (hooks_.initial_solution) {
      std::vector<double> x(perm_.size());
      for (std::size_t k = 0; k < perm_.size(); ++k) x[k] = (*hooks_.initial_solution)[static_cast<std::size_t>(perm_[k])];
      if (check_feasible(model_, x).feasible()) offer(make_point(model_, std::move(x)));
    }
    open_.push_back(OpenNode{nullptr, 0, -kInf, nullptr, order_++});
    event();
    bool stopped = false;
    while (!open_.empty()) {
      if (limit_reached()) {
        stopped = true;
        break;
      }
      OpenNode node = pop();
      process(node);
      if (unbounded_) break;
      event();
    }
    return finish(stopped);
  }

 private:
  static void sort_row(SparseVector& row) {
    std::vector<std::size_t> idx(row.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return row.index[a] < row.index[b]; });
    SparseVector out;
    for (auto k : idx) out.push(row.index[k], row.value[k]);
    row = std::move(out);
  }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

  bool limit_reached() const {
    if (cfg_.node_limit >= 0 && stats_.nodes >= cfg_.node_limit) return true;
    return elapsed() >= cfg_.time_limit;
  }

  OpenNode pop() {
    std::size_t pick = open_.size() - 1;
    if (cfg_.best_bound_interval > 0 && stats_.nodes > 0 && stats_.nodes % cfg_.best_bound_interval == 0) {
      for (std::size_t k = 0; k < open_.size(); ++k) {
        const OpenNode& a = open_[k];
        const OpenNode& b = open_[pick];
        if (a.bound < b.bound || (a.bound == b.bound && a.order < b.order)) pick = k;
      }
    }
    OpenNode node = std::move(open_[pick]);
    open_.erase(open_.begin() + static_cast<std::ptrdiff_t>(pick));
    return node;
  }

  LocalBounds bounds_of(const OpenNode& node) const {
    LocalBounds b = LocalBounds::of(model_);
    std::vector<const BoundChange*> chain;
    for (const PathNode* q = node.path.get(); q; q = q->parent.get()) chain.push_back(&q->change);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const BoundChange& ch = **it;
      auto& v = ch.side == BoundSide::Lower ? b.lower : b.upper;
      const auto j = static_cast<std::size_t>(ch.var);
      // Propagation may have tightened past the branching value already.
      v[j] = ch.side == BoundSide::Lower ? std::max(v[j], ch.new_value) : std::min(v[j], ch.new_value);
    }
    return b;
  }

  double cutoff_value() const { return incumbent_ ? incumbent_->objective - delta_ : kInf; }

  bool prune_by_bound(double lb) {
    if (!incumbent_) return false;
    if (lb > cutoff_value() + kDefaultFeasTol) {
      if (hooks_.on_bound_prune) hooks_.on_bound_prune(lb, incumbent_->objective, delta_);
      ++stats_.pruned_bound;
      return true;
    }
    return false;
  }

  void offer(Point pt) {
    if (incumbent_ && !(pt.objective < incumbent_->objective - 1e-9)) return;
    delta_ = cutoff_delta(model_, pt.objective);
    incumbent_ = std::move(pt);
    lp_problem_ = install_cutoff(model_, incumbent_->objective);
    cutoff_row_ = model_.m();
    event();
  }

  void check_lock_signs(int first_id) {
    for (const ConflictConstraint* cc : pool_.entries()) {
      if (cc->id < first_id) continue;
      const Problem& rows = cc->cutoff_bound ? lp_problem_ : model_;
      if (lock_sign_violation(rows, *cc) >= 0) ++stats_.lock_sign_failures;
    }
  }

  void process(const OpenNode& node) {
    ++stats_.nodes;
    stats_.max_depth = std::max<long>(stats_.max_depth, node.depth);
    if (prune_by_bound(node.bound)) return;
    LocalBounds bounds = bounds_of(node);
    if (!bounds.consistent()) {
      ++stats_.pruned_infeasible;
      return;
    }
    PropOptions popts;
    popts.cutoff_row = cutoff_row_;
    PropResult pr = propagate(lp_problem_, &pool_, bounds, popts);
    std::vector<int> hits = pr.conflict_hits;
    if (pr.infeasible) {
      ++stats_.pruned_infeasible;
      pool_.tick(hits);
      return;
    }
    LpOptions lo;
    lo.iter_limit = cfg_.lp_iter_limit;
    LpResult lp = solve_lp(lp_problem_, bounds, node.warm.get(), lo);
    ++stats_.lp_solves;
    stats_.lp_iterations += lp.iterations;
    switch (lp.status) {
      case LpStatus::Infeasible: {
        const int first = next_conflict_id();
        AnalysisResult a = analyze_infeasibility(lp_problem_, pool_, bounds, *lp.ray,
                                                 {ConflictOrigin::Node, "", node.depth, cutoff_row_});
        if (a.created) {
          ++stats_.node_conflicts;
          check_lock_signs(first);
        }
        ++stats_.pruned_infeasible;
        pool_.tick(hits);
        return;
      }
      case LpStatus::Unbounded:
        if (node.depth == 0) {
          unbounded_ = true;
        } else {
          ++stats_.lp_failures;
          incomplete_ = true;
        }
        return;
      case LpStatus::IterLimit:
      case LpStatus::Numerical:
        ++stats_.lp_failures;
        split_blind(node, bounds);
        pool_.tick(hits);
        return;
      case LpStatus::Optimal:
        break;
    }
    const double lb = lp.objective;
    if (prune_by_bound(lb)) {
      pool_.tick(hits);
      return;
    }
    auto choice = branch(model_, lp.x);
    if (!choice) {
      if (auto pt = round_to_solution(model_, lp.x))
        offer(std::move(*pt));
      else
        incomplete_ = true;
      pool_.tick(hits);
      return;
    }
    run_dives(node, bounds, lp);
    if (prune_by_bound(lb)) {
      pool_.tick(hits);
      return;
    }
    auto warm = std::make_shared<const Basis>(std::move(lp.basis));
    const int j = choice->var;
    BoundChange down = make_change(bounds, j, BoundSide::Upper, std::floor(choice->value),
                                   {ReasonKind::Branching, -1});
    BoundChange up = make_change(bounds, j, BoundSide::Lower, std::ceil(choice->value),
                                 {ReasonKind::Branching, -1});
    OpenNode cd{std::make_shared<const PathNode>(PathNode{node.path, down}), node.depth + 1, lb, warm, 0};
    OpenNode cu{std::make_shared<const PathNode>(PathNode{node.path, up}), node.depth + 1, lb, warm, 0};
    // The child explored first goes on top of the stack.
    if (choice->up_first) {
      cd.order = order_++;
      cu.order = order_++;
      open_.push_back(std::move(cd));
      open_.push_back(std::move(cu));
    } else {
      cu.order = order_++;
      cd.order = order_++;
      open_.push_back(std::move(cu));
      open_.push_back(std::move(cd));
    }
    pool_.tick(hits);
  }

  // No LP information: split the first unfixed integer domain in half.
  void split_blind(const OpenNode& node, const LocalBounds& bounds) {
    for (int j : model_.integers()) {
      const auto jj = static_cast<std::size_t>(j);
      const double lo = bounds.lower[jj];
      const double up = bounds.upper[jj];
      if (lo == up || !std::isfinite(lo) || !std::isfinite(up)) continue;
      const double mid = std::floor((lo + up) / 2.0);
      BoundChange down = make_change(bounds, j, BoundSide::Upper, mid, {ReasonKind::Branching, -1});
      BoundChange upc = make_change(bounds, j, BoundSide::Lower, mid + 1.0, {ReasonKind::Branching, -1});
      open_.push_back({std::make_shared<const PathNode>(PathNode{node.path, upc}), node.depth + 1, node.bound,
                       nullptr, order_++});
      open_.push_back({std::make_shared<const PathNode>(PathNode{node.path, down}), node.depth + 1, node.bound,
                       nullptr, order_++});
      return;
    }
    incomplete_ = true;
  }

  int next_conflict_id() const { return pool_.next_id(); }

  void run_dives(const OpenNode& node, const LocalBounds& bounds, const LpResult& lp) {
    ScheduleInput si;
    si.farkas = cfg_.farkas;
    si.coef = cfg_.coef;
    si.conflict = cfg_.conflict;
    si.zero_objective = model_.has_zero_objective();
    si.depth = node.depth;
    si.dive_freq = cfg_.dive_freq;
    si.root_farkas_success = stats_.root_farkas_success;
    for (const std::string& name : heuristic_schedule(si)) {
      DiveInput in;
      in.model = &model_;
      in.lp_problem = &lp_problem_;
      in.cutoff_row = cutoff_row_;
      in.pool = &pool_;
      in.vlocks = &vlocks_;
      in.kappa = cfg_.kappa;
      in.bounds = bounds;
      in.x = lp.x;
      in.basis = lp.basis;
      in.node_depth = node.depth;
      DivePolicy policy = name == "farkas" ? DivePolicy::every_node() : DivePolicy::triggered();
      policy.lp_iter_limit = cfg_.dive_lp_iter_limit;
      const int first = next_conflict_id();
      DiveResult dr = dive(in, heuristic_by_name(name), policy);
      check_lock_signs(first);
      if (hooks_.after_dive) hooks_.after_dive(lp_problem_, pool_);
      DiveTotals& t = stats_.dives[name];
      ++t.calls;
      t.lp_solves += dr.stats.lp_solves;
      t.conflicts += dr.stats.conflicts;
      t.solutions += dr.stats.solutions;
      t.depth_sum += dr.stats.depth;
      if (!dr.solutions.empty()) ++t.successful;
      if (name == "farkas" && node.depth == 0) stats_.root_farkas_success = !dr.solutions.empty();
      for (Point& pt : dr.solutions) {
        const bool improves = !incumbent_ || pt.objective < incumbent_->objective - 1e-9;
        if (improves) {
          ++t.improving;
          offer(std::move(pt));
        }
      }
    }
  }

  double global_bound() const {
    double b = incumbent_ ? incumbent_->objective : kInf;
    for (const OpenNode& n : open_) b = std::min(b, n.bound);
    return b;
  }

  void event() {
    if (!cfg_.record_timeline) return;
    TimelineEvent e;
    e.time = elapsed();
    if (incumbent_) e.primal = incumbent_->objective + model_.objective_offset();
    const double gb = global_bound();
    e.dual = std::isfinite(gb) ? gb + model_.objective_offset() : gb;
    auto& tl = stats_.timeline;
    if (!tl.empty() && tl.back().primal == e.primal && tl.back().dual == e.dual) return;
    tl.push_back(e);
  }

  SolveResult finish(bool stopped) {
    SolveResult res;
    stats_.time = elapsed();
    stats_.pool = pool_.stats();
    if (unbounded_) {
      res.status = SolveStatus::Unbounded;
    } else if (stopped || incomplete_) {
      res.status = SolveStatus::Limit;
    } else {
      res.status = incumbent_ ? SolveStatus::Optimal : SolveStatus::Infeasible;
    }
    if (incumbent_) {
      std::vector<double> x(perm_.size());
      for (std::size_t k = 0; k < perm_.size(); ++k) x[static_cast<std::size_t>(perm_[k])] = incumbent_->values[k];
      res.incumbent = make_point(input_, std::move(x));
      res.objective = res.incumbent->objective;
    }
    if (res.status == SolveStatus::Optimal)
      res.bound = res.objective;
    else if (res.status == SolveStatus::Infeasible)
      res.bound = kInf;
    else if (res.status == SolveStatus::Limit)
      res.bound = std::min(global_bound(), res.objective);
    for (const ConflictConstraint* cc : pool_.entries()) {
      ConflictConstraint c = *cc;
      for (int& j : c.row.index) j = perm_[static_cast<std::size_t>(j)];
      sort_row(c.row);
      res.conflicts.push_back(std::move(c));
    }
    if (cfg_.record_timeline) {
      TimelineEvent e;
      e.time = stats_.time;
      if (incumbent_) e.primal = incumbent_->objective + model_.objective_offset();
      e.dual = std::isfinite(res.bound) ? res.bound + model_.objective_offset() : res.bound;
      stats_.timeline.push_back(e);
    }
    res.stats = std::move(stats_);
    return res;
  }

  const Problem& input_;
  SolverConfig cfg_;
  const SolveHooks& hooks_;
  std::vector<int> perm_;
  std::vector<int> inv_;
  Problem model_;
  Problem lp_problem_;
  int cutoff_row_ = -1;
  double delta_ = 0.0;
  ConflictPool pool_;
  LockTable vlocks_;
  std::vector<OpenNode> open_;
  long order_ = 0;
  std::optional<Point> incumbent_;
  bool unbounded_ = false;
  bool incomplete_ = false;
  SearchStats stats_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

SolveResult solve(const Problem& p, const SolverConfig& config, const SolveHooks& hooks) {
  if (auto bad = validate(p)) throw std::invalid_argument("invalid problem: " + *bad);
  if (!(config.kappa >= 0.0 && config.kappa <= 1.0)) throw std::invalid_argument("kappa must lie in [0, 1]");
  return Search(p, config, hooks).run();
}

}  // namespace cdive
