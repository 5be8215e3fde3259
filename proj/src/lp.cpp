// SPDX-License-Identifier: Apache-2.0

#include "cdive/lp.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "cdive/basis_factor.hpp"

namespace cdive {

double bound_activity(std::span<const double> s, const LocalBounds& bounds) {
  double v = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] > 0.0)
      v += s[j] * bounds.lower[j];
    else if (s[j] < 0.0)
      v += s[j] * bounds.upper[j];
  }
  return v;
}

FarkasCheck verify_farkas_ray(const Problem& p, const LocalBounds& bounds, const FarkasRay& ray,
                              double tol) {
  FarkasCheck out;
  if (static_cast<int>(ray.y.size()) != p.m() || static_cast<int>(ray.s.size()) != p.n() ||
      bounds.size() != p.n()) {
    out.reason = "dimension mismatch";
    return out;
  }
  double ynorm = 0.0;
  for (int i = 0; i < p.m(); ++i) {
    const double yi = ray.y[static_cast<std::size_t>(i)];
    if (!(yi >= 0.0)) {
      out.reason = "negative multiplier at row " + std::to_string(i);
      return out;
    }
    ynorm = std::max(ynorm, yi);
  }
  double snorm = 0.0;
  for (int j = 0; j < p.n(); ++j) {
    const auto jj = static_cast<std::size_t>(j);
    const double yaj = dot(p.col(j), ray.y);
    out.equality_residual = std::max(out.equality_residual, std::abs(yaj + ray.s[jj]));
    snorm = std::max(snorm, std::abs(ray.s[jj]));
    if (ray.s[jj] > 0.0 && !std::isfinite(bounds.lower[jj])) {
      out.reason = "positive s needs a finite lower bound at j=" + std::to_string(j);
      return out;
    }
    if (ray.s[jj] < 0.0 && !std::isfinite(bounds.upper[jj])) {
      out.reason = "negative s needs a finite upper bound at j=" + std::to_string(j);
      return out;
    }
  }
  double yb = 0.0;
  for (int i = 0; i < p.m(); ++i) yb += ray.y[static_cast<std::size_t>(i)] * p.rhs()[i];
  out.proof_value = yb + bound_activity(ray.s, bounds);
  // Both conditions are judged on the ray scaled to unit size.
  const double scale = ynorm > 0.0 ? ynorm : snorm;
  if (scale == 0.0) {
    out.reason = "zero ray";
    return out;
  }
  if (out.equality_residual / scale > tol) {
    out.reason = "y^T A + s is not zero";
    return out;
  }
  if (!(out.proof_value / scale > tol)) {
    out.reason = "y^T b + s{l,u} is not positive";
    return out;
  }
  out.ok = true;
  return out;
}

const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
    case LpStatus::IterLimit:
      return "iterlimit";
    case LpStatus::Numerical:
      return "numerical";
  }
  return "?";
}

namespace {

constexpr double kDegenerateStep = 1e-12;

class Simplex {
 public:
  Simplex(const Problem& p, const LocalBounds& bounds, const LpOptions& opts, int iter_budget)
      : p_(p), bounds_(bounds), opts_(opts), n_(p.n()), m_(p.m()), total_(n_ + m_),
        iter_budget_(iter_budget) {
    lo_.resize(static_cast<std::size_t>(total_));
    up_.resize(static_cast<std::size_t>(total_));
    cost_.assign(static_cast<std::size_t>(total_), 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = bounds.lower[static_cast<std::size_t>(j)];
      up_[j] = bounds.upper[static_cast<std::size_t>(j)];
      cost_[j] = p.objective()[j];
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = p.rhs()[i];
      up_[n_ + i] = kInf;
    }
    bland_ = opts.bland;
  }

  LpResult run(const Basis* warm) {
    LpResult res;
    bool use_dual = false;
    if (warm && load_warm(*warm)) {
      use_dual = true;
    } else {
      slack_basis();
    }
    if (!refactor()) return fail(res, LpStatus::Numerical);
    LpStatus st = LpStatus::Numerical;
    if (use_dual && make_dual_feasible()) {
      st = dual();
      if (st == LpStatus::Optimal) st = primal();
    } else {
      st = primal();
    }
    res.iterations = iterations_;
    res.status = st;
    if (st == LpStatus::Optimal) {
      fill_optimal(res);
    } else if (st == LpStatus::Infeasible) {
      if (!ray_) return fail(res, LpStatus::Numerical);
      res.ray = std::move(ray_);
    } else if (st == LpStatus::Unbounded) {
      res.direction = std::move(direction_);
    }
    res.basis.status = status_;
    return res;
  }

  int iterations() const { return iterations_; }

 private:
  LpResult& fail(LpResult& res, LpStatus st) {
    res.status = st;
    res.iterations = iterations_;
    return res;
  }

  bool fixed(int j) const { return lo_[j] == up_[j]; }

  // Nonbasic placement that respects the current (possibly new) bounds.
  void place(int j) {
    VarStatus& s = status_[j];
    const bool has_lo = std::isfinite(lo_[j]);
    const bool has_up = std::isfinite(up_[j]);
    if (s == VarStatus::AtLower && !has_lo) s = has_up ? VarStatus::AtUpper : VarStatus::Free;
    if (s == VarStatus::AtUpper && !has_up) s = has_lo ? VarStatus::AtLower : VarStatus::Free;
    if (s == VarStatus::Free && (has_lo || has_up)) s = has_lo ? VarStatus::AtLower : VarStatus::AtUpper;
    x_[j] = s == VarStatus::AtLower ? lo_[j] : s == VarStatus::AtUpper ? up_[j] : 0.0;
  }

  void slack_basis() {
    status_.assign(static_cast<std::size_t>(total_), VarStatus::AtLower);
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    head_.resize(static_cast<std::size_t>(m_));
    for (int j = 0; j < n_; ++j) place(j);
    for (int i = 0; i < m_; ++i) {
      status_[n_ + i] = VarStatus::Basic;
      head_[i] = n_ + i;
    }
  }

  bool load_warm(const Basis& warm) {
    const int given = static_cast<int>(warm.status.size());
    if (given < n_ || given > total_) return false;
    status_.assign(warm.status.begin(), warm.status.end());
    for (int k = given; k < total_; ++k) status_.push_back(VarStatus::Basic);
    x_.assign(static_cast<std::size_t>(total_), 0.0);
    head_.clear();
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic)
        head_.push_back(j);
      else
        place(j);
    }
    if (static_cast<int>(head_.size()) != m_) return false;
    return true;
  }

  template <typename F>
  void for_column(int j, F&& f) const {
    if (j < n_) {
      SparseSpan c = p_.col(j);
      for (std::size_t k = 0; k < c.size(); ++k) f(c.index[k], c.value[k]);
    } else {
      f(j - n_, -1.0);
    }
  }

  double column_dot(int j, const std::vector<double>& w) const {
    if (j < n_) return dot(p_.col(j), w);
    return -w[static_cast<std::size_t>(j - n_)];
  }

  std::vector<double> dense_column(int j) const {
    std::vector<double> a(static_cast<std::size_t>(m_), 0.0);
    for_column(j, [&](int i, double v) { a[static_cast<std::size_t>(i)] = v; });
    return a;
  }

  bool refactor() {
    for (int attempt = 0; attempt < 3; ++attempt) {
      std::vector<std::vector<double>> cols;
      cols.reserve(static_cast<std::size_t>(m_));
      for (int k = 0; k < m_; ++k) cols.push_back(dense_column(head_[k]));
      std::vector<int> dep = factor_.factor(cols);
      if (dep.empty()) {
        compute_xb();
        return true;
      }
      // Swap dependent columns for logicals of the uncovered rows.
      const std::vector<int>& rows = factor_.uncovered_rows();
      for (std::size_t t = 0; t < dep.size() && t < rows.size(); ++t) {
        const int k = dep[t];
        const int old = head_[k];
        status_[old] = VarStatus::AtLower;
        place(old);
        const int logical = n_ + rows[t];
        if (status_[logical] == VarStatus::Basic) return false;
        status_[logical] = VarStatus::Basic;
        head_[k] = logical;
      }
    }
    return false;
  }

  void compute_xb() {
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int j = 0; j < total_; ++j) {
      if (status_[j] == VarStatus::Basic || x_[j] == 0.0) continue;
      const double xj = x_[j];
      for_column(j, [&](int i, double v) { rhs[static_cast<std::size_t>(i)] -= v * xj; });
    }
    factor_.ftran(rhs);
    for (int k = 0; k < m_; ++k) x_[head_[k]] = rhs[static_cast<std::size_t>(k)];
  }

  // Signed violation of basic position k: < 0 below lower, > 0 above upper.
  double violation(int k) const {
    const int j = head_[k];
    if (x_[j] < lo_[j] - opts_.feas_tol) return x_[j] - lo_[j];
    if (x_[j] > up_[j] + opts_.feas_tol) return x_[j] - up_[j];
    return 0.0;
  }

  std::vector<double> btran_costs(bool phase1) const {
    std::vector<double> w(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < m_; ++k) {
      if (phase1) {
        const double v = violation(k);
        w[k] = v < 0.0 ? -1.0 : v > 0.0 ? 1.0 : 0.0;
      } else {
        w[k] = cost_[head_[k]];
      }
    }
    factor_.btran(w);
    return w;
  }

  bool maybe_refactor() {
    if (factor_.updates() >= opts_.refactor_interval) {
      if (!refactor()) return false;
      fresh_ = true;
    }
    return true;
  }

  void note_step(double step) {
    if (step <= kDegenerateStep) {
      if (++degenerate_ > 2 * total_ && !bland_) {
        bland_ = true;
        bland_by_stall_ = true;
      }
    } else {
      degenerate_ = 0;
      if (bland_by_stall_) {
        bland_ = false;
        bland_by_stall_ = false;
      }
    }
  }

  void pivot(int r, int q, const std::vector<double>& d, VarStatus leave_status) {
    const int out = head_[r];
    status_[out] = leave_status;
    x_[out] = leave_status == VarStatus::AtLower ? lo_[out] : up_[out];
    status_[q] = VarStatus::Basic;
    head_[r] = q;
    factor_.update(r, d);
    fresh_ = false;
  }

  LpStatus primal() {
    fresh_ = true;
    for (;;) {
      if (iterations_ >= iter_budget_) return LpStatus::IterLimit;
      if (!maybe_refactor()) return LpStatus::Numerical;
      bool phase1 = false;
      for (int k = 0; k < m_ && !phase1; ++k) phase1 = violation(k) != 0.0;
      const std::vector<double> w = btran_costs(phase1);

      int q = -1;
      int dir = 0;
      double best = 0.0;
      for (int j = 0; j < total_; ++j) {
        const VarStatus s = status_[j];
        if (s == VarStatus::Basic || fixed(j)) continue;
        const double dj = (phase1 ? 0.0 : cost_[j]) - column_dot(j, w);
        int dj_dir = 0;
        if (dj < -opts_.dual_tol && s != VarStatus::AtUpper) dj_dir = 1;
        if (dj > opts_.dual_tol && s != VarStatus::AtLower) dj_dir = -1;
        if (dj_dir == 0) continue;
        if (bland_) {
          q = j;
          dir = dj_dir;
          break;
        }
        if (std::abs(dj) > best) {
          best = std::abs(dj);
          q = j;
          dir = dj_dir;
        }
      }

      if (q < 0) {
        if (!fresh_) {
          if (!refactor()) return LpStatus::Numerical;
          fresh_ = true;
          continue;
        }
        if (phase1) {
          ray_ = make_ray(w);
          return ray_ ? LpStatus::Infeasible : LpStatus::Numerical;
        }
        return LpStatus::Optimal;
      }

      std::vector<double> d = dense_column(q);
      factor_.ftran(d);

      // Harris two-pass ratio test; pass one finds the relaxed step bound.
      struct Cand {
        int k;
        double step;
        double alpha;
        VarStatus at;
      };
      std::vector<Cand> cands;
      double relaxed = kInf;
      for (int k = 0; k < m_; ++k) {
        const double alpha = d[k];
        if (std::abs(alpha) <= opts_.pivot_tol) continue;
        const double rate = -dir * alpha;
        const int j = head_[k];
        const double xv = x_[j];
        const bool below = phase1 && xv < lo_[j] - opts_.feas_tol;
        const bool above = phase1 && xv > up_[j] + opts_.feas_tol;
        double step = kInf;
        double slack = kInf;
        VarStatus at = VarStatus::AtLower;
        if (below) {
          if (rate > 0) {
            step = (lo_[j] - xv) / rate;
            slack = (lo_[j] + opts_.feas_tol - xv) / rate;
          }
        } else if (above) {
          if (rate < 0) {
            step = (xv - up_[j]) / -rate;
            slack = (xv - up_[j] + opts_.feas_tol) / -rate;
            at = VarStatus::AtUpper;
          }
        } else if (rate < 0 && std::isfinite(lo_[j])) {
          step = std::max(0.0, (xv - lo_[j]) / -rate);
          slack = std::max(0.0, (xv - lo_[j] + opts_.feas_tol) / -rate);
        } else if (rate > 0 && std::isfinite(up_[j])) {
          step = std::max(0.0, (up_[j] - xv) / rate);
          slack = std::max(0.0, (up_[j] + opts_.feas_tol - xv) / rate);
          at = VarStatus::AtUpper;
        }
        if (step == kInf) continue;
        cands.push_back({k, step, alpha, at});
        relaxed = std::min(relaxed, bland_ ? step : slack);
      }
      const double flip = up_[q] - lo_[q];
      int r = -1;
      double step = kInf;
      VarStatus at = VarStatus::AtLower;
      double best_alpha = 0.0;
      for (const Cand& c : cands) {
        if (c.step > relaxed) continue;
        const bool better = bland_ ? (r < 0 || head_[c.k] < head_[r]) : std::abs(c.alpha) > best_alpha;
        if (better) {
          r = c.k;
          step = c.step;
          at = c.at;
          best_alpha = std::abs(c.alpha);
        }
      }
      ++iterations_;
      if (std::isfinite(flip) && flip <= step) {
        // Bound flip of the entering variable, basis unchanged.
        for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * d[k] * flip;
        status_[q] = dir > 0 ? VarStatus::AtUpper : VarStatus::AtLower;
        x_[q] = dir > 0 ? up_[q] : lo_[q];
        note_step(flip);
        continue;
      }
      if (r < 0) {
        if (phase1) return LpStatus::Numerical;
        direction_.assign(static_cast<std::size_t>(n_), 0.0);
        if (q < n_) direction_[q] = dir;
        for (int k = 0; k < m_; ++k)
          if (head_[k] < n_) direction_[head_[k]] = -dir * d[k];
        return LpStatus::Unbounded;
      }
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * d[k] * step;
      x_[q] += dir * step;
      pivot(r, q, d, at);
      note_step(step);
    }
  }

  // Flips boxed nonbasics to the bound their reduced cost prefers.
  bool make_dual_feasible() {
    const std::vector<double> w = btran_costs(false);
    bool changed = false;
    for (int j = 0; j < total_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::Basic || fixed(j)) continue;
      const double dj = cost_[j] - column_dot(j, w);
      if (s == VarStatus::AtLower && dj < -opts_.dual_tol) {
        if (!std::isfinite(up_[j])) return false;
        status_[j] = VarStatus::AtUpper;
        x_[j] = up_[j];
        changed = true;
      } else if (s == VarStatus::AtUpper && dj > opts_.dual_tol) {
        if (!std::isfinite(lo_[j])) return false;
        status_[j] = VarStatus::AtLower;
        x_[j] = lo_[j];
        changed = true;
      } else if (s == VarStatus::Free && std::abs(dj) > opts_.dual_tol) {
        return false;
      }
    }
    if (changed) compute_xb();
    return true;
  }

  LpStatus dual() {
    fresh_ = true;
    std::vector<double> rho(static_cast<std::size_t>(m_));
    for (;;) {
      if (iterations_ >= iter_budget_) return LpStatus::IterLimit;
      if (!maybe_refactor()) return LpStatus::Numerical;
      int r = -1;
      double worst = 0.0;
      for (int k = 0; k < m_; ++k) {
        const double v = std::abs(violation(k));
        if (v == 0.0) continue;
        if (bland_ ? (r < 0 || head_[k] < head_[r]) : v > worst) {
          worst = v;
          r = k;
        }
      }
      if (r < 0) {
        if (!fresh_) {
          if (!refactor()) return LpStatus::Numerical;
          fresh_ = true;
          continue;
        }
        return LpStatus::Optimal;
      }
      const int leaving = head_[r];
      const bool below = x_[leaving] < lo_[leaving];
      std::fill(rho.begin(), rho.end(), 0.0);
      rho[r] = 1.0;
      factor_.btran(rho);
      const std::vector<double> w = btran_costs(false);

      struct Cand {
        int j;
        double ratio;
        double alpha;
      };
      std::vector<Cand> cands;
      double relaxed = kInf;
      for (int j = 0; j < total_; ++j) {
        const VarStatus s = status_[j];
        if (s == VarStatus::Basic || fixed(j)) continue;
        const double alpha = column_dot(j, rho);
        if (std::abs(alpha) <= opts_.pivot_tol) continue;
        // The leaving value moves by -alpha per unit increase of x_j.
        const double needed = below ? -alpha : alpha;
        bool ok = false;
        if (s == VarStatus::AtLower) ok = needed > 0;
        if (s == VarStatus::AtUpper) ok = needed < 0;
        if (s == VarStatus::Free) ok = true;
        if (!ok) continue;
        const double dj = cost_[j] - column_dot(j, w);
        const double ratio = std::max(0.0, std::abs(dj)) / std::abs(alpha);
        const double slack = (std::abs(dj) + opts_.dual_tol) / std::abs(alpha);
        cands.push_back({j, ratio, alpha});
        relaxed = std::min(relaxed, bland_ ? ratio : slack);
      }
      if (cands.empty()) {
        if (!fresh_) {
          if (!refactor()) return LpStatus::Numerical;
          fresh_ = true;
          continue;
        }
        std::vector<double> ray_w(rho);
        if (below)
          for (double& v : ray_w) v = -v;
        ray_ = make_ray(ray_w);
        return ray_ ? LpStatus::Infeasible : LpStatus::Numerical;
      }
      int q = -1;
      double best_alpha = 0.0;
      double ratio = 0.0;
      for (const Cand& c : cands) {
        if (c.ratio > relaxed) continue;
        const bool better = bland_ ? (q < 0 || c.j < q) : std::abs(c.alpha) > best_alpha;
        if (better) {
          q = c.j;
          best_alpha = std::abs(c.alpha);
          ratio = c.ratio;
        }
      }
      std::vector<double> d = dense_column(q);
      factor_.ftran(d);
      const double alpha_q = column_dot(q, rho);
      if (std::abs(d[r] - alpha_q) > 1e-7 * (1.0 + std::abs(alpha_q)) || std::abs(d[r]) <= opts_.pivot_tol) {
        if (fresh_) return LpStatus::Numerical;
        if (!refactor()) return LpStatus::Numerical;
        fresh_ = true;
        continue;
      }
      ++iterations_;
      const double target = below ? lo_[leaving] : up_[leaving];
      const double t = (x_[leaving] - target) / d[r];
      for (int k = 0; k < m_; ++k) x_[head_[k]] -= t * d[k];
      x_[q] += t;
      pivot(r, q, d, below ? VarStatus::AtLower : VarStatus::AtUpper);
      note_step(ratio);
    }
  }

  std::optional<FarkasRay> make_ray(const std::vector<double>& w) const {
    FarkasRay ray;
    ray.y.assign(static_cast<std::size_t>(m_), 0.0);
    double wmax = 0.0;
    for (double v : w) wmax = std::max(wmax, std::abs(v));
    if (wmax == 0.0) return std::nullopt;
    double ymax = 0.0;
    for (int i = 0; i < m_; ++i) {
      const double v = w[static_cast<std::size_t>(i)];
      if (v > 1e-12 * wmax) ray.y[i] = v;
      ymax = std::max(ymax, ray.y[i]);
    }
    if (ymax == 0.0) return std::nullopt;
    for (double& v : ray.y) v /= ymax;
    ray.s.assign(static_cast<std::size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      double s = -dot(p_.col(j), ray.y);
      if (std::abs(s) <= 1e-12) s = 0.0;
      // Tiny entries that would need an infinite bound are dropped.
      if (s > 0.0 && !std::isfinite(lo_[j]) && s <= 1e-9) s = 0.0;
      if (s < 0.0 && !std::isfinite(up_[j]) && -s <= 1e-9) s = 0.0;
      ray.s[j] = s;
    }
    if (!verify_farkas_ray(p_, bounds_, ray, opts_.farkas_tol).ok) return std::nullopt;
    return ray;
  }

  void fill_optimal(LpResult& res) {
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.objective = p_.evaluate(res.x);
    std::vector<double> w = btran_costs(false);
    res.duals.assign(static_cast<std::size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) res.duals[i] = std::max(0.0, w[static_cast<std::size_t>(i)]);
    res.reduced_costs.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) res.reduced_costs[j] = cost_[j] - dot(p_.col(j), res.duals);
  }

  const Problem& p_;
  const LocalBounds& bounds_;
  LpOptions opts_;
  int n_;
  int m_;
  int total_;
  int iter_budget_;
  std::vector<double> lo_;
  std::vector<double> up_;
  std::vector<double> cost_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<double> x_;
  BasisFactor factor_;
  bool fresh_ = true;
  bool bland_ = false;
  bool bland_by_stall_ = false;
  int degenerate_ = 0;
  int iterations_ = 0;
  std::optional<FarkasRay> ray_;
  std::vector<double> direction_;
};

}  // namespace

LpResult solve_lp(const Problem& p, const LocalBounds& bounds, const Basis* warm,
                  const LpOptions& opts) {
  if (bounds.size() != p.n()) throw std::invalid_argument("solve_lp: bounds dimension mismatch");
  if (!bounds.consistent()) throw std::invalid_argument("solve_lp: crossed local bounds");
  int used = 0;
  auto attempt = [&](const Basis* start, const LpOptions& o) {
    Simplex s(p, bounds, o, std::max(0, o.iter_limit - used));
    LpResult r = s.run(start);
    used += s.iterations();
    r.iterations = used;
    return r;
  };
  LpResult res = attempt(warm, opts);
  if (res.status != LpStatus::Numerical) return res;
  if (warm) {
    res = attempt(nullptr, opts);
    if (res.status != LpStatus::Numerical) return res;
  }
  LpOptions careful = opts;
  careful.bland = true;
  return attempt(nullptr, careful);
}

}  // namespace cdive
