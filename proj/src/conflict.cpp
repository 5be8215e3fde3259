// SPDX-License-Identifier: Apache-2.0

#include "cdive/conflict.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace cdive {

double max_activity(SparseSpan row, const LocalBounds& bounds) {
  double act = 0.0;
  for (std::size_t k = 0; k < row.size(); ++k) {
    const auto j = static_cast<std::size_t>(row.index[k]);
    const double a = row.value[k];
    const double b = a > 0.0 ? bounds.upper[j] : bounds.lower[j];
    if (!std::isfinite(b)) return kInf;
    act += a * b;
  }
  return act;
}

ProofResult build_farkas_proof(const Problem& p, const LocalBounds& bounds, const FarkasRay& ray,
                               int cutoff_row, double farkas_tol) {
  ProofResult out;
  out.check = verify_farkas_ray(p, bounds, ray, farkas_tol);
  if (!out.check.ok) return out;

  std::vector<double> abar(static_cast<std::size_t>(p.n()));
  double amax = 0.0;
  for (int j = 0; j < p.n(); ++j) {
    abar[j] = dot(p.col(j), ray.y);
    amax = std::max(amax, std::abs(abar[j]));
  }
  double rhs = 0.0;
  for (int i = 0; i < p.m(); ++i) rhs += ray.y[static_cast<std::size_t>(i)] * p.rhs()[i];

  ConflictConstraint cc;
  for (int j = 0; j < p.n(); ++j) {
    const double a = abar[j];
    if (a == 0.0) continue;
    if (std::abs(a) < 1e-9 * amax) {
      // Dropping a x_j stays valid once rhs absorbs its largest value.
      const double big = std::max(std::abs(p.lower()[j]), std::abs(p.upper()[j]));
      if (std::isfinite(big)) {
        rhs -= std::abs(a) * big;
        continue;
      }
    }
    cc.row.push(j, a);
  }
  cc.rhs = rhs;
  if (cc.row.empty()) {
    out.empty_support = rhs > 0.0;
    if (!out.empty_support) out.check.reason = "proof row vanished";
    return out;
  }
  if (!(max_activity(cc.row.view(), bounds) < rhs)) {
    out.check.ok = false;
    out.check.reason = "proof is not violated by the local bounds";
    return out;
  }
  if (cutoff_row >= 0 && ray.y[static_cast<std::size_t>(cutoff_row)] > 0.0)
    cc.cutoff_bound = -p.rhs()[cutoff_row];
  out.proof = std::move(cc);
  return out;
}

int lock_sign_violation(const Problem& p, const ConflictConstraint& cc) {
  for (std::size_t k = 0; k < cc.row.size(); ++k) {
    const int j = cc.row.index[k];
    const bool want_positive = cc.row.value[k] > 0.0;
    SparseSpan col = p.col(j);
    bool found = false;
    for (std::size_t t = 0; t < col.size() && !found; ++t)
      found = want_positive ? col.value[t] > 0.0 : col.value[t] < 0.0;
    if (!found) return j;
  }
  return -1;
}

ConflictPool::ConflictPool(int n, int capacity)
    : n_(n), capacity_(capacity), occurs_(static_cast<std::size_t>(n)), locks_(LockTable::zeros(n)) {}

const ConflictConstraint* ConflictPool::at_slot(int slot) const {
  const auto& s = slots_[static_cast<std::size_t>(slot)];
  return s ? &*s : nullptr;
}

const ConflictConstraint* ConflictPool::find(int id) const {
  for (const auto& s : slots_)
    if (s && s->id == id) return &*s;
  return nullptr;
}

std::vector<const ConflictConstraint*> ConflictPool::entries() const {
  std::vector<const ConflictConstraint*> out;
  out.reserve(static_cast<std::size_t>(live_));
  for (const auto& s : slots_)
    if (s) out.push_back(&*s);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->id < b->id; });
  return out;
}

void ConflictPool::remove_slot(int slot) {
  auto& s = slots_[static_cast<std::size_t>(slot)];
  locks_.add_row(s->row.view(), -1);
  for (int j : s->row.index) {
    auto& occ = occurs_[static_cast<std::size_t>(j)];
    occ.erase(std::find(occ.begin(), occ.end(), slot));
  }
  s.reset();
  free_.push_back(slot);
  --live_;
}

int ConflictPool::insert(ConflictConstraint cc) {
  cc.id = next_id_++;
  cc.age = 0;
  int slot;
  if (!free_.empty()) {
    slot = free_.back();
    free_.pop_back();
  } else {
    slot = static_cast<int>(slots_.size());
    slots_.emplace_back();
  }
  locks_.add_row(cc.row.view(), 1);
  for (int j : cc.row.index) occurs_[static_cast<std::size_t>(j)].push_back(slot);
  const int id = cc.id;
  slots_[static_cast<std::size_t>(slot)] = std::move(cc);
  ++live_;
  return id;
}

PoolAddResult ConflictPool::add(ConflictConstraint cc) {
  PoolAddResult res;
  if (cc.row.empty() || capacity_ <= 0) {
    ++stats_.rejected;
    return res;
  }
  const int j0 = cc.row.index[0];
  for (int slot : occurs_[static_cast<std::size_t>(j0)]) {
    const ConflictConstraint& e = *slots_[static_cast<std::size_t>(slot)];
    if (e.row.index != cc.row.index) continue;
    const double t = cc.row.value[0] / e.row.value[0];
    if (!(t > 0.0)) continue;
    bool proportional = true;
    for (std::size_t k = 0; k < cc.row.size() && proportional; ++k) {
      const double a = cc.row.value[k];
      const double b = t * e.row.value[k];
      proportional = std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b));
    }
    if (!proportional) continue;
    if (cc.rhs / t <= e.rhs + 1e-9 * std::max(1.0, std::abs(e.rhs))) {
      ++stats_.rejected;
      return res;
    }
    res.status = PoolAdd::Replaced;
    res.victim = e.id;
    remove_slot(slot);
    res.id = insert(std::move(cc));
    ++stats_.replaced;
    return res;
  }
  res.status = PoolAdd::Admitted;
  if (live_ >= capacity_) {
    int victim = -1;
    for (int s = 0; s < slot_count(); ++s) {
      const auto& e = slots_[static_cast<std::size_t>(s)];
      if (!e) continue;
      if (victim < 0) {
        victim = s;
        continue;
      }
      const auto& v = *slots_[static_cast<std::size_t>(victim)];
      if (e->age > v.age || (e->age == v.age && e->id < v.id)) victim = s;
    }
    res.status = PoolAdd::Evicted;
    res.victim = slots_[static_cast<std::size_t>(victim)]->id;
    remove_slot(victim);
    ++stats_.evicted;
  }
  res.id = insert(std::move(cc));
  ++stats_.admitted;
  return res;
}

void ConflictPool::tick(const std::vector<int>& hit_ids) {
  std::unordered_set<int> hits(hit_ids.begin(), hit_ids.end());
  for (auto& s : slots_) {
    if (!s) continue;
    if (hits.count(s->id))
      s->age = 0;
    else
      ++s->age;
  }
}

void ConflictPool::dump(std::ostream& os, const Problem* names) const {
  for (const ConflictConstraint* cc : entries()) {
    os << "c" << cc->id << ' ' << (cc->origin == ConflictOrigin::Dive ? "dive" : "node");
    if (!cc->source.empty()) os << ':' << cc->source;
    os << " depth=" << cc->depth << " age=" << cc->age;
    if (cc->cutoff_bound) os << " obj<=" << *cc->cutoff_bound;
    os << ':';
    for (std::size_t k = 0; k < cc->row.size(); ++k) {
      const int j = cc->row.index[k];
      os << ' ' << cc->row.value[k] << ' ';
      if (names)
        os << names->var_name(j);
      else
        os << 'x' << j;
    }
    os << " >= " << cc->rhs << '\n';
  }
}

AnalysisResult analyze_infeasibility(const Problem& p, ConflictPool& pool, const LocalBounds& bounds,
                                     const InfeasibilityCause& cause, const ConflictSite& site) {
  AnalysisResult out;
  const FarkasRay* ray = std::get_if<FarkasRay>(&cause);
  if (!ray) return out;
  ProofResult pr = build_farkas_proof(p, bounds, *ray, site.cutoff_row);
  out.check = pr.check;
  out.empty_support = pr.empty_support;
  if (!pr.proof) return out;
  pr.proof->origin = site.origin;
  pr.proof->source = site.source;
  pr.proof->depth = site.depth;
  out.added = pool.add(std::move(*pr.proof));
  if (out.added.status != PoolAdd::Rejected) out.created = *pool.find(out.added.id);
  return out;
}

}  // namespace cdive
