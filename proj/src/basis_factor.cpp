// SPDX-License-Identifier: Apache-2.0

#include "cdive/basis_factor.hpp"

#include <cassert>
#include <cmath>

namespace cdive {

std::vector<int> BasisFactor::factor(const std::vector<std::vector<double>>& columns,
                                     double singular_tol) {
  m_ = static_cast<int>(columns.size());
  const std::size_t m = static_cast<std::size_t>(m_);
  u_.assign(m * m, 0.0);
  lower_.assign(m * m, 0.0);
  pivot_row_.assign(m, -1);
  step_rows_.assign(m, {});
  uncovered_.clear();
  etas_.clear();
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i) u_[i * m + k] = columns[k][i];

  std::vector<bool> used(m, false);
  std::vector<int> dependent;
  for (std::size_t k = 0; k < m; ++k) {
    int best = -1;
    double best_abs = singular_tol;
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double a = std::abs(u_[i * m + k]);
      if (a > best_abs) {
        best_abs = a;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) {
      dependent.push_back(static_cast<int>(k));
      continue;
    }
    const std::size_t p = static_cast<std::size_t>(best);
    used[p] = true;
    pivot_row_[k] = best;
    const double piv = u_[p * m + k];
    for (std::size_t i = 0; i < m; ++i) {
      if (used[i]) continue;
      const double v = u_[i * m + k];
      if (v == 0.0) continue;
      const double l = v / piv;
      lower_[i * m + k] = l;
      step_rows_[k].push_back(static_cast<int>(i));
      u_[i * m + k] = 0.0;
      for (std::size_t c = k + 1; c < m; ++c) u_[i * m + c] -= l * u_[p * m + c];
    }
  }
  for (std::size_t i = 0; i < m; ++i)
    if (!used[i]) uncovered_.push_back(static_cast<int>(i));
  return dependent;
}

void BasisFactor::ftran(std::span<double> x) const {
  const std::size_t m = static_cast<std::size_t>(m_);
  assert(x.size() == m);
  // L solve in elimination order.
  for (std::size_t k = 0; k < m; ++k) {
    const double xp = x[static_cast<std::size_t>(pivot_row_[k])];
    if (xp == 0.0) continue;
    for (int i : step_rows_[k]) x[static_cast<std::size_t>(i)] -= lower_[static_cast<std::size_t>(i) * m + k] * xp;
  }
  // U solve; the result is indexed by basis position.
  std::vector<double> z(m, 0.0);
  for (std::size_t kk = m; kk-- > 0;) {
    const std::size_t p = static_cast<std::size_t>(pivot_row_[kk]);
    double v = x[p];
    for (std::size_t c = kk + 1; c < m; ++c) v -= u_[p * m + c] * z[c];
    z[kk] = v / u_[p * m + kk];
  }
  for (std::size_t k = 0; k < m; ++k) x[k] = z[k];
  for (const Eta& e : etas_) {
    const std::size_t p = static_cast<std::size_t>(e.pos);
    const double xp = x[p] / e.d[p];
    if (xp == 0.0) {
      x[p] = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < m; ++i) x[i] -= e.d[i] * xp;
    x[p] = xp;
  }
}

void BasisFactor::btran(std::span<double> y) const {
  const std::size_t m = static_cast<std::size_t>(m_);
  assert(y.size() == m);
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    const std::size_t p = static_cast<std::size_t>(it->pos);
    double s = y[p];
    for (std::size_t i = 0; i < m; ++i)
      if (i != p) s -= y[i] * it->d[i];
    y[p] = s / it->d[p];
  }
  // U^T solve: w_k for k ascending.
  std::vector<double> w(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    double v = y[k];
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t pc = static_cast<std::size_t>(pivot_row_[c]);
      v -= u_[pc * m + k] * w[c];
    }
    w[k] = v / u_[static_cast<std::size_t>(pivot_row_[k]) * m + k];
  }
  std::vector<double> v(m, 0.0);
  for (std::size_t k = 0; k < m; ++k) v[static_cast<std::size_t>(pivot_row_[k])] = w[k];
  // Transposed eliminations, last step first.
  for (std::size_t kk = m; kk-- > 0;) {
    const std::size_t p = static_cast<std::size_t>(pivot_row_[kk]);
    double s = 0.0;
    for (int i : step_rows_[kk]) s += lower_[static_cast<std::size_t>(i) * m + kk] * v[static_cast<std::size_t>(i)];
    v[p] -= s;
  }
  for (std::size_t i = 0; i < m; ++i) y[i] = v[i];
}

void BasisFactor::update(int p, std::span<const double> d) {
  etas_.push_back({p, std::vector<double>(d.begin(), d.end())});
}

}  // namespace cdive
