// SPDX-License-Identifier: Apache-2.0
//
// Reference answers computed without the solver: vertex enumeration for
// small LPs and exhaustive enumeration for small pure-integer programs.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "cdive/problem.hpp"

namespace oracle {

using cdive::LocalBounds;
using cdive::Problem;

inline std::vector<std::vector<double>> dense_rows(const Problem& p) {
  std::vector<std::vector<double>> a(static_cast<std::size_t>(p.m()),
                                     std::vector<double>(static_cast<std::size_t>(p.n()), 0.0));
  for (int i = 0; i < p.m(); ++i)
    for (int j = 0; j < p.n(); ++j) a[i][j] = p.matrix().coeff(i, j);
  return a;
}

// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                       std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    if (std::abs(a[piv][k]) < 1e-10) return std::nullopt;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t c = k; c < n; ++c) a[i][c] -= f * a[k][c];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double v = b[k];
    for (std::size_t c = k + 1; c < n; ++c) v -= a[k][c] * x[c];
    x[k] = v / a[k][k];
  }
  return x;
}

inline bool satisfies(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                      const LocalBounds& bounds, const std::vector<double>& x, double tol) {
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] < bounds.lower[j] - tol || x[j] > bounds.upper[j] + tol) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double act = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) act += a[i][j] * x[j];
    if (act < b[i] - tol) return false;
  }
  return true;
}

/// Optimal LP value over a box with finite bounds by trying every choice
/// of n tight constraints; nullopt when the polytope is empty.
inline std::optional<double> lp_vertex_optimum(const Problem& p, const LocalBounds& bounds) {
  const auto a = dense_rows(p);
  const std::size_t n = static_cast<std::size_t>(p.n());
  std::vector<std::vector<double>> rows = a;
  std::vector<double> rhs(p.rhs().begin(), p.rhs().end());
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    rows.push_back(e);
    rhs.push_back(bounds.lower[j]);
    rows.push_back(e);
    rhs.push_back(bounds.upper[j]);
  }
  std::optional<double> best;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() == n) {
      std::vector<std::vector<double>> sub;
      std::vector<double> sb;
      for (std::size_t k : pick) {
        sub.push_back(rows[k]);
        sb.push_back(rhs[k]);
      }
      auto x = solve_square(sub, sb);
      if (!x || !satisfies(a, std::vector<double>(p.rhs().begin(), p.rhs().end()), bounds, *x, 1e-9))
        return;
      const double v = p.evaluate(*x);
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t k = start; k < rows.size(); ++k) {
      pick.push_back(k);
      rec(k + 1);
      pick.pop_back();
    }
  };
  if (n == 0) {
    std::vector<double> x;
    if (satisfies(a, std::vector<double>(p.rhs().begin(), p.rhs().end()), bounds, x, 1e-9)) return 0.0;
    return std::nullopt;
  }
  rec(0);
  return best;
}

/// Calls f on every integer point of the (finite) box that satisfies all
/// rows exactly up to 1e-9. Every variable is treated as integer.
inline void for_each_integer_point(const Problem& p, const LocalBounds& bounds,
                                   const std::function<void(const std::vector<double>&)>& f) {
  const auto a = dense_rows(p);
  const std::vector<double> b(p.rhs().begin(), p.rhs().end());
  const std::size_t n = static_cast<std::size_t>(p.n());
  std::vector<double> x(n);
  std::function<void(std::size_t)> rec = [&](std::size_t j) {
    if (j == n) {
      if (satisfies(a, b, bounds, x, 1e-9)) f(x);
      return;
    }
    for (double v = std::ceil(bounds.lower[j]); v <= bounds.upper[j]; v += 1.0) {
      x[j] = v;
      rec(j + 1);
    }
  };
  rec(0);
}

inline std::optional<double> integer_optimum(const Problem& p) {
  std::optional<double> best;
  for_each_integer_point(p, LocalBounds::of(p), [&](const std::vector<double>& x) {
    const double v = p.evaluate(x);
    if (!best || v < *best) best = v;
  });
  return best;
}

}  // namespace oracle
