// SPDX-License-Identifier: Apache-2.0
//
// Bounded-variable revised simplex for the LP relaxation
//
//   min c^T x  s.t.  A x >= b,  lb' <= x <= ub'
//
// Internally every row gets a logical variable r_i = a_i x with
// r_i in [b_i, inf), so the basis has one column per row.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdive/problem.hpp"

namespace cdive {

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

/// Status of the n structural variables followed by the m logicals.
struct Basis {
  std::vector<VarStatus> status;
  bool empty() const { return status.empty(); }
};

/// Dual ray (y >= 0, s) with y^T A + s = 0 and y^T b + s{lb', ub'} > 0.
struct FarkasRay {
  std::vector<double> y;
  std::vector<double> s;
};

/// s{l, u} = sum_{s_j > 0} s_j l_j + sum_{s_j < 0} s_j u_j, with 0 * inf = 0.
double bound_activity(std::span<const double> s, const LocalBounds& bounds);

struct FarkasCheck {
  bool ok = false;
  /// ||y^T A + s||_inf
  double equality_residual = 0.0;
  /// y^T b + s{lb', ub'}
  double proof_value = 0.0;
  std::string reason;
};

FarkasCheck verify_farkas_ray(const Problem& p, const LocalBounds& bounds,
                              const FarkasRay& ray, double tol = 1e-6);

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit, Numerical };

const char* to_string(LpStatus s);

struct LpOptions {
  double feas_tol = 1e-6;
  double dual_tol = 1e-6;
  double farkas_tol = 1e-6;
  double pivot_tol = 1e-9;
  int iter_limit = 100000;
  int refactor_interval = 100;
  /// Start with Bland's rule instead of engaging it after stalling.
  bool bland = false;
};

struct LpResult {
  LpStatus status = LpStatus::Numerical;
  /// Optimal: primal solution and c^T x.
  std::vector<double> x;
  double objective = 0.0;
  /// Optimal: row duals (>= 0) and reduced costs c - A^T y.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  Basis basis;
  /// Infeasible: verified ray.
  std::optional<FarkasRay> ray;
  /// Unbounded: improving direction on the structurals.
  std::vector<double> direction;
  int iterations = 0;
};

/// `warm` is used as the starting basis when its shape fits; a basis of a
/// problem with fewer rows is extended by basic logicals for the new rows.
LpResult solve_lp(const Problem& p, const LocalBounds& bounds,
                  const Basis* warm = nullptr, const LpOptions& opts = {});

}  // namespace cdive
