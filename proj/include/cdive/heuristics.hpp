// SPDX-License-Identifier: Apache-2.0
//
// Rounding and scoring rules of the diving heuristics. Every function is
// pure in the dive context; a higher score is selected first.

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdive/locks.hpp"
#include "cdive/problem.hpp"

namespace cdive {

enum class RoundDir { Down, Up };

struct DiveContext {
  std::span<const double> c;
  std::span<const double> x;
  const LocalBounds* bounds = nullptr;
  const LockTable* vlocks = nullptr;
  const WeightedLocks* wlocks = nullptr;

  double phi(int j) const { return fractionality(x[static_cast<std::size_t>(j)]); }
};

/// Distance to the rounding target: 1 - phi when rounding up, phi when down.
double relative_fractionality(double phi, RoundDir dir);

/// ceil(x_j) - lb'_j for c_j < 0, ub'_j - floor(x_j) for c_j > 0. Empty when
/// c_j = 0 or the referenced bound is infinite.
std::optional<double> dual_impact(int j, std::span<const double> c, std::span<const double> x,
                                  const LocalBounds& bounds);

inline constexpr double kZeroObjectiveScale = 1e-6;

RoundDir farkas_round(int j, const DiveContext& ctx);
double farkas_score(int j, const DiveContext& ctx);

RoundDir coef_round(int j, const DiveContext& ctx);
double coef_score(int j, const DiveContext& ctx);

RoundDir conflict_round(int j, const DiveContext& ctx);
double conflict_score(int j, const DiveContext& ctx);

struct HeuristicSpec {
  std::string name;
  std::function<RoundDir(int, const DiveContext&)> round;
  std::function<double(int, const DiveContext&)> score;
  /// Conflict diving reads weighted locks; the others ignore them.
  bool uses_conflict_locks = false;
};

HeuristicSpec farkas_spec();
HeuristicSpec coef_spec();
HeuristicSpec conflict_spec();

/// "farkas", "coef" or "conflict"; throws std::invalid_argument otherwise.
HeuristicSpec heuristic_by_name(const std::string& name);

const std::vector<std::string>& heuristic_names();

}  // namespace cdive
