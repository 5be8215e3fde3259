// SPDX-License-Identifier: Apache-2.0

#include "cdive/heuristics.hpp"

#include <cmath>
#include <stdexcept>

namespace cdive {

double relative_fractionality(double phi, RoundDir dir) {
  return dir == RoundDir::Up ? 1.0 - phi : phi;
}

std::optional<double> dual_impact(int j, std::span<const double> c, std::span<const double> x,
                                  const LocalBounds& bounds) {
  const auto jj = static_cast<std::size_t>(j);
  if (c[jj] < 0.0) {
    if (!std::isfinite(bounds.lower[jj])) return std::nullopt;
    return std::ceil(x[jj]) - bounds.lower[jj];
  }
  if (c[jj] > 0.0) {
    if (!std::isfinite(bounds.upper[jj])) return std::nullopt;
    return bounds.upper[jj] - std::floor(x[jj]);
  }
  return std::nullopt;
}

RoundDir farkas_round(int j, const DiveContext& ctx) {
  const double cj = ctx.c[static_cast<std::size_t>(j)];
  if (cj < 0.0) return RoundDir::Up;
  if (cj > 0.0) return RoundDir::Down;
  return ctx.phi(j) >= 0.5 ? RoundDir::Up : RoundDir::Down;
}

double farkas_score(int j, const DiveContext& ctx) {
  const double cj = ctx.c[static_cast<std::size_t>(j)];
  const double rel = relative_fractionality(ctx.phi(j), farkas_round(j, ctx));
  if (cj == 0.0) return kZeroObjectiveScale * rel;
  const double delta = dual_impact(j, ctx.c, ctx.x, *ctx.bounds).value_or(1.0);
  return std::abs(cj) * delta * rel;
}

RoundDir coef_round(int j, const DiveContext& ctx) {
  const auto jj = static_cast<std::size_t>(j);
  const int up = ctx.vlocks->up[jj];
  const int down = ctx.vlocks->down[jj];
  if (up < down) return RoundDir::Up;
  if (down < up) return RoundDir::Down;
  return ctx.phi(j) >= 0.5 ? RoundDir::Up : RoundDir::Down;
}

double coef_score(int j, const DiveContext& ctx) {
  const auto jj = static_cast<std::size_t>(j);
  return coef_round(j, ctx) == RoundDir::Up ? ctx.vlocks->up[jj] : ctx.vlocks->down[jj];
}

RoundDir conflict_round(int j, const DiveContext& ctx) {
  const auto jj = static_cast<std::size_t>(j);
  const double up = ctx.wlocks->up[jj];
  const double down = ctx.wlocks->down[jj];
  if (up > down) return RoundDir::Up;
  if (up < down) return RoundDir::Down;
  return ctx.phi(j) >= 0.5 ? RoundDir::Up : RoundDir::Down;
}

double conflict_score(int j, const DiveContext& ctx) {
  const auto jj = static_cast<std::size_t>(j);
  return conflict_round(j, ctx) == RoundDir::Up ? ctx.wlocks->up[jj] : ctx.wlocks->down[jj];
}

HeuristicSpec farkas_spec() { return {"farkas", farkas_round, farkas_score, false}; }
HeuristicSpec coef_spec() { return {"coef", coef_round, coef_score, false}; }
HeuristicSpec conflict_spec() { return {"conflict", conflict_round, conflict_score, true}; }

HeuristicSpec heuristic_by_name(const std::string& name) {
  if (name == "farkas") return farkas_spec();
  if (name == "coef") return coef_spec();
  if (name == "conflict") return conflict_spec();
  throw std::invalid_argument("unknown heuristic '" + name + "'");
}

const std::vector<std::string>& heuristic_names() {
  static const std::vector<std::string> names{"farkas", "coef", "conflict"};
  return names;
}

}  // namespace cdive
