// SPDX-License-Identifier: Apache-2.0
//
// Random instance families for tests and desk-scale experiments.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cdive/problem.hpp"

namespace cdive {

struct BinaryMipOptions {
  int n = 40;
  int m = 20;
  /// Probability that a coefficient is nonzero.
  double density = 0.3;
  /// Coefficients are drawn from [-coef_max, coef_max] without zero.
  int coef_max = 9;
  /// Objective coefficients from [-obj_max, obj_max]; 0 gives c = 0.
  int obj_max = 10;
  /// Row slack at the planted point is drawn from [0, slack_max].
  int slack_max = 3;
  /// Plant a feasible binary point so that the instance is feasible.
  bool planted = true;
};

/// Pure binary MIP with integer data in >= form.
Problem random_binary_mip(const BinaryMipOptions& opts, std::mt19937_64& rng,
                          const std::string& name = "binary");

struct InfeasibleLpOptions {
  int max_n = 10;
  int max_m = 10;
  int coef_max = 5;
  /// Probability that a variable bound is infinite.
  double infinite_bound = 0.2;
};

/// LP that is infeasible by construction: either some rows add up (with
/// nonnegative multipliers) to 0 >= positive, or one row cannot be met
/// within the variable bounds.
Problem random_infeasible_lp(const InfeasibleLpOptions& opts, std::mt19937_64& rng);

/// Instance suite for the diving experiments: 30..80 binaries, mixed-sign
/// rows, nonzero objective.
std::vector<Problem> experiment_suite(int count, std::uint64_t seed);

/// Writes every problem as <dir>/<name>.mps; returns the paths.
std::vector<std::string> write_suite(const std::vector<Problem>& suite, const std::string& dir);

}  // namespace cdive
