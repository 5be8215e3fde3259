// SPDX-License-Identifier: Apache-2.0
//
// Small hand-checkable instances shared by the tests.

#pragma once

#include "cdive/problem.hpp"

namespace fixture {

/// min -x1 - x2, -2x1 - 2x2 >= -3, x binary.
inline cdive::Problem e4() {
  return cdive::make_problem({-1, -1}, {{-2, -2}}, {-3}, {0, 0}, {1, 1}, {0, 1});
}

/// x1 + x2 >= 2, -x1 - x2 >= -1, 0 <= x <= 10: infeasible through rows alone.
inline cdive::Problem e1(bool integer = false) {
  std::vector<int> ints;
  if (integer) ints = {0, 1};
  return cdive::make_problem({0, 0}, {{1, 1}, {-1, -1}}, {2, -1}, {0, 0}, {10, 10}, ints);
}

}  // namespace fixture
