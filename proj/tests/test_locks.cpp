// SPDX-License-Identifier: Apache-2.0

#include "cdive/locks.hpp"

#include <random>

#include "cdive/conflict.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cdive;

TEST_SUITE("locks") {
  TEST_CASE("signs per column give the lock counts") {
    const Problem p = make_problem({0, 0}, {{1, -2}, {3, 0}, {0, -1}}, {0, 0, 0}, {0, 0}, {1, 1}, {});
    const LockTable t = compute_locks(p);
    CHECK(t.down == std::vector<int>{2, 0});
    CHECK(t.up == std::vector<int>{0, 2});
  }

  TEST_CASE("empty row set has no locks") {
    const LockTable t = compute_locks(3, {});
    CHECK(t == LockTable::zeros(3));
  }

  TEST_CASE("E4 row locks both variables upward") {
    const LockTable t = compute_locks(fixture::e4());
    CHECK(t.down == std::vector<int>{0, 0});
    CHECK(t.up == std::vector<int>{1, 1});
  }

  TEST_CASE("weighted locks mix conflict and variable locks") {
    LockTable var = LockTable::zeros(1);
    LockTable conf = LockTable::zeros(1);
    var.up[0] = 2;
    var.down[0] = 1;
    conf.up[0] = 4;
    conf.down[0] = 0;
    const WeightedLocks w = weighted_locks(var, conf, 0.75);
    CHECK(w.up[0] == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(w.down[0] == doctest::Approx(0.25).epsilon(1e-12));

    const WeightedLocks w0 = weighted_locks(var, conf, 0.0);
    CHECK(w0.up[0] == 2.0);
    CHECK(w0.down[0] == 1.0);
    const WeightedLocks w1 = weighted_locks(var, conf, 1.0);
    CHECK(w1.up[0] == 4.0);
    CHECK(w1.down[0] == 0.0);

    CHECK_THROWS_AS(weighted_locks(var, conf, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(weighted_locks(var, conf, -0.1), std::invalid_argument);
  }

  TEST_CASE("pool locks follow admissions and evictions") {
    ConflictPool pool(2, 1);
    ConflictConstraint a;
    a.row.push(0, 1);
    a.row.push(1, -1);
    a.rhs = 1;
    pool.add(a);
    CHECK(pool.locks() == compute_locks(pool, 2));
    CHECK(pool.locks().down == std::vector<int>{1, 0});
    CHECK(pool.locks().up == std::vector<int>{0, 1});

    ConflictConstraint b;
    b.row.push(1, 2);
    b.rhs = 1;
    pool.add(b);
    CHECK(pool.size() == 1);
    CHECK(pool.locks() == compute_locks(pool, 2));
    CHECK(pool.locks().down == std::vector<int>{0, 1});
  }

  // Moving an unlocked variable to its bound cannot violate a satisfied row.
  TEST_CASE("lock soundness on random satisfied systems") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> coef(-3, 3);
    std::uniform_int_distribution<int> val(0, 4);
    std::uniform_int_distribution<int> slack(0, 2);
    int moves = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 2 + trial % 5;
      const int m = 1 + trial % 4;
      std::vector<double> x(static_cast<std::size_t>(n));
      for (auto& v : x) v = val(rng);
      std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(static_cast<std::size_t>(n)));
      std::vector<double> rhs(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) {
        double act = 0.0;
        for (int j = 0; j < n; ++j) {
          const double a = coef(rng);
          rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a;
          act += a * x[static_cast<std::size_t>(j)];
        }
        rhs[static_cast<std::size_t>(i)] = act - slack(rng);
      }
      const Problem p = make_problem(std::vector<double>(static_cast<std::size_t>(n)), rows, rhs,
                                     std::vector<double>(static_cast<std::size_t>(n), 0.0),
                                     std::vector<double>(static_cast<std::size_t>(n), 4.0), {});
      const LockTable t = compute_locks(p);
      const auto dense = oracle::dense_rows(p);
      for (int j = 0; j < n; ++j) {
        for (const bool down : {true, false}) {
          if ((down ? t.down : t.up)[static_cast<std::size_t>(j)] != 0) continue;
          std::vector<double> y = x;
          y[static_cast<std::size_t>(j)] = down ? 0.0 : 4.0;
          ++moves;
          CHECK(oracle::satisfies(dense, rhs, LocalBounds::of(p), y, 1e-9));
        }
      }
    }
    CHECK(moves > 0);
  }
}
