// SPDX-License-Identifier: Apache-2.0

#include "cdive/heuristics.hpp"

#include "doctest.h"

using namespace cdive;

namespace {

// One-variable context with the given data; locks default to zero.
struct Ctx {
  std::vector<double> c;
  std::vector<double> x;
  LocalBounds bounds;
  LockTable vlocks = LockTable::zeros(1);
  WeightedLocks wlocks{kDefaultKappa, {0.0}, {0.0}};

  Ctx(double cj, double xj, double lb = 0, double ub = 10) : c{cj}, x{xj} {
    bounds.lower = {lb};
    bounds.upper = {ub};
  }
  DiveContext ctx() const { return {c, x, &bounds, &vlocks, &wlocks}; }
};

constexpr double kTol = 1e-12;

}  // namespace

TEST_SUITE("heuristics") {
  TEST_CASE("dual impact") {
    CHECK(*dual_impact(0, std::vector<double>{2}, std::vector<double>{3.4}, Ctx(2, 3.4, 0, 7).bounds) == 4.0);
    CHECK(*dual_impact(0, std::vector<double>{-1}, std::vector<double>{3.4}, Ctx(-1, 3.4, 0, 7).bounds) == 4.0);
    CHECK(*dual_impact(0, std::vector<double>{-1}, std::vector<double>{1.0}, Ctx(-1, 1.0, 1, 7).bounds) == 0.0);
    CHECK_FALSE(dual_impact(0, std::vector<double>{0}, std::vector<double>{1.5}, Ctx(0, 1.5).bounds).has_value());
    CHECK_FALSE(
        dual_impact(0, std::vector<double>{1}, std::vector<double>{1.5}, Ctx(1, 1.5, 0, kInf).bounds).has_value());
  }

  TEST_CASE("farkas rounding follows the objective sign") {
    CHECK(farkas_round(0, Ctx(-1, 0.3).ctx()) == RoundDir::Up);
    CHECK(farkas_round(0, Ctx(0, 0.5).ctx()) == RoundDir::Up);
    CHECK(farkas_round(0, Ctx(0, 0.49).ctx()) == RoundDir::Down);
    CHECK(farkas_round(0, Ctx(3, 0.9).ctx()) == RoundDir::Down);
  }

  TEST_CASE("farkas score") {
    // c = 2 rounds down; Delta = 7 - floor(3.6) = 4; phi' = 0.6.
    CHECK(farkas_score(0, Ctx(2, 3.6, 0, 7).ctx()) == doctest::Approx(4.8).epsilon(kTol));
    // E4 at (0.75, 0.75): Delta = ceil(0.75) - 0 = 1, phi' = 0.25.
    CHECK(farkas_score(0, Ctx(-1, 0.75, 0, 1).ctx()) == doctest::Approx(0.25).epsilon(kTol));
    // c = 0: phi = 0.3 rounds down, phi' = 0.3.
    CHECK(std::abs(farkas_score(0, Ctx(0, 0.3).ctx()) - 3e-7) <= kTol);
    // Infinite bound: Delta counts as 1.
    CHECK(farkas_score(0, Ctx(2, 3.6, 0, kInf).ctx()) == doctest::Approx(1.2).epsilon(kTol));
  }

  TEST_CASE("coef rounding takes the direction with fewer locks") {
    Ctx a(0, 0.7);
    a.vlocks.down = {2};
    a.vlocks.up = {0};
    CHECK(coef_round(0, a.ctx()) == RoundDir::Up);
    CHECK(coef_score(0, a.ctx()) == 0.0);

    Ctx b(0, 0.2);
    b.vlocks.down = {3};
    b.vlocks.up = {3};
    CHECK(coef_round(0, b.ctx()) == RoundDir::Down);
    CHECK(coef_score(0, b.ctx()) == 3.0);

    CHECK(coef_round(0, Ctx(0, 0.6).ctx()) == RoundDir::Up);
    CHECK(coef_round(0, Ctx(0, 0.4).ctx()) == RoundDir::Down);
    CHECK(coef_score(0, Ctx(0, 0.6).ctx()) == 0.0);
  }

  TEST_CASE("conflict rounding takes the direction with more weighted locks") {
    Ctx a(0, 0.5);
    a.wlocks.up = {3.5};
    a.wlocks.down = {1.0};
    CHECK(conflict_round(0, a.ctx()) == RoundDir::Up);
    CHECK(conflict_score(0, a.ctx()) == 3.5);

    Ctx b(0, 0.4);
    b.wlocks.up = {2.0};
    b.wlocks.down = {2.0};
    CHECK(conflict_round(0, b.ctx()) == RoundDir::Down);

    Ctx d(0, 0.5);
    d.wlocks.up = {0.0};
    d.wlocks.down = {0.0};
    d.x = {0.2};
    CHECK(conflict_round(0, d.ctx()) == RoundDir::Down);
    CHECK(conflict_score(0, d.ctx()) == 0.0);
  }

  TEST_CASE("with kappa 0 conflict rounding reverses coef rounding") {
    for (int down = 0; down < 4; ++down)
      for (int up = 0; up < 4; ++up) {
        if (up == down) continue;
        Ctx c(0, 0.3);
        c.vlocks.down = {down};
        c.vlocks.up = {up};
        c.wlocks = weighted_locks(c.vlocks, LockTable::zeros(1), 0.0);
        const RoundDir coef = coef_round(0, c.ctx());
        const RoundDir conf = conflict_round(0, c.ctx());
        CHECK(coef != conf);
      }
  }

  TEST_CASE("the larger conflict score is picked first") {
    std::vector<double> c{0, 0};
    std::vector<double> x{0.5, 0.5};
    LocalBounds b;
    b.lower = {0, 0};
    b.upper = {1, 1};
    LockTable v = LockTable::zeros(2);
    WeightedLocks w{kDefaultKappa, {0, 0}, {5, 2}};
    const DiveContext ctx{c, x, &b, &v, &w};
    CHECK(conflict_round(0, ctx) == RoundDir::Up);
    CHECK(conflict_round(1, ctx) == RoundDir::Up);
    CHECK(conflict_score(0, ctx) > conflict_score(1, ctx));
  }

  TEST_CASE("lookup by name") {
    CHECK(heuristic_by_name("farkas").name == "farkas");
    CHECK(heuristic_by_name("conflict").uses_conflict_locks);
    CHECK_FALSE(heuristic_by_name("coef").uses_conflict_locks);
    CHECK_THROWS_AS(heuristic_by_name("guided"), std::invalid_argument);
    CHECK(heuristic_names().size() == 3);
  }
}
