// SPDX-License-Identifier: Apache-2.0

#include "cdive/lp.hpp"

#include <random>

#include "cdive/generator.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cdive;

namespace {

Problem random_lp(std::mt19937_64& rng, int n, int m) {
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> obj(-5, 5);
  std::uniform_int_distribution<int> box(0, 3);
  std::vector<double> c(static_cast<std::size_t>(n));
  std::vector<double> lb(c.size());
  std::vector<double> ub(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    c[j] = obj(rng);
    lb[j] = -box(rng);
    ub[j] = lb[j] + 1 + box(rng);
  }
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m), std::vector<double>(c.size()));
  std::vector<double> b(static_cast<std::size_t>(m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (double& a : rows[i]) a = coef(rng);
    b[i] = coef(rng);
  }
  return make_problem(c, rows, b, lb, ub, {});
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("E4 relaxation") {
    const Problem p = fixture::e4();
    const LpResult r = solve_lp(p, LocalBounds::of(p));
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.objective == doctest::Approx(-1.5));
    CHECK(r.x[0] + r.x[1] == doctest::Approx(1.5));
    const bool vertex = (std::abs(r.x[0] - 1) < 1e-9 && std::abs(r.x[1] - 0.5) < 1e-9) ||
                        (std::abs(r.x[0] - 0.5) < 1e-9 && std::abs(r.x[1] - 1) < 1e-9);
    CHECK(vertex);
  }

  TEST_CASE("E1 is infeasible with ray (1,1), s = 0") {
    const Problem p = fixture::e1();
    const LpResult r = solve_lp(p, LocalBounds::of(p));
    REQUIRE(r.status == LpStatus::Infeasible);
    REQUIRE(r.ray.has_value());
    CHECK(r.ray->y[0] == doctest::Approx(1.0));
    CHECK(r.ray->y[1] == doctest::Approx(1.0));
    CHECK(r.ray->s[0] == doctest::Approx(0.0));
    CHECK(r.ray->s[1] == doctest::Approx(0.0));
    const FarkasCheck chk = verify_farkas_ray(p, LocalBounds::of(p), *r.ray);
    CHECK(chk.ok);
    CHECK(chk.equality_residual == doctest::Approx(0.0));
    CHECK(chk.proof_value == doctest::Approx(1.0));
  }

  TEST_CASE("no rows: the bound-optimal point") {
    const Problem p = make_problem({1}, {}, {}, {0}, {5}, {});
    const LpResult r = solve_lp(p, LocalBounds::of(p));
    REQUIRE(r.status == LpStatus::Optimal);
    CHECK(r.x == std::vector<double>{0});
    CHECK(r.duals.empty());
    CHECK(r.reduced_costs == std::vector<double>{1});
  }

  TEST_CASE("ray verification") {
    const Problem p = fixture::e1();
    const LocalBounds b = LocalBounds::of(p);
    const FarkasCheck good = verify_farkas_ray(p, b, {{1, 1}, {0, 0}});
    CHECK(good.ok);
    CHECK(good.equality_residual == 0.0);
    CHECK(good.proof_value == 1.0);
    const FarkasCheck bad = verify_farkas_ray(p, b, {{1, 0}, {0, 0}});
    CHECK_FALSE(bad.ok);
    CHECK(bad.equality_residual == 1.0);
    for (double alpha : {1e-4, 0.5, 3.0, 1e5}) {
      CHECK(verify_farkas_ray(p, b, {{alpha, alpha}, {0, 0}}).ok);
      CHECK_FALSE(verify_farkas_ray(p, b, {{alpha, 0}, {0, 0}}).ok);
    }
    CHECK_FALSE(verify_farkas_ray(p, b, {{-1, 1}, {0, 0}}).ok);
  }

  TEST_CASE("unbounded relaxation") {
    const Problem p = make_problem({-1}, {}, {}, {0}, {kInf}, {0});
    CHECK(solve_lp(p, LocalBounds::of(p)).status == LpStatus::Unbounded);
  }

  TEST_CASE("bad input throws") {
    const Problem p = fixture::e4();
    LocalBounds b = LocalBounds::of(p);
    b.lower[0] = 2;
    CHECK_THROWS_AS(solve_lp(p, b), std::invalid_argument);
    b.lower.pop_back();
    CHECK_THROWS_AS(solve_lp(p, b), std::invalid_argument);
  }

  TEST_CASE("random LPs agree with vertex enumeration, cold and warm") {
    std::mt19937_64 rng(20260101);
    int optimal = 0;
    int infeasible = 0;
    for (int k = 0; k < 400; ++k) {
      const int n = 1 + static_cast<int>(rng() % 4);
      const int m = 1 + static_cast<int>(rng() % 4);
      const Problem p = random_lp(rng, n, m);
      LocalBounds b = LocalBounds::of(p);
      const LpResult r = solve_lp(p, b);
      const auto ref = oracle::lp_vertex_optimum(p, b);
      if (ref) {
        REQUIRE(r.status == LpStatus::Optimal);
        CHECK(r.objective == doctest::Approx(*ref).epsilon(1e-7));
        CHECK(check_feasible(p, r.x, 1e-7).feasible());
        ++optimal;
      } else {
        REQUIRE(r.status == LpStatus::Infeasible);
        REQUIRE(r.ray.has_value());
        CHECK(verify_farkas_ray(p, b, *r.ray).ok);
        ++infeasible;
        continue;
      }
      // Tighten one bound and restart from the previous basis.
      const std::size_t j = rng() % static_cast<std::size_t>(n);
      b.upper[j] = std::floor((b.lower[j] + b.upper[j]) / 2);
      const LpResult w = solve_lp(p, b, &r.basis);
      const auto wref = oracle::lp_vertex_optimum(p, b);
      if (wref) {
        REQUIRE(w.status == LpStatus::Optimal);
        CHECK(w.objective == doctest::Approx(*wref).epsilon(1e-7));
      } else {
        REQUIRE(w.status == LpStatus::Infeasible);
        CHECK(verify_farkas_ray(p, b, *w.ray).ok);
      }
    }
    CHECK(optimal > 50);
    CHECK(infeasible > 20);
  }

  TEST_CASE("generated infeasible LPs yield verified rays") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 200; ++k) {
      const Problem p = random_infeasible_lp({}, rng);
      const LocalBounds b = LocalBounds::of(p);
      const LpResult r = solve_lp(p, b);
      REQUIRE(r.status == LpStatus::Infeasible);
      REQUIRE(r.ray.has_value());
      const FarkasCheck chk = verify_farkas_ray(p, b, *r.ray);
      CHECK(chk.ok);
    }
  }
}
