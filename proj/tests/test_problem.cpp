// SPDX-License-Identifier: Apache-2.0

#include "cdive/problem.hpp"

#include "doctest.h"
#include "fixtures.hpp"

using namespace cdive;

TEST_SUITE("problem") {
  TEST_CASE("validate accepts a well-formed model and names the first violation") {
    CHECK_FALSE(validate(make_problem({1, 1}, {{1, 0}, {0, 1}}, {0, 0}, {0, 0}, {1, 1}, {})).has_value());

    ProblemData crossed;
    crossed.objective = {0};
    crossed.lower = {2};
    crossed.upper = {1};
    crossed.integer = {false};
    const auto v = validate(Problem(crossed));
    REQUIRE(v.has_value());
    CHECK(v->find("crossed bounds at j=0") != std::string::npos);

    ProblemData frac = crossed;
    frac.lower = {0.5};
    frac.upper = {3};
    frac.integer = {true};
    const auto w = validate(Problem(frac));
    REQUIRE(w.has_value());
    CHECK(w->find("non-integral bound on integer variable") != std::string::npos);
  }

  TEST_CASE("check_feasible on E4") {
    const Problem p = fixture::e4();
    CHECK(check_feasible(p, std::vector<double>{1, 0}).feasible());

    const auto row = check_feasible(p, std::vector<double>{1, 1});
    CHECK(row.kind == Violation::Row);
    CHECK(row.index == 0);

    const auto integ = check_feasible(p, std::vector<double>{0.5, 0});
    CHECK(integ.kind == Violation::Integrality);
    CHECK(integ.index == 0);

    CHECK_THROWS_AS(check_feasible(p, std::vector<double>{1}), std::invalid_argument);
  }

  TEST_CASE("pseudo solution picks the objective-best bound") {
    CHECK(pseudo_solution(make_problem({-1, -1}, {}, {}, {0, 0}, {1, 1}, {})).values == std::vector<double>{1, 1});
    CHECK(pseudo_solution(make_problem({2}, {}, {}, {-3}, {5}, {})).values == std::vector<double>{-3});
    CHECK(pseudo_solution(make_problem({0}, {}, {}, {-kInf}, {7}, {})).values == std::vector<double>{7});
    CHECK_THROWS_AS(pseudo_solution(make_problem({-1}, {}, {}, {0}, {kInf}, {})), UnboundedPseudoSolution);
  }

  TEST_CASE("row and column views agree") {
    const Problem p = make_problem({1, 2, 3}, {{1, 0, -2}, {0, 4, 0}, {5, 6, 7}}, {0, 0, 0}, {0, 0, 0},
                                   {1, 1, 1}, {});
    CHECK(p.matrix().views_agree());
    CHECK(p.matrix().coeff(0, 2) == -2);
    CHECK(p.matrix().coeff(1, 0) == 0);
    CHECK(p.col(1).size() == 2);
  }

  TEST_CASE("with_row appends without touching the original") {
    const Problem p = fixture::e4();
    SparseVector r;
    r.push(0, 1);
    r.push(1, 1);
    const Problem q = p.with_row(r, 2, "cutoff");
    CHECK(p.m() == 1);
    CHECK(q.m() == 2);
    CHECK(q.rhs()[1] == 2);
    CHECK(q.row_name(1) == "cutoff");
  }

  TEST_CASE("fractionality lies in [0,1)") {
    CHECK(fractionality(3.25) == doctest::Approx(0.25));
    CHECK(fractionality(-0.25) == doctest::Approx(0.75));
    CHECK(fractionality(2.0) == 0.0);
  }
}
