// SPDX-License-Identifier: Apache-2.0

#include "cdive/conflict.hpp"

#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"

using namespace cdive;

namespace {

ConflictConstraint row_of(std::initializer_list<std::pair<int, double>> entries, double rhs) {
  ConflictConstraint cc;
  for (auto [i, a] : entries) cc.row.push(i, a);
  cc.rhs = rhs;
  return cc;
}

}  // namespace

TEST_SUITE("conflict") {
  TEST_CASE("E1 proof has empty support") {
    const Problem p = fixture::e1();
    const ProofResult r = build_farkas_proof(p, LocalBounds::of(p), {{1, 1}, {0, 0}});
    CHECK(r.check.ok);
    CHECK(r.empty_support);
    CHECK_FALSE(r.proof.has_value());

    const ProofResult scaled = build_farkas_proof(p, LocalBounds::of(p), {{3, 3}, {0, 0}});
    CHECK(scaled.empty_support);
    CHECK(scaled.check.proof_value == doctest::Approx(3.0));
  }

  TEST_CASE("proof with a bound multiplier") {
    // x1 + x2 >= 2, -x1 >= 0, local x2 <= 1.
    const Problem p = make_problem({0, 0}, {{1, 1}, {-1, 0}}, {2, 0}, {0, 0}, {10, 10}, {});
    LocalBounds local = LocalBounds::of(p);
    local.upper[1] = 1;
    const ProofResult r = build_farkas_proof(p, local, {{1, 1}, {0, -1}});
    REQUIRE(r.check.ok);
    REQUIRE(r.proof.has_value());
    const ConflictConstraint& cc = *r.proof;
    REQUIRE(cc.row.size() == 1);
    CHECK(cc.row.index[0] == 1);
    CHECK(cc.row.value[0] == doctest::Approx(1.0));
    CHECK(cc.rhs == doctest::Approx(2.0));
    CHECK(max_activity(cc.row.view(), local) < cc.rhs);
    CHECK(lock_sign_violation(p, cc) == -1);
  }

  TEST_CASE("pool admission, dedup and eviction") {
    ConflictPool pool(2, 2);
    const PoolAddResult a = pool.add(row_of({{0, 1}}, 1));
    CHECK(a.status == PoolAdd::Admitted);
    CHECK(pool.add(row_of({{0, 1}}, 1)).status == PoolAdd::Rejected);
    CHECK(pool.add(row_of({{0, 2}}, 1)).status == PoolAdd::Rejected);
    const PoolAddResult stronger = pool.add(row_of({{0, 2}}, 3));
    CHECK(stronger.status == PoolAdd::Replaced);
    CHECK(stronger.victim == a.id);
    CHECK(pool.size() == 1);

    for (int t = 0; t < 5; ++t) pool.tick({});
    const PoolAddResult b = pool.add(row_of({{1, 1}}, 1));
    CHECK(b.status == PoolAdd::Admitted);
    REQUIRE(pool.find(stronger.id) != nullptr);
    CHECK(pool.find(stronger.id)->age == 5);
    CHECK(pool.find(b.id)->age == 0);

    const PoolAddResult c = pool.add(row_of({{0, 1}, {1, 1}}, 1));
    CHECK(c.status == PoolAdd::Evicted);
    CHECK(c.victim == stronger.id);
    CHECK(pool.find(stronger.id) == nullptr);
    CHECK(pool.size() == 2);
    CHECK(pool.stats().evicted == 1);
  }

  TEST_CASE("ticking resets hit entries") {
    ConflictPool pool(1);
    const int id = pool.add(row_of({{0, 1}}, 1)).id;
    pool.tick({});
    pool.tick({});
    CHECK(pool.find(id)->age == 2);
    pool.tick({id});
    CHECK(pool.find(id)->age == 0);
  }

  TEST_CASE("analysis of a violated model row creates nothing") {
    const Problem p = fixture::e4();
    ConflictPool pool(2);
    LocalBounds b = LocalBounds::of(p);
    b.lower = {1, 1};
    const AnalysisResult r = analyze_infeasibility(p, pool, b, ViolatedRow{false, 0}, {});
    CHECK_FALSE(r.created.has_value());
    CHECK(pool.size() == 0);
  }

  TEST_CASE("analysis of E1 prunes without pooling") {
    const Problem p = fixture::e1();
    ConflictPool pool(2);
    const AnalysisResult r = analyze_infeasibility(p, pool, LocalBounds::of(p), FarkasRay{{1, 1}, {0, 0}}, {});
    CHECK(r.check.ok);
    CHECK(r.empty_support);
    CHECK(pool.size() == 0);
  }

  TEST_CASE("analysis of an LP-infeasible dive node admits the proof") {
    const Problem p = make_problem({0, 0}, {{1, 1}, {-1, 0}}, {2, 0}, {0, 0}, {10, 10}, {0, 1});
    LocalBounds b = LocalBounds::of(p);
    b.upper[1] = 1;
    const LpResult lp = solve_lp(p, b);
    REQUIRE(lp.status == LpStatus::Infeasible);
    ConflictPool pool(2);
    ConflictSite site;
    site.origin = ConflictOrigin::Dive;
    site.source = "farkas";
    site.depth = 3;
    const AnalysisResult r = analyze_infeasibility(p, pool, b, *lp.ray, site);
    REQUIRE(r.created.has_value());
    CHECK(r.added.status == PoolAdd::Admitted);
    CHECK(r.created->origin == ConflictOrigin::Dive);
    CHECK(r.created->source == "farkas");
    CHECK(r.created->depth == 3);
    CHECK(pool.size() == 1);
    std::ostringstream os;
    pool.dump(os, &p);
    CHECK(os.str().find("dive:farkas") != std::string::npos);
  }

  TEST_CASE("conflict lock signs follow variable lock signs") {
    const Problem p = fixture::e4();  // only negative entries
    CHECK(lock_sign_violation(p, row_of({{0, -1}}, -1)) == -1);
    CHECK(lock_sign_violation(p, row_of({{1, 1}}, 1)) == 1);
  }
}
