// SPDX-License-Identifier: Apache-2.0

#include "cdive/mps.hpp"

#include <random>

#include "cdive/generator.hpp"
#include "doctest.h"

using namespace cdive;

namespace {

const char* kSmall = R"(NAME          SMALL
ROWS
 N  COST
 L  LIM1
COLUMNS
    X1        COST               1.0   LIM1               1.0
    X2        COST               2.0   LIM1               1.0
RHS
    RHS       LIM1               1.0
ENDATA
)";

}  // namespace

TEST_SUITE("mps") {
  TEST_CASE("minimal file with a <= row") {
    const RawProblem raw = parse_mps(kSmall);
    CHECK(raw.name == "SMALL");
    REQUIRE(raw.rows.size() == 1);
    CHECK(raw.rows[0].sense == RowSense::Less);
    CHECK(raw.rows[0].rhs == 1.0);
    REQUIRE(raw.columns.size() == 2);
    CHECK(raw.columns[1].cost == 2.0);
    CHECK_FALSE(raw.free_format);
  }

  TEST_CASE("fixed format allows blanks inside names") {
    const RawProblem raw = parse_mps(
        "NAME          SPACED\n"
        "ROWS\n"
        " N  OBJ\n"
        " G  ROW A\n"
        "COLUMNS\n"
        "    COL 1     OBJ                1.0   ROW A              2.0\n"
        "RHS\n"
        "    RHS       ROW A              4.0\n"
        "ENDATA\n");
    CHECK_FALSE(raw.free_format);
    REQUIRE(raw.rows.size() == 1);
    CHECK(raw.rows[0].name == "ROW A");
    CHECK(raw.columns[0].name == "COL 1");
    CHECK(raw.rows[0].rhs == 4.0);
  }

  TEST_CASE("<= row is negated into >= form") {
    const Problem p = normalize(parse_mps(kSmall));
    REQUIRE(p.m() == 1);
    CHECK(p.matrix().coeff(0, 0) == -1.0);
    CHECK(p.matrix().coeff(0, 1) == -1.0);
    CHECK(p.rhs()[0] == -1.0);
  }

  TEST_CASE("MARKER INTORG flags the enclosed column") {
    const RawProblem raw = parse_mps(R"(NAME M
ROWS
 N obj
 G r
COLUMNS
 x obj 1 r 1
 MARKER 'MARKER' 'INTORG'
 y obj 1 r 1
 MARKER 'MARKER' 'INTEND'
 z obj 1 r 1
RHS
 rhs r 1
BOUNDS
 UP bnd y 4
ENDATA
)");
    REQUIRE(raw.columns.size() == 3);
    CHECK_FALSE(raw.columns[0].integer);
    CHECK(raw.columns[1].integer);
    CHECK_FALSE(raw.columns[2].integer);
    CHECK(raw.columns[1].upper == 4.0);
  }

  TEST_CASE("equality row splits in two") {
    const Problem p = normalize(parse_mps(R"(NAME E
ROWS
 N obj
 E fix
COLUMNS
 x obj 0 fix 1
RHS
 rhs fix 3
ENDATA
)"));
    REQUIRE(p.m() == 2);
    CHECK(p.matrix().coeff(0, 0) == 1.0);
    CHECK(p.rhs()[0] == 3.0);
    CHECK(p.matrix().coeff(1, 0) == -1.0);
    CHECK(p.rhs()[1] == -3.0);
  }

  TEST_CASE("RANGES keep the row ranged and normalize to two sides") {
    const char* text = R"(NAME R
ROWS
 N obj
 L cap
COLUMNS
 x obj 1 cap 1
RHS
 rhs cap 5
RANGES
 rng cap 2
ENDATA
)";
    const RawProblem raw = parse_mps(text);
    REQUIRE(raw.rows[0].range.has_value());
    CHECK(*raw.rows[0].range == 2.0);
    const Problem p = normalize(raw);
    REQUIRE(p.m() == 2);
    // 3 <= x <= 5
    double lo = 0;
    double hi = 0;
    for (int i = 0; i < 2; ++i) {
      if (p.matrix().coeff(i, 0) > 0) lo = p.rhs()[static_cast<std::size_t>(i)];
      else hi = -p.rhs()[static_cast<std::size_t>(i)];
    }
    CHECK(lo == 3.0);
    CHECK(hi == 5.0);
  }

  TEST_CASE("maximize flips the objective and sets the flag") {
    const Problem p = normalize(parse_mps(R"(NAME X
OBJSENSE
    MAX
ROWS
 N obj
 G r
COLUMNS
 x obj 3 r 1
RHS
 rhs r 0
ENDATA
)"));
    CHECK(p.negated_objective());
    CHECK(p.objective()[0] == -3.0);
    CHECK(p.user_objective(-6.0) == 6.0);
  }

  TEST_CASE("errors carry the line number") {
    try {
      parse_mps("NAME X\nROWS\n N obj\nCOLUMNS\n x nosuchrow 1\nENDATA\n");
      FAIL("expected MpsError");
    } catch (const MpsError& e) {
      CHECK(e.line() == 5);
      CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_mps("NAME X\nROWS\n N obj\nCOLUMNS\nBOUNDS\n XX b x 1\nENDATA\n"), MpsError);
    CHECK_THROWS_AS(normalize(parse_mps("NAME X\nROWS\n N obj\nCOLUMNS\n x obj 1\nBOUNDS\n LO b x 3\n UP b x 2\nENDATA\n")),
                    MpsError);
  }

  TEST_CASE("integer bounds are rounded inward") {
    const Problem p = normalize(parse_mps(R"(NAME I
ROWS
 N obj
COLUMNS
 MARKER 'MARKER' 'INTORG'
 x obj 1
 MARKER 'MARKER' 'INTEND'
BOUNDS
 LO b x 0.5
 UP b x 3.7
ENDATA
)"));
    CHECK(p.lower()[0] == 1.0);
    CHECK(p.upper()[0] == 3.0);
    CHECK_FALSE(validate(p).has_value());
  }

  TEST_CASE("write then parse reproduces the model") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
      BinaryMipOptions o;
      o.n = 12;
      o.m = 6;
      const Problem p = random_binary_mip(o, rng, "rt" + std::to_string(k));
      const Problem q = normalize(parse_mps(write_mps(p)));
      REQUIRE(q.n() == p.n());
      REQUIRE(q.m() == p.m());
      for (int j = 0; j < p.n(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        CHECK(q.objective()[jj] == p.objective()[jj]);
        CHECK(q.lower()[jj] == p.lower()[jj]);
        CHECK(q.upper()[jj] == p.upper()[jj]);
        CHECK(q.is_integer(j) == p.is_integer(j));
      }
      for (int i = 0; i < p.m(); ++i) {
        CHECK(q.rhs()[static_cast<std::size_t>(i)] == p.rhs()[static_cast<std::size_t>(i)]);
        for (int j = 0; j < p.n(); ++j) CHECK(q.matrix().coeff(i, j) == p.matrix().coeff(i, j));
      }
    }
  }
}
