#include "doctest.h"
#include "rbdsat/dimacs.hpp"
#include "rbdsat/generators.hpp"

using namespace rbdsat;

TEST_CASE("parse simple formula") {
  auto r = parse_dimacs("p cnf 2 1\n1 -2 0");
  REQUIRE(r.formula.clause_count() == 1);
  CHECK(r.formula.clauses()[0].id == 1);
  CHECK(r.formula.clauses()[0].literals ==
        std::vector<Literal>{{1, Polarity::Positive}, {2, Polarity::Negative}});
  CHECK(r.warnings.empty());
}

TEST_CASE("tautologies are rejected unless sanitizing") {
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n1 -1 0"), DimacsError);
  auto r = parse_dimacs("p cnf 2 2\n1 -1 0\n2 0", DimacsOptions{true});
  CHECK(r.formula.clause_count() == 1);
  CHECK(r.formula.clauses()[0].id == 1);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("empty clause and dropped variables") {
  auto r = parse_dimacs("p cnf 3 2\n1 2 0\n0");
  CHECK(r.formula.clause_count() == 2);
  CHECK(r.formula.has_empty_clause());
  CHECK(r.formula.variables() == std::vector<Var>{1, 2});
  CHECK(r.dropped_variables == std::vector<Var>{3});
}

TEST_CASE("comments, multi-line clauses and duplicate literals") {
  auto r = parse_dimacs("c hello\np cnf 3 2\n1 2\n 3 0\nc mid\n-1 -1 0\n");
  REQUIRE(r.formula.clause_count() == 2);
  CHECK(r.formula.clauses()[0].width() == 3);
  CHECK(r.formula.clauses()[1].width() == 1);
}

TEST_CASE("duplicate clauses collapse") {
  auto r = parse_dimacs("p cnf 2 3\n1 2 0\n2 1 0\n-1 0");
  REQUIRE(r.formula.clause_count() == 2);
  CHECK(r.formula.clause_ids() == std::vector<ClauseId>{1, 2});
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse_dimacs("p cnf 2 1\n1 x 0");
    FAIL("expected an error");
  } catch (const DimacsError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_dimacs("1 2 0"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 2"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\np cnf 2 1\n1 0"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs("p dnf 2 1\n1 0"), DimacsError);
  CHECK_THROWS_AS(parse_dimacs(""), DimacsError);
}

TEST_CASE("serialize examples") {
  CHECK(serialize_dimacs(Formula::from_dimacs_clauses({{1}})) == "p cnf 1 1\n1 0");
  CHECK(serialize_dimacs(Formula()) == "p cnf 0 0");
  CHECK(serialize_dimacs(Formula::from_dimacs_clauses({{-3, 1}, {}})) == "p cnf 3 2\n1 -3 0\n0");
}

TEST_CASE("parse of serialize is the identity on random formulas") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto f = gen_random(7, 9, 3, seed);
    auto back = parse_dimacs(serialize_dimacs(f)).formula;
    CHECK(back == f);
  }
}
