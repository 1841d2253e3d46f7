#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "ltk/syntax.hpp"

using namespace ltk;

namespace {
Formula p(unsigned i) { return Formula::var(i); }
}

TEST_CASE("parse builds the expected trees") {
  CHECK(parse_formula("[T] p1 -> p1", 1) == Formula::implies(Formula::box_t(p(1)), p(1)));
  CHECK(parse_formula("<E> p1", 1) == Formula::negation(Formula::box_e(Formula::negation(p(1)))));
  Rule r = parse_rule("p1 / p2", 1);
  REQUIRE(r.premises.size() == 1);
  CHECK(r.premises[0] == p(1));
  CHECK(r.conclusion == p(2));
  Rule r2 = parse_rule("x1 ; [A2] x2 / x1 & x2", 2);
  CHECK(r2.premises.size() == 2);
  CHECK(r2.premises[1] == Formula::box_agent(2, p(2)));
  CHECK(std::holds_alternative<Formula>(parse("p1 & p2", 0)));
  CHECK(std::holds_alternative<Rule>(parse("x1 / x1", 0)));
}

TEST_CASE("implication is right associative and binds loosest") {
  CHECK(parse_formula("p1 -> p2 -> p3", 0) ==
        Formula::implies(p(1), Formula::implies(p(2), p(3))));
  CHECK(parse_formula("p1 | p2 & p3", 0) == Formula::disj(p(1), Formula::conj(p(2), p(3))));
  CHECK(parse_formula("~[T] p1 & p2", 0) ==
        Formula::conj(Formula::negation(Formula::box_t(p(1))), p(2)));
}

TEST_CASE("parse errors carry offsets") {
  CHECK_THROWS_AS(parse_formula("p1 &", 1), ParseError);
  CHECK_THROWS_AS(parse_formula("[A3] p1", 2), ParseError);
  CHECK_THROWS_AS(parse_formula("(p1", 0), ParseError);
  CHECK_THROWS_AS(parse_formula("p1 $ p2", 0), ParseError);
  try {
    parse_formula("p1 & & p2", 0);
    FAIL("expected error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 5);
  }
}

TEST_CASE("printer output") {
  CHECK(to_string(Formula::implies(Formula::box_t(p(1)), p(1))) == "[T] p1 -> p1");
  CHECK(to_string(Formula::negation(Formula::box_e(Formula::negation(p(1))))) == "<E> p1");
  CHECK(to_string(Formula::bottom()) == "F");
  CHECK(to_string(Formula::top()) == "T");
}

TEST_CASE("time degree") {
  CHECK(time_degree(p(1)) == 0);
  CHECK(time_degree(Formula::box_t(p(1))) == 1);
  CHECK(time_degree(Formula::conj(Formula::box_e(Formula::box_t(p(1))),
                                  Formula::box_t(Formula::box_t(p(1))))) == 2);
  CHECK(time_degree(Formula::box_e(Formula::box_agent(1, p(1)))) == 0);
}

TEST_CASE("substitution") {
  Substitution s{{1, Formula::top()}};
  CHECK(apply_substitution(s, Formula::disj(p(1), Formula::negation(p(1)))) ==
        Formula::disj(Formula::top(), Formula::negation(Formula::top())));
  Substitution id{{1, p(1)}, {2, p(2)}};
  Formula f = parse_formula("[T] (p1 -> <A1> p2)", 1);
  CHECK(apply_substitution(id, f) == f);
  CHECK(apply_substitution(Substitution{{1, p(2)}}, Formula::box_t(p(1))) == Formula::box_t(p(2)));
  CHECK_THROWS_AS(apply_substitution(Substitution{{1, p(2)}}, p(3)), SubstitutionError);
}

TEST_CASE("subformulas") {
  CHECK(subformulas(p(1)).size() == 1);
  CHECK(subformulas(Formula::box_t(p(1))) == std::set<Formula>{p(1), Formula::box_t(p(1))});
  CHECK(subformulas(Formula::implies(p(1), p(2))).size() == 3);
}

TEST_CASE("random round trips and metric properties") {
  std::mt19937 rng(7);
  for (int n = 0; n < 2000; ++n) {
    const unsigned agents = n % 3;
    Formula f = test::random_formula(rng, 3, 5, agents);
    const std::string text = to_string(f);
    Formula g = parse_formula(text, agents);
    CHECK_MESSAGE(g == f, text);
    CHECK(to_string(g) == text);
    CHECK((time_degree(f) == 0) == (text.find("[T]") == std::string::npos &&
                                    text.find("<T>") == std::string::npos));
    CHECK(subformulas(f).size() <= f.node_count());
    // substitution commutes with box
    Substitution s;
    for (unsigned v : variables(f)) s[v] = test::random_formula(rng, 2, 2, agents);
    CHECK(apply_substitution(s, Formula::box_t(f)) == Formula::box_t(apply_substitution(s, f)));
    CHECK(apply_substitution(s, Formula::negation(f)) == Formula::negation(apply_substitution(s, f)));
  }
}
