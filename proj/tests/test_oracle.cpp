#include <doctest.h>

#include <random>
#include <set>

#include "gen.hpp"
#include "ltk/oracle.hpp"

using namespace ltk;

TEST_CASE("chain frame enumeration") {
  CHECK(enumerate_chain_frames(FrameBounds{1, 1, 1}).size() == 1);
  CHECK(enumerate_chain_frames(FrameBounds{2, 1, 1}).size() == 2);
  // sizes 1 or 2 (two partitions of a pair): 3 + 9 + 27 cluster sequences
  CHECK(enumerate_chain_frames(FrameBounds{3, 2, 1}).size() == 39);
  auto frames = enumerate_chain_frames(FrameBounds{3, 2, 2});
  CHECK(frames.size() == 5 + 25 + 125);
  std::set<std::vector<ClusterType>> seen;
  for (const auto& f : frames) {
    CHECK(check_well_formed(f).empty());
    std::vector<ClusterType> sig;
    for (std::size_t c = 0; c < f.cluster_count(); ++c) sig.push_back(type_of(f, c));
    CHECK(seen.insert(sig).second);
  }
}

TEST_CASE("refutation search") {
  FrameBounds b{3, 2, 1};
  auto cm = refute_formula(parse_formula("[T] p1 -> [T] [T] p1", 1), b);
  REQUIRE(cm);
  CHECK(cm->model.frame.cluster_count() == 3);
  CHECK_FALSE(satisfies(cm->model, cm->world, parse_formula("[T] p1 -> [T] [T] p1", 1)));
  CHECK_FALSE(refute_formula(parse_formula("p1 -> p1", 1), b));
  CHECK_FALSE(refute_formula(parse_formula("[E] p1 -> [A1] p1", 2), FrameBounds{2, 2, 2}));
  CHECK_FALSE(refute_formula(parse_formula("[E] p1 -> [A2] p1", 2), FrameBounds{2, 2, 2}));
  CHECK(refute_formula(parse_formula("[A1] p1 -> [E] p1", 1), b));
}

TEST_CASE("refutations are genuine") {
  std::mt19937 rng(17);
  for (int n = 0; n < 200; ++n) {
    Formula f = test::random_formula(rng, 2, 3, 1);
    auto cm = refute_formula(f, FrameBounds{3, 2, 1});
    if (cm) CHECK_FALSE(satisfies(cm->model, cm->world, f));
  }
}

TEST_CASE("formula enumeration") {
  auto f0 = enumerate_formulas(0, 1, 1);
  CHECK(f0.size() == 3);
  auto f1 = enumerate_formulas(1, 1, 1);
  // 3 atoms, 3 negations, 9 boxes, 6 + 6 commutative pairs, 9 implications
  CHECK(f1.size() == 3 + 3 + 9 + 6 + 6 + 9);
  std::set<Formula> unique(f1.begin(), f1.end());
  CHECK(unique.size() == f1.size());
  for (const auto& f : enumerate_formulas(2, 1, 0)) CHECK(modal_depth(f) <= 2);
}

TEST_CASE("brute-force admissibility") {
  FrameBounds b{2, 2, 1};
  auto w = brute_not_admissible(parse_rule("x1 | ~x1 / F", 1), 1, 1, b);
  REQUIRE(w);
  CHECK(w->substitution.at(1) == Formula::var(1));
  CHECK_FALSE(brute_not_admissible(parse_rule("x1 / x1", 1), 1, 1, b));
  CHECK_FALSE(brute_not_admissible(parse_rule("x1 / [E] x1", 1), 1, 1, b));
  auto w2 = brute_not_admissible(parse_rule("x1 / x2", 1), 1, 1, b);
  REQUIRE(w2);
  CHECK_FALSE(satisfies(w2->countermodel.model, w2->countermodel.world,
                        apply_substitution(w2->substitution, Formula::var(2))));
}

TEST_CASE("reduced rules are equivalid") {
  FrameBounds b{3, 2, 1};
  CHECK(equivalid_nf(parse_rule("x1 / x1", 1), b));
  CHECK(equivalid_nf(parse_rule("x1 | ~x1 / F", 1), b));
  CHECK(equivalid_nf(parse_rule("<T> x1 / x1", 1), b));
}
