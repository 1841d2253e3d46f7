#include <doctest.h>

#include <random>

#include "gen.hpp"
#include "ltk/kripke.hpp"

using namespace ltk;

namespace {

Formula p(unsigned i) { return Formula::var(i); }

Frame singleton_chain(std::size_t n, unsigned agents = 1) {
  std::vector<Cluster> cs;
  for (std::size_t i = 0; i < n; ++i) cs.push_back(Cluster::uniform({static_cast<WorldId>(i)}, agents));
  return Frame::chain(cs, agents);
}

Frame random_chain(std::mt19937& rng, unsigned agents, std::size_t max_clusters, std::size_t max_size) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  std::vector<Cluster> cs;
  WorldId next = 0;
  const std::size_t n = 1 + pick(max_clusters);
  for (std::size_t c = 0; c < n; ++c) {
    Cluster cl;
    const std::size_t size = 1 + pick(max_size);
    for (std::size_t j = 0; j < size; ++j) cl.worlds.push_back(next++);
    for (unsigned l = 0; l < agents; ++l) {
      Partition part;
      for (WorldId w : cl.worlds) {
        std::size_t b = pick(part.size() + 1);
        if (b == part.size()) part.push_back({});
        part[b].push_back(w);
      }
      cl.partitions.push_back(part);
    }
    cs.push_back(cl);
  }
  return Frame::chain(cs, agents);
}

}  // namespace

TEST_CASE("time successors") {
  Frame one = singleton_chain(1);
  CHECK(rt_successors(one, 0) == std::vector<WorldId>{0});
  Frame two = singleton_chain(2);
  CHECK(rt_successors(two, 0) == std::vector<WorldId>{0, 1});
  Frame three = singleton_chain(3);
  auto s = rt_successors(three, 0);
  CHECK(std::find(s.begin(), s.end(), 2) == s.end());
  CHECK_THROWS_AS(rt_successors(three, 9), ModelError);
}

TEST_CASE("satisfaction") {
  Model m1{singleton_chain(1), {{1, {0}}}};
  CHECK(satisfies(m1, 0, Formula::box_e(p(1))));
  Model m2{singleton_chain(2), {{1, {1}}}};
  CHECK_FALSE(satisfies(m2, 0, Formula::box_t(p(1))));
  CHECK(satisfies(m2, 0, Formula::dia_t(p(1))));
  Model m3{singleton_chain(3), {{1, {0, 1}}}};
  CHECK(satisfies(m3, 0, Formula::box_t(p(1))));
  CHECK_FALSE(satisfies(m3, 0, Formula::box_t(Formula::box_t(p(1)))));
  Formula four = Formula::implies(Formula::box_t(p(1)), Formula::box_t(Formula::box_t(p(1))));
  CHECK_FALSE(formula_valid_on_model(m3, four));
  CHECK(formula_valid_on_model(m3, Formula::implies(p(1), p(1))));
  CHECK(formula_valid_on_model(m3, Formula::implies(Formula::box_t(p(1)), p(1))));
  CHECK_THROWS_AS(satisfies(m3, 0, p(2)), ModelError);
}

TEST_CASE("agent blocks") {
  Cluster c;
  c.worlds = {0, 1, 2};
  c.partitions = {{{0, 1}, {2}}};
  Model m{Frame::chain({c}, 1), {{1, {0}}}};
  CHECK(satisfies(m, 1, Formula::dia_agent(1, p(1))));
  CHECK_FALSE(satisfies(m, 2, Formula::dia_agent(1, p(1))));
  CHECK(satisfies(m, 2, Formula::dia_e(p(1))));
}

TEST_CASE("rule validity on frames") {
  Frame f = singleton_chain(2);
  CHECK(rule_valid_on_frame(f, parse_rule("x1 / x1", 1)));
  CHECK_FALSE(rule_valid_on_frame(f, parse_rule("x1 | ~x1 / F", 1)));
  CHECK(rule_valid_on_frame(f, parse_rule("x1 / [E] x1", 1)));
}

TEST_CASE("well-formedness") {
  std::mt19937 rng(3);
  for (int n = 0; n < 50; ++n) CHECK(check_well_formed(random_chain(rng, 2, 4, 3)).empty());

  RelationalFrame bad = to_relational(singleton_chain(2));
  bad.agent[0].insert({0, 1});
  bad.agent[0].insert({1, 0});
  auto v = check_well_formed(bad);
  REQUIRE_FALSE(v.empty());
  bool named = false;
  for (const auto& x : v) named = named || x.condition == "agent-within-env";
  CHECK(named);

  RelationalFrame skip = to_relational(singleton_chain(3));
  skip.time.insert({0, 2});
  CHECK_FALSE(check_well_formed(skip).empty());
}

TEST_CASE("frame properties by valuation sweep") {
  std::mt19937 rng(11);
  const std::vector<std::string> valid = {
      "[T] p1 -> p1",        "[E] p1 -> p1",       "[A1] p1 -> p1",     "[T] p1 -> [E] p1",
      "[E] p1 -> [A1] p1",   "<E> p1 -> [E] <E> p1", "<A1> p1 -> [A1] <A1> p1"};
  for (int n = 0; n < 30; ++n) {
    Frame f = random_chain(rng, 1, 3, 2);
    for (const auto& text : valid) {
      Rule r{{Formula::top()}, parse_formula(text, 1)};
      CHECK_MESSAGE(rule_valid_on_frame(f, r), text);
    }
  }
}

TEST_CASE("relations derived from clusters agree") {
  std::mt19937 rng(5);
  for (int n = 0; n < 50; ++n) {
    Frame f = random_chain(rng, 2, 4, 3);
    RelationalFrame r = to_relational(f);
    RelationalFrame::Relation mutual;
    for (auto [a, b] : r.time)
      if (r.time.count({b, a})) mutual.insert({a, b});
    CHECK(mutual == r.env);
  }
}

TEST_CASE("truth depends only on the next td clusters") {
  std::mt19937 rng(9);
  for (int n = 0; n < 300; ++n) {
    Frame f = random_chain(rng, 1, 5, 2);
    Formula g = test::random_formula(rng, 2, 4, 1);
    const unsigned td = time_degree(g);
    Valuation val;
    for (unsigned v : variables(g)) {
      std::set<WorldId> s;
      for (WorldId w : f.world_ids())
        if (rng() & 1u) s.insert(w);
      val[v] = s;
    }
    Model m{f, val};
    // truncate after cluster td of the chain (evaluate at C_0)
    std::vector<Cluster> kept;
    for (std::size_t c = 0; c < f.cluster_count() && c <= td; ++c) kept.push_back(f.cluster(c));
    Frame t = Frame::chain(kept, 1);
    Valuation tv;
    for (auto& [v, s] : val)
      for (WorldId w : s)
        if (t.has_world(w)) tv[v].insert(w);
    for (unsigned v : variables(g)) tv[v];
    Model mt{t, tv};
    for (std::size_t d : f.members(0)) {
      WorldId w = f.id_at(d);
      CHECK(satisfies(m, w, g) == satisfies(mt, w, g));
    }
  }
}
