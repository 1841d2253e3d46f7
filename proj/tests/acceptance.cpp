// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ltk/admissibility.hpp"
#include "ltk/charmodel.hpp"
#include "ltk/cli.hpp"
#include "ltk/json_io.hpp"
#include "ltk/normal_form.hpp"
#include "ltk/oracle.hpp"

using namespace ltk;

namespace {

// Pinned limits.
constexpr double kEquivalidBudgetSec = 600.0;
constexpr double kTheoremBudgetSec = 60.0;
constexpr std::size_t kEquivalidRules = 200;
constexpr std::size_t kAgreementRules = 60;
constexpr std::size_t kDuplicateFormulas = 500;
constexpr unsigned kJobs = 4;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void report(int n, const std::string& name, const Outcome& o, const std::string& summary) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << n << "  " << name << "  (" << summary;
  if (!o.pass) std::cout << "; " << o.detail;
  std::cout << ")" << std::endl;
  if (!o.pass) ++failures;
}

// 1 ──────────────────────────────────────────────────────────────────────────

void nf_equivalidity() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937 rng(20241);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < kEquivalidRules; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(i % 2);
    const unsigned vars = 1 + static_cast<unsigned>(rng() % 2);
    const unsigned depth = 1 + static_cast<unsigned>(rng() % 2);
    const Rule r = random_rule(rng, vars, depth, k);
    if (equivalid_nf(r, FrameBounds{3, 2, k})) ++agree;
    else o.fail("differs on " + to_string(r) + " (k=" + std::to_string(k) + ")");
  }
  const double secs = seconds_since(t0);
  if (secs > kEquivalidBudgetSec) o.fail("took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << agree << "/" << kEquivalidRules << " rules, 3 clusters of size <= 2, " << secs << " s";
  report(1, "reduced form is equivalid with the rule", o, s.str());
}

// 2 ──────────────────────────────────────────────────────────────────────────

void theorem_suite() {
  Outcome o;
  struct Case {
    std::string formula;
    bool theorem;
  };
  const std::vector<Case> cases = {
      {"[T]p1 -> p1", true},          {"[E]p1 -> p1", true},
      {"[A1]p1 -> p1", true},         {"[T]p1 -> [E]p1", true},
      {"[E]p1 -> [A1]p1", true},      {"<E>p1 -> [E]<E>p1", true},
      {"[T]p1 -> [T][T]p1", false},   {"[E]p1 -> [T][T]p1", false},
  };
  double slowest = 0;
  std::size_t right = 0;
  for (const auto& c : cases) {
    const Formula f = parse_formula(c.formula, 1);
    const auto t0 = Clock::now();
    const TheoremVerdict tv = decide_theorem(f, 1);
    const double secs = seconds_since(t0);
    slowest = std::max(slowest, secs);
    bool ok = tv.theorem() == c.theorem;
    if (!c.theorem) {
      // countermodel re-checked by the model checker and for frame conditions
      ok = ok && tv.countermodel && check_well_formed(tv.countermodel->model.frame).empty() &&
           !satisfies(tv.countermodel->model, tv.countermodel->world, f);
      // and the brute-force search agrees that f is refutable
      ok = ok && refute_formula(f, FrameBounds{3, 2, 1}).has_value();
    }
    if (secs > kTheoremBudgetSec) ok = false;
    if (ok) ++right;
    else o.fail(c.formula);
  }
  std::ostringstream s;
  s << right << "/" << cases.size() << " exact, slowest " << slowest << " s";
  report(2, "theorem suite", o, s.str());
}

// 3 ──────────────────────────────────────────────────────────────────────────

void admissibility_catalogue() {
  Outcome o;
  struct Case {
    std::string rule;
    bool admissible;
  };
  const std::vector<Case> cases = {
      {"x1 | ~x1 / F", false}, {"F / x1", true},  {"x1 / x1", true},  {"x1 / [E]x1", true},
      {"x1 | ~x1 / x1", false}, {"<E>x1 / x1", false}, {"[T]x1 -> x1 / x1 | [T]~x1", false},
      {"[E]x1 -> x1 / x1", false}, {"<A1>x1 & <A1>~x1 / [E]x1", true},
  };
  std::size_t right = 0, witnesses = 0;
  for (const auto& c : cases) {
    const Verdict v = decide_admissible(parse_rule(c.rule, 1), 1);
    bool ok = v.admissible() == c.admissible;
    if (v.witness) {
      ++witnesses;
      ok = ok && check_witness(v.reduced, *v.witness, IsoMode::Model).ok;
      // through the JSON certificate as well
      const json j = to_json(v.reduced, *v.witness, v.bounds);
      ok = ok && check_witness(v.reduced, witness_from_json(v.reduced, j), IsoMode::Model).ok;
    }
    if (ok) ++right;
    else o.fail(c.rule);
  }
  // every negative verdict on random rules carries a witness that re-checks
  std::mt19937 rng(777);
  std::size_t random_neg = 0;
  for (int i = 0; i < 200; ++i) {
    const unsigned k = 1 + static_cast<unsigned>(i % 2);
    const Rule r = random_rule(rng, 1 + static_cast<unsigned>(rng() % 2), 2, k);
    const Verdict v = decide_admissible(r, k);
    if (v.admissible()) continue;
    ++random_neg;
    if (!v.witness || !check_witness(v.reduced, *v.witness, IsoMode::Model).ok) o.fail("witness for " + to_string(r));
  }
  std::ostringstream s;
  s << right << "/" << cases.size() << " catalogue verdicts, " << witnesses << " + " << random_neg
    << " witnesses re-checked";
  report(3, "admissibility catalogue", o, s.str());
}

// 4 ──────────────────────────────────────────────────────────────────────────

void decider_oracle_agreement() {
  Outcome o;
  std::vector<Rule> rules;
  for (const char* s : {"x1 | ~x1 / F", "F / x1", "x1 / x1", "x1 / [E]x1", "x1 | ~x1 / x1", "<E>x1 / x1",
                        "[T]x1 -> x1 / x1 | [T]~x1", "[E]x1 -> x1 / x1", "<A1>x1 & <A1>~x1 / [E]x1"})
    rules.push_back(parse_rule(s, 1));
  std::mt19937 rng(4242);
  std::vector<unsigned> agents(rules.size(), 1);
  for (std::size_t i = 0; i < kAgreementRules; ++i) {
    const unsigned k = i % 4 == 3 ? 2 : 1;
    rules.push_back(random_rule(rng, 1 + static_cast<unsigned>(rng() % 2), 1 + static_cast<unsigned>(rng() % 2), k));
    agents.push_back(k);
  }
  std::size_t certified = 0, decided_neg = 0;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    const Rule& r = rules[i];
    const FrameBounds fb{3, 2, agents[i]};
    const auto bw = brute_not_admissible(r, 1, 1, fb);
    const Verdict v = decide_admissible(r, agents[i]);
    if (!v.admissible()) ++decided_neg;
    if (!bw) continue;
    ++certified;
    // the oracle certificate is itself re-checked before it counts
    bool cert_ok = true;
    for (const auto& p : r.premises)
      if (refute_formula(apply_substitution(bw->substitution, p), fb)) cert_ok = false;
    if (satisfies(bw->countermodel.model, bw->countermodel.world,
                  apply_substitution(bw->substitution, r.conclusion)))
      cert_ok = false;
    if (!cert_ok) o.fail("bad oracle certificate for " + to_string(r));
    if (v.admissible()) o.fail("decider says admissible: " + to_string(r));
  }
  std::ostringstream s;
  s << rules.size() << " rules, oracle certified " << certified << ", decider negative on " << decided_neg
    << "; substitutions of depth 1 over p1, 3 clusters of size <= 2, k in {1,2}";
  report(4, "decider agrees with the brute-force oracle", o, s.str());
}

// 5 ──────────────────────────────────────────────────────────────────────────

// Labelled clusters counted by brute force: every (labels, equivalence
// relation) pair, deduplicated by the least relabelling.
std::size_t brute_cluster_count(unsigned vars, std::size_t cap) {
  std::set<std::vector<int>> seen;
  for (std::size_t n = 1; n <= cap; ++n) {
    const std::size_t pairs = n * (n - 1) / 2;
    std::vector<unsigned> labels(n, 0);
    const unsigned lab_count = 1u << vars;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i < n) {
        for (unsigned v = 0; v < lab_count; ++v) {
          labels[i] = v;
          rec(i + 1);
        }
        return;
      }
      for (std::uint64_t rel = 0; rel < (std::uint64_t{1} << pairs); ++rel) {
        std::vector<std::vector<bool>> eq(n, std::vector<bool>(n, false));
        std::size_t bit = 0;
        for (std::size_t a = 0; a < n; ++a) {
          eq[a][a] = true;
          for (std::size_t b = a + 1; b < n; ++b, ++bit) eq[a][b] = eq[b][a] = (rel >> bit) & 1u;
        }
        bool trans = true;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
              if (eq[a][b] && eq[b][c] && !eq[a][c]) trans = false;
        if (!trans) continue;
        std::vector<std::size_t> perm(n);
        for (std::size_t a = 0; a < n; ++a) perm[a] = a;
        std::vector<int> best;
        do {
          std::vector<int> key{static_cast<int>(n)};
          for (std::size_t a = 0; a < n; ++a) key.push_back(static_cast<int>(labels[perm[a]]));
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) key.push_back(eq[perm[a]][perm[b]]);
          if (best.empty() || key < best) best = key;
        } while (std::next_permutation(perm.begin(), perm.end()));
        seen.insert(best);
      }
    };
    rec(0);
  }
  return seen.size();
}

void characterizing_model() {
  Outcome o;
  const ClusterCatalogue cat = build_catalogue(1, 2, 1);
  const std::size_t c = brute_cluster_count(1, 2);
  if (cat.entries.size() != c) o.fail("catalogue has " + std::to_string(cat.entries.size()) + " entries");
  const SliceModel sm = build_slices(cat, 3);
  const auto counts = sm.layer_counts();
  const std::vector<std::size_t> expect{c, c * (c - 1), c * (c - 1) * c};
  if (counts != expect) o.fail("layer counts differ");

  const auto dups = duplicate_pairs(sm);
  if (dups.empty()) o.fail("no duplicate pairs to test");
  std::mt19937 rng(5005);
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < kDuplicateFormulas; ++i) {
    const Formula f = random_formula(rng, 1, 1 + static_cast<unsigned>(rng() % 4), 1);
    const auto truth = truth_set(sm.model, f);
    const McReport mc = mc_on_slices(sm, f);
    for (auto [a, b] : dups) {
      if (truth.count(a) != truth.count(b)) ++disagreements;
      if (mc.evaluable_at.count(a) != mc.evaluable_at.count(b) || mc.holds_at.count(a) != mc.holds_at.count(b))
        ++disagreements;
      // both evaluation routes agree on evaluable worlds
      if (mc.evaluable_at.count(a) && mc.holds_at.count(a) != truth.count(a)) ++disagreements;
    }
  }
  if (disagreements) o.fail(std::to_string(disagreements) + " disagreements");
  std::ostringstream s;
  s << "c=" << c << ", layers " << counts[0] << "/" << counts[1] << "/" << counts[2] << ", " << dups.size()
    << " duplicate pairs x " << kDuplicateFormulas << " formulas, " << disagreements << " disagreements";
  report(5, "characterizing-model slices", o, s.str());
}

// 6 ──────────────────────────────────────────────────────────────────────────

std::string cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ltk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str() + err.str();
}

void determinism() {
  Outcome o;
  std::vector<std::string> rules = {"x1 | ~x1 / F", "<E>x1 / x1", "[T]x1 -> x1 / x1 | [T]~x1",
                                    "<A1>x1 & <A1>~x1 / [E]x1"};
  std::mt19937 rng(66);
  for (int i = 0; i < 40; ++i)
    rules.push_back(to_string(random_rule(rng, 1 + static_cast<unsigned>(rng() % 2), 2, 1)));
  std::size_t compared = 0;
  const std::string jobs = std::to_string(kJobs);
  for (const auto& r : rules) {
    const std::string a = cli({"admissible", r, "--format", "json", "--jobs", "1"});
    const std::string b = cli({"admissible", r, "--format", "json", "--jobs", jobs});
    const std::string c = cli({"admissible", r, "--format", "json", "--jobs", jobs});
    const std::string d = cli({"admissible", r, "--format", "json", "--jobs", "1"});
    ++compared;
    if (a != b || b != c || a != d) o.fail(r);
  }
  for (const char* f : {"[T]p1 -> [T][T]p1", "[E]p1 -> [T][T]p1", "<E>p1 -> [E]<E>p1"}) {
    const std::string a = cli({"theorem", f, "--format", "json", "--jobs", "1"});
    const std::string b = cli({"theorem", f, "--format", "json", "--jobs", jobs});
    ++compared;
    if (a != b) o.fail(f);
  }
  std::ostringstream s;
  s << compared << " inputs, jobs 1 vs " << kJobs << ", two runs each";
  report(6, "deterministic output", o, s.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void()>>> steps = {
      {1, nf_equivalidity},          {2, theorem_suite},        {3, admissibility_catalogue},
      {4, decider_oracle_agreement}, {5, characterizing_model}, {6, determinism},
  };
  for (const auto& [n, step] : steps) {
    try {
      step();
    } catch (const std::exception& e) {
      Outcome o;
      o.fail(std::string("exception: ") + e.what());
      report(n, "aborted", o, "");
    }
  }
  std::cout << (failures ? "FAILED " + std::to_string(failures) + " of 6" : std::string("all 6 criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
