#include "ltk/oracle.hpp"

#include <map>
#include <stdexcept>

#include "ltk/clusters.hpp"
#include "ltk/normal_form.hpp"

namespace ltk {

void FrameBounds::validate() const {
  if (max_clusters < 1) throw std::invalid_argument("frame bounds need at least one cluster");
  if (max_cluster_size < 1) throw std::invalid_argument("frame bounds need clusters of at least one world");
  if (max_cluster_size > 6) throw std::invalid_argument("cluster size above 6 is not supported");
}

void enumerate_chain_frames(const FrameBounds& b, const std::function<bool(const Frame&)>& visit) {
  b.validate();
  std::vector<std::vector<ClusterType>> types(b.max_cluster_size + 1);
  for (std::size_t n = 1; n <= b.max_cluster_size; ++n) types[n] = cluster_types(n, b.agents);
  for (std::size_t len = 1; len <= b.max_clusters; ++len) {
    std::vector<std::size_t> sizes(len, 1);
    while (true) {
      std::vector<std::size_t> pick(len, 0);
      while (true) {
        std::vector<Cluster> cs;
        WorldId next = 0;
        for (std::size_t i = 0; i < len; ++i) {
          cs.push_back(make_cluster(types[sizes[i]][pick[i]], next));
          next += static_cast<WorldId>(sizes[i]);
        }
        if (!visit(Frame::chain(std::move(cs), b.agents))) return;
        std::size_t i = len;
        while (i > 0 && ++pick[i - 1] == types[sizes[i - 1]].size()) pick[--i] = 0;
        if (i == 0) break;
      }
      std::size_t i = len;
      while (i > 0 && ++sizes[i - 1] > b.max_cluster_size) sizes[--i] = 1;
      if (i == 0) break;
    }
  }
}

std::vector<Frame> enumerate_chain_frames(const FrameBounds& b) {
  std::vector<Frame> out;
  enumerate_chain_frames(b, [&](const Frame& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

// A refutation anywhere in a chain is a refutation in the first cluster of
// its suffix, and truth in the first cluster only depends on the first
// td + 1 clusters, so it is enough to look at the first cluster of frames
// with at most td + 1 clusters.
std::optional<Countermodel> refute_formula(const Formula& f, const FrameBounds& b) {
  b.validate();
  FrameBounds nb = b;
  nb.max_clusters = std::min<std::size_t>(b.max_clusters, time_degree(f) + 1);
  std::optional<Countermodel> found;
  enumerate_chain_frames(nb, [&](const Frame& frame) {
    Evaluator ev(frame, {f});
    const auto& vars = ev.variables();
    const std::size_t n = frame.world_count();
    const std::size_t bits = vars.size() * n;
    if (bits > 30) throw std::invalid_argument("valuation sweep too large for the oracle");
    std::vector<WorldSet> slots(vars.size(), frame.empty_set());
    const auto& first = frame.members(0);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      for (std::size_t v = 0; v < vars.size(); ++v)
        for (std::size_t w = 0; w < n; ++w) slots[v][w] = (code >> (v * n + w)) & 1u;
      ev.run(slots);
      const WorldSet& truth = ev.result(0);
      for (std::size_t d : first) {
        if (truth[d]) continue;
        Countermodel cm;
        Valuation val;
        for (std::size_t v = 0; v < vars.size(); ++v) val[vars[v]] = frame.to_ids(slots[v]);
        cm.model = Model{frame, std::move(val)};
        cm.world = frame.id_at(d);
        found = std::move(cm);
        return false;
      }
    }
    return true;
  });
  return found;
}

std::vector<Formula> enumerate_formulas(unsigned depth, unsigned vars, unsigned agents) {
  std::vector<Formula> all;
  std::vector<std::size_t> level_end;
  for (unsigned v = 1; v <= vars; ++v) all.push_back(Formula::var(v));
  all.push_back(Formula::top());
  all.push_back(Formula::bottom());
  level_end.push_back(all.size());
  for (unsigned d = 1; d <= depth; ++d) {
    const std::size_t lo = d >= 2 ? level_end[d - 2] : 0;   // first formula of depth d-1
    const std::size_t hi = level_end[d - 1];
    std::vector<Formula> fresh;
    for (std::size_t i = lo; i < hi; ++i) fresh.push_back(Formula::negation(all[i]));
    for (std::size_t i = lo; i < hi; ++i) {
      fresh.push_back(Formula::box_t(all[i]));
      fresh.push_back(Formula::box_e(all[i]));
      for (unsigned l = 1; l <= agents; ++l) fresh.push_back(Formula::box_agent(l, all[i]));
    }
    // binary: at least one operand of depth exactly d-1
    for (std::size_t i = 0; i < hi; ++i)
      for (std::size_t j = std::max(i, lo); j < hi; ++j) {
        if (i < lo && j < lo) continue;
        fresh.push_back(Formula::conj(all[i], all[j]));
        fresh.push_back(Formula::disj(all[i], all[j]));
      }
    for (std::size_t i = 0; i < hi; ++i)
      for (std::size_t j = 0; j < hi; ++j) {
        if (i < lo && j < lo) continue;
        fresh.push_back(Formula::implies(all[i], all[j]));
      }
    for (auto& f : fresh) all.push_back(std::move(f));
    level_end.push_back(all.size());
  }
  return all;
}

std::optional<BruteWitness> brute_not_admissible(const Rule& r, unsigned subst_depth, unsigned subst_vars,
                                                 const FrameBounds& b) {
  b.validate();
  const auto rule_vars = variables(r);
  const std::vector<unsigned> vars(rule_vars.begin(), rule_vars.end());
  const auto candidates = enumerate_formulas(subst_depth, subst_vars, b.agents);
  std::map<Formula, bool> refuted;
  auto is_refuted = [&](const Formula& f) {
    auto it = refuted.find(f);
    if (it != refuted.end()) return it->second;
    const bool res = refute_formula(f, b).has_value();
    refuted.emplace(f, res);
    return res;
  };
  std::vector<std::size_t> pick(vars.size(), 0);
  while (true) {
    Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s[vars[i]] = candidates[pick[i]];
    const Formula concl = apply_substitution(s, r.conclusion);
    if (is_refuted(concl)) {
      bool premises_hold = true;
      for (const auto& p : r.premises)
        if (is_refuted(apply_substitution(s, p))) {
          premises_hold = false;
          break;
        }
      if (premises_hold) return BruteWitness{s, *refute_formula(concl, b)};
    }
    std::size_t i = vars.size();
    while (i > 0 && ++pick[i - 1] == candidates.size()) pick[--i] = 0;
    if (i == 0) break;
  }
  return std::nullopt;
}

bool equivalid_nf(const Rule& r, const FrameBounds& b) {
  const ReducedRule rr = reduce(r, b.agents);
  bool agree = true;
  enumerate_chain_frames(b, [&](const Frame& frame) {
    agree = rule_valid_on_frame(frame, r) == rule_valid_on_frame(frame, rr);
    return agree;
  });
  return agree;
}

Formula random_formula(std::mt19937& rng, unsigned vars, unsigned depth, unsigned agents,
                       bool constants) {
  auto pick = [&](unsigned n) { return static_cast<unsigned>(rng() % n); };
  if (vars == 0) constants = true;
  if (depth == 0 || pick(4) == 0) {
    if (vars == 0 || (constants && pick(8) == 0)) return pick(2) ? Formula::top() : Formula::bottom();
    return Formula::var(1 + pick(vars));
  }
  auto sub = [&] { return random_formula(rng, vars, depth - 1, agents, constants); };
  switch (pick(agents > 0 ? 7 : 6)) {
    case 0: return Formula::negation(sub());
    case 1: {
      Formula a = sub();
      return Formula::conj(a, sub());
    }
    case 2: {
      Formula a = sub();
      return Formula::disj(a, sub());
    }
    case 3: {
      Formula a = sub();
      return Formula::implies(a, sub());
    }
    case 4: return Formula::box_t(sub());
    case 5: return Formula::box_e(sub());
    default: {
      const unsigned l = 1 + pick(agents);
      return Formula::box_agent(l, sub());
    }
  }
}

Rule random_rule(std::mt19937& rng, unsigned vars, unsigned depth, unsigned agents) {
  Rule r;
  const unsigned premises = 1 + static_cast<unsigned>(rng() % 2);
  for (unsigned i = 0; i < premises; ++i) r.premises.push_back(random_formula(rng, vars, depth, agents, false));
  r.conclusion = random_formula(rng, vars, depth, agents, false);
  return r;
}

}  // namespace ltk
