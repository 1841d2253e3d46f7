#include "ltk/kripke.hpp"

#include <algorithm>
#include <numeric>

namespace ltk {

Cluster Cluster::uniform(std::vector<WorldId> worlds, unsigned agents) {
  Cluster c;
  c.partitions.assign(agents, Partition{worlds});
  c.worlds = std::move(worlds);
  return c;
}

Frame::Frame(std::vector<Cluster> clusters, std::vector<std::vector<std::size_t>> next,
             unsigned agents)
    : agents_(agents), clusters_(std::move(clusters)), next_(std::move(next)) {
  if (clusters_.empty()) throw ModelError("frame needs at least one cluster");
  if (next_.size() != clusters_.size()) throw ModelError("successor table size mismatch");
  block_of_.assign(agents_, {});
  blocks_.assign(agents_, {});
  for (std::size_t c = 0; c < clusters_.size(); ++c) {
    const Cluster& cl = clusters_[c];
    if (cl.worlds.empty()) throw ModelError("cluster " + std::to_string(c) + " is empty");
    members_.emplace_back();
    for (WorldId w : cl.worlds) {
      if (!dense_.emplace(w, ids_.size()).second)
        throw ModelError("world " + std::to_string(w) + " listed twice");
      members_.back().push_back(ids_.size());
      ids_.push_back(w);
      cluster_of_.push_back(c);
    }
    for (std::size_t n : next_[c])
      if (n >= clusters_.size()) throw ModelError("successor index out of range");
    if (cl.partitions.size() != agents_)
      throw ModelError("cluster " + std::to_string(c) + " needs one partition per agent");
  }
  for (unsigned l = 0; l < agents_; ++l) {
    block_of_[l].assign(ids_.size(), static_cast<std::size_t>(-1));
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      std::set<WorldId> inside(clusters_[c].worlds.begin(), clusters_[c].worlds.end());
      std::size_t covered = 0;
      for (const Block& b : clusters_[c].partitions[l]) {
        if (b.empty()) throw ModelError("empty agent block");
        std::vector<std::size_t> dense_block;
        for (WorldId w : b) {
          if (!inside.count(w))
            throw ModelError("agent block leaves its cluster at world " + std::to_string(w));
          std::size_t d = dense_.at(w);
          if (block_of_[l][d] != static_cast<std::size_t>(-1))
            throw ModelError("agent blocks overlap at world " + std::to_string(w));
          block_of_[l][d] = blocks_[l].size();
          dense_block.push_back(d);
          ++covered;
        }
        blocks_[l].push_back(std::move(dense_block));
      }
      if (covered != inside.size()) throw ModelError("agent partition does not cover its cluster");
    }
  }
}

Frame Frame::chain(std::vector<Cluster> clusters, unsigned agents) {
  std::vector<std::vector<std::size_t>> next(clusters.size());
  for (std::size_t c = 0; c + 1 < clusters.size(); ++c) next[c] = {c + 1};
  return Frame(std::move(clusters), std::move(next), agents);
}

bool Frame::is_chain() const {
  for (std::size_t c = 0; c < next_.size(); ++c) {
    if (c + 1 < next_.size()) {
      if (next_[c] != std::vector<std::size_t>{c + 1}) return false;
    } else if (!next_[c].empty()) {
      return false;
    }
  }
  return true;
}

std::size_t Frame::index_of(WorldId w) const {
  auto it = dense_.find(w);
  if (it == dense_.end()) throw ModelError("unknown world " + std::to_string(w));
  return it->second;
}

WorldSet Frame::to_set(const std::set<WorldId>& worlds) const {
  WorldSet s(world_count());
  for (WorldId w : worlds) s.set(index_of(w));
  return s;
}

std::set<WorldId> Frame::to_ids(const WorldSet& s) const {
  std::set<WorldId> out;
  for (auto i = s.find_first(); i != WorldSet::npos; i = s.find_next(i)) out.insert(ids_[i]);
  return out;
}

// ── Evaluator ───────────────────────────────────────────────────────────────

Evaluator::Evaluator(const Frame& frame, std::vector<Formula> roots) : frame_(&frame) {
  std::set<unsigned> vars;
  for (const auto& r : roots) vars.merge(ltk::variables(r));
  vars_.assign(vars.begin(), vars.end());
  for (std::size_t i = 0; i < vars_.size(); ++i) slot_of_var_[vars_[i]] = i;
  std::map<Formula, std::size_t> seen;
  for (const auto& r : roots) root_nodes_.push_back(compile(r, seen));
  values_.assign(nodes_.size(), WorldSet(frame.world_count()));
}

std::size_t Evaluator::compile(const Formula& f, std::map<Formula, std::size_t>& seen) {
  if (auto it = seen.find(f); it != seen.end()) return it->second;
  Node n{f.op(), f.index()};
  if (f.op() != Op::Var && f.op() != Op::Top && f.op() != Op::Bottom) {
    n.lhs = compile(f.lhs(), seen);
    if (f.is_binary()) n.rhs = compile(f.rhs(), seen);
  }
  if (f.op() == Op::Var) n.lhs = slot_of_var_.at(f.index());
  nodes_.push_back(n);
  seen.emplace(f, nodes_.size() - 1);
  return nodes_.size() - 1;
}

void Evaluator::box(const Node& n, const WorldSet& arg, WorldSet& out) const {
  const Frame& fr = *frame_;
  out.reset();
  if (n.op == Op::BoxAgent) {
    for (std::size_t b = 0; b < fr.block_count(n.index); ++b) {
      const auto& mem = fr.block_members(n.index, b);
      if (std::all_of(mem.begin(), mem.end(), [&](std::size_t w) { return arg.test(w); }))
        for (std::size_t w : mem) out.set(w);
    }
    return;
  }
  std::vector<char> full(fr.cluster_count());
  for (std::size_t c = 0; c < fr.cluster_count(); ++c) {
    const auto& mem = fr.members(c);
    full[c] = std::all_of(mem.begin(), mem.end(), [&](std::size_t w) { return arg.test(w); });
  }
  for (std::size_t c = 0; c < fr.cluster_count(); ++c) {
    bool ok = full[c];
    if (ok && n.op == Op::BoxT)
      for (std::size_t s : fr.next(c)) ok = ok && full[s];
    if (ok)
      for (std::size_t w : fr.members(c)) out.set(w);
  }
}

void Evaluator::run(const std::vector<WorldSet>& slots) {
  if (slots.size() != vars_.size()) throw ModelError("valuation slot count mismatch");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    WorldSet& out = values_[i];
    switch (n.op) {
      case Op::Var: out = slots[n.lhs]; break;
      case Op::Top: out.set(); break;
      case Op::Bottom: out.reset(); break;
      case Op::Not:
        out = values_[n.lhs];
        out.flip();
        break;
      case Op::And:
        out = values_[n.lhs];
        out &= values_[n.rhs];
        break;
      case Op::Or:
        out = values_[n.lhs];
        out |= values_[n.rhs];
        break;
      case Op::Implies:
        out = values_[n.lhs];
        out.flip();
        out |= values_[n.rhs];
        break;
      default: box(n, values_[n.lhs], out); break;
    }
  }
}

void Evaluator::run(const Valuation& valuation) {
  std::vector<WorldSet> slots;
  for (unsigned v : vars_) {
    auto it = valuation.find(v);
    if (it == valuation.end())
      throw ModelError("valuation does not cover variable " + std::to_string(v));
    slots.push_back(frame_->to_set(it->second));
  }
  run(slots);
}

// ── Queries ─────────────────────────────────────────────────────────────────

std::vector<WorldId> rt_successors(const Frame& frame, WorldId w) {
  std::size_t c = frame.cluster_of(frame.index_of(w));
  std::vector<WorldId> out;
  for (std::size_t d : frame.members(c)) out.push_back(frame.id_at(d));
  for (std::size_t n : frame.next(c))
    for (std::size_t d : frame.members(n)) out.push_back(frame.id_at(d));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::set<WorldId> truth_set(const Model& model, const Formula& f) {
  Evaluator ev(model.frame, {f});
  ev.run(model.valuation);
  return model.frame.to_ids(ev.result(0));
}

bool satisfies(const Model& model, WorldId w, const Formula& f) {
  std::size_t d = model.frame.index_of(w);
  Evaluator ev(model.frame, {f});
  ev.run(model.valuation);
  return ev.result(0).test(d);
}

bool formula_valid_on_model(const Model& model, const Formula& f) {
  Evaluator ev(model.frame, {f});
  ev.run(model.valuation);
  return ev.result(0).all();
}

bool rule_valid_on_frame(const Frame& frame, const Rule& rule) {
  std::vector<Formula> roots = rule.premises;
  roots.push_back(rule.conclusion);
  Evaluator ev(frame, roots);
  const std::size_t n = frame.world_count();
  const std::size_t vars = ev.variables().size();
  if (vars * n > 40) throw ModelError("valuation sweep exceeds 2^40 valuations");
  const std::uint64_t total = std::uint64_t{1} << (vars * n);
  const std::uint64_t mask = (n >= 64) ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  std::vector<WorldSet> slots(vars, WorldSet(n));
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t v = 0; v < vars; ++v)
      slots[v] = WorldSet(n, static_cast<unsigned long>((code >> (v * n)) & mask));
    ev.run(slots);
    bool premises = true;
    for (std::size_t p = 0; p < rule.premises.size() && premises; ++p) premises = ev.result(p).all();
    if (premises && !ev.result(rule.premises.size()).all()) return false;
  }
  return true;
}

// ── Well-formedness ─────────────────────────────────────────────────────────

RelationalFrame to_relational(const Frame& frame) {
  RelationalFrame r;
  r.agent.resize(frame.agents());
  for (WorldId w : frame.world_ids()) r.worlds.insert(w);
  for (std::size_t c = 0; c < frame.cluster_count(); ++c) {
    for (std::size_t a : frame.members(c)) {
      WorldId wa = frame.id_at(a);
      for (std::size_t b : frame.members(c)) {
        r.time.emplace(wa, frame.id_at(b));
        r.env.emplace(wa, frame.id_at(b));
      }
      for (std::size_t n : frame.next(c))
        for (std::size_t b : frame.members(n)) r.time.emplace(wa, frame.id_at(b));
      for (unsigned l = 1; l <= frame.agents(); ++l)
        for (std::size_t b : frame.block_members(l, frame.block_of(a, l)))
          r.agent[l - 1].emplace(wa, frame.id_at(b));
    }
  }
  return r;
}

namespace {

using Relation = RelationalFrame::Relation;

std::string pair_text(WorldId a, WorldId b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void check_equivalence(const Relation& rel, const std::set<WorldId>& worlds, const std::string& name,
                       std::vector<Violation>& out) {
  for (WorldId w : worlds)
    if (!rel.count({w, w})) out.push_back({name, "not reflexive at " + std::to_string(w)});
  for (auto [a, b] : rel) {
    if (!rel.count({b, a})) out.push_back({name, "not symmetric on " + pair_text(a, b)});
    auto lo = rel.lower_bound({b, 0});
    for (auto it = lo; it != rel.end() && it->first == b; ++it)
      if (!rel.count({a, it->second}))
        out.push_back({name, "not transitive through " + pair_text(a, b) + pair_text(b, it->second)});
  }
}

}  // namespace

std::vector<Violation> check_well_formed(const RelationalFrame& f) {
  std::vector<Violation> out;
  if (f.worlds.empty()) out.push_back({"nonempty", "frame has no worlds"});
  auto check_domain = [&](const Relation& rel, const std::string& name) {
    for (auto [a, b] : rel)
      if (!f.worlds.count(a) || !f.worlds.count(b))
        out.push_back({name, "pair " + pair_text(a, b) + " mentions an unknown world"});
  };
  check_domain(f.time, "time-domain");
  check_domain(f.env, "env-domain");
  for (const auto& rel : f.agent) check_domain(rel, "agent-domain");

  for (WorldId w : f.worlds)
    if (!f.time.count({w, w})) out.push_back({"time-reflexive", "missing (" + std::to_string(w) + "," + std::to_string(w) + ")"});

  check_equivalence(f.env, f.worlds, "env-equivalence", out);
  for (std::size_t l = 0; l < f.agent.size(); ++l) {
    const std::string name = "agent-equivalence";
    check_equivalence(f.agent[l], f.worlds, name, out);
    for (auto [a, b] : f.agent[l])
      if (!f.env.count({a, b}))
        out.push_back({"agent-within-env", "agent " + std::to_string(l + 1) + " pair " + pair_text(a, b) + " crosses time clusters"});
  }
  for (auto [a, b] : f.env)
    if (!f.time.count({a, b}) || !f.time.count({b, a}))
      out.push_back({"env-within-mutual-time", "pair " + pair_text(a, b)});
  for (auto [a, b] : f.time)
    if (f.time.count({b, a}) && !f.env.count({a, b}))
      out.push_back({"mutual-time-within-env", "pair " + pair_text(a, b)});
  if (!out.empty()) return out;

  // Clusters are the environment classes; the quotient of R_T must be a path
  // with complete edges between consecutive clusters.
  std::map<WorldId, std::size_t> cls;
  std::vector<std::vector<WorldId>> clusters;
  for (WorldId w : f.worlds) {
    if (cls.count(w)) continue;
    clusters.emplace_back();
    for (auto it = f.env.lower_bound({w, 0}); it != f.env.end() && it->first == w; ++it) {
      cls[it->second] = clusters.size() - 1;
      clusters.back().push_back(it->second);
    }
  }
  const std::size_t n = clusters.size();
  std::vector<std::set<std::size_t>> succ(n), pred(n);
  for (auto [a, b] : f.time) {
    std::size_t ca = cls.at(a), cb = cls.at(b);
    if (ca != cb) {
      succ[ca].insert(cb);
      pred[cb].insert(ca);
    }
  }
  const std::string name = "time-linear-intransitive";
  std::size_t starts = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (succ[c].size() > 1)
      out.push_back({name, "cluster of world " + std::to_string(clusters[c][0]) + " reaches " +
                               std::to_string(succ[c].size()) + " later clusters (an edge skips a cluster or branches)"});
    if (pred[c].size() > 1)
      out.push_back({name, "cluster of world " + std::to_string(clusters[c][0]) + " has several predecessors"});
    if (pred[c].empty()) ++starts;
    for (std::size_t s : succ[c])
      for (WorldId a : clusters[c])
        for (WorldId b : clusters[s])
          if (!f.time.count({a, b}))
            out.push_back({name, "missing time edge " + pair_text(a, b) + " to the next cluster"});
  }
  if (out.empty() && n > 0) {
    std::size_t visited = 0;
    if (starts == 1) {
      std::size_t c = 0;
      while (!pred[c].empty()) ++c;
      for (;; c = *succ[c].begin()) {
        ++visited;
        if (succ[c].empty() || visited > n) break;
      }
    }
    if (visited != n) out.push_back({name, "time clusters do not form a single chain"});
  }
  return out;
}

std::vector<Violation> check_well_formed(const Frame& frame) {
  return check_well_formed(to_relational(frame));
}

}  // namespace ltk
