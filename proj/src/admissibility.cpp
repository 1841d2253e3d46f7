#include "ltk/admissibility.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "theta_table.hpp"

namespace ltk {

using detail::ClusterAssignment;
using detail::ClusterShape;
using detail::Diamonds;
using detail::Lits;
using detail::ThetaTable;

// ── bounds ──────────────────────────────────────────────────────────────────

namespace {

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturate(const BigCount& v) {
  if (v > BigCount(kMaxU64)) return kMaxU64;
  return v.convert_to<std::uint64_t>();
}

}  // namespace

SearchBounds SearchBounds::defaults_for(const BigCount& s) {
  SearchBounds b;
  b.max_d = std::min<std::uint64_t>(saturate(s + 2), 3);
  b.max_cluster_size = std::clamp<std::uint64_t>(saturate(s), 1, 2);
  b.max_tail_len = std::max<std::uint64_t>(saturate(s + 2), 2);
  return b;
}

void SearchBounds::validate() const {
  if (max_cluster_size < 1) throw std::invalid_argument("max cluster size must be at least 1");
  if (max_cluster_size > 6) throw std::invalid_argument("max cluster size above 6 is not supported");
  if (max_tail_len < 2) throw std::invalid_argument("max tail length must be at least 2");
  if (max_d > 62) throw std::invalid_argument("max d above 62 is not supported");
}

// ── SP-frames ───────────────────────────────────────────────────────────────

SpFrame::SpFrame(std::vector<Cluster> main, std::vector<std::vector<WorldId>> tails, WorldId top,
                 unsigned agents)
    : main_(std::move(main)), tails_(std::move(tails)), top_(top) {
  if (tails_.size() != main_.size()) throw ModelError("SP-frame needs one tail per main cluster");
  for (const auto& t : tails_)
    if (t.size() < 2) throw ModelError("SP-frame tails need at least two worlds");
  std::vector<Cluster> clusters = main_;
  std::vector<std::vector<std::size_t>> next(main_.size());
  for (std::size_t i = 0; i + 1 < main_.size(); ++i) next[i] = {i + 1};
  for (std::size_t i = 0; i < tails_.size(); ++i) {
    for (std::size_t t = 0; t < tails_[i].size(); ++t) {
      clusters.push_back(Cluster::uniform({tails_[i][t]}, agents));
      next.push_back({t + 1 < tails_[i].size() ? clusters.size() : i});
    }
  }
  clusters.push_back(Cluster::uniform({top_}, agents));
  next.push_back({});
  if (!main_.empty()) next[main_.size() - 1] = {clusters.size() - 1};
  frame_ = Frame(std::move(clusters), std::move(next), agents);
}

SpFrame SpFrame::from_types(const std::vector<ClusterType>& main,
                            const std::vector<std::size_t>& tail_lengths, unsigned agents) {
  WorldId next = 0;
  std::vector<Cluster> cs;
  for (const auto& t : main) {
    cs.push_back(make_cluster(t, next));
    next += static_cast<WorldId>(t.size());
  }
  std::vector<std::vector<WorldId>> tails;
  for (std::size_t len : tail_lengths) {
    std::vector<WorldId> tail;
    for (std::size_t j = 0; j < len; ++j) tail.push_back(next++);
    tails.push_back(std::move(tail));
  }
  return SpFrame(std::move(cs), std::move(tails), next, agents);
}

namespace {

// Odometer over tuples with entries in [lo, hi], last position fastest.
bool advance(std::vector<std::uint64_t>& v, std::uint64_t lo, std::uint64_t hi) {
  for (std::size_t i = v.size(); i > 0; --i) {
    if (v[i - 1] < hi) {
      ++v[i - 1];
      return true;
    }
    v[i - 1] = lo;
  }
  return false;
}

bool advance_mixed(std::vector<std::size_t>& v, const std::vector<std::size_t>& limits) {
  for (std::size_t i = v.size(); i > 0; --i) {
    if (v[i - 1] + 1 < limits[i - 1]) {
      ++v[i - 1];
      return true;
    }
    v[i - 1] = 0;
  }
  return false;
}

}  // namespace

void enumerate_sp_frames(const SearchBounds& bounds, unsigned agents,
                         const std::function<bool(const SpFrame&)>& visit) {
  bounds.validate();
  std::vector<std::vector<ClusterType>> types(bounds.max_cluster_size + 1);
  for (std::size_t n = 1; n <= bounds.max_cluster_size; ++n) types[n] = cluster_types(n, agents);
  for (std::uint64_t d = 0; d <= bounds.max_d; ++d) {
    std::vector<std::uint64_t> sizes(d + 1, 1);
    do {
      std::vector<std::uint64_t> tails(d + 1, 2);
      do {
        std::vector<std::size_t> limits, pick(d + 1, 0);
        for (auto s : sizes) limits.push_back(types[s].size());
        do {
          std::vector<ClusterType> main;
          for (std::size_t i = 0; i <= d; ++i) main.push_back(types[sizes[i]][pick[i]]);
          std::vector<std::size_t> lens(tails.begin(), tails.end());
          if (!visit(SpFrame::from_types(main, lens, agents))) return;
        } while (advance_mixed(pick, limits));
      } while (advance(tails, 2, bounds.max_tail_len));
    } while (advance(sizes, 1, bounds.max_cluster_size));
  }
}

std::vector<SpFrame> enumerate_sp_frames(const SearchBounds& bounds, unsigned agents) {
  std::vector<SpFrame> out;
  enumerate_sp_frames(bounds, agents, [&](const SpFrame& f) {
    out.push_back(f);
    return true;
  });
  return out;
}

// ── witness check ───────────────────────────────────────────────────────────

WitnessReport check_witness(const ReducedRule& rr, const Witness& w, IsoMode mode) {
  WitnessReport rep;
  auto fail = [&](int cond, std::string detail) {
    rep.ok = false;
    rep.violations.emplace_back(cond, std::move(detail));
  };
  const SpFrame& sp = w.frame;
  const Frame& frame = sp.frame();
  const ThetaShape shape = rr.shape();

  for (WorldId id : frame.world_ids()) {
    auto it = w.labeling.find(id);
    if (it == w.labeling.end())
      throw std::invalid_argument("world " + std::to_string(id) + " has no label");
    if (!(it->second.shape() == shape) || !rr.thetas.contains(it->second))
      throw std::invalid_argument("label of world " + std::to_string(id) + " is not a theta of the rule");
  }
  for (const auto& [id, t] : w.labeling)
    if (!frame.has_world(id)) fail(0, "label for unknown world " + std::to_string(id));
  if (frame.agents() != rr.agents) fail(0, "agent count differs from the rule");

  Valuation val;
  for (unsigned i = 0; i < rr.var_count; ++i) {
    auto& s = val[i];
    for (const auto& [id, t] : w.labeling)
      if (frame.has_world(id) && t.sign_lit(i) == 0) s.insert(id);
  }
  Model model{frame, val};
  const auto realised = realised_thetas(model, shape);

  // 1
  if (!frame.has_world(w.failing_world)) {
    fail(1, "failing world is not in the frame");
  } else if (w.labeling.at(w.failing_world).sign_lit(0) == 0) {
    fail(1, "x0 holds at the failing world");
  }
  // 2
  for (const auto& [id, t] : realised)
    if (!(t == w.labeling.at(id))) fail(2, "world " + std::to_string(id) + " does not satisfy its label");
  // 3
  if (!rr.thetas.contains(w.theta_a)) {
    fail(3, "theta_a is not a theta of the rule");
  } else {
    auto check3 = [&](WorldId id, const std::string& what) {
      if (!(w.labeling.at(id) == w.theta_a)) fail(3, what + " is not labelled by theta_a");
    };
    check3(sp.top(), "@");
    for (std::size_t i = 0; i < sp.tails().size(); ++i) {
      check3(sp.tails()[i][0], "first world of tail " + std::to_string(i));
      check3(sp.tails()[i][1], "second world of tail " + std::to_string(i));
    }
  }
  if (sp.degenerate()) return rep;
  // 4
  const Cluster& top_cluster = sp.main().back();
  for (std::size_t a = 0; a < top_cluster.worlds.size(); ++a)
    for (std::size_t b = a + 1; b < top_cluster.worlds.size(); ++b)
      if (w.labeling.at(top_cluster.worlds[a]) == w.labeling.at(top_cluster.worlds[b]))
        fail(4, "worlds " + std::to_string(top_cluster.worlds[a]) + " and " +
                    std::to_string(top_cluster.worlds[b]) + " of C_d share a label");
  // 5
  if (top_cluster.worlds.size() == 1) {
    bool iso = true;
    if (mode == IsoMode::Model) {
      const Theta& c = w.labeling.at(top_cluster.worlds[0]);
      const Theta& a = w.labeling.at(sp.top());
      for (unsigned i = 0; i < rr.var_count; ++i)
        if (c.sign_lit(i) != a.sign_lit(i)) iso = false;
    }
    if (iso) fail(5, "C_d is isomorphic to @");
  }
  return rep;
}

// ── search ──────────────────────────────────────────────────────────────────

namespace {

using Layer = std::vector<std::pair<Lits, bool>>;   // literal vector, x0-false reachable

struct TailInfo {
  std::size_t len_ok = 0;   // shortest feasible tail, 0 if none
  std::size_t len_x0 = 0;   // shortest feasible tail with a world refuting x0
  std::vector<Layer> layers;
};

struct Found {
  std::size_t shape = 0;
  Lits at = 0;
  std::vector<ClusterAssignment> main;
};

ClusterShape shape_of(const ClusterType& t) {
  ClusterShape s;
  s.size = t.size();
  for (const Rgs& r : t.rgs) s.block_of.emplace_back(r.begin(), r.end());
  return s;
}

Diamonds point(Lits lit, Lits seen, unsigned agents) {
  Diamonds d;
  d.time = lit | seen;
  d.env = lit;
  d.agent.assign(agents, lit);
  return d;
}

class Worker {
 public:
  Worker(const ThetaTable& table, const std::vector<ClusterType>& types, const SearchBounds& bounds,
         IsoMode mode)
      : table_(table), types_(types), bounds_(bounds), mode_(mode), agents_(table.shape().agents) {
    for (const auto& t : types_) shapes_.push_back(shape_of(t));
  }

  std::optional<Found> search(std::size_t index, const std::vector<std::size_t>& shape) {
    shape_ = &shape;
    for (Lits at : table_.literal_patterns()) {
      if (!table_.admits(at, point(at, at, agents_))) continue;
      at_ = at;
      dead_.clear();
      chosen_.assign(shape.size(), nullptr);
      if (dfs(shape.size() - 1, at, ThetaTable::x0_false(at))) {
        Found f;
        f.shape = index;
        f.at = at;
        for (auto* a : chosen_) f.main.push_back(*a);
        return f;
      }
    }
    return std::nullopt;
  }

  const TailInfo& tail(Lits u, Lits at) {
    auto key = std::make_pair(u, at);
    auto it = tail_cache_.find(key);
    if (it != tail_cache_.end()) return it->second;
    return tail_cache_.emplace(key, compute_tail(u, at)).first->second;
  }

  std::vector<Lits> build_tail(const TailInfo& info, Lits at, std::size_t len, bool need_x0) const {
    std::vector<Lits> lits{at, at};
    bool need = need_x0 && !ThetaTable::x0_false(at);
    Lits prev = at;
    for (std::size_t r = len - 2; r >= 1; --r) {
      const Layer& layer = info.layers[r - 1];
      bool picked = false;
      for (auto [l, x] : layer) {
        const bool linked = lits.size() == 2 ? (l & ~at) == 0 : table_.admits(prev, point(prev, l, agents_));
        if (linked && (x || !need)) {
          lits.push_back(l);
          need = need && !ThetaTable::x0_false(l);
          prev = l;
          picked = true;
          break;
        }
      }
      if (!picked) throw std::logic_error("tail reconstruction failed");
    }
    return lits;
  }

  const ThetaTable& table() const { return table_; }

 private:
  const std::vector<ClusterAssignment>& assignments(std::size_t type, Lits next_all) {
    auto key = std::make_pair(type, next_all);
    auto it = assign_cache_.find(key);
    if (it != assign_cache_.end()) return it->second;
    return assign_cache_.emplace(key, detail::valid_assignments(table_, shapes_[type], next_all))
        .first->second;
  }

  TailInfo compute_tail(Lits u, Lits at) const {
    TailInfo info;
    const bool at_x0 = ThetaTable::x0_false(at);
    if ((u & ~at) == 0) {
      info.len_ok = 2;
      if (at_x0) info.len_x0 = 2;
    }
    if (info.len_ok && info.len_x0) return info;
    const auto& pats = table_.literal_patterns();
    Layer layer;
    for (Lits l : pats)
      if (table_.admits(l, point(l, u, agents_))) layer.emplace_back(l, ThetaTable::x0_false(l));
    std::set<Layer> seen;
    for (std::uint64_t t = 1; t <= bounds_.max_tail_len - 2 && !layer.empty(); ++t) {
      if (!seen.insert(layer).second) break;
      info.layers.push_back(layer);
      for (auto [l, x] : layer) {
        if ((l & ~at) != 0) continue;
        if (!info.len_ok) info.len_ok = t + 2;
        if (!info.len_x0 && (x || at_x0)) info.len_x0 = t + 2;
      }
      if (info.len_ok && info.len_x0) break;
      Layer next;
      for (Lits l : pats) {
        bool any = false, with_x0 = false;
        for (auto [l2, x2] : layer) {
          if (!table_.admits(l, point(l, l2, agents_))) continue;
          any = true;
          with_x0 = with_x0 || x2;
          if (with_x0) break;
        }
        if (any) next.emplace_back(l, with_x0 || ThetaTable::x0_false(l));
      }
      layer = std::move(next);
    }
    return info;
  }

  bool top_ok(const ClusterAssignment& a, const ClusterShape& cs) const {
    const std::size_t n = a.lits.size();
    if (n == 1) return mode_ == IsoMode::Model && a.lits[0] != at_;
    std::vector<std::pair<Lits, std::vector<Lits>>> seen;
    for (std::size_t j = 0; j < n; ++j) {
      Diamonds d = detail::cluster_diamonds(cs, a.lits, j, a.all, at_);
      seen.emplace_back(a.lits[j], d.agent);
    }
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }

  bool dfs(std::size_t j, Lits next_all, bool found) {
    auto key = std::make_tuple(j, next_all, found);
    if (dead_.count(key)) return false;
    const std::size_t type = (*shape_)[j];
    const bool top = j + 1 == shape_->size();
    for (const auto& a : assignments(type, next_all)) {
      if (top && !top_ok(a, shapes_[type])) continue;
      const TailInfo& ti = tail(a.all, at_);
      if (!ti.len_ok) continue;
      const bool f = found || a.x0_false || ti.len_x0 != 0;
      if (j == 0 ? f : dfs(j - 1, a.all, f)) {
        chosen_[j] = &a;
        return true;
      }
    }
    dead_.insert(key);
    return false;
  }

  const ThetaTable& table_;
  const std::vector<ClusterType>& types_;
  std::vector<ClusterShape> shapes_;
  SearchBounds bounds_;
  IsoMode mode_;
  unsigned agents_;
  std::map<std::pair<std::size_t, Lits>, std::vector<ClusterAssignment>> assign_cache_;
  std::map<std::pair<Lits, Lits>, TailInfo> tail_cache_;

  const std::vector<std::size_t>* shape_ = nullptr;
  Lits at_ = 0;
  std::set<std::tuple<std::size_t, Lits, bool>> dead_;
  std::vector<const ClusterAssignment*> chosen_;
};

// Main-chain shapes in search order: d, cluster sizes, cluster types.
std::vector<std::vector<std::size_t>> main_shapes(const SearchBounds& b,
                                                  const std::vector<ClusterType>& types) {
  std::vector<std::vector<std::size_t>> by_size(b.max_cluster_size + 1);
  for (std::size_t i = 0; i < types.size(); ++i) by_size[types[i].size()].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  const std::size_t limit = 2'000'000;
  for (std::uint64_t d = 0; d <= b.max_d; ++d) {
    std::vector<std::uint64_t> sizes(d + 1, 1);
    do {
      std::vector<std::size_t> limits, pick(d + 1, 0);
      for (auto s : sizes) limits.push_back(by_size[s].size());
      do {
        std::vector<std::size_t> shape;
        for (std::size_t i = 0; i <= d; ++i) shape.push_back(by_size[sizes[i]][pick[i]]);
        out.push_back(std::move(shape));
        if (out.size() > limit) throw std::invalid_argument("search bounds admit too many frames");
      } while (advance_mixed(pick, limits));
    } while (advance(sizes, 1, b.max_cluster_size));
  }
  return out;
}

Witness build_witness(Worker& worker, const std::vector<ClusterType>& types,
                      const std::vector<std::size_t>& shape, const Found& found) {
  const ThetaTable& table = worker.table();
  const unsigned agents = table.shape().agents;
  const std::size_t d = shape.size() - 1;
  bool x0_seen = ThetaTable::x0_false(found.at);
  for (const auto& a : found.main) x0_seen = x0_seen || a.x0_false;

  std::vector<std::size_t> lens;
  std::vector<std::vector<Lits>> tail_lits;
  for (std::size_t i = 0; i <= d; ++i) {
    const TailInfo& info = worker.tail(found.main[i].all, found.at);
    const bool need = !x0_seen && info.len_x0 != 0;
    const std::size_t len = need ? info.len_x0 : info.len_ok;
    tail_lits.push_back(worker.build_tail(info, found.at, len, need));
    lens.push_back(len);
    x0_seen = x0_seen || need;
  }
  std::vector<ClusterType> main;
  for (std::size_t t : shape) main.push_back(types[t]);
  Witness w;
  w.frame = SpFrame::from_types(main, lens, agents);
  const SpFrame& sp = w.frame;

  std::vector<std::pair<WorldId, Lits>> lit_of;
  for (std::size_t i = 0; i <= d; ++i) {
    const auto& a = found.main[i];
    const Lits next_all = i < d ? found.main[i + 1].all : found.at;
    const ClusterShape cs = shape_of(types[shape[i]]);
    for (std::size_t j = 0; j < a.lits.size(); ++j) {
      const WorldId id = sp.main()[i].worlds[j];
      w.labeling.emplace(id, table.theta_of(a.lits[j], detail::cluster_diamonds(cs, a.lits, j, a.all, next_all)));
      lit_of.emplace_back(id, a.lits[j]);
    }
  }
  for (std::size_t i = 0; i <= d; ++i) {
    const auto& lits = tail_lits[i];
    for (std::size_t t = 0; t < lits.size(); ++t) {
      const Lits seen = t + 1 < lits.size() ? lits[t + 1] : found.main[i].all;
      const WorldId id = sp.tails()[i][t];
      w.labeling.emplace(id, table.theta_of(lits[t], point(lits[t], seen, agents)));
      lit_of.emplace_back(id, lits[t]);
    }
  }
  w.theta_a = table.theta_of(found.at, point(found.at, found.at, agents));
  w.labeling.emplace(sp.top(), w.theta_a);
  lit_of.emplace_back(sp.top(), found.at);
  std::sort(lit_of.begin(), lit_of.end());
  bool have = false;
  for (auto [id, l] : lit_of)
    if (ThetaTable::x0_false(l)) {
      w.failing_world = id;
      have = true;
      break;
    }
  if (!have) throw std::logic_error("witness construction lost the failing world");
  return w;
}

}  // namespace

Verdict decide_admissible(const Rule& rule, unsigned agents, const DecideOptions& opts) {
  Verdict v;
  v.reduced = reduce(rule, agents);
  const ReducedRule& rr = v.reduced;
  v.bounds = opts.bounds ? *opts.bounds : SearchBounds::defaults_for(rr.thetas.size());
  v.bounds.validate();
  if (rr.thetas.empty()) return v;

  const ThetaTable table(rr.thetas);
  for (Lits at : table.literal_patterns()) {
    if (!ThetaTable::x0_false(at) || !table.admits(at, point(at, at, agents))) continue;
    Witness w;
    w.frame = SpFrame({}, {}, 0, agents);
    w.theta_a = table.theta_of(at, point(at, at, agents));
    w.labeling.emplace(0, w.theta_a);
    w.failing_world = 0;
    v.witness = std::move(w);
    return v;
  }

  std::vector<ClusterType> types;
  for (std::size_t n = 1; n <= v.bounds.max_cluster_size; ++n)
    for (auto& t : cluster_types(n, agents)) types.push_back(std::move(t));
  const auto shapes = main_shapes(v.bounds, types);

  std::optional<Found> best;
  const unsigned jobs = std::max(1u, opts.jobs);
  if (jobs == 1 || shapes.size() < 2) {
    Worker worker(table, types, v.bounds, opts.cond5);
    for (std::size_t i = 0; i < shapes.size() && !best; ++i) best = worker.search(i, shapes[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best_index{std::numeric_limits<std::size_t>::max()};
    std::mutex mu;
    std::exception_ptr error;
    auto body = [&]() {
      try {
        Worker worker(table, types, v.bounds, opts.cond5);
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= shapes.size() || i > best_index.load()) break;
          auto f = worker.search(i, shapes[i]);
          if (!f) continue;
          std::lock_guard<std::mutex> lock(mu);
          if (!best || f->shape < best->shape) {
            best = std::move(f);
            best_index.store(best->shape);
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        best_index.store(0);
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(jobs, shapes.size()); ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }
  if (best) {
    Worker worker(table, types, v.bounds, opts.cond5);
    v.witness = build_witness(worker, types, shapes[best->shape], *best);
  }
  return v;
}

Countermodel countermodel_from_witness(const ReducedRule& rr, const Witness& w) {
  const Frame& sp = w.frame.frame();
  std::vector<Cluster> chain;
  std::size_t c = sp.cluster_of(sp.index_of(w.failing_world));
  while (true) {
    chain.push_back(sp.cluster(c));
    if (sp.next(c).empty()) break;
    c = sp.next(c).front();
  }
  Countermodel cm;
  cm.world = w.failing_world;
  Frame frame = Frame::chain(chain, sp.agents());
  Valuation val;
  for (unsigned i = 0; i < rr.var_count; ++i) {
    const Formula& o = rr.origin[i];
    if (o.op() != Op::Var) continue;
    auto& s = val[o.index()];
    for (WorldId id : frame.world_ids())
      if (w.labeling.at(id).sign_lit(i) == 0) s.insert(id);
  }
  cm.model = Model{std::move(frame), std::move(val)};
  return cm;
}

TheoremVerdict decide_theorem(const Formula& f, unsigned agents, const DecideOptions& opts) {
  TheoremVerdict tv;
  tv.verdict = decide_admissible(Rule{{Formula::top()}, f}, agents, opts);
  if (tv.verdict.witness) {
    tv.countermodel = countermodel_from_witness(tv.verdict.reduced, *tv.verdict.witness);
    if (satisfies(tv.countermodel->model, tv.countermodel->world, f))
      throw std::logic_error("extracted countermodel does not refute the formula");
  }
  return tv;
}

}  // namespace ltk
