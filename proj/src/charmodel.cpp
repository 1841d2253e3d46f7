#include "ltk/charmodel.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace ltk {

ClusterCatalogue build_catalogue(unsigned vars, std::size_t max_cluster, unsigned agents) {
  if (max_cluster < 1) throw std::invalid_argument("cluster size cap must be at least 1");
  if (max_cluster > 6) throw std::invalid_argument("cluster size cap above 6 is not supported");
  if (vars > 16) throw std::invalid_argument("at most 16 variables");
  ClusterCatalogue cat{vars, max_cluster, agents, {}};
  const std::uint32_t vals = std::uint32_t{1} << vars;
  for (std::size_t n = 1; n <= max_cluster; ++n) {
    const auto parts = set_partitions(n);
    double work = 1;
    for (std::size_t j = 0; j < n; ++j) work *= vals;
    for (unsigned l = 0; l < agents; ++l) work *= static_cast<double>(parts.size());
    if (work > 2e7) throw std::invalid_argument("catalogue too large for these caps");
    std::set<ClusterType> found;
    std::vector<std::uint32_t> labels(n, 0);
    while (true) {
      std::vector<std::size_t> pick(agents, 0);
      while (true) {
        ClusterType t;
        t.labels = labels;
        for (unsigned l = 0; l < agents; ++l) t.rgs.push_back(parts[pick[l]]);
        found.insert(canonical(t));
        std::size_t i = agents;
        while (i > 0 && ++pick[i - 1] == parts.size()) pick[--i] = 0;
        if (i == 0) break;
      }
      std::size_t j = n;
      while (j > 0 && ++labels[j - 1] == vals) labels[--j] = 0;
      if (j == 0) break;
    }
    cat.entries.insert(cat.entries.end(), found.begin(), found.end());
  }
  return cat;
}

std::size_t SliceModel::layer_of(WorldId w) const {
  const Frame& f = model.frame;
  return clusters[f.cluster_of(f.index_of(w))].layer;
}

std::vector<std::size_t> SliceModel::layer_counts() const {
  std::vector<std::size_t> out(depth, 0);
  for (const auto& c : clusters) ++out[c.layer - 1];
  return out;
}

SliceModel build_slices(const ClusterCatalogue& cat, std::size_t depth, bool step2_all) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  SliceModel sm;
  sm.catalogue = cat;
  sm.depth = depth;
  sm.step2_all = step2_all;
  const std::size_t c = cat.entries.size();
  double total = 0, layer = static_cast<double>(c);
  for (std::size_t j = 1; j <= depth; ++j) {
    total += layer;
    layer *= j == 1 && !step2_all ? static_cast<double>(c) - 1 : static_cast<double>(c);
  }
  if (total > 5e6) throw std::invalid_argument("slice model too large");

  std::vector<Cluster> clusters;
  std::vector<std::vector<std::size_t>> next;
  Valuation val;
  for (unsigned v = 1; v <= cat.vars; ++v) val[v];
  WorldId id = 0;
  auto add = [&](std::size_t entry, std::size_t layer_no, std::optional<std::size_t> succ) {
    const ClusterType& t = cat.entries[entry];
    Cluster cl = make_cluster(t, id);
    for (std::size_t j = 0; j < t.size(); ++j)
      for (unsigned v = 1; v <= cat.vars; ++v)
        if ((t.labels[j] >> (v - 1)) & 1u) val[v].insert(id + static_cast<WorldId>(j));
    id += static_cast<WorldId>(t.size());
    clusters.push_back(std::move(cl));
    next.push_back(succ ? std::vector<std::size_t>{*succ} : std::vector<std::size_t>{});
    sm.clusters.push_back({layer_no, succ, entry});
  };
  for (std::size_t e = 0; e < c; ++e) add(e, 1, std::nullopt);
  std::size_t begin = 0;
  for (std::size_t layer_no = 2; layer_no <= depth; ++layer_no) {
    const std::size_t end = sm.clusters.size();
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t own = sm.clusters[s].entry;
      for (std::size_t e = 0; e < c; ++e) {
        // entries are pairwise non-isomorphic, so index equality is isomorphism
        if (layer_no == 2 && !step2_all && e == own) continue;
        add(e, layer_no, s);
      }
    }
    begin = end;
  }
  sm.model = Model{Frame(std::move(clusters), std::move(next), cat.agents), std::move(val)};
  return sm;
}

McReport mc_on_slices(const SliceModel& sm, const Formula& f) {
  for (unsigned v : variables(f))
    if (v < 1 || v > sm.catalogue.vars)
      throw std::invalid_argument("variable p" + std::to_string(v) + " is outside p1..p" +
                                  std::to_string(sm.catalogue.vars));
  if (max_agent(f) > sm.catalogue.agents) throw std::invalid_argument("agent index out of range");
  McReport rep;
  const std::size_t td = time_degree(f);
  const std::set<WorldId> truth = truth_set(sm.model, f);
  for (WorldId w : sm.model.frame.world_ids()) {
    if (sm.layer_of(w) - 1 < td) continue;
    rep.evaluable_at.insert(w);
    (truth.count(w) ? rep.holds_at : rep.refuted_at).insert(w);
  }
  return rep;
}

std::vector<std::vector<WorldId>> bounded_bisim_classes(const Model& m, unsigned vars, std::size_t t) {
  const Frame& f = m.frame;
  const std::size_t n = f.world_count();
  std::vector<std::size_t> cls(n);
  {
    std::map<std::vector<bool>, std::size_t> ids;
    for (std::size_t d = 0; d < n; ++d) {
      std::vector<bool> fp;
      for (unsigned v = 1; v <= vars; ++v) {
        auto it = m.valuation.find(v);
        fp.push_back(it != m.valuation.end() && it->second.count(f.id_at(d)));
      }
      cls[d] = ids.emplace(fp, ids.size()).first->second;
    }
  }
  for (std::size_t round = 0; round < t; ++round) {
    using Sig = std::pair<std::size_t, std::vector<std::set<std::size_t>>>;
    std::map<Sig, std::size_t> ids;
    std::vector<std::size_t> next(n);
    for (std::size_t d = 0; d < n; ++d) {
      Sig sig{cls[d], {}};
      const std::size_t c = f.cluster_of(d);
      std::set<std::size_t> time, env;
      for (std::size_t e : f.members(c)) env.insert(cls[e]);
      time = env;
      for (std::size_t s : f.next(c))
        for (std::size_t e : f.members(s)) time.insert(cls[e]);
      sig.second.push_back(std::move(time));
      sig.second.push_back(std::move(env));
      for (unsigned l = 1; l <= f.agents(); ++l) {
        std::set<std::size_t> ag;
        for (std::size_t e : f.block_members(l, f.block_of(d, l))) ag.insert(cls[e]);
        sig.second.push_back(std::move(ag));
      }
      next[d] = ids.emplace(std::move(sig), ids.size()).first->second;
    }
    const bool stable = ids.size() == std::set<std::size_t>(cls.begin(), cls.end()).size();
    cls = std::move(next);
    if (stable) break;
  }
  std::map<std::size_t, std::vector<WorldId>> groups;
  for (std::size_t d = 0; d < n; ++d) groups[cls[d]].push_back(f.id_at(d));
  std::vector<std::vector<WorldId>> out;
  for (auto& [k, g] : groups) {
    std::sort(g.begin(), g.end());
    out.push_back(std::move(g));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<WorldId>> bounded_bisim_classes(const SliceModel& sm, std::size_t t) {
  return bounded_bisim_classes(sm.model, sm.catalogue.vars, t);
}

std::vector<std::pair<WorldId, WorldId>> duplicate_pairs(const SliceModel& sm) {
  const Frame& f = sm.model.frame;
  std::vector<std::pair<WorldId, WorldId>> out;
  for (std::size_t c = 0; c < f.cluster_count(); ++c) {
    const auto& mem = f.members(c);
    auto label = [&](std::size_t d) {
      std::vector<bool> out;
      for (const auto& [v, s] : sm.model.valuation) out.push_back(s.count(f.id_at(d)) != 0);
      return out;
    };
    for (std::size_t a = 0; a < mem.size(); ++a)
      for (std::size_t b = a + 1; b < mem.size(); ++b) {
        if (label(mem[a]) != label(mem[b])) continue;
        bool swap_ok = true;
        for (unsigned l = 1; l <= f.agents() && swap_ok; ++l) {
          const std::size_t ba = f.block_of(mem[a], l), bb = f.block_of(mem[b], l);
          swap_ok = ba == bb || (f.block_members(l, ba).size() == 1 && f.block_members(l, bb).size() == 1);
        }
        if (swap_ok) out.emplace_back(f.id_at(mem[a]), f.id_at(mem[b]));
      }
  }
  return out;
}

}  // namespace ltk
