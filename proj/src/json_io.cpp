#include "ltk/json_io.hpp"

#include <limits>
#include <stdexcept>

namespace ltk {

namespace {

json cluster_json(const Cluster& c) {
  json j;
  j["worlds"] = c.worlds;
  json parts = json::array();
  for (const auto& p : c.partitions) parts.push_back(p);
  j["partitions"] = parts;
  return j;
}

Cluster cluster_from_json(const json& j, unsigned agents) {
  Cluster c;
  c.worlds = j.at("worlds").get<std::vector<WorldId>>();
  if (j.contains("partitions")) {
    for (const auto& p : j.at("partitions")) c.partitions.push_back(p.get<Partition>());
    if (c.partitions.size() != agents)
      throw ModelError("cluster lists " + std::to_string(c.partitions.size()) + " partitions for " +
                       std::to_string(agents) + " agents");
  } else {
    c = Cluster::uniform(c.worlds, agents);
  }
  return c;
}

unsigned var_index(const std::string& key) {
  if (key.size() < 2 || (key[0] != 'p' && key[0] != 'x'))
    throw ModelError("valuation key '" + key + "' is not p<n> or x<n>");
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(key.substr(1), &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos + 1 != key.size() || v > std::numeric_limits<unsigned>::max())
    throw ModelError("valuation key '" + key + "' is not p<n> or x<n>");
  return static_cast<unsigned>(v);
}

template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

json to_json(const Frame& frame) {
  json j;
  j["agents"] = frame.agents();
  json cs = json::array();
  const bool chain = frame.is_chain();
  for (std::size_t c = 0; c < frame.cluster_count(); ++c) {
    json cj = cluster_json(frame.cluster(c));
    if (!chain) cj["next"] = frame.next(c);
    cs.push_back(cj);
  }
  j["clusters"] = cs;
  return j;
}

json to_json(const Model& model) {
  json j = to_json(model.frame);
  json val = json::object();
  for (const auto& [v, s] : model.valuation) val["p" + std::to_string(v)] = std::vector<WorldId>(s.begin(), s.end());
  j["valuation"] = val;
  return j;
}

Model model_from_json(const json& j) {
  return guarded([&] {
    const unsigned agents = j.at("agents").get<unsigned>();
    const json& cs = j.at("clusters");
    if (!cs.is_array() || cs.empty()) throw ModelError("model needs a nonempty cluster list");
    std::vector<Cluster> clusters;
    std::vector<std::vector<std::size_t>> next;
    bool explicit_next = false;
    for (const auto& c : cs) {
      clusters.push_back(cluster_from_json(c, agents));
      if (c.contains("next")) {
        explicit_next = true;
        next.push_back(c.at("next").get<std::vector<std::size_t>>());
      } else {
        next.emplace_back();
      }
    }
    Frame frame = explicit_next ? Frame(std::move(clusters), std::move(next), agents)
                                : Frame::chain(std::move(clusters), agents);
    Valuation val;
    if (j.contains("valuation")) {
      for (const auto& [key, ids] : j.at("valuation").items()) {
        auto& s = val[var_index(key)];
        for (WorldId w : ids.get<std::vector<WorldId>>()) {
          if (!frame.has_world(w)) throw ModelError("valuation mentions unknown world " + std::to_string(w));
          s.insert(w);
        }
      }
    }
    return Model{std::move(frame), std::move(val)};
  });
}

json to_json(const SpFrame& sp) {
  json j;
  j["agents"] = sp.agents();
  json cs = json::array();
  for (const auto& c : sp.main()) cs.push_back(cluster_json(c));
  j["clusters"] = cs;
  json s;
  s["d"] = sp.degenerate() ? -1 : static_cast<long long>(sp.d());
  s["tails"] = sp.tails();
  s["top"] = sp.top();
  j["sp"] = s;
  return j;
}

SpFrame sp_from_json(const json& j) {
  return guarded([&] {
    const unsigned agents = j.at("agents").get<unsigned>();
    std::vector<Cluster> main;
    for (const auto& c : j.at("clusters")) main.push_back(cluster_from_json(c, agents));
    const json& s = j.at("sp");
    auto tails = s.at("tails").get<std::vector<std::vector<WorldId>>>();
    const long long d = s.at("d").get<long long>();
    if (d != static_cast<long long>(main.size()) - 1) throw ModelError("SP-frame d does not match its clusters");
    return SpFrame(std::move(main), std::move(tails), s.at("top").get<WorldId>(), agents);
  });
}

json to_json(const SearchBounds& b) {
  return json{{"max_d", b.max_d}, {"max_cluster_size", b.max_cluster_size}, {"max_tail_len", b.max_tail_len}};
}

SearchBounds bounds_from_json(const json& j) {
  return guarded([&] {
    return SearchBounds{j.at("max_d").get<std::uint64_t>(), j.at("max_cluster_size").get<std::uint64_t>(),
                        j.at("max_tail_len").get<std::uint64_t>()};
  });
}

json to_json(const FrameBounds& b) {
  return json{{"max_clusters", b.max_clusters}, {"max_cluster_size", b.max_cluster_size}, {"agents", b.agents}};
}

json index_to_json(const BigCount& i) {
  if (i <= BigCount(std::numeric_limits<std::uint64_t>::max())) return i.convert_to<std::uint64_t>();
  return i.str();
}

BigCount index_from_json(const json& j) {
  if (j.is_number_unsigned()) return BigCount(j.get<std::uint64_t>());
  if (j.is_number_integer() && j.get<long long>() >= 0) return BigCount(j.get<long long>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("theta index '" + s + "' is not a decimal number");
    return BigCount(s);
  }
  throw std::invalid_argument("theta index must be a nonnegative integer");
}

json to_json(const ReducedRule& rr, const Witness& w, const SearchBounds& b) {
  json j;
  j["frame"] = to_json(w.frame);
  json lab = json::object();
  for (const auto& [id, t] : w.labeling) lab[std::to_string(id)] = index_to_json(rr.thetas.rank(t));
  j["labeling"] = lab;
  j["failing_world"] = w.failing_world;
  j["theta_a"] = index_to_json(rr.thetas.rank(w.theta_a));
  j["bounds"] = to_json(b);
  return j;
}

Witness witness_from_json(const ReducedRule& rr, const json& j) {
  return guarded([&] {
    auto theta = [&](const json& x) {
      const BigCount i = index_from_json(x);
      if (i >= rr.thetas.size())
        throw std::invalid_argument("labeling refers to missing theta " + i.str());
      return rr.thetas.unrank(i);
    };
    Witness w;
    w.frame = sp_from_json(j.at("frame"));
    for (const auto& [key, idx] : j.at("labeling").items()) {
      WorldId id = 0;
      try {
        id = static_cast<WorldId>(std::stoul(key));
      } catch (const std::exception&) {
        throw ModelError("labeling key '" + key + "' is not a world id");
      }
      w.labeling.emplace(id, theta(idx));
    }
    w.failing_world = j.at("failing_world").get<WorldId>();
    w.theta_a = theta(j.at("theta_a"));
    return w;
  });
}

json to_json(const Countermodel& cm) {
  json j = to_json(cm.model);
  j["world"] = cm.world;
  return j;
}

json to_json(const SliceModel& sm) {
  json j;
  j["agents"] = sm.catalogue.agents;
  json cs = json::array();
  const Frame& f = sm.model.frame;
  for (std::size_t c = 0; c < f.cluster_count(); ++c) {
    json cj = cluster_json(f.cluster(c));
    cj["next"] = f.next(c);
    cj["layer"] = sm.clusters[c].layer;
    cj["catalogue"] = sm.clusters[c].entry;
    cs.push_back(cj);
  }
  j["clusters"] = cs;
  json val = json::object();
  for (const auto& [v, s] : sm.model.valuation) val["p" + std::to_string(v)] = std::vector<WorldId>(s.begin(), s.end());
  j["valuation"] = val;
  j["slices"] = json{{"vars", sm.catalogue.vars},
                     {"max_cluster", sm.catalogue.max_cluster},
                     {"catalogue_size", sm.catalogue.entries.size()},
                     {"depth", sm.depth},
                     {"step2_all", sm.step2_all},
                     {"layer_counts", sm.layer_counts()}};
  return j;
}

json nf_to_json(const ReducedRule& rr, std::size_t max_thetas) {
  json j;
  j["m"] = rr.var_count;
  j["k"] = rr.agents;
  j["count"] = index_to_json(rr.thetas.size());
  json origin = json::array();
  for (const auto& o : rr.origin) origin.push_back(to_string(o, VarStyle::X));
  j["origin"] = origin;
  j["premise_var"] = rr.premise_var;
  if (rr.thetas.size() <= max_thetas) {
    json ts = json::array();
    for (BigCount i = 0; i < rr.thetas.size(); ++i) ts.push_back(rr.thetas.unrank(i).signs());
    j["thetas"] = ts;
  }
  j["constrained_positions"] = rr.thetas.constrained();
  j["core"] = rr.thetas.core();
  j["free_positions"] = rr.thetas.free_positions();
  return j;
}

}  // namespace ltk
