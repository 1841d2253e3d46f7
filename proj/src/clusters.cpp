#include "ltk/clusters.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ltk {

std::size_t ClusterType::size() const {
  if (!rgs.empty()) return rgs.front().size();
  return labels.size();
}

std::vector<Rgs> set_partitions(std::size_t n) {
  std::vector<Rgs> out;
  Rgs cur(n, 0);
  // successor: bump the rightmost cur[j] that is <= max(cur[0..j-1])
  while (true) {
    out.push_back(cur);
    std::size_t j = n;
    bool bumped = false;
    while (j > 1 && !bumped) {
      --j;
      std::uint8_t mx = *std::max_element(cur.begin(), cur.begin() + static_cast<long>(j));
      if (cur[j] <= mx) {
        ++cur[j];
        std::fill(cur.begin() + static_cast<long>(j) + 1, cur.end(), 0);
        bumped = true;
      }
    }
    if (!bumped) return out;
  }
}

namespace {

Rgs normalise(const Rgs& blocks) {
  Rgs out(blocks.size());
  std::vector<int> rename(256, -1);
  int next = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (rename[blocks[j]] < 0) rename[blocks[j]] = next++;
    out[j] = static_cast<std::uint8_t>(rename[blocks[j]]);
  }
  return out;
}

}  // namespace

ClusterType canonical(const ClusterType& t) {
  const std::size_t n = t.size();
  if (n > 8) throw std::invalid_argument("cluster canonical form limited to 8 worlds");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  ClusterType best;
  bool have = false;
  do {
    ClusterType c;
    if (!t.labels.empty())
      for (std::size_t j = 0; j < n; ++j) c.labels.push_back(t.labels[perm[j]]);
    for (const Rgs& r : t.rgs) {
      Rgs permuted(n);
      for (std::size_t j = 0; j < n; ++j) permuted[j] = r[perm[j]];
      c.rgs.push_back(normalise(permuted));
    }
    if (!have || c < best) {
      best = std::move(c);
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<ClusterType> cluster_types(std::size_t size, unsigned agents) {
  const auto parts = set_partitions(size);
  std::set<ClusterType> found;
  std::vector<std::size_t> odo(agents, 0);
  while (true) {
    ClusterType t;
    for (unsigned l = 0; l < agents; ++l) t.rgs.push_back(parts[odo[l]]);
    if (agents == 0) t.labels.assign(size, 0);
    found.insert(canonical(t));
    unsigned l = agents;
    bool done = true;
    while (l > 0) {
      --l;
      if (++odo[l] < parts.size()) {
        done = false;
        break;
      }
      odo[l] = 0;
    }
    if (done) break;
  }
  std::vector<ClusterType> out(found.begin(), found.end());
  if (agents == 0)
    for (auto& t : out) t.labels.clear();
  return out;
}

Cluster make_cluster(const ClusterType& t, WorldId first) {
  Cluster c;
  const std::size_t n = t.size();
  for (std::size_t j = 0; j < n; ++j) c.worlds.push_back(first + static_cast<WorldId>(j));
  for (const Rgs& r : t.rgs) {
    std::uint8_t blocks = 0;
    for (auto b : r) blocks = std::max<std::uint8_t>(blocks, static_cast<std::uint8_t>(b + 1));
    Partition p(blocks);
    for (std::size_t j = 0; j < n; ++j) p[r[j]].push_back(c.worlds[j]);
    c.partitions.push_back(std::move(p));
  }
  return c;
}

ClusterType type_of(const Frame& frame, std::size_t cluster) {
  ClusterType t;
  const auto& mem = frame.members(cluster);
  for (unsigned l = 1; l <= frame.agents(); ++l) {
    Rgs r;
    for (std::size_t d : mem) r.push_back(static_cast<std::uint8_t>(frame.block_of(d, l)));
    t.rgs.push_back(normalise(r));
  }
  if (frame.agents() == 0) t.labels.assign(mem.size(), 0);
  return canonical(t);
}

}  // namespace ltk
