#ifndef LTK_CLUSTERS_HPP
#define LTK_CLUSTERS_HPP

// Isomorphism types of single clusters.  A cluster of n worlds with k agents
// is described by k restricted-growth strings (rgs[l][j] = block number of
// world j for agent l+1, blocks numbered in order of first appearance).  The
// canonical form is the lexicographically least description over all
// renamings of the worlds, optionally together with a per-world label
// (e.g. a valuation bit vector).

#include <compare>
#include <cstdint>
#include <vector>

#include "ltk/kripke.hpp"

namespace ltk {

using Rgs = std::vector<std::uint8_t>;

struct ClusterType {
  std::vector<std::uint32_t> labels;   // empty when unlabelled
  std::vector<Rgs> rgs;                // one per agent
  std::size_t size() const;

  auto operator<=>(const ClusterType&) const = default;
};

/// All set partitions of {0..n-1} as restricted-growth strings, ascending.
std::vector<Rgs> set_partitions(std::size_t n);

ClusterType canonical(const ClusterType& t);

/// Pairwise non-isomorphic unlabelled cluster types of the given size,
/// ascending in canonical order.
std::vector<ClusterType> cluster_types(std::size_t size, unsigned agents);

/// Concrete cluster with worlds first, first+1, ...
Cluster make_cluster(const ClusterType& t, WorldId first);

ClusterType type_of(const Frame& frame, std::size_t cluster);

}  // namespace ltk

#endif
