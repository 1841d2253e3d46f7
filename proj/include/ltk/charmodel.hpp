#ifndef LTK_CHARMODEL_HPP
#define LTK_CHARMODEL_HPP

// Finite slices of the n-characterizing model.  Layer 1 holds one copy of
// every catalogue cluster (these clusters are final: no time successors);
// layer j+1 hangs cluster copies in front of each layer-j cluster as its
// immediate time predecessors.  Layer 2 only uses entries not isomorphic to
// the cluster they precede, later layers use every entry.

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "ltk/clusters.hpp"
#include "ltk/kripke.hpp"

namespace ltk {

/// Single-cluster models over p1..pn up to isomorphism.  An entry's
/// `labels[j]` has bit v-1 set when p_v is true at world j.
struct ClusterCatalogue {
  unsigned vars = 0;
  std::size_t max_cluster = 1;
  unsigned agents = 0;
  std::vector<ClusterType> entries;
};

ClusterCatalogue build_catalogue(unsigned vars, std::size_t max_cluster, unsigned agents);

struct SliceCluster {
  std::size_t layer = 1;
  std::optional<std::size_t> successor;   // index into SliceModel::clusters
  std::size_t entry = 0;                  // catalogue index
};

struct SliceModel {
  ClusterCatalogue catalogue;
  std::size_t depth = 1;
  bool step2_all = false;
  /// Cluster c of model.frame is clusters[c].
  std::vector<SliceCluster> clusters;
  Model model;

  std::size_t layer_of(WorldId w) const;
  /// Number of clusters per layer, index 0 = layer 1.
  std::vector<std::size_t> layer_counts() const;
};

/// `step2_all` makes layer 2 use every entry, like the later layers.
SliceModel build_slices(const ClusterCatalogue& cat, std::size_t depth, bool step2_all = false);

struct McReport {
  std::set<WorldId> holds_at;
  std::set<WorldId> refuted_at;
  std::set<WorldId> evaluable_at;
};

/// Evaluates f at the worlds whose layer is above td(f); throws
/// std::invalid_argument when f uses a variable beyond p_n.
McReport mc_on_slices(const SliceModel& sm, const Formula& f);

/// Classes of t-round bisimilarity over R_T, R_E and every R_l, each class
/// sorted, classes ordered by their least world.
std::vector<std::vector<WorldId>> bounded_bisim_classes(const SliceModel& sm, std::size_t t);
std::vector<std::vector<WorldId>> bounded_bisim_classes(const Model& m, unsigned vars, std::size_t t);

/// Pairs of distinct worlds in one cluster with the same valuation whose
/// swap preserves every agent partition (same block, or both alone).
std::vector<std::pair<WorldId, WorldId>> duplicate_pairs(const SliceModel& sm);

}  // namespace ltk

#endif
