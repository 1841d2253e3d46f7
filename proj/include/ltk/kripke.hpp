#ifndef LTK_KRIPKE_HPP
#define LTK_KRIPKE_HPP

// Finite frames built from time clusters.  A frame stores clusters, the
// agent partitions inside each cluster, and cluster-level successor edges;
// the relations themselves are always derived:
//
//   w R_T z  iff  z is in w's cluster, or z is in a successor cluster of w's
//   w R_E z  iff  same cluster
//   w R_l z  iff  same block of agent l's partition
//
// A linear chain (`Frame::chain`) has the edge C_n -> C_{n+1}.  The same type
// also carries the converging forests of the characterizing-model slices and
// the frames used as admissibility witnesses.

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ltk/syntax.hpp"

namespace ltk {

using WorldId = std::uint32_t;
/// Set of worlds over the dense (0..N-1) indexing of a frame.
using WorldSet = boost::dynamic_bitset<std::uint64_t>;
using Block = std::vector<WorldId>;
using Partition = std::vector<Block>;

class ModelError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Cluster {
  std::vector<WorldId> worlds;
  /// partitions[l-1] is agent l's partition of `worlds`.
  std::vector<Partition> partitions;

  /// Cluster whose every agent sees the whole cluster.
  static Cluster uniform(std::vector<WorldId> worlds, unsigned agents);
};

class Frame {
 public:
  Frame() = default;
  Frame(std::vector<Cluster> clusters, std::vector<std::vector<std::size_t>> next,
        unsigned agents);

  static Frame chain(std::vector<Cluster> clusters, unsigned agents);

  unsigned agents() const { return agents_; }
  std::size_t world_count() const { return ids_.size(); }
  std::size_t cluster_count() const { return clusters_.size(); }
  const Cluster& cluster(std::size_t c) const { return clusters_[c]; }
  const std::vector<Cluster>& clusters() const { return clusters_; }
  const std::vector<std::size_t>& next(std::size_t c) const { return next_[c]; }
  /// True when cluster c's only successor is c+1 (and the last has none).
  bool is_chain() const;

  bool has_world(WorldId w) const { return dense_.count(w) != 0; }
  std::size_t index_of(WorldId w) const;
  WorldId id_at(std::size_t dense) const { return ids_[dense]; }
  const std::vector<WorldId>& world_ids() const { return ids_; }
  std::size_t cluster_of(std::size_t dense) const { return cluster_of_[dense]; }
  /// Dense indices of the worlds of cluster c.
  const std::vector<std::size_t>& members(std::size_t c) const { return members_[c]; }
  std::size_t block_count(unsigned agent) const { return blocks_[agent - 1].size(); }
  std::size_t block_of(std::size_t dense, unsigned agent) const {
    return block_of_[agent - 1][dense];
  }
  const std::vector<std::size_t>& block_members(unsigned agent, std::size_t b) const {
    return blocks_[agent - 1][b];
  }

  WorldSet empty_set() const { return WorldSet(world_count()); }
  WorldSet to_set(const std::set<WorldId>& worlds) const;
  std::set<WorldId> to_ids(const WorldSet& s) const;

 private:
  unsigned agents_ = 0;
  std::vector<Cluster> clusters_;
  std::vector<std::vector<std::size_t>> next_;
  std::vector<WorldId> ids_;
  std::map<WorldId, std::size_t> dense_;
  std::vector<std::size_t> cluster_of_;
  std::vector<std::vector<std::size_t>> members_;
  std::vector<std::vector<std::size_t>> block_of_;               // [agent][dense]
  std::vector<std::vector<std::vector<std::size_t>>> blocks_;    // [agent][block]
};

using Valuation = std::map<unsigned, std::set<WorldId>>;

struct Model {
  Frame frame;
  Valuation valuation;
};

/// Evaluates a fixed set of formulas on a fixed frame, repeatedly, under
/// changing valuations.  All subformulas are shared and computed bottom-up
/// as world sets.
class Evaluator {
 public:
  Evaluator(const Frame& frame, std::vector<Formula> roots);

  /// Variables mentioned by the roots, ascending; `run` takes one set per entry.
  const std::vector<unsigned>& variables() const { return vars_; }
  void run(const std::vector<WorldSet>& slots);
  void run(const Valuation& valuation);
  const WorldSet& result(std::size_t root) const { return values_[root_nodes_[root]]; }

 private:
  struct Node {
    Op op;
    unsigned index;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
  };
  std::size_t compile(const Formula& f, std::map<Formula, std::size_t>& seen);
  void box(const Node& n, const WorldSet& arg, WorldSet& out) const;

  const Frame* frame_;
  std::vector<Node> nodes_;
  std::vector<WorldSet> values_;
  std::vector<std::size_t> root_nodes_;
  std::vector<unsigned> vars_;
  std::map<unsigned, std::size_t> slot_of_var_;
};

std::vector<WorldId> rt_successors(const Frame& frame, WorldId w);

bool satisfies(const Model& model, WorldId w, const Formula& f);
/// Worlds of the model where f holds.
std::set<WorldId> truth_set(const Model& model, const Formula& f);
bool formula_valid_on_model(const Model& model, const Formula& f);

/// Global rule validity: every valuation of the rule's variables that makes
/// all premises true everywhere makes the conclusion true everywhere.
bool rule_valid_on_frame(const Frame& frame, const Rule& rule);

/// A frame given by explicit relations, as read from external data.
struct RelationalFrame {
  using Relation = std::set<std::pair<WorldId, WorldId>>;
  std::set<WorldId> worlds;
  Relation time;
  Relation env;
  std::vector<Relation> agent;   // agent[l-1]
};

RelationalFrame to_relational(const Frame& frame);

struct Violation {
  std::string condition;
  std::string detail;
};

/// Checks that the relations form a linear chain of time clusters with
/// reflexive intransitive time, universal environment relation inside each
/// cluster, agent equivalences inside clusters, and the three inclusions
/// linking them.  Empty result means well-formed.
std::vector<Violation> check_well_formed(const RelationalFrame& frame);
std::vector<Violation> check_well_formed(const Frame& frame);

}  // namespace ltk

#endif  // LTK_KRIPKE_HPP
