#ifndef LTK_SRC_THETA_TABLE_HPP
#define LTK_SRC_THETA_TABLE_HPP

// Search-side view of a ThetaSet.  A world's sign vector is a function of
// the literal truth vectors of the worlds it sees, so searches assign
// literal vectors (bit i = x_i true) and ask the table whether the induced
// vector is a member.

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "ltk/normal_form.hpp"

namespace ltk::detail {

using Lits = std::uint64_t;

/// Truth of the diamond atoms at one world.
struct Diamonds {
  Lits time = 0;
  Lits env = 0;
  std::vector<Lits> agent;
};

class ThetaTable {
 public:
  explicit ThetaTable(const ThetaSet& set);

  const ThetaShape& shape() const { return shape_; }
  /// Literal vectors that occur in some member, ascending.
  const std::vector<Lits>& literal_patterns() const { return patterns_; }
  bool admits(Lits lit, const Diamonds& d) const;
  Theta theta_of(Lits lit, const Diamonds& d) const;
  static bool x0_false(Lits lit) { return (lit & 1u) == 0; }

 private:
  struct Tied {
    unsigned var;
    unsigned slot;   // 1 = time, 2 = env, 2+l = agent l
  };
  std::uint64_t tied_bits(const Diamonds& d) const;

  ThetaShape shape_;
  std::vector<Tied> tied_;
  std::unordered_map<Lits, std::vector<std::uint64_t>> allowed_;   // sorted tied-truth patterns
  std::vector<Lits> patterns_;
};

/// Agent structure of a cluster: block_of[l][i] is the block of world i for agent l+1.
struct ClusterShape {
  std::size_t size = 1;
  std::vector<std::vector<std::size_t>> block_of;
};

struct ClusterAssignment {
  std::vector<Lits> lits;     // per world of the cluster
  Lits all = 0;               // union of lits
  bool x0_false = false;
};

Diamonds cluster_diamonds(const ClusterShape& shape, const std::vector<Lits>& lits,
                          std::size_t world, Lits all, Lits next_all);

/// Every literal assignment of the cluster (lexicographic over worlds in
/// literal-pattern order) whose worlds all realise members, given the union
/// of literals of the successor clusters.
std::vector<ClusterAssignment> valid_assignments(const ThetaTable& table, const ClusterShape& shape,
                                                 Lits next_all);

ClusterShape cluster_shape(const Frame& frame, std::size_t cluster);

}  // namespace ltk::detail

#endif
