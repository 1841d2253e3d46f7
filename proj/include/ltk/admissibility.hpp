#ifndef LTK_ADMISSIBILITY_HPP
#define LTK_ADMISSIBILITY_HPP

// Admissibility and theoremhood via witness frames.
//
// An SP-frame is a main chain C_0 -> ... -> C_d, a top world @ seen from
// every world of C_d, and for each i a tail of singleton worlds
// w^i_1 -> ... -> w^i_J (J >= 2) whose last world sees every world of C_i.
// A rule in reduced form fails to be admissible iff some SP-frame carries a
// labeling by its thetas such that
//   1. x0 is false somewhere,
//   2. every world satisfies its own label,
//   3. one theta labels @ and the first two worlds of every tail,
//   4. the worlds of C_d carry pairwise distinct labels,
//   5. C_d is not isomorphic to the single world @.
// The decider also accepts the degenerate frame made of @ alone (no main
// chain, no tails), for which conditions 4 and 5 are vacuous: a rule that
// fails on a one-point model under a premise-satisfying valuation is refuted
// by the substitution of T/F read off that point.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ltk/clusters.hpp"
#include "ltk/kripke.hpp"
#include "ltk/normal_form.hpp"

namespace ltk {

struct SearchBounds {
  std::uint64_t max_d = 0;
  std::uint64_t max_cluster_size = 1;
  std::uint64_t max_tail_len = 2;

  /// Defaults for a theta set of size s (see README for the caps).
  static SearchBounds defaults_for(const BigCount& s);
  /// Throws std::invalid_argument when a bound is out of range.
  void validate() const;

  friend bool operator==(const SearchBounds&, const SearchBounds&) = default;
};

/// Reading of condition 5.  `Model` compares the literal valuation of the
/// one-world C_d with @, `Frame` only the frame (so |C_d| >= 2 is needed).
enum class IsoMode { Model, Frame };

class SpFrame {
 public:
  SpFrame() = default;
  /// main[i] is C_i; tails[i] lists the worlds of tail i from w^i_1 on.
  /// Both empty gives the degenerate frame.
  SpFrame(std::vector<Cluster> main, std::vector<std::vector<WorldId>> tails, WorldId top,
          unsigned agents);

  /// Builds fresh ids: C_0..C_d first, then the tails in order, then @.
  static SpFrame from_types(const std::vector<ClusterType>& main,
                            const std::vector<std::size_t>& tail_lengths, unsigned agents);

  /// The frame consisting of @ alone.
  bool degenerate() const { return main_.empty(); }
  /// Index of the last main cluster; meaningless for degenerate frames.
  std::size_t d() const { return main_.size() - 1; }
  unsigned agents() const { return frame_.agents(); }
  const std::vector<Cluster>& main() const { return main_; }
  const std::vector<std::vector<WorldId>>& tails() const { return tails_; }
  WorldId top() const { return top_; }
  /// The whole SP-frame as a cluster frame (tail worlds and @ are singleton clusters).
  const Frame& frame() const { return frame_; }
  /// Cluster index in frame() of C_i.
  std::size_t main_cluster(std::size_t i) const { return i; }

 private:
  std::vector<Cluster> main_;
  std::vector<std::vector<WorldId>> tails_;
  WorldId top_ = 0;
  Frame frame_;
};

/// SP-frames within bounds, up to isomorphism, ordered by d, cluster sizes,
/// tail lengths, then agent partitions.  Returning false from `visit` stops.
void enumerate_sp_frames(const SearchBounds& bounds, unsigned agents,
                         const std::function<bool(const SpFrame&)>& visit);
std::vector<SpFrame> enumerate_sp_frames(const SearchBounds& bounds, unsigned agents);

using Labeling = std::map<WorldId, Theta>;

struct Witness {
  SpFrame frame;
  Labeling labeling;
  WorldId failing_world = 0;
  Theta theta_a{ThetaShape{}, {}};
};

struct WitnessReport {
  bool ok = true;
  /// (condition number, detail); condition 0 marks a malformed frame.
  std::vector<std::pair<int, std::string>> violations;
};

/// Re-checks all five conditions under the valuation induced by the labels.
/// Throws std::invalid_argument when a world is unlabelled or a label is
/// not a member of the rule's theta set.
WitnessReport check_witness(const ReducedRule& rr, const Witness& w, IsoMode mode = IsoMode::Model);

struct DecideOptions {
  std::optional<SearchBounds> bounds;
  IsoMode cond5 = IsoMode::Model;
  unsigned jobs = 1;
};

struct Verdict {
  ReducedRule reduced;
  SearchBounds bounds;
  std::optional<Witness> witness;   // empty means admissible within bounds

  bool admissible() const { return !witness.has_value(); }
};

Verdict decide_admissible(const Rule& rule, unsigned agents, const DecideOptions& opts = {});

/// Chain model plus refuting world.
struct Countermodel {
  Model model;
  WorldId world = 0;
};

struct TheoremVerdict {
  Verdict verdict;   // for the rule  T / f
  std::optional<Countermodel> countermodel;

  bool theorem() const { return verdict.admissible(); }
};

TheoremVerdict decide_theorem(const Formula& f, unsigned agents, const DecideOptions& opts = {});

/// Extracts a chain countermodel for f from a witness for  T / f: the
/// forward cone of the failing world, valuation read off the labels.
Countermodel countermodel_from_witness(const ReducedRule& rr, const Witness& w);

}  // namespace ltk

#endif
