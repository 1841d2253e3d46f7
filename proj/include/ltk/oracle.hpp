#ifndef LTK_ORACLE_HPP
#define LTK_ORACLE_HPP

// Brute-force baselines over small chain frames.  Everything here is
// exhaustive and only bounded-sound: a refutation is a proof of
// non-validity, the absence of one is just the absence of one.

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "ltk/admissibility.hpp"
#include "ltk/kripke.hpp"
#include "ltk/syntax.hpp"

namespace ltk {

struct FrameBounds {
  std::size_t max_clusters = 3;
  std::size_t max_cluster_size = 2;
  unsigned agents = 1;

  void validate() const;
};

/// Chain frames within bounds up to isomorphism, ordered by cluster count,
/// cluster sizes, then agent partitions.  Returning false from `visit` stops.
void enumerate_chain_frames(const FrameBounds& b, const std::function<bool(const Frame&)>& visit);
std::vector<Frame> enumerate_chain_frames(const FrameBounds& b);

/// First (frame, valuation, world) in enumeration order where f fails.
std::optional<Countermodel> refute_formula(const Formula& f, const FrameBounds& b);

/// Formulas of connective depth <= depth over p1..p_vars, up to commutativity
/// of & and |, ordered by depth and then construction order.
std::vector<Formula> enumerate_formulas(unsigned depth, unsigned vars, unsigned agents);

struct BruteWitness {
  Substitution substitution;
  Countermodel countermodel;   // refutes the substituted conclusion
};

/// Searches substitutions built from enumerate_formulas(subst_depth,
/// subst_vars) under which no premise is refuted within `b` while the
/// conclusion is.
std::optional<BruteWitness> brute_not_admissible(const Rule& r, unsigned subst_depth, unsigned subst_vars,
                                                 const FrameBounds& b);

/// Frame validity of r and of its reduced form agree on every frame within b.
bool equivalid_nf(const Rule& r, const FrameBounds& b);

/// Random formula over p1..p_vars of connective depth <= depth.  Uses
/// `rng() % n` so sequences are the same on every platform.
Formula random_formula(std::mt19937& rng, unsigned vars, unsigned depth, unsigned agents,
                       bool constants = true);
/// One or two premises and a conclusion, without constants.
Rule random_rule(std::mt19937& rng, unsigned vars, unsigned depth, unsigned agents);

}  // namespace ltk

#endif
