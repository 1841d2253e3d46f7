#ifndef LTK_NORMAL_FORM_HPP
#define LTK_NORMAL_FORM_HPP

// Reduced normal form of a rule: a single conclusion variable x0 and a
// premise that is a disjunction of complete sign conjunctions (thetas) over
// the atoms  x_i, <T>x_i, <E>x_i, <Al>x_i.  Sign 0 keeps the atom, sign 1
// negates it.
//
// The disjunct set is usually astronomically large because most diamond
// atoms are unconstrained.  ThetaSet therefore stores it factored: the
// patterns allowed on the constrained positions (all literals plus the
// diamonds tied to boxes) times every combination of the free positions.
// Indices into the set follow lexicographic order of the full sign vector.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "ltk/kripke.hpp"
#include "ltk/syntax.hpp"

namespace ltk {

using BigCount = boost::multiprecision::cpp_int;

/// Position layout of a sign vector: var i occupies stride() consecutive
/// slots  [lit, <T>, <E>, <A1>, ..., <Ak>].
struct ThetaShape {
  unsigned vars = 0;
  unsigned agents = 0;

  std::size_t stride() const { return 3 + agents; }
  std::size_t width() const { return vars * stride(); }
  std::size_t lit(unsigned i) const { return i * stride(); }
  std::size_t dia_t(unsigned i) const { return i * stride() + 1; }
  std::size_t dia_e(unsigned i) const { return i * stride() + 2; }
  std::size_t dia_agent(unsigned i, unsigned l) const { return i * stride() + 2 + l; }
  /// Atom at a position as a formula over x-variables.
  Formula atom(std::size_t pos) const;
  std::string atom_name(std::size_t pos) const;

  friend bool operator==(const ThetaShape& a, const ThetaShape& b) {
    return a.vars == b.vars && a.agents == b.agents;
  }
};

class Theta {
 public:
  Theta(ThetaShape shape, std::vector<std::uint8_t> signs);

  const ThetaShape& shape() const { return shape_; }
  const std::vector<std::uint8_t>& signs() const { return signs_; }
  std::uint8_t sign_lit(unsigned i) const { return signs_[shape_.lit(i)]; }
  std::uint8_t sign_dt(unsigned i) const { return signs_[shape_.dia_t(i)]; }
  std::uint8_t sign_de(unsigned i) const { return signs_[shape_.dia_e(i)]; }
  std::uint8_t sign_dag(unsigned i, unsigned l) const { return signs_[shape_.dia_agent(i, l)]; }

  Formula to_formula() const;
  /// `+x0 -<T>x0 ...`
  std::string to_text() const;

  friend bool operator==(const Theta& a, const Theta& b) { return a.signs_ == b.signs_; }
  friend bool operator!=(const Theta& a, const Theta& b) { return !(a == b); }
  friend bool operator<(const Theta& a, const Theta& b) { return a.signs_ < b.signs_; }

 private:
  ThetaShape shape_;
  std::vector<std::uint8_t> signs_;
};

class ThetaSet {
 public:
  ThetaSet() = default;
  ThetaSet(ThetaShape shape, std::vector<std::size_t> constrained,
           std::vector<std::vector<std::uint8_t>> core);

  const ThetaShape& shape() const { return shape_; }
  BigCount size() const;
  bool empty() const { return core_.empty(); }
  bool contains(const Theta& t) const;
  /// Position of t in lexicographic order; throws if t is not a member.
  BigCount rank(const Theta& t) const;
  Theta unrank(const BigCount& index) const;

  const std::vector<std::size_t>& constrained() const { return constrained_; }
  std::vector<std::size_t> free_positions() const;
  /// Sign patterns on `constrained()`, ascending.
  const std::vector<std::vector<std::uint8_t>>& core() const { return core_; }

 private:
  std::vector<std::uint8_t> project(const Theta& t) const;

  ThetaShape shape_;
  std::vector<std::size_t> constrained_;
  std::vector<char> is_constrained_;
  std::vector<std::vector<std::uint8_t>> core_;
};

struct ReducedRule {
  unsigned var_count = 0;
  unsigned agents = 0;
  ThetaSet thetas;
  /// origin[i] is the subformula renamed by x_i; origin[0] is the conclusion.
  std::vector<Formula> origin;
  /// Variable standing for the conjunction of the premises.
  unsigned premise_var = 0;

  ThetaShape shape() const { return {var_count, agents}; }
};

/// Renames every subformula (plus ~B for each boxed B) by a fresh variable
/// and collects the sign vectors whose constrained part satisfies the
/// defining equivalences and the premise.  Frame-equivalent to `rule`.
ReducedRule reduce(const Rule& rule, unsigned agents);

/// Literal rule  theta_0 | theta_1 | ... / x0.  Throws when the disjunct
/// count exceeds `max_thetas`.
Rule materialize(const ReducedRule& rr, std::size_t max_thetas = 4096);

/// Sign vector realised at every world of a model whose valuation covers
/// x_0..x_{vars-1}.
std::map<WorldId, Theta> realised_thetas(const Model& model, ThetaShape shape);
bool theta_satisfied(const Model& model, WorldId w, const Theta& t);

/// Validity of the reduced rule on a chain frame, decided by a search over
/// per-cluster literal assignments rather than by enumerating thetas.
bool rule_valid_on_frame(const Frame& frame, const ReducedRule& rr);

std::string to_text(const ReducedRule& rr, std::size_t max_thetas = 4096);

}  // namespace ltk

#endif  // LTK_NORMAL_FORM_HPP
