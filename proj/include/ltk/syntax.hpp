#ifndef LTK_SYNTAX_HPP
#define LTK_SYNTAX_HPP

// Formulas, rules and substitutions of the linear temporal-epistemic
// language with modalities [T] (time), [E] (environment) and [A1]..[Ak]
// (agents).  Diamonds are not primitive: <X> A is stored as ~[X]~A and the
// printer folds the pattern back.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltk {

enum class Op : std::uint8_t {
  Var,
  Top,
  Bottom,
  Not,
  And,
  Or,
  Implies,
  BoxT,
  BoxE,
  BoxAgent,
};

/// Modality selector used where the three box families are handled
/// uniformly.  `Agent` carries its agent number separately.
enum class Modality : std::uint8_t { Time, Env, Agent };

class Formula {
 public:
  static Formula var(unsigned index);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula box_t(Formula f);
  static Formula box_e(Formula f);
  static Formula box_agent(unsigned agent, Formula f);
  static Formula box(Modality m, unsigned agent, Formula f);
  static Formula dia_t(Formula f);
  static Formula dia_e(Formula f);
  static Formula dia_agent(unsigned agent, Formula f);

  /// The constant T.
  Formula();

  Op op() const;
  /// Variable index for Var, agent number (1-based) for BoxAgent, 0 otherwise.
  unsigned index() const;
  bool is_box() const {
    return op() == Op::BoxT || op() == Op::BoxE || op() == Op::BoxAgent;
  }
  bool is_binary() const {
    return op() == Op::And || op() == Op::Or || op() == Op::Implies;
  }
  /// Operand of unary nodes, left operand of binary nodes.
  const Formula& lhs() const;
  const Formula& rhs() const;
  std::size_t hash() const;
  std::size_t node_count() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  /// Structural total order; used for sets and canonical enumeration.
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
  static int compare(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, unsigned index, const Formula* l, const Formula* r);

  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Op op;
  unsigned index = 0;
  std::vector<Formula> kids;
  std::size_t hash = 0;
  std::size_t size = 1;
};

inline Op Formula::op() const { return node_->op; }
inline unsigned Formula::index() const { return node_->index; }
inline std::size_t Formula::hash() const { return node_->hash; }
inline std::size_t Formula::node_count() const { return node_->size; }

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// A consecution  prem_1 ; ... ; prem_n / conclusion.
struct Rule {
  std::vector<Formula> premises;
  Formula conclusion;

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.premises == b.premises && a.conclusion == b.conclusion;
  }
};

using Substitution = std::map<unsigned, Formula>;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

class SubstitutionError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses either a formula or a rule (recognised by a top-level `;` or `/`).
/// `agents` bounds the admissible agent indices in [Al] / <Al>.
std::variant<Formula, Rule> parse(std::string_view text, unsigned agents);
Formula parse_formula(std::string_view text, unsigned agents);
Rule parse_rule(std::string_view text, unsigned agents);

enum class VarStyle { P, X };

/// Canonical text.  Formulas print variables as p<n>, rules as x<n>.
std::string to_string(const Formula& f, VarStyle style = VarStyle::P);
std::string to_string(const Rule& r);

unsigned time_degree(const Formula& f);
/// Number of nested boxes of any kind.
unsigned modal_depth(const Formula& f);
/// Largest agent index mentioned, 0 if none.
unsigned max_agent(const Formula& f);

Formula apply_substitution(const Substitution& s, const Formula& f);
Rule apply_substitution(const Substitution& s, const Rule& r);

std::set<Formula> subformulas(const Formula& f);
std::set<unsigned> variables(const Formula& f);
std::set<unsigned> variables(const Rule& r);

}  // namespace ltk

#endif  // LTK_SYNTAX_HPP
