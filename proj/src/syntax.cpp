#include "ltk/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

namespace ltk {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Formula Formula::make(Op op, unsigned index, const Formula* l, const Formula* r) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->index = index;
  std::size_t h = mix(static_cast<std::size_t>(op) * 31 + 7, index);
  if (l) {
    n->kids.push_back(*l);
    h = mix(h, l->hash());
    n->size += l->node_count();
  }
  if (r) {
    n->kids.push_back(*r);
    h = mix(h, r->hash());
    n->size += r->node_count();
  }
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::var(unsigned index) { return make(Op::Var, index, nullptr, nullptr); }
Formula::Formula() : Formula(top()) {}

Formula Formula::top() { return make(Op::Top, 0, nullptr, nullptr); }
Formula Formula::bottom() { return make(Op::Bottom, 0, nullptr, nullptr); }
Formula Formula::negation(Formula f) { return make(Op::Not, 0, &f, nullptr); }
Formula Formula::conj(Formula a, Formula b) { return make(Op::And, 0, &a, &b); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::Or, 0, &a, &b); }
Formula Formula::implies(Formula a, Formula b) { return make(Op::Implies, 0, &a, &b); }
Formula Formula::box_t(Formula f) { return make(Op::BoxT, 0, &f, nullptr); }
Formula Formula::box_e(Formula f) { return make(Op::BoxE, 0, &f, nullptr); }
Formula Formula::box_agent(unsigned agent, Formula f) {
  return make(Op::BoxAgent, agent, &f, nullptr);
}
Formula Formula::box(Modality m, unsigned agent, Formula f) {
  switch (m) {
    case Modality::Time: return box_t(std::move(f));
    case Modality::Env: return box_e(std::move(f));
    case Modality::Agent: return box_agent(agent, std::move(f));
  }
  return box_t(std::move(f));
}
Formula Formula::dia_t(Formula f) { return negation(box_t(negation(std::move(f)))); }
Formula Formula::dia_e(Formula f) { return negation(box_e(negation(std::move(f)))); }
Formula Formula::dia_agent(unsigned agent, Formula f) {
  return negation(box_agent(agent, negation(std::move(f))));
}

const Formula& Formula::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("formula has no operand");
  return node_->kids[0];
}

const Formula& Formula::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("formula has no right operand");
  return node_->kids[1];
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.node_count() != b.node_count()) return false;
  return Formula::compare(a, b) == 0;
}

int Formula::compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.op() != b.op()) return a.op() < b.op() ? -1 : 1;
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  const auto& ka = a.node_->kids;
  const auto& kb = b.node_->kids;
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (int c = compare(ka[i], kb[i]); c != 0) return c;
  }
  return 0;
}

// ── Parser ──────────────────────────────────────────────────────────────────
// formula := impl
// impl    := disj ('->' impl)?
// disj    := conj ('|' conj)*
// conj    := unary ('&' unary)*
// unary   := '~' unary | box unary | dia unary | atom | '(' formula ')'

namespace {

enum class Tok { End, Var, Top, Bottom, Not, And, Or, Implies, Box, Dia, LParen, RParen, Semi, Slash };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  unsigned number = 0;               // variable index or agent index
  Modality modality = Modality::Time;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.offset = pos_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (c == 'p' || c == 'x') {
        ++pos_;
        t.kind = Tok::Var;
        t.number = digits("variable index");
      } else if (c == 'T') {
        ++pos_;
        t.kind = Tok::Top;
      } else if (c == 'F') {
        ++pos_;
        t.kind = Tok::Bottom;
      } else if (c == '~') {
        ++pos_;
        t.kind = Tok::Not;
      } else if (c == '&') {
        ++pos_;
        t.kind = Tok::And;
      } else if (c == '|') {
        ++pos_;
        t.kind = Tok::Or;
      } else if (c == '-') {
        if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '>') throw ParseError("expected '->'", pos_);
        pos_ += 2;
        t.kind = Tok::Implies;
      } else if (c == '(') {
        ++pos_;
        t.kind = Tok::LParen;
      } else if (c == ')') {
        ++pos_;
        t.kind = Tok::RParen;
      } else if (c == ';') {
        ++pos_;
        t.kind = Tok::Semi;
      } else if (c == '/') {
        ++pos_;
        t.kind = Tok::Slash;
      } else if (c == '[' || c == '<') {
        t.kind = c == '[' ? Tok::Box : Tok::Dia;
        const char close = c == '[' ? ']' : '>';
        ++pos_;
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unterminated modality", t.offset);
        char m = text_[pos_];
        if (m == 'T') {
          ++pos_;
          t.modality = Modality::Time;
        } else if (m == 'E') {
          ++pos_;
          t.modality = Modality::Env;
        } else if (m == 'A') {
          ++pos_;
          t.modality = Modality::Agent;
          t.number = digits("agent index");
        } else {
          throw ParseError("unknown modality", pos_);
        }
        skip_space();
        if (pos_ >= text_.size() || text_[pos_] != close)
          throw ParseError(std::string("expected '") + close + "'", pos_);
        ++pos_;
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
      }
      out.push_back(t);
    }
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  unsigned digits(const char* what) {
    std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (value > 1000000) throw ParseError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError(std::string("expected ") + what, start);
    return static_cast<unsigned>(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, unsigned agents) : toks_(std::move(toks)), agents_(agents) {}

  std::variant<Formula, Rule> any() {
    Formula first = formula();
    if (peek().kind == Tok::End) return first;
    Rule r{{first}, first};
    while (peek().kind == Tok::Semi) {
      next();
      r.premises.push_back(formula());
    }
    expect(Tok::Slash, "expected '/' or ';'");
    r.conclusion = formula();
    expect(Tok::End, "trailing input");
    return r;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }
  void expect(Tok k, const char* msg) {
    if (peek().kind != k) throw ParseError(msg, peek().offset);
    next();
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (peek().kind == Tok::Implies) {
      next();
      return Formula::implies(lhs, formula());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Or) {
      next();
      f = Formula::disj(f, conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::And) {
      next();
      f = Formula::conj(f, unary());
    }
    return f;
  }

  Formula unary() {
    const Token t = next();
    switch (t.kind) {
      case Tok::Not: return Formula::negation(unary());
      case Tok::Box:
      case Tok::Dia: {
        check_agent(t);
        Formula operand = unary();
        if (t.kind == Tok::Box) return Formula::box(t.modality, t.number, operand);
        return Formula::negation(Formula::box(t.modality, t.number, Formula::negation(operand)));
      }
      case Tok::Var: return Formula::var(t.number);
      case Tok::Top: return Formula::top();
      case Tok::Bottom: return Formula::bottom();
      case Tok::LParen: {
        Formula f = formula();
        expect(Tok::RParen, "expected ')'");
        return f;
      }
      case Tok::End: throw ParseError("unexpected end of input", t.offset);
      default: throw ParseError("unexpected token", t.offset);
    }
  }

  void check_agent(const Token& t) const {
    if (t.modality != Modality::Agent) return;
    if (t.number == 0 || t.number > agents_)
      throw ParseError("agent index " + std::to_string(t.number) + " outside 1.." +
                           std::to_string(agents_),
                       t.offset);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  unsigned agents_;
};

// ── Printer ─────────────────────────────────────────────────────────────────

int precedence(const Formula& f) {
  switch (f.op()) {
    case Op::Implies: return 1;
    case Op::Or: return 2;
    case Op::And: return 3;
    case Op::Var:
    case Op::Top:
    case Op::Bottom: return 5;
    default: return 4;
  }
}

std::string modality_tag(const Formula& box) {
  switch (box.op()) {
    case Op::BoxT: return "T";
    case Op::BoxE: return "E";
    default: return "A" + std::to_string(box.index());
  }
}

void print(const Formula& f, VarStyle style, std::string& out);

void print_operand(const Formula& f, int min_prec, VarStyle style, std::string& out) {
  if (precedence(f) < min_prec) {
    out += '(';
    print(f, style, out);
    out += ')';
  } else {
    print(f, style, out);
  }
}

void print(const Formula& f, VarStyle style, std::string& out) {
  switch (f.op()) {
    case Op::Var:
      out += style == VarStyle::P ? 'p' : 'x';
      out += std::to_string(f.index());
      return;
    case Op::Top: out += 'T'; return;
    case Op::Bottom: out += 'F'; return;
    case Op::Not: {
      const Formula& g = f.lhs();
      if (g.is_box() && g.lhs().op() == Op::Not) {
        out += '<' + modality_tag(g) + "> ";
        print_operand(g.lhs().lhs(), 4, style, out);
        return;
      }
      out += '~';
      print_operand(g, 4, style, out);
      return;
    }
    case Op::BoxT:
    case Op::BoxE:
    case Op::BoxAgent:
      out += '[' + modality_tag(f) + "] ";
      print_operand(f.lhs(), 4, style, out);
      return;
    case Op::And:
    case Op::Or:
    case Op::Implies: {
      const int p = precedence(f);
      const bool right_assoc = f.op() == Op::Implies;
      print_operand(f.lhs(), right_assoc ? p + 1 : p, style, out);
      out += f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " -> ";
      print_operand(f.rhs(), right_assoc ? p : p + 1, style, out);
      return;
    }
  }
}

}  // namespace

std::variant<Formula, Rule> parse(std::string_view text, unsigned agents) {
  Parser p(Lexer(text).run(), agents);
  return p.any();
}

Formula parse_formula(std::string_view text, unsigned agents) {
  auto v = parse(text, agents);
  if (auto* f = std::get_if<Formula>(&v)) return *f;
  throw ParseError("expected a formula, found a rule", 0);
}

Rule parse_rule(std::string_view text, unsigned agents) {
  auto v = parse(text, agents);
  if (auto* r = std::get_if<Rule>(&v)) return *r;
  throw ParseError("expected a rule 'premises / conclusion'", text.size());
}

std::string to_string(const Formula& f, VarStyle style) {
  std::string out;
  print(f, style, out);
  return out;
}

std::string to_string(const Rule& r) {
  std::string out;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) out += " ; ";
    print(r.premises[i], VarStyle::X, out);
  }
  out += " / ";
  print(r.conclusion, VarStyle::X, out);
  return out;
}

unsigned time_degree(const Formula& f) {
  switch (f.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bottom: return 0;
    case Op::BoxT: return time_degree(f.lhs()) + 1;
    case Op::Not:
    case Op::BoxE:
    case Op::BoxAgent: return time_degree(f.lhs());
    default: return std::max(time_degree(f.lhs()), time_degree(f.rhs()));
  }
}

unsigned modal_depth(const Formula& f) {
  switch (f.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bottom: return 0;
    case Op::Not: return modal_depth(f.lhs());
    case Op::BoxT:
    case Op::BoxE:
    case Op::BoxAgent: return modal_depth(f.lhs()) + 1;
    default: return std::max(modal_depth(f.lhs()), modal_depth(f.rhs()));
  }
}

unsigned max_agent(const Formula& f) {
  switch (f.op()) {
    case Op::Var:
    case Op::Top:
    case Op::Bottom: return 0;
    case Op::BoxAgent: return std::max(f.index(), max_agent(f.lhs()));
    case Op::Not:
    case Op::BoxT:
    case Op::BoxE: return max_agent(f.lhs());
    default: return std::max(max_agent(f.lhs()), max_agent(f.rhs()));
  }
}

Formula apply_substitution(const Substitution& s, const Formula& f) {
  switch (f.op()) {
    case Op::Var: {
      auto it = s.find(f.index());
      if (it == s.end())
        throw SubstitutionError("substitution does not cover variable " + std::to_string(f.index()));
      return it->second;
    }
    case Op::Top:
    case Op::Bottom: return f;
    case Op::Not: return Formula::negation(apply_substitution(s, f.lhs()));
    case Op::BoxT: return Formula::box_t(apply_substitution(s, f.lhs()));
    case Op::BoxE: return Formula::box_e(apply_substitution(s, f.lhs()));
    case Op::BoxAgent: return Formula::box_agent(f.index(), apply_substitution(s, f.lhs()));
    case Op::And: return Formula::conj(apply_substitution(s, f.lhs()), apply_substitution(s, f.rhs()));
    case Op::Or: return Formula::disj(apply_substitution(s, f.lhs()), apply_substitution(s, f.rhs()));
    case Op::Implies:
      return Formula::implies(apply_substitution(s, f.lhs()), apply_substitution(s, f.rhs()));
  }
  return f;
}

Rule apply_substitution(const Substitution& s, const Rule& r) {
  Rule out{{}, apply_substitution(s, r.conclusion)};
  for (const auto& p : r.premises) out.premises.push_back(apply_substitution(s, p));
  return out;
}

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (!out.insert(g).second) return;
    if (g.op() == Op::Var || g.op() == Op::Top || g.op() == Op::Bottom) return;
    walk(g.lhs());
    if (g.is_binary()) walk(g.rhs());
  };
  walk(f);
  return out;
}

std::set<unsigned> variables(const Formula& f) {
  std::set<unsigned> out;
  for (const auto& g : subformulas(f))
    if (g.op() == Op::Var) out.insert(g.index());
  return out;
}

std::set<unsigned> variables(const Rule& r) {
  std::set<unsigned> out = variables(r.conclusion);
  for (const auto& p : r.premises) out.merge(variables(p));
  return out;
}

}  // namespace ltk
