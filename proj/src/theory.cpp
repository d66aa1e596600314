#include "herbrand/theory.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace herbrand {

namespace {
constexpr std::uint64_t kNumeralLimit = 1000000;  // parse-time cap on literals
constexpr std::size_t kMatchCompletionCap = 10000;  // tuples per axiom, see relevant()
}

// ---------------------------------------------------------------------------
// Signature / pattern types
// ---------------------------------------------------------------------------

std::optional<std::size_t> Signature::predicate_arity(const std::string& name) const {
  for (const auto& p : predicates)
    if (p.name == name) return p.arity;
  return std::nullopt;
}

PatternTerm PatternTerm::var(std::string name) {
  PatternTerm t;
  t.kind_ = Kind::Var;
  t.sym_ = std::move(name);
  return t;
}

PatternTerm PatternTerm::numeral(std::uint64_t n) {
  PatternTerm t;
  t.kind_ = Kind::Numeral;
  t.num_ = n;
  return t;
}

PatternTerm PatternTerm::apply(std::string symbol, std::vector<PatternTerm> args) {
  PatternTerm t;
  t.kind_ = Kind::Apply;
  t.sym_ = std::move(symbol);
  t.args_ = std::move(args);
  return t;
}

PatternTerm PatternTerm::ground(const GroundTerm& g) {
  if (g.is_numeral()) return numeral(g.numeral_value());
  std::vector<PatternTerm> args;
  args.reserve(g.args().size());
  for (const auto& a : g.args()) args.push_back(ground(a));
  return apply(g.symbol(), std::move(args));
}

std::string PatternTerm::str() const {
  switch (kind_) {
    case Kind::Var: return sym_;
    case Kind::Numeral: return std::to_string(num_);
    case Kind::Apply: {
      if (args_.empty()) return sym_;
      std::string out = sym_ + "(";
      for (std::size_t i = 0; i < args_.size(); ++i) {
        if (i) out += ",";
        out += args_[i].str();
      }
      return out + ")";
    }
  }
  return "?";
}

std::string PatternAtom::str() const {
  if (args.empty()) return pred;
  std::string out = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].str();
  }
  return out + ")";
}

struct PatternCompound::Node {
  Kind kind = Kind::Atom;
  PatternAtom atom;
  PatternCompound left, right;
};

PatternCompound::Kind PatternCompound::kind() const { return node_->kind; }
const PatternAtom& PatternCompound::atom_ref() const { return node_->atom; }
const PatternCompound& PatternCompound::lhs() const { return node_->left; }
const PatternCompound& PatternCompound::rhs() const { return node_->right; }
const PatternCompound& PatternCompound::sub() const { return node_->left; }

PatternCompound PatternCompound::atom(PatternAtom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  PatternCompound c;
  c.node_ = std::move(n);
  return c;
}

PatternCompound PatternCompound::conj(PatternCompound l, PatternCompound r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->left = std::move(l);
  n->right = std::move(r);
  PatternCompound c;
  c.node_ = std::move(n);
  return c;
}

PatternCompound PatternCompound::disj(PatternCompound l, PatternCompound r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->left = std::move(l);
  n->right = std::move(r);
  PatternCompound c;
  c.node_ = std::move(n);
  return c;
}

PatternCompound PatternCompound::neg(PatternCompound sub) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->left = std::move(sub);
  PatternCompound c;
  c.node_ = std::move(n);
  return c;
}

std::string PatternCompound::str() const {
  switch (kind()) {
    case Kind::Atom: return atom_ref().str();
    case Kind::Not: return "~" + sub().str();
    case Kind::And: return "(" + lhs().str() + " /\\ " + rhs().str() + ")";
    case Kind::Or: return "(" + lhs().str() + " \\/ " + rhs().str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
  Ident, Int, Comma, Semi, Colon, Dot, Slash, LParen, RParen,
  Tilde, And, Or, Implies, Iff, End
};

struct Token {
  Tok kind;
  std::string text;
  std::uint64_t number = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col, msg);
  }

 private:
  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
  }

  char cur() const { return src_[pos_]; }
  bool more() const { return pos_ < src_.size(); }
  char next_char() const { return pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0'; }

  void bump(std::size_t n = 1) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }

  void advance() {
    skip_space();
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    tok_.number = 0;
    if (!more()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = cur();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (more() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')) {
        tok_.text += cur();
        bump();
      }
      tok_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t v = 0;
      while (more() && std::isdigit(static_cast<unsigned char>(cur()))) {
        v = v * 10 + static_cast<std::uint64_t>(cur() - '0');
        if (v > kNumeralLimit)
          throw ParseError(tok_.line, tok_.col, "numeral too large");
        tok_.text += cur();
        bump();
      }
      tok_.kind = Tok::Int;
      tok_.number = v;
      return;
    }
    switch (c) {
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case ';': bump(); tok_.kind = Tok::Semi; return;
      case ':': bump(); tok_.kind = Tok::Colon; return;
      case '.': bump(); tok_.kind = Tok::Dot; return;
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case '~': bump(); tok_.kind = Tok::Tilde; return;
      case '/':
        if (next_char() == '\\') {
          bump(2);
          tok_.kind = Tok::And;
        } else {
          bump();
          tok_.kind = Tok::Slash;
        }
        return;
      case '\\':
        if (next_char() == '/') {
          bump(2);
          tok_.kind = Tok::Or;
          return;
        }
        throw ParseError(line_, col_, "unexpected '\\'");
      case '-':
        if (next_char() == '>') {
          bump(2);
          tok_.kind = Tok::Implies;
          return;
        }
        throw ParseError(line_, col_, "unexpected '-'");
      case '<':
        if (next_char() == '-' && pos_ + 2 < src_.size() && src_[pos_ + 2] == '>') {
          bump(3);
          tok_.kind = Tok::Iff;
          return;
        }
        throw ParseError(line_, col_, "unexpected '<'");
      default:
        throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

// ---------------------------------------------------------------------------
// Theory parser
// ---------------------------------------------------------------------------

class TheoryParser {
 public:
  explicit TheoryParser(std::string_view src) : lex_(src) {}

  TheorySpec parse() {
    while (lex_.peek().kind != Tok::End) parse_decl();
    return std::move(spec_);
  }

 private:
  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) lex_.fail("expected " + what);
    return lex_.take();
  }

  bool name_taken(const std::string& n) const {
    const auto& s = spec_.signature;
    if (std::find(s.constants.begin(), s.constants.end(), n) != s.constants.end())
      return true;
    for (const auto& f : s.functions)
      if (f.name == n) return true;
    for (const auto& p : s.predicates)
      if (p.name == n) return true;
    return false;
  }

  void declare_name(const Token& t) {
    if (name_taken(t.text))
      throw ParseError(t.line, t.col, "symbol '" + t.text + "' already declared");
  }

  void parse_decl() {
    Token head = expect(Tok::Ident, "a declaration");
    if (head.text == "const") {
      for (;;) {
        Token n = expect(Tok::Ident, "a constant name");
        declare_name(n);
        spec_.signature.constants.push_back(n.text);
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::Semi, "';'");
    } else if (head.text == "fun" || head.text == "pred") {
      bool is_fun = head.text == "fun";
      for (;;) {
        Token n = expect(Tok::Ident, "a symbol name");
        declare_name(n);
        expect(Tok::Slash, "'/' and an arity");
        Token a = expect(Tok::Int, "an arity");
        if (is_fun) {
          if (a.number < 1)
            throw ParseError(a.line, a.col, "function arity must be at least 1");
          spec_.signature.functions.push_back({n.text, static_cast<std::size_t>(a.number)});
        } else {
          spec_.signature.predicates.push_back({n.text, static_cast<std::size_t>(a.number)});
        }
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::Semi, "';'");
    } else if (head.text == "option") {
      Token n = expect(Tok::Ident, "an option name");
      if (n.text != "numerals")
        throw ParseError(n.line, n.col, "unknown option '" + n.text + "'");
      spec_.signature.numerals = true;
      expect(Tok::Semi, "';'");
    } else if (head.text == "axiom") {
      parse_axiom();
    } else {
      throw ParseError(head.line, head.col,
                       "expected 'const', 'fun', 'pred', 'option' or 'axiom'");
    }
  }

  void parse_axiom() {
    Token name = expect(Tok::Ident, "an axiom name");
    for (const auto& ax : spec_.axioms)
      if (ax.name == name.text)
        throw ParseError(name.line, name.col, "axiom '" + name.text + "' already defined");
    expect(Tok::Colon, "':'");
    std::vector<std::string> vars;
    if (lex_.peek().kind == Tok::Ident && lex_.peek().text == "forall") {
      lex_.take();
      while (lex_.peek().kind == Tok::Ident) {
        Token v = lex_.take();
        if (std::find(vars.begin(), vars.end(), v.text) != vars.end())
          throw ParseError(v.line, v.col, "duplicate variable '" + v.text + "'");
        vars.push_back(v.text);
      }
      if (vars.empty()) lex_.fail("expected at least one bound variable");
      expect(Tok::Dot, "'.' after the bound variables");
    }
    vars_ = &vars;
    PatternCompound body = parse_iff();
    vars_ = nullptr;
    expect(Tok::Semi, "';'");
    spec_.axioms.push_back(AxiomSchema{name.text, std::move(vars), std::move(body)});
  }

  // formula := iff; precedence (low to high): <->, ->, \/, /\, ~
  PatternCompound parse_iff() {
    PatternCompound l = parse_implies();
    while (lex_.peek().kind == Tok::Iff) {
      lex_.take();
      PatternCompound r = parse_implies();
      // a <-> b  ==>  (~a \/ b) /\ (~b \/ a)
      l = PatternCompound::conj(
          PatternCompound::disj(PatternCompound::neg(l), r),
          PatternCompound::disj(PatternCompound::neg(r), l));
    }
    return l;
  }

  PatternCompound parse_implies() {
    PatternCompound l = parse_or();
    if (lex_.peek().kind == Tok::Implies) {
      lex_.take();
      PatternCompound r = parse_implies();  // right-associative
      return PatternCompound::disj(PatternCompound::neg(std::move(l)), std::move(r));
    }
    return l;
  }

  PatternCompound parse_or() {
    PatternCompound l = parse_and();
    while (lex_.peek().kind == Tok::Or) {
      lex_.take();
      l = PatternCompound::disj(std::move(l), parse_and());
    }
    return l;
  }

  PatternCompound parse_and() {
    PatternCompound l = parse_unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.take();
      l = PatternCompound::conj(std::move(l), parse_unary());
    }
    return l;
  }

  PatternCompound parse_unary() {
    if (lex_.peek().kind == Tok::Tilde) {
      lex_.take();
      return PatternCompound::neg(parse_unary());
    }
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      PatternCompound c = parse_iff();
      expect(Tok::RParen, "')'");
      return c;
    }
    return parse_atom();
  }

  PatternCompound parse_atom() {
    Token p = expect(Tok::Ident, "an atomic formula");
    auto arity = spec_.signature.predicate_arity(p.text);
    if (!arity)
      throw ParseError(p.line, p.col, "unknown predicate '" + p.text + "'");
    std::vector<PatternTerm> args;
    if (lex_.peek().kind == Tok::LParen) {
      lex_.take();
      for (;;) {
        args.push_back(parse_term());
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::RParen, "')'");
    }
    if (args.size() != *arity)
      throw ParseError(p.line, p.col,
                       "predicate '" + p.text + "' expects " + std::to_string(*arity) +
                           " argument(s), got " + std::to_string(args.size()));
    return PatternCompound::atom(PatternAtom{p.text, std::move(args)});
  }

  PatternTerm parse_term() {
    if (lex_.peek().kind == Tok::Int) {
      Token n = lex_.take();
      if (!spec_.signature.numerals)
        throw ParseError(n.line, n.col,
                         "numeric literals require 'option numerals'");
      return PatternTerm::numeral(n.number);
    }
    Token id = expect(Tok::Ident, "a term");
    // bound variable?
    if (vars_ && std::find(vars_->begin(), vars_->end(), id.text) != vars_->end()) {
      if (lex_.peek().kind == Tok::LParen)
        throw ParseError(id.line, id.col, "variable '" + id.text + "' cannot take arguments");
      return PatternTerm::var(id.text);
    }
    // function application?
    for (const auto& f : spec_.signature.functions) {
      if (f.name != id.text) continue;
      expect(Tok::LParen, "'(' after function symbol '" + id.text + "'");
      std::vector<PatternTerm> args;
      for (;;) {
        args.push_back(parse_term());
        if (lex_.peek().kind != Tok::Comma) break;
        lex_.take();
      }
      expect(Tok::RParen, "')'");
      if (args.size() != f.arity)
        throw ParseError(id.line, id.col,
                         "function '" + id.text + "' expects " + std::to_string(f.arity) +
                             " argument(s), got " + std::to_string(args.size()));
      return PatternTerm::apply(id.text, std::move(args));
    }
    // constant?
    const auto& cs = spec_.signature.constants;
    if (std::find(cs.begin(), cs.end(), id.text) != cs.end()) {
      if (lex_.peek().kind == Tok::LParen)
        throw ParseError(id.line, id.col, "constant '" + id.text + "' cannot take arguments");
      return PatternTerm::apply(id.text);
    }
    throw ParseError(id.line, id.col, "unbound variable '" + id.text + "'");
  }

  Lexer lex_;
  TheorySpec spec_;
  const std::vector<std::string>* vars_ = nullptr;
};

}  // namespace

TheorySpec parse_theory(std::string_view text) {
  TheoryParser p(text);
  return p.parse();
}

// ---------------------------------------------------------------------------
// Ground term / atom text parsers
// ---------------------------------------------------------------------------

namespace {

struct GroundParser {
  Lexer lex;
  explicit GroundParser(std::string_view s) : lex(s) {}

  GroundTerm term() {
    if (lex.peek().kind == Tok::Int) return GroundTerm::numeral(lex.take().number);
    if (lex.peek().kind != Tok::Ident) lex.fail("expected a term");
    Token id = lex.take();
    if (lex.peek().kind != Tok::LParen) return GroundTerm::constant(id.text);
    lex.take();
    std::vector<GroundTerm> args;
    for (;;) {
      args.push_back(term());
      if (lex.peek().kind != Tok::Comma) break;
      lex.take();
    }
    if (lex.peek().kind != Tok::RParen) lex.fail("expected ')'");
    lex.take();
    return GroundTerm::apply(id.text, std::move(args));
  }

  void end() {
    if (lex.peek().kind != Tok::End) lex.fail("trailing input after term");
  }
};

}  // namespace

GroundTerm parse_ground_term(std::string_view text) {
  GroundParser p(text);
  GroundTerm t = p.term();
  p.end();
  return t;
}

Atom parse_ground_atom(std::string_view text) {
  GroundParser p(text);
  if (p.lex.peek().kind != Tok::Ident) p.lex.fail("expected a predicate symbol");
  Token id = p.lex.take();
  std::vector<GroundTerm> args;
  if (p.lex.peek().kind == Tok::LParen) {
    p.lex.take();
    for (;;) {
      args.push_back(p.term());
      if (p.lex.peek().kind != Tok::Comma) break;
      p.lex.take();
    }
    if (p.lex.peek().kind != Tok::RParen) p.lex.fail("expected ')'");
    p.lex.take();
  }
  p.end();
  return Atom{id.text, std::move(args)};
}

// ---------------------------------------------------------------------------
// CompiledTheory
// ---------------------------------------------------------------------------

namespace {

void validate_body(const Signature& sig, const std::vector<std::string>& vars,
                   const PatternCompound& c) {
  using Kind = Compound::Kind;
  switch (c.kind()) {
    case Kind::Atom: {
      const auto& a = c.atom_ref();
      auto arity = sig.predicate_arity(a.pred);
      if (!arity) throw std::invalid_argument("unknown predicate '" + a.pred + "'");
      if (a.args.size() != *arity)
        throw std::invalid_argument("arity mismatch on predicate '" + a.pred + "'");
      struct {
        const Signature& sig;
        const std::vector<std::string>& vars;
        void check(const PatternTerm& t) {
          switch (t.kind()) {
            case PatternTerm::Kind::Var:
              if (std::find(vars.begin(), vars.end(), t.name()) == vars.end())
                throw std::invalid_argument("unbound variable '" + t.name() + "'");
              return;
            case PatternTerm::Kind::Numeral:
              if (!sig.numerals)
                throw std::invalid_argument("numeric literals are disabled");
              return;
            case PatternTerm::Kind::Apply: {
              if (t.args().empty()) {
                if (std::find(sig.constants.begin(), sig.constants.end(), t.name()) ==
                    sig.constants.end())
                  throw std::invalid_argument("unknown constant '" + t.name() + "'");
                return;
              }
              for (const auto& f : sig.functions) {
                if (f.name != t.name()) continue;
                if (f.arity != t.args().size())
                  throw std::invalid_argument("arity mismatch on function '" + t.name() + "'");
                for (const auto& sub : t.args()) check(sub);
                return;
              }
              throw std::invalid_argument("unknown function '" + t.name() + "'");
            }
          }
        }
      } checker{sig, vars};
      for (const auto& t : a.args) checker.check(t);
      return;
    }
    case Kind::Not:
      validate_body(sig, vars, c.sub());
      return;
    default:
      validate_body(sig, vars, c.lhs());
      validate_body(sig, vars, c.rhs());
      return;
  }
}

GroundTerm subst_term(const PatternTerm& t,
                      const std::map<std::string, GroundTerm>& env) {
  switch (t.kind()) {
    case PatternTerm::Kind::Var: {
      auto it = env.find(t.name());
      if (it == env.end())
        throw std::logic_error("unbound variable in grounding: " + t.name());
      return it->second;
    }
    case PatternTerm::Kind::Numeral:
      return GroundTerm::numeral(t.numeral_value());
    case PatternTerm::Kind::Apply: {
      std::vector<GroundTerm> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(subst_term(a, env));
      return GroundTerm::apply(t.name(), std::move(args));
    }
  }
  throw std::logic_error("bad pattern term");
}

Compound subst_compound(const PatternCompound& c,
                        const std::map<std::string, GroundTerm>& env) {
  using Kind = Compound::Kind;
  switch (c.kind()) {
    case Kind::Atom: {
      const auto& pa = c.atom_ref();
      std::vector<GroundTerm> args;
      args.reserve(pa.args.size());
      for (const auto& t : pa.args) args.push_back(subst_term(t, env));
      return Compound::atom(Atom{pa.pred, std::move(args)});
    }
    case Kind::Not:
      return Compound::neg(subst_compound(c.sub(), env));
    case Kind::And:
      return Compound::conj(subst_compound(c.lhs(), env), subst_compound(c.rhs(), env));
    default:
      return Compound::disj(subst_compound(c.lhs(), env), subst_compound(c.rhs(), env));
  }
}

// First-order matching of a ground term against a pattern; extends env or
// reports failure.
bool match_term(const PatternTerm& pat, const GroundTerm& g,
                std::map<std::string, GroundTerm>& env) {
  switch (pat.kind()) {
    case PatternTerm::Kind::Var: {
      auto it = env.find(pat.name());
      if (it != env.end()) return it->second == g;
      env.emplace(pat.name(), g);
      return true;
    }
    case PatternTerm::Kind::Numeral:
      return g.is_numeral() && g.numeral_value() == pat.numeral_value();
    case PatternTerm::Kind::Apply: {
      if (g.is_numeral() || g.symbol() != pat.name() ||
          g.args().size() != pat.args().size())
        return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match_term(pat.args()[i], g.args()[i], env)) return false;
      return true;
    }
  }
  return false;
}

void collect_pattern_atoms(const PatternCompound& c, std::vector<PatternAtom>& out) {
  using Kind = Compound::Kind;
  switch (c.kind()) {
    case Kind::Atom:
      out.push_back(c.atom_ref());
      return;
    case Kind::Not:
      collect_pattern_atoms(c.sub(), out);
      return;
    default:
      collect_pattern_atoms(c.lhs(), out);
      collect_pattern_atoms(c.rhs(), out);
      return;
  }
}

}  // namespace

std::shared_ptr<const CompiledTheory> compile(TheorySpec spec) {
  if (spec.axioms.empty())
    throw std::invalid_argument("empty theory cannot be contradictory");
  std::set<std::string> names;
  for (const auto& c : spec.signature.constants)
    if (!names.insert(c).second)
      throw std::invalid_argument("duplicate symbol '" + c + "'");
  for (const auto& f : spec.signature.functions)
    if (!names.insert(f.name).second)
      throw std::invalid_argument("duplicate symbol '" + f.name + "'");
  for (const auto& p : spec.signature.predicates)
    if (!names.insert(p.name).second)
      throw std::invalid_argument("duplicate symbol '" + p.name + "'");
  std::set<std::string> axnames;
  bool quantified = false;
  for (const auto& ax : spec.axioms) {
    if (!axnames.insert(ax.name).second)
      throw std::invalid_argument("duplicate axiom '" + ax.name + "'");
    validate_body(spec.signature, ax.vars, ax.body);
    if (!ax.vars.empty()) quantified = true;
  }
  if (quantified && spec.signature.has_empty_universe())
    throw std::invalid_argument(
        "quantified axioms over an empty Herbrand universe: declare a constant "
        "or enable numerals");
  return std::shared_ptr<const CompiledTheory>(new CompiledTheory(std::move(spec)));
}

CompiledTheory::CompiledTheory(TheorySpec spec) : spec_(std::move(spec)) {
  for (std::size_t i = 0; i < spec_.axioms.size(); ++i)
    axiom_pos_[spec_.axioms[i].name] = i;
}

// --- term enumeration ------------------------------------------------------

std::uint64_t CompiledTheory::terms_of_weight(std::uint64_t w) const {
  if (w == 0) return 0;
  const auto& sig = spec_.signature;
  while (term_count_memo_.size() < w) {
    std::uint64_t next = term_count_memo_.size() + 1;
    std::uint64_t n = 0;
    if (next == 1) n = sat_add(n, sig.constants.size());
    if (sig.numerals) n = sat_add(n, 1);  // the literal next-1
    for (const auto& f : sig.functions)
      n = sat_add(n, tuples_of_weight(f.arity, next - 1));
    term_count_memo_.push_back(n);
    term_cum_memo_.push_back(
        sat_add(term_cum_memo_.empty() ? 0 : term_cum_memo_.back(), n));
  }
  return term_count_memo_[w - 1];
}

std::uint64_t CompiledTheory::terms_below_weight(std::uint64_t w) const {
  if (w <= 1) return 0;
  terms_of_weight(w - 1);
  return term_cum_memo_[w - 2];
}

std::uint64_t CompiledTheory::indices_of_weight(std::uint64_t w) const {
  while (index_count_memo_.size() <= w) {
    std::uint64_t next = index_count_memo_.size();
    std::uint64_t n = 0;
    for (const auto& ax : spec_.axioms)
      n = sat_add(n, ax.vars.empty() ? (next == 0 ? 1 : 0)
                                     : tuples_of_weight(ax.vars.size(), next));
    index_count_memo_.push_back(n);
    index_cum_memo_.push_back(
        sat_add(index_cum_memo_.empty() ? 0 : index_cum_memo_.back(), n));
  }
  return index_count_memo_[w];
}

std::uint64_t CompiledTheory::indices_below_weight(std::uint64_t w) const {
  if (w == 0) return 0;
  indices_of_weight(w - 1);
  return index_cum_memo_[w - 1];
}

std::uint64_t CompiledTheory::atoms_of_weight(std::uint64_t w) const {
  while (atom_count_memo_.size() <= w) {
    std::uint64_t next = atom_count_memo_.size();
    std::uint64_t n = 0;
    for (const auto& p : spec_.signature.predicates)
      n = sat_add(n, p.arity == 0 ? (next == 0 ? 1 : 0)
                                  : tuples_of_weight(p.arity, next));
    atom_count_memo_.push_back(n);
    atom_cum_memo_.push_back(
        sat_add(atom_cum_memo_.empty() ? 0 : atom_cum_memo_.back(), n));
  }
  return atom_count_memo_[w];
}

std::uint64_t CompiledTheory::atoms_below_weight(std::uint64_t w) const {
  if (w == 0) return 0;
  atoms_of_weight(w - 1);
  return atom_cum_memo_[w - 1];
}

std::uint64_t CompiledTheory::tuples_of_weight(std::size_t arity, std::uint64_t w) const {
  if (arity == 0) return w == 0 ? 1 : 0;
  if (w < arity) return 0;  // each component weighs at least 1
  if (arity == 1) return terms_of_weight(w);
  std::uint64_t n = 0;
  for (std::uint64_t w1 = 1; w1 + (arity - 1) <= w; ++w1)
    n = sat_add(n, sat_mul(terms_of_weight(w1), tuples_of_weight(arity - 1, w - w1)));
  return n;
}

GroundTerm CompiledTheory::term_in_weight(std::uint64_t w, std::uint64_t pos) const {
  const auto& sig = spec_.signature;
  if (w == 1) {
    if (pos < sig.constants.size()) return GroundTerm::constant(sig.constants[pos]);
    pos -= sig.constants.size();
  }
  if (sig.numerals) {
    if (pos == 0) return GroundTerm::numeral(w - 1);
    --pos;
  }
  for (const auto& f : sig.functions) {
    std::uint64_t block = tuples_of_weight(f.arity, w - 1);
    if (pos < block)
      return GroundTerm::apply(f.name, tuple_in_weight(f.arity, w - 1, pos));
    pos -= block;
  }
  throw std::logic_error("term position out of weight class");
}

std::vector<GroundTerm> CompiledTheory::tuple_in_weight(std::size_t arity,
                                                        std::uint64_t w,
                                                        std::uint64_t pos) const {
  std::vector<GroundTerm> out;
  out.reserve(arity);
  while (arity > 1) {
    for (std::uint64_t w1 = 1;; ++w1) {
      if (w1 + (arity - 1) > w) throw std::logic_error("tuple position out of range");
      std::uint64_t rest = tuples_of_weight(arity - 1, w - w1);
      std::uint64_t block = sat_mul(terms_of_weight(w1), rest);
      if (pos < block) {
        out.push_back(term_in_weight(w1, pos / rest));
        pos %= rest;
        w -= w1;
        break;
      }
      pos -= block;
    }
    --arity;
  }
  if (arity == 1) out.push_back(term_in_weight(w, pos));
  return out;
}

std::optional<std::uint64_t> CompiledTheory::term_count() const {
  const auto& sig = spec_.signature;
  if (sig.numerals || !sig.functions.empty()) {
    if (sig.has_empty_universe()) return 0;  // functions but nothing to seed them
    return std::nullopt;
  }
  return sig.constants.size();
}

GroundTerm CompiledTheory::term_at(std::uint64_t rank) const {
  if (auto total = term_count(); total && rank >= *total)
    throw std::out_of_range(
        *total == 0 ? "empty Herbrand universe"
                    : "term rank " + std::to_string(rank) + " out of range (universe has " +
                          std::to_string(*total) + " terms)");
  while (term_cum_memo_.empty() || term_cum_memo_.back() <= rank)
    terms_of_weight(term_cum_memo_.size() + 1);
  auto it = std::upper_bound(term_cum_memo_.begin(), term_cum_memo_.end(), rank);
  std::uint64_t w = static_cast<std::uint64_t>(it - term_cum_memo_.begin()) + 1;
  return term_in_weight(w, rank - terms_below_weight(w));
}

namespace {

// Checks that a ground term is well-formed over the signature.
void validate_ground(const Signature& sig, const GroundTerm& t) {
  if (t.is_numeral()) {
    if (!sig.numerals) throw std::invalid_argument("numeric literals are disabled");
    return;
  }
  if (t.args().empty()) {
    if (std::find(sig.constants.begin(), sig.constants.end(), t.symbol()) ==
        sig.constants.end())
      throw std::invalid_argument("unknown constant '" + t.symbol() + "'");
    return;
  }
  for (const auto& f : sig.functions) {
    if (f.name != t.symbol()) continue;
    if (f.arity != t.args().size())
      throw std::invalid_argument("arity mismatch on function '" + t.symbol() + "'");
    for (const auto& a : t.args()) validate_ground(sig, a);
    return;
  }
  throw std::invalid_argument("unknown function '" + t.symbol() + "'");
}

}  // namespace

std::uint64_t CompiledTheory::tuple_pos_in_weight(const std::vector<GroundTerm>& args) const {
  if (args.empty()) return 0;
  std::uint64_t w = 0;
  for (const auto& a : args) w += a.weight();
  std::uint64_t pos = 0;
  std::size_t arity = args.size();
  std::size_t i = 0;
  while (arity > 1) {
    std::uint64_t wi = args[i].weight();
    for (std::uint64_t w1 = 1; w1 < wi; ++w1)
      pos = sat_add(pos, sat_mul(terms_of_weight(w1), tuples_of_weight(arity - 1, w - w1)));
    std::uint64_t rest = tuples_of_weight(arity - 1, w - wi);
    pos = sat_add(pos, sat_mul(rank_in_weight_of(args[i]), rest));
    w -= wi;
    --arity;
    ++i;
  }
  return sat_add(pos, rank_in_weight_of(args[i]));
}

// Position of a term inside its own weight class, mirroring term_in_weight.
std::uint64_t CompiledTheory::rank_in_weight_of(const GroundTerm& t) const {
  const auto& sig = spec_.signature;
  if (!t.is_numeral() && t.args().empty()) {
    auto it = std::find(sig.constants.begin(), sig.constants.end(), t.symbol());
    return static_cast<std::uint64_t>(it - sig.constants.begin());
  }
  std::uint64_t w = t.weight();
  std::uint64_t pos = w == 1 ? sig.constants.size() : 0;
  if (t.is_numeral()) return pos;
  if (sig.numerals) pos = sat_add(pos, 1);
  for (const auto& f : sig.functions) {
    if (f.name == t.symbol()) break;
    pos = sat_add(pos, tuples_of_weight(f.arity, w - 1));
  }
  return sat_add(pos, tuple_pos_in_weight(t.args()));
}

std::uint64_t CompiledTheory::rank_of_term(const GroundTerm& t) const {
  validate_ground(spec_.signature, t);
  return sat_add(terms_below_weight(t.weight()), rank_in_weight_of(t));
}

std::optional<GroundTerm> CompiledTheory::nth_term(std::uint64_t rank) const {
  try {
    return term_at(rank);
  } catch (const std::out_of_range&) {
    return std::nullopt;
  }
}

std::optional<std::uint64_t> CompiledTheory::term_rank(const GroundTerm& t) const {
  try {
    return rank_of_term(t);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

// --- index enumeration -----------------------------------------------------

namespace {
std::uint64_t args_weight(const std::vector<GroundTerm>& args) {
  std::uint64_t w = 0;
  for (const auto& a : args) w += a.weight();
  return w;
}
}  // namespace

std::optional<std::uint64_t> CompiledTheory::index_count() const {
  auto terms = term_count();
  std::uint64_t total = 0;
  for (const auto& ax : spec_.axioms) {
    if (ax.vars.empty()) {
      total = sat_add(total, 1);
      continue;
    }
    if (!terms) return std::nullopt;
    std::uint64_t block = 1;
    for (std::size_t i = 0; i < ax.vars.size(); ++i) block = sat_mul(block, *terms);
    total = sat_add(total, block);
  }
  return total;
}

Index CompiledTheory::nth_index(std::uint64_t rank) const {
  if (auto total = index_count(); total && rank >= *total)
    throw std::out_of_range("index rank " + std::to_string(rank) +
                            " out of range (theory has " + std::to_string(*total) +
                            " indices)");
  while (index_cum_memo_.empty() || index_cum_memo_.back() <= rank)
    indices_of_weight(index_cum_memo_.size());
  auto it = std::upper_bound(index_cum_memo_.begin(), index_cum_memo_.end(), rank);
  std::uint64_t w = static_cast<std::uint64_t>(it - index_cum_memo_.begin());
  std::uint64_t pos = rank - indices_below_weight(w);
  for (const auto& ax : spec_.axioms) {
    std::uint64_t block =
        ax.vars.empty() ? (w == 0 ? 1 : 0) : tuples_of_weight(ax.vars.size(), w);
    if (pos < block) {
      std::vector<GroundTerm> args =
          ax.vars.empty() ? std::vector<GroundTerm>{}
                          : tuple_in_weight(ax.vars.size(), w, pos);
      return Index{ax.name, std::move(args), rank};
    }
    pos -= block;
  }
  throw std::logic_error("index position out of weight class");
}

std::uint64_t CompiledTheory::rank_of_index(const std::string& axiom,
                                            const std::vector<GroundTerm>& args) const {
  auto it = axiom_pos_.find(axiom);
  if (it == axiom_pos_.end())
    throw std::invalid_argument("unknown axiom '" + axiom + "'");
  const auto& ax = spec_.axioms[it->second];
  if (args.size() != ax.vars.size())
    throw std::invalid_argument("axiom '" + axiom + "' takes " +
                                std::to_string(ax.vars.size()) + " argument(s)");
  for (const auto& a : args) validate_ground(spec_.signature, a);
  std::uint64_t w = args_weight(args);
  std::uint64_t rank = indices_below_weight(w);
  for (std::size_t i = 0; i < it->second; ++i) {
    const auto& other = spec_.axioms[i];
    rank = sat_add(rank, other.vars.empty() ? (w == 0 ? 1 : 0)
                                            : tuples_of_weight(other.vars.size(), w));
  }
  return sat_add(rank, tuple_pos_in_weight(args));
}

std::uint64_t CompiledTheory::index_weight(std::uint64_t rank) const {
  if (auto total = index_count()) {
    if (*total == 0) return 0;
    if (rank >= *total) rank = *total - 1;
  }
  return args_weight(nth_index(rank).args);
}

// --- atom enumeration (the Herbrand base) ----------------------------------

std::optional<std::uint64_t> CompiledTheory::atom_count() const {
  auto terms = term_count();
  std::uint64_t total = 0;
  for (const auto& p : spec_.signature.predicates) {
    if (p.arity == 0) {
      total = sat_add(total, 1);
      continue;
    }
    if (!terms) return std::nullopt;
    std::uint64_t block = 1;
    for (std::size_t i = 0; i < p.arity; ++i) block = sat_mul(block, *terms);
    total = sat_add(total, block);
  }
  return total;
}

Atom CompiledTheory::nth_atom(std::uint64_t rank) const {
  if (auto total = atom_count(); total && rank >= *total)
    throw std::out_of_range("atom rank " + std::to_string(rank) + " out of range");
  while (atom_cum_memo_.empty() || atom_cum_memo_.back() <= rank)
    atoms_of_weight(atom_cum_memo_.size());
  auto it = std::upper_bound(atom_cum_memo_.begin(), atom_cum_memo_.end(), rank);
  std::uint64_t w = static_cast<std::uint64_t>(it - atom_cum_memo_.begin());
  std::uint64_t pos = rank - atoms_below_weight(w);
  for (const auto& p : spec_.signature.predicates) {
    std::uint64_t block = p.arity == 0 ? (w == 0 ? 1 : 0) : tuples_of_weight(p.arity, w);
    if (pos < block) {
      std::vector<GroundTerm> args =
          p.arity == 0 ? std::vector<GroundTerm>{} : tuple_in_weight(p.arity, w, pos);
      return Atom{p.name, std::move(args)};
    }
    pos -= block;
  }
  throw std::logic_error("atom position out of weight class");
}

std::uint64_t CompiledTheory::atom_rank(const Atom& a) const {
  auto arity = spec_.signature.predicate_arity(a.pred);
  if (!arity) throw std::invalid_argument("unknown predicate '" + a.pred + "'");
  if (a.args.size() != *arity)
    throw std::invalid_argument("arity mismatch on predicate '" + a.pred + "'");
  for (const auto& t : a.args) validate_ground(spec_.signature, t);
  std::uint64_t w = args_weight(a.args);
  std::uint64_t rank = atoms_below_weight(w);
  for (const auto& p : spec_.signature.predicates) {
    if (p.name == a.pred) break;
    rank = sat_add(rank, p.arity == 0 ? (w == 0 ? 1 : 0) : tuples_of_weight(p.arity, w));
  }
  return sat_add(rank, tuple_pos_in_weight(a.args));
}

Atom CompiledTheory::check_atom(const Atom& a) const {
  atom_rank(a);  // validates
  return a;
}

// --- Th and relevance ------------------------------------------------------

Compound CompiledTheory::th(const Index& i) const {
  auto it = axiom_pos_.find(i.axiom);
  if (it == axiom_pos_.end())
    throw std::invalid_argument("unknown index " + i.str());
  const auto& ax = spec_.axioms[it->second];
  if (i.args.size() != ax.vars.size())
    throw std::invalid_argument("arity mismatch for index " + i.str());
  std::map<std::string, GroundTerm> env;
  for (std::size_t k = 0; k < ax.vars.size(); ++k) env.emplace(ax.vars[k], i.args[k]);
  return subst_compound(ax.body, env);
}

std::vector<Index> CompiledTheory::relevant(const Atom& a,
                                            std::uint64_t frontier_rank) const {
  std::uint64_t bound = std::max<std::uint64_t>(1, index_weight(frontier_rank));
  std::vector<Index> out;
  for (const auto& ax : spec_.axioms) {
    std::vector<PatternAtom> patterns;
    collect_pattern_atoms(ax.body, patterns);
    std::set<std::vector<GroundTerm>> tuples;
    for (const auto& pat : patterns) {
      if (pat.pred != a.pred || pat.args.size() != a.args.size()) continue;
      std::map<std::string, GroundTerm> env;
      bool ok = true;
      for (std::size_t k = 0; k < pat.args.size() && ok; ++k)
        ok = match_term(pat.args[k], a.args[k], env);
      if (!ok) continue;
      // Complete unconstrained variables by bounded enumeration.
      std::vector<std::string> unbound;
      for (const auto& v : ax.vars)
        if (!env.count(v)) unbound.push_back(v);
      std::vector<GroundTerm> universe;
      if (!unbound.empty()) {
        for (std::uint64_t w = 1; w <= bound; ++w) {
          std::uint64_t n = terms_of_weight(w);
          for (std::uint64_t pos = 0; pos < n && universe.size() < kMatchCompletionCap;
               ++pos)
            universe.push_back(term_in_weight(w, pos));
        }
        if (universe.empty()) continue;  // nothing to instantiate with yet
      }
      std::vector<std::size_t> pick(unbound.size(), 0);
      for (;;) {
        std::map<std::string, GroundTerm> full = env;
        for (std::size_t k = 0; k < unbound.size(); ++k)
          full.emplace(unbound[k], universe[pick[k]]);
        std::vector<GroundTerm> tuple;
        tuple.reserve(ax.vars.size());
        for (const auto& v : ax.vars) tuple.push_back(full.at(v));
        tuples.insert(std::move(tuple));
        if (tuples.size() > kMatchCompletionCap) break;
        // next selection
        std::size_t k = 0;
        for (; k < pick.size(); ++k) {
          if (++pick[k] < universe.size()) break;
          pick[k] = 0;
        }
        if (k == pick.size()) break;  // done (also handles the zero-unbound case)
      }
    }
    std::vector<Index> axiom_hits;
    for (const auto& t : tuples)
      axiom_hits.push_back(Index{ax.name, t, rank_of_index(ax.name, t)});
    std::sort(axiom_hits.begin(), axiom_hits.end(),
              [](const Index& x, const Index& y) { return x.rank < y.rank; });
    for (auto& h : axiom_hits) out.push_back(std::move(h));
  }
  return out;
}

std::optional<Index> CompiledTheory::make_index(const std::string& axiom,
                                                std::vector<GroundTerm> args) const {
  try {
    std::uint64_t rank = rank_of_index(axiom, args);
    return Index{axiom, std::move(args), rank};
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

GroundTerm nth_term(const CompiledTheory& th, std::uint64_t rank) {
  return th.term_at(rank);
}

Index nth_index(const CompiledTheory& th, std::uint64_t rank) {
  return th.nth_index(rank);
}

}  // namespace herbrand
