#include "herbrand/kam.hpp"

#include <cctype>
#include <iostream>
#include <stdexcept>

namespace herbrand::kam {

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

struct Term::Node {
  TermKind kind = TermKind::TypeDummy;
  std::string name;
  Term a{nullptr}, b{nullptr};  // App: fn/arg; Lam: body in a
  std::shared_ptr<const Stack> stack;  // Cont payload
};

Term::Term() {
  static const std::shared_ptr<const Node> dummy = std::make_shared<Node>();
  n_ = dummy;
}

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->name = std::move(name);
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::app(Term f, Term a) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::App;
  n->a = std::move(f);
  n->b = std::move(a);
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::lam(std::string binder, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Lam;
  n->name = std::move(binder);
  n->a = std::move(body);
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::callcc() {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Callcc;
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::cont(Stack saved) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Cont;
  n->stack = std::make_shared<Stack>(std::move(saved));
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::instr(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Instr;
  n->name = std::move(name);
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::type_dummy() { return Term(); }

Term Term::ref(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Ref;
  n->name = std::move(name);
  Term t{nullptr};
  t.n_ = std::move(n);
  return t;
}

Term Term::apply_all(Term t, const std::vector<Term>& args) {
  for (const auto& a : args) t = app(std::move(t), a);
  return t;
}

TermKind Term::kind() const { return n_->kind; }
const std::string& Term::name() const { return n_->name; }
const Term& Term::fn() const { return n_->a; }
const Term& Term::arg() const { return n_->b; }
const Term& Term::body() const { return n_->a; }
const Stack& Term::saved() const { return *n_->stack; }

bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case TermKind::Var:
    case TermKind::Instr:
    case TermKind::Ref:
      return name() == o.name();
    case TermKind::App:
      return fn() == o.fn() && arg() == o.arg();
    case TermKind::Lam:
      return name() == o.name() && body() == o.body();
    case TermKind::Callcc:
    case TermKind::TypeDummy:
      return true;
    case TermKind::Cont:
      return saved() == o.saved();
  }
  return false;
}

namespace {

void render(const Term& t, std::string& out, bool parens_app, bool parens_lam) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Ref:
    case TermKind::Instr:
      out += t.name();
      return;
    case TermKind::Callcc:
      out += "callcc";
      return;
    case TermKind::TypeDummy:
      out += ".type";
      return;
    case TermKind::Cont:
      out += "k[" + std::to_string(t.saved().depth()) + "]";
      return;
    case TermKind::Lam: {
      if (parens_lam) out += "(";
      out += "\\" + t.name() + ". ";
      render(t.body(), out, false, false);
      if (parens_lam) out += ")";
      return;
    }
    case TermKind::App: {
      if (parens_app) out += "(";
      render(t.fn(), out, false, true);
      out += " ";
      render(t.arg(), out, true, true);
      if (parens_app) out += ")";
      return;
    }
  }
}

}  // namespace

std::string Term::str() const {
  std::string out;
  render(*this, out, false, false);
  return out;
}

std::string Term::str(std::size_t limit) const {
  std::string out = str();
  if (out.size() > limit) {
    out.resize(limit);
    out += "...";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stack
// ---------------------------------------------------------------------------

Stack Stack::of(const std::vector<Term>& ts) {
  Stack s;
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) s = s.pushed(*it);
  return s;
}

Stack Stack::pushed(Term t) const {
  auto c = std::make_shared<Cell>();
  c->head = std::move(t);
  c->tail = cell_;
  c->depth = depth() + 1;
  Stack s;
  s.cell_ = std::move(c);
  return s;
}

const Term& Stack::top() const {
  if (!cell_) throw std::logic_error("top of empty stack");
  return cell_->head;
}

Stack Stack::rest() const {
  if (!cell_) throw std::logic_error("rest of empty stack");
  Stack s;
  s.cell_ = cell_->tail;
  return s;
}

std::size_t Stack::depth() const { return cell_ ? cell_->depth : 0; }

bool Stack::operator==(const Stack& o) const {
  const Cell* a = cell_.get();
  const Cell* b = o.cell_.get();
  while (a && b) {
    if (a == b) return true;
    if (!(a->head == b->head)) return false;
    a = a->tail.get();
    b = b->tail.get();
  }
  return a == b;
}

std::string Stack::str(std::size_t limit) const {
  std::string out;
  const Cell* c = cell_.get();
  while (c) {
    out += c->head.str(limit);
    out += " . ";
    c = c->tail.get();
  }
  out += "nil";
  return out;
}

std::string Process::str(std::size_t limit) const {
  return head.str(limit) + " * " + stack.str(limit);
}

// ---------------------------------------------------------------------------
// Free variables and substitution
// ---------------------------------------------------------------------------

namespace {

void collect_free(const Term& t, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      if (!bound.count(t.name())) out.insert(t.name());
      return;
    case TermKind::App:
      collect_free(t.fn(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
    case TermKind::Lam: {
      bool inserted = bound.insert(t.name()).second;
      collect_free(t.body(), bound, out);
      if (inserted) bound.erase(t.name());
      return;
    }
    default:
      return;  // constants; Cont stacks hold closed terms
  }
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string candidate = base + "'";
  while (avoid.count(candidate)) candidate += "'";
  return candidate;
}

}  // namespace

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const Term& t) { return free_vars(t).empty(); }

Term substitute(const Term& t, const std::string& var, const Term& value) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == var ? value : t;
    case TermKind::App: {
      Term f = substitute(t.fn(), var, value);
      Term a = substitute(t.arg(), var, value);
      return Term::app(std::move(f), std::move(a));
    }
    case TermKind::Lam: {
      if (t.name() == var) return t;  // var is shadowed
      auto fv = free_vars(value);
      if (fv.count(t.name())) {
        // rename the binder away from the free variables of `value`
        auto avoid = fv;
        for (const auto& v : free_vars(t.body())) avoid.insert(v);
        avoid.insert(var);
        std::string renamed = fresh_name(t.name(), avoid);
        Term body = substitute(t.body(), t.name(), Term::var(renamed));
        return Term::lam(renamed, substitute(body, var, value));
      }
      return Term::lam(t.name(), substitute(t.body(), var, value));
    }
    default:
      return t;  // constants and continuations contain no free variables
  }
}

// ---------------------------------------------------------------------------
// Program
// ---------------------------------------------------------------------------

void Program::define(std::string name, Term body) {
  if (by_name_.count(name))
    throw std::invalid_argument("duplicate definition of '" + name + "'");
  by_name_[name] = defs_.size();
  defs_.emplace_back(std::move(name), std::move(body));
}

void Program::set_override(std::string name, Term replacement) {
  overrides_[std::move(name)] = std::move(replacement);
}

std::optional<Term> Program::lookup(const std::string& name) const {
  if (auto it = overrides_.find(name); it != overrides_.end()) return it->second;
  if (auto it = by_name_.find(name); it != by_name_.end())
    return defs_[it->second].second;
  return std::nullopt;
}

bool Program::defined(const std::string& name) const {
  return overrides_.count(name) || by_name_.count(name);
}

void Program::merge(const Program& other) {
  for (const auto& [name, body] : other.definitions()) define(name, body);
}

// ---------------------------------------------------------------------------
// Program parser
// ---------------------------------------------------------------------------

namespace {

struct PTok {
  enum Kind { Ident, Lambda, Dot, LParen, RParen, Equals, DefineEnd, TypeDummy, End };
  Kind kind;
  std::string text;
  int line = 1, col = 1;
};

class PLexer {
 public:
  explicit PLexer(std::string_view src) : src_(src) { advance(); }

  const PTok& peek() const { return tok_; }
  PTok take() {
    PTok t = tok_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col, msg);
  }

 private:
  bool more() const { return pos_ < src_.size(); }
  char cur() const { return src_[pos_]; }
  char ahead(std::size_t k) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }
  void bump(std::size_t n = 1) {
    pos_ += n;
    col_ += static_cast<int>(n);
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  void advance() {
    while (more()) {
      char c = cur();
      if (c == '#') {
        while (more() && cur() != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    tok_.text.clear();
    if (!more()) {
      tok_.kind = PTok::End;
      return;
    }
    char c = cur();
    if (c == '\\') {
      bump();
      tok_.kind = PTok::Lambda;
      return;
    }
    if (c == '(') {
      bump();
      tok_.kind = PTok::LParen;
      return;
    }
    if (c == ')') {
      bump();
      tok_.kind = PTok::RParen;
      return;
    }
    if (c == '=') {
      bump();
      tok_.kind = PTok::Equals;
      return;
    }
    if (c == ';' && ahead(1) == ';') {
      bump(2);
      tok_.kind = PTok::DefineEnd;
      return;
    }
    if (c == '.') {
      // `.type` or the dot of a lambda binder
      if (ident_char(ahead(1))) {
        std::size_t j = 1;
        std::string word;
        while (ident_char(ahead(j))) {
          word += ahead(j);
          ++j;
        }
        if (word == "type") {
          bump(j);
          tok_.kind = PTok::TypeDummy;
          return;
        }
      }
      bump();
      tok_.kind = PTok::Dot;
      return;
    }
    if (ident_char(c)) {
      // identifiers may contain interior dots: Trees.Contrad
      while (more()) {
        if (ident_char(cur())) {
          tok_.text += cur();
          bump();
        } else if (cur() == '.' && ident_char(ahead(1))) {
          tok_.text += '.';
          bump();
        } else {
          break;
        }
      }
      tok_.kind = PTok::Ident;
      return;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  PTok tok_;
};

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view src) : lex_(src) {}

  Program parse() {
    Program prog;
    while (lex_.peek().kind != PTok::End) {
      PTok kw = lex_.take();
      if (kw.kind != PTok::Ident || kw.text != "Define")
        throw ParseError(kw.line, kw.col, "expected 'Define'");
      PTok name = lex_.take();
      if (name.kind != PTok::Ident)
        throw ParseError(name.line, name.col, "expected a definition name");
      // parameter sugar: Define f x y = body  ==  Define f = \x. \y. body
      std::vector<std::string> params;
      while (lex_.peek().kind == PTok::Ident) params.push_back(lex_.take().text);
      if (lex_.peek().kind != PTok::Equals) lex_.fail("expected '='");
      lex_.take();
      scope_.clear();
      for (const auto& p : params) scope_.insert(p);
      Term body = parse_term();
      if (lex_.peek().kind != PTok::DefineEnd) lex_.fail("expected ';;'");
      lex_.take();
      for (auto it = params.rbegin(); it != params.rend(); ++it)
        body = Term::lam(*it, std::move(body));
      try {
        prog.define(name.text, std::move(body));
      } catch (const std::invalid_argument& e) {
        throw ParseError(name.line, name.col, e.what());
      }
    }
    return prog;
  }

 private:
  // term := lambda | application of atoms
  Term parse_term() {
    if (lex_.peek().kind == PTok::Lambda) return parse_lambda();
    Term t = parse_atom();
    for (;;) {
      auto k = lex_.peek().kind;
      if (k == PTok::Ident || k == PTok::LParen || k == PTok::TypeDummy ||
          k == PTok::Lambda) {
        // a trailing lambda extends to the end of the application: t (\x. u)
        if (k == PTok::Lambda) {
          t = Term::app(std::move(t), parse_lambda());
          return t;
        }
        t = Term::app(std::move(t), parse_atom());
      } else {
        return t;
      }
    }
  }

  Term parse_lambda() {
    PTok l = lex_.take();  // backslash
    (void)l;
    PTok v = lex_.take();
    if (v.kind != PTok::Ident)
      throw ParseError(v.line, v.col, "expected a binder after '\\'");
    if (lex_.peek().kind == PTok::Dot) lex_.take();  // optional dot: \x. t
    bool inserted = scope_.insert(v.text).second;
    Term body = parse_term();
    if (inserted) scope_.erase(v.text);
    return Term::lam(v.text, std::move(body));
  }

  Term parse_atom() {
    const PTok& t = lex_.peek();
    switch (t.kind) {
      case PTok::LParen: {
        lex_.take();
        Term inner = parse_term();
        if (lex_.peek().kind != PTok::RParen) lex_.fail("expected ')'");
        lex_.take();
        return inner;
      }
      case PTok::TypeDummy:
        lex_.take();
        return Term::type_dummy();
      case PTok::Ident: {
        PTok id = lex_.take();
        if (id.text == "callcc") return Term::callcc();
        if (scope_.count(id.text)) return Term::var(id.text);
        return Term::ref(id.text);
      }
      default:
        lex_.fail("expected a term");
    }
  }

  PLexer lex_;
  std::set<std::string> scope_;
};

}  // namespace

Program parse_program(std::string_view source) {
  ProgramParser p(source);
  return p.parse();
}

// ---------------------------------------------------------------------------
// StepResult
// ---------------------------------------------------------------------------

StepResult StepResult::next(Process p, std::string rule) {
  StepResult r;
  r.tag_ = Tag::Next;
  r.process_ = std::move(p);
  r.rule_ = std::move(rule);
  return r;
}

StepResult StepResult::halt(Halted h, std::string rule) {
  StepResult r;
  r.tag_ = Tag::Halt;
  r.halted_ = std::move(h);
  r.rule_ = std::move(rule);
  return r;
}

StepResult StepResult::stuck(Process p, std::string reason) {
  StepResult r;
  r.tag_ = Tag::Stuck;
  r.process_ = std::move(p);
  r.reason_ = std::move(reason);
  r.rule_ = "stuck";
  return r;
}

// ---------------------------------------------------------------------------
// Machine
// ---------------------------------------------------------------------------

Machine::Machine(Program program) : program_(std::move(program)) {}

void Machine::register_instruction(std::string name, InstrHandler handler) {
  instrs_[std::move(name)] = std::move(handler);
}

bool Machine::has_instruction(const std::string& name) const {
  return instrs_.count(name) != 0;
}

void Machine::set_fallback_resolver(
    std::function<std::optional<Term>(const std::string&)> r) {
  fallback_ = std::move(r);
}

void Machine::register_basics() {
  register_instruction("stop", [](Machine&, const Stack& st) -> StepResult {
    if (st.empty())
      return StepResult::stuck(Process{Term::instr("stop"), st},
                               "stop needs one operand");
    return StepResult::halt(Halted{"stop", {st.top()}}, "stop");
  });
  register_instruction("print", [](Machine& m, const Stack& st) -> StepResult {
    if (st.empty())
      return StepResult::stuck(Process{Term::instr("print"), st},
                               "print needs one operand");
    std::ostream& out = m.print_sink ? *m.print_sink : std::cout;
    out << st.top().str() << "\n";
    return StepResult::next(Process{st.top(), st.rest()}, "print");
  });
}

StepResult Machine::step(const Process& p) {
  switch (p.head.kind()) {
    case TermKind::App:
      return StepResult::next(Process{p.head.fn(), p.stack.pushed(p.head.arg())},
                              "push");
    case TermKind::Lam: {
      if (p.stack.empty())
        return StepResult::stuck(p, "lambda against the empty stack");
      Term body = substitute(p.head.body(), p.head.name(), p.stack.top());
      return StepResult::next(Process{std::move(body), p.stack.rest()}, "grab");
    }
    case TermKind::Callcc: {
      if (p.stack.empty())
        return StepResult::stuck(p, "callcc against the empty stack");
      Stack pi = p.stack.rest();
      return StepResult::next(Process{p.stack.top(), pi.pushed(Term::cont(pi))},
                              "save");
    }
    case TermKind::Cont: {
      if (p.stack.empty())
        return StepResult::stuck(p, "continuation against the empty stack");
      return StepResult::next(Process{p.stack.top(), p.head.saved()}, "restore");
    }
    case TermKind::Ref: {
      if (auto def = program_.lookup(p.head.name()))
        return StepResult::next(Process{*def, p.stack}, "deref");
      if (instrs_.count(p.head.name()))
        return StepResult::next(Process{Term::instr(p.head.name()), p.stack},
                                "deref");
      if (fallback_) {
        if (auto t = fallback_(p.head.name()))
          return StepResult::next(Process{*t, p.stack}, "deref");
      }
      return StepResult::stuck(p, "unresolved reference '" + p.head.name() + "'");
    }
    case TermKind::Instr: {
      auto it = instrs_.find(p.head.name());
      if (it == instrs_.end())
        return StepResult::stuck(p, "unknown instruction '" + p.head.name() + "'");
      return it->second(*this, p.stack);
    }
    case TermKind::Var:
      return StepResult::stuck(p, "free variable '" + p.head.name() + "' in head position");
    case TermKind::TypeDummy:
      return StepResult::stuck(p, ".type reached head position");
  }
  return StepResult::stuck(p, "no rule applies");
}

Machine::RunResult Machine::run(Process start, std::uint64_t fuel,
                                std::ostream* trace) {
  Process p = std::move(start);
  RunResult result;
  for (std::uint64_t n = 0; n < fuel; ++n) {
    StepResult r = step(p);
    if (trace)
      *trace << "step " << (n + 1) << ": " << r.rule() << " | " << p.head.str(120)
             << " | " << p.stack.depth() << "\n";
    switch (r.tag()) {
      case StepResult::Tag::Next:
        p = r.process();
        break;
      case StepResult::Tag::Halt:
        result.outcome = RunResult::Outcome::Halted;
        result.halt = r.halted();
        result.steps = n + 1;
        result.final = p;
        return result;
      case StepResult::Tag::Stuck:
        result.outcome = RunResult::Outcome::Stuck;
        result.final = r.process();
        result.reason = r.reason();
        result.steps = n + 1;
        return result;
    }
  }
  result.outcome = RunResult::Outcome::FuelExhausted;
  result.final = p;
  result.reason = "fuel exhausted after " + std::to_string(fuel) + " steps";
  result.steps = fuel;
  return result;
}

Machine::RunResult Machine::run(const std::string& entry, Stack stack,
                                std::uint64_t fuel, std::ostream* trace) {
  if (!program_.defined(entry))
    throw std::invalid_argument("entry point '" + entry + "' is not defined");
  return run(Process{Term::ref(entry), std::move(stack)}, fuel, trace);
}

namespace {

void collect_refs(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Ref:
      out.insert(t.name());
      return;
    case TermKind::App:
      collect_refs(t.fn(), out);
      collect_refs(t.arg(), out);
      return;
    case TermKind::Lam:
      collect_refs(t.body(), out);
      return;
    default:
      return;
  }
}

bool axiom_ref_shape(const std::string& name) {
  return name.rfind("Axiom.", 0) == 0;
}

}  // namespace

std::vector<std::string> Machine::unresolved_references() const {
  std::set<std::string> refs;
  for (const auto& [name, body] : program_.definitions()) {
    (void)name;
    collect_refs(body, refs);
  }
  std::vector<std::string> missing;
  for (const auto& r : refs) {
    if (program_.defined(r) || instrs_.count(r)) continue;
    if (fallback_ && axiom_ref_shape(r)) continue;
    missing.push_back(r);
  }
  return missing;
}

std::vector<std::string> Machine::unresolved_references(const std::string& entry) const {
  std::set<std::string> visited, missing;
  std::vector<std::string> queue{entry};
  while (!queue.empty()) {
    std::string name = std::move(queue.back());
    queue.pop_back();
    if (!visited.insert(name).second) continue;
    auto def = program_.lookup(name);
    if (!def) {
      if (!instrs_.count(name) && !(fallback_ && axiom_ref_shape(name)))
        missing.insert(name);
      continue;
    }
    std::set<std::string> refs;
    collect_refs(*def, refs);
    for (auto& r : refs) queue.push_back(r);
  }
  return {missing.begin(), missing.end()};
}

}  // namespace herbrand::kam
