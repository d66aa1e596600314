#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "herbrand/support.hpp"

namespace herbrand::kam {

class Stack;

// ---------------------------------------------------------------------------
// Terms of the lambda-c calculus
// ---------------------------------------------------------------------------

enum class TermKind : std::uint8_t {
  Var,        // x
  App,        // t u
  Lam,        // \x. t
  Callcc,     // callcc
  Cont,       // k_pi, a reified stack
  Instr,      // named instruction constant
  TypeDummy,  // .type — inert; an error in head position
  Ref,        // reference to a program definition, resolved lazily
};

class Term {
 public:
  Term();  // .type

  static Term var(std::string name);
  static Term app(Term f, Term a);
  static Term lam(std::string binder, Term body);
  static Term callcc();
  static Term cont(Stack saved);
  static Term instr(std::string name);
  static Term type_dummy();
  static Term ref(std::string name);

  // Left-nested application t a1 a2 ...
  static Term apply_all(Term t, const std::vector<Term>& args);

  TermKind kind() const;
  const std::string& name() const;  // Var / Instr / Ref name, Lam binder
  const Term& fn() const;           // App
  const Term& arg() const;          // App
  const Term& body() const;         // Lam
  const Stack& saved() const;       // Cont

  bool operator==(const Term& o) const;

  std::string str() const;
  std::string str(std::size_t limit) const;  // truncated rendering

 private:
  struct Node;
  explicit Term(std::nullptr_t) noexcept {}  // null handle, internal use
  std::shared_ptr<const Node> n_;
};

// ---------------------------------------------------------------------------
// Stacks and processes
// ---------------------------------------------------------------------------

// A finite list of closed terms over the single bottom `nil`.
class Stack {
 public:
  Stack() = default;  // nil

  static Stack nil() { return {}; }
  static Stack of(const std::vector<Term>& ts);  // first element on top

  Stack pushed(Term t) const;  // t . pi
  bool empty() const { return cell_ == nullptr; }
  const Term& top() const;
  Stack rest() const;
  std::size_t depth() const;

  bool operator==(const Stack& o) const;

  std::string str(std::size_t limit = 120) const;

 private:
  struct Cell {
    Term head;
    std::shared_ptr<const Cell> tail;
    std::size_t depth;
  };
  std::shared_ptr<const Cell> cell_;
};

struct Process {
  Term head;
  Stack stack;

  bool operator==(const Process& o) const {
    return head == o.head && stack == o.stack;
  }
  std::string str(std::size_t limit = 120) const;
};

// Free variables and capture-avoiding substitution. Stacks contain closed
// terms, so substitution never descends into continuation constants.
std::set<std::string> free_vars(const Term& t);
bool is_closed(const Term& t);
Term substitute(const Term& t, const std::string& var, const Term& value);

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

// An ordered collection of `Define name = term ;;` definitions plus
// substitution overrides (the realizer-optimization hook). References are
// resolved lazily when a Ref reaches head position, so definitions may be
// recursive.
class Program {
 public:
  void define(std::string name, Term body);             // throws on duplicates
  void set_override(std::string name, Term replacement);
  std::optional<Term> lookup(const std::string& name) const;  // override wins
  bool defined(const std::string& name) const;
  const std::vector<std::pair<std::string, Term>>& definitions() const {
    return defs_;
  }
  // Adds all definitions of `other`; duplicate names are an error.
  void merge(const Program& other);

 private:
  std::vector<std::pair<std::string, Term>> defs_;
  std::map<std::string, std::size_t> by_name_;
  std::map<std::string, Term> overrides_;
};

// Parses the program grammar:
//
//   Define name = term ;;          Define name p1 p2 = term ;;   (sugar)
//   term := \x. t | \x t | t u | (t) | callcc | .type | ident
//
// '#' starts a comment. Identifiers may contain dots (Trees.Contrad). Unknown
// identifiers parse as Refs and are resolved against the program at run time;
// Machine::unresolved_references performs the link check.
Program parse_program(std::string_view source);

// ---------------------------------------------------------------------------
// The machine
// ---------------------------------------------------------------------------

struct Halted {
  std::string instruction;    // which instruction halted
  std::vector<Term> values;   // its operands, e.g. the stop payload
};

class StepResult {
 public:
  enum class Tag : std::uint8_t { Next, Halt, Stuck };

  static StepResult next(Process p, std::string rule);
  static StepResult halt(Halted h, std::string rule);
  static StepResult stuck(Process p, std::string reason);

  Tag tag() const { return tag_; }
  const Process& process() const { return process_; }  // Next / Stuck
  const Halted& halted() const { return halted_; }
  const std::string& rule() const { return rule_; }    // trace label
  const std::string& reason() const { return reason_; }

 private:
  Tag tag_ = Tag::Stuck;
  Process process_;
  Halted halted_;
  std::string rule_;
  std::string reason_;
};

class Machine;
using InstrHandler = std::function<StepResult(Machine&, const Stack&)>;

// Krivine machine with the four rules Grab / Push / Save / Restore, lazy
// definition lookup, and named instruction constants with pluggable rules.
class Machine {
 public:
  explicit Machine(Program program);

  Program& program() { return program_; }
  const Program& program() const { return program_; }

  // Instructions. register_basics installs `stop` and `print`.
  void register_instruction(std::string name, InstrHandler handler);
  void register_basics();
  bool has_instruction(const std::string& name) const;

  // Names a Ref may resolve to when neither a definition nor an instruction
  // matches (used for on-demand axiom realizers).
  void set_fallback_resolver(std::function<std::optional<Term>(const std::string&)> r);

  StepResult step(const Process& p);

  struct RunResult {
    enum class Outcome : std::uint8_t { Halted, Stuck, FuelExhausted };
    Outcome outcome;
    Halted halt;
    Process final;        // the stuck or out-of-fuel process
    std::string reason;
    std::uint64_t steps = 0;
  };

  RunResult run(Process start, std::uint64_t fuel, std::ostream* trace = nullptr);
  RunResult run(const std::string& entry, Stack stack, std::uint64_t fuel,
                std::ostream* trace = nullptr);

  // Link check: every Ref in the program (or reachable from `entry` through
  // definitions) must resolve to a definition, an instruction, or the
  // fallback pattern.
  std::vector<std::string> unresolved_references() const;
  std::vector<std::string> unresolved_references(const std::string& entry) const;

  std::ostream* print_sink = nullptr;  // `print` goes here (defaults to stdout)

 private:
  Program program_;
  std::map<std::string, InstrHandler> instrs_;
  std::function<std::optional<Term>(const std::string&)> fallback_;
};

}  // namespace herbrand::kam
