#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "herbrand/logic.hpp"
#include "herbrand/support.hpp"
#include "herbrand/term.hpp"

namespace herbrand {

// ---------------------------------------------------------------------------
// Signatures and axiom schemas
// ---------------------------------------------------------------------------

struct FunctionSymbol {
  std::string name;
  std::size_t arity = 1;
};

struct PredicateSymbol {
  std::string name;
  std::size_t arity = 0;
};

struct Signature {
  std::vector<std::string> constants;       // declaration order
  std::vector<FunctionSymbol> functions;    // declaration order
  std::vector<PredicateSymbol> predicates;  // declaration order
  bool numerals = false;  // integer literals as an infinite constant family

  bool has_empty_universe() const {
    return constants.empty() && !numerals;
  }
  std::optional<std::size_t> predicate_arity(const std::string& name) const;
};

// A term that may mention the universal variables of its axiom.
class PatternTerm {
 public:
  enum class Kind : std::uint8_t { Var, Numeral, Apply };

  static PatternTerm var(std::string name);
  static PatternTerm numeral(std::uint64_t n);
  static PatternTerm apply(std::string symbol, std::vector<PatternTerm> args = {});
  static PatternTerm ground(const GroundTerm& t);

  Kind kind() const { return kind_; }
  const std::string& name() const { return sym_; }  // Var name or Apply symbol
  std::uint64_t numeral_value() const { return num_; }
  const std::vector<PatternTerm>& args() const { return args_; }

  std::string str() const;

 private:
  Kind kind_ = Kind::Numeral;
  std::string sym_;
  std::vector<PatternTerm> args_;
  std::uint64_t num_ = 0;
};

struct PatternAtom {
  std::string pred;
  std::vector<PatternTerm> args;
  std::string str() const;
};

// Axiom bodies reuse the compound shape; -> and <-> are desugared at parse
// time, so only Atom/And/Or/Not occur.
class PatternCompound {
 public:
  using Kind = Compound::Kind;

  static PatternCompound atom(PatternAtom a);
  static PatternCompound conj(PatternCompound l, PatternCompound r);
  static PatternCompound disj(PatternCompound l, PatternCompound r);
  static PatternCompound neg(PatternCompound c);

  Kind kind() const;
  const PatternAtom& atom_ref() const;
  const PatternCompound& lhs() const;
  const PatternCompound& rhs() const;
  const PatternCompound& sub() const;

  std::string str() const;

 private:
  struct Node;
  PatternCompound() = default;
  std::shared_ptr<const Node> node_;
};

struct AxiomSchema {
  std::string name;
  std::vector<std::string> vars;  // universally quantified, in binding order
  PatternCompound body;
};

struct TheorySpec {
  Signature signature;
  std::vector<AxiomSchema> axioms;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

// Parses the theory file grammar:
//
//   const a, b;  fun f/1, g/2;  pred P/1, Q/0;
//   option numerals;
//   axiom name: forall x y. <formula>;
//   formula := atom | ~f | f /\ f | f \/ f | f -> f | f <-> f | (f)
//
// '#' starts a comment. Throws ParseError with a 1-based location on syntax
// errors, unknown symbols, arity mismatches and unbound variables.
TheorySpec parse_theory(std::string_view text);

// Ground-term / ground-atom text parsers (the syntax used by tree files and
// valuation files). Validated against no signature; see CompiledTheory for
// signature-checked lookups.
GroundTerm parse_ground_term(std::string_view text);
Atom parse_ground_atom(std::string_view text);

// ---------------------------------------------------------------------------
// Grounding: the compiled theory
// ---------------------------------------------------------------------------

class CompiledTheory;

// Compiles a parsed theory: fixes the term, atom and index enumerations and
// bundles the Th map and the relevance matcher behind the GroundTheory
// interface. Throws std::invalid_argument for unusable specs (no axioms, or
// quantified axioms over an empty Herbrand universe).
std::shared_ptr<const CompiledTheory> compile(TheorySpec spec);

class CompiledTheory final : public GroundTheory,
                             public std::enable_shared_from_this<CompiledTheory> {
 public:
  const TheorySpec& spec() const { return spec_; }

  // Term enumeration: all ground terms ordered by weight, ties broken by
  // declared constants first, then the numeral of that weight, then function
  // applications in declaration order with argument tuples in lexicographic
  // rank order. Bijective; throws std::out_of_range past a finite universe.
  GroundTerm term_at(std::uint64_t rank) const;
  std::uint64_t rank_of_term(const GroundTerm& t) const;  // std::invalid_argument
  std::optional<std::uint64_t> term_count() const;

  // Index enumeration: all (axiom, ground arguments) instances ordered by
  // total argument weight, ties by axiom declaration order then lexicographic
  // argument ranks. Zero-variable axioms carry weight 0 and come first.
  Index nth_index(std::uint64_t rank) const override;
  std::uint64_t rank_of_index(const std::string& axiom,
                              const std::vector<GroundTerm>& args) const;
  std::optional<std::uint64_t> index_count() const override;

  // Herbrand-base enumeration, same scheme over predicates.
  Atom nth_atom(std::uint64_t rank) const override;
  std::uint64_t atom_rank(const Atom& a) const override;
  std::optional<std::uint64_t> atom_count() const override;

  // Substitutes the instance arguments into the axiom body. This is Th.
  Compound th(const Index& i) const override;
  Compound ground(const Index& i) const { return th(i); }

  std::vector<Index> relevant(const Atom& a, std::uint64_t frontier_rank) const override;

  std::optional<Index> make_index(const std::string& axiom,
                                  std::vector<GroundTerm> args) const override;

  std::optional<GroundTerm> nth_term(std::uint64_t rank) const override;
  std::optional<std::uint64_t> term_rank(const GroundTerm& t) const override;
  std::uint64_t index_weight(std::uint64_t rank) const override;

  // Signature-checked atom lookup for text inputs (valuations, tree files).
  Atom check_atom(const Atom& a) const;  // throws std::invalid_argument

 private:
  friend std::shared_ptr<const CompiledTheory> compile(TheorySpec spec);
  explicit CompiledTheory(TheorySpec spec);

  std::uint64_t terms_of_weight(std::uint64_t w) const;
  std::uint64_t terms_below_weight(std::uint64_t w) const;   // strict
  std::uint64_t indices_of_weight(std::uint64_t w) const;
  std::uint64_t indices_below_weight(std::uint64_t w) const;  // strict
  std::uint64_t atoms_of_weight(std::uint64_t w) const;
  std::uint64_t atoms_below_weight(std::uint64_t w) const;    // strict
  std::uint64_t tuples_of_weight(std::size_t arity, std::uint64_t w) const;
  GroundTerm term_in_weight(std::uint64_t w, std::uint64_t pos) const;
  std::vector<GroundTerm> tuple_in_weight(std::size_t arity, std::uint64_t w,
                                          std::uint64_t pos) const;
  std::uint64_t tuple_pos_in_weight(const std::vector<GroundTerm>& args) const;
  std::uint64_t rank_in_weight_of(const GroundTerm& t) const;

  TheorySpec spec_;
  std::map<std::string, std::size_t> axiom_pos_;
  // Per-weight and cumulative counts, filled incrementally. Entry [w] holds
  // the count at weight w (terms start at weight 1, so [w-1] there).
  mutable std::vector<std::uint64_t> term_count_memo_, term_cum_memo_;
  mutable std::vector<std::uint64_t> index_count_memo_, index_cum_memo_;
  mutable std::vector<std::uint64_t> atom_count_memo_, atom_cum_memo_;
};

// Convenience free functions mirroring the operation names.
GroundTerm nth_term(const CompiledTheory& th, std::uint64_t rank);
Index nth_index(const CompiledTheory& th, std::uint64_t rank);

}  // namespace herbrand
