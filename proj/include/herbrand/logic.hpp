#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herbrand/term.hpp"

namespace herbrand {

// ---------------------------------------------------------------------------
// Atoms and indices
// ---------------------------------------------------------------------------

// A ground atomic formula: predicate symbol applied to ground terms.
struct Atom {
  std::string pred;
  std::vector<GroundTerm> args;

  std::string str() const;  // "Crow(42)", "P" for nullary predicates

  bool operator==(const Atom& o) const {
    return pred == o.pred && args == o.args;
  }
  std::strong_ordering operator<=>(const Atom& o) const {
    if (auto c = pred <=> o.pred; c != 0) return c;
    return args <=> o.args;
  }
};

// One axiom instance: the axiom's name together with the ground terms
// substituted for its universal variables. `rank` is its position in the
// theory's index enumeration, which orders indices totally.
struct Index {
  std::string axiom;
  std::vector<GroundTerm> args;
  std::uint64_t rank = 0;

  std::string str() const;  // "crow_black(42)", "crow42"

  // Identity is the instance itself; rank is derived data.
  bool operator==(const Index& o) const {
    return axiom == o.axiom && args == o.args;
  }
};

// ---------------------------------------------------------------------------
// Three-valued truth
// ---------------------------------------------------------------------------

enum class Truth : std::uint8_t { False = 0, True = 1, Unknown = 2 };

inline Truth truth_of(bool b) { return b ? Truth::True : Truth::False; }

inline Truth tri_not(Truth t) {
  if (t == Truth::Unknown) return Truth::Unknown;
  return t == Truth::True ? Truth::False : Truth::True;
}

// Kleene strong conjunction: false dominates, unknown absorbs the rest.
inline Truth tri_and(Truth a, Truth b) {
  if (a == Truth::False || b == Truth::False) return Truth::False;
  if (a == Truth::True && b == Truth::True) return Truth::True;
  return Truth::Unknown;
}

inline Truth tri_or(Truth a, Truth b) {
  if (a == Truth::True || b == Truth::True) return Truth::True;
  if (a == Truth::False && b == Truth::False) return Truth::False;
  return Truth::Unknown;
}

const char* to_string(Truth t);

// ---------------------------------------------------------------------------
// Compounds: the Boolean algebra generated by the atoms
// ---------------------------------------------------------------------------

class Compound {
 public:
  enum class Kind : std::uint8_t { Atom, And, Or, Not };

  static Compound atom(Atom a);
  static Compound conj(Compound l, Compound r);
  static Compound disj(Compound l, Compound r);
  static Compound neg(Compound c);

  Kind kind() const;
  const Atom& atom_ref() const;
  const Compound& lhs() const;
  const Compound& rhs() const;
  const Compound& sub() const;

  bool operator==(const Compound& o) const;

  std::string str() const;

 private:
  struct Node;
  Compound() = default;  // null handle, used only while building nodes
  std::shared_ptr<const Node> node_;
};

// Atoms of a compound in order of first occurrence in a left-to-right
// depth-first traversal, duplicates removed. This traversal order is the
// per-compound atom order used by AtomPair.
std::vector<Atom> atoms_of(const Compound& c);

// ---------------------------------------------------------------------------
// Paths: partial interpretations, read from the node back to the root
// ---------------------------------------------------------------------------

class Path {
 public:
  struct Entry {
    Atom atom;
    bool value;
    bool operator==(const Entry&) const = default;
  };

  Path() = default;
  static Path empty() { return {}; }

  // New path with (a = value) as the entry nearest the node.
  Path extended(Atom a, bool value) const;

  // The truth of `a` under this partial interpretation; the entry nearest
  // the node wins (well-formed paths contain each atom at most once).
  Truth find(const Atom& a) const;

  bool contains(const Atom& a) const { return find(a) != Truth::Unknown; }
  bool well_formed() const;  // no atom occurs twice

  std::size_t length() const { return entries_.size(); }
  bool is_empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }  // root first

  std::string str() const;  // node-first rendering, e.g. "White(42)=T ..."

  bool operator==(const Path&) const = default;

 private:
  std::vector<Entry> entries_;
};

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

// A total interpretation of the atoms. Either an explicit finite assignment
// with a default, or an arbitrary query function.
class Valuation {
 public:
  Valuation() = default;
  explicit Valuation(bool default_value) : default_(default_value) {}

  static Valuation from_function(std::function<bool(const Atom&)> f) {
    Valuation v;
    v.fn_ = std::move(f);
    return v;
  }

  Valuation& assign(Atom a, bool value) {
    map_[std::move(a)] = value;
    return *this;
  }

  bool operator()(const Atom& a) const;

  // True when `a` is covered by an explicit assignment (not the fallback).
  bool has_explicit(const Atom& a) const { return map_.count(a) != 0; }

 private:
  std::map<Atom, bool> map_;
  std::function<bool(const Atom&)> fn_;
  std::optional<bool> default_ = false;
};

bool eval(const Valuation& val, const Compound& c);
Truth find(const Path& p, const Atom& a);
Truth peval(const Path& p, const Compound& c);

// ---------------------------------------------------------------------------
// Herbrand trees
// ---------------------------------------------------------------------------

// Finite binary tree: inner nodes are labeled by atoms (first subtree is
// the atom-true branch), leaves by the falsified axiom instance.
class HerbrandTree {
 public:
  static HerbrandTree leaf(Index i);
  static HerbrandTree node(Atom a, HerbrandTree when_true, HerbrandTree when_false);

  bool is_leaf() const;
  const Index& leaf_index() const;
  const Atom& atom() const;
  const HerbrandTree& when_true() const;
  const HerbrandTree& when_false() const;

  std::size_t leaf_count() const;
  std::size_t inner_count() const;
  std::size_t depth() const;          // leaves have depth 0
  std::vector<Atom> atoms() const;    // distinct atoms, preorder

  bool operator==(const HerbrandTree& o) const;

  std::string str() const;

 private:
  struct Node;
  HerbrandTree() = default;  // null handle, used only while building nodes
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Ground theories
// ---------------------------------------------------------------------------

// A compiled theory: an enumeration of its axiom instances (the indices),
// the map from indices to quantifier-free formulae, a relevance matcher,
// and the Herbrand-base enumeration of its ground atoms.
class GroundTheory {
 public:
  virtual ~GroundTheory() = default;

  // Index enumeration. Ranks are order-isomorphic to an initial segment of
  // the naturals (or all of them when the enumeration is infinite).
  virtual std::optional<std::uint64_t> index_count() const = 0;
  virtual Index nth_index(std::uint64_t rank) const = 0;  // throws std::out_of_range

  // The theory map. Deterministic: equal indices yield equal compounds.
  virtual Compound th(const Index& i) const = 0;

  // All indices whose compound mentions `a`. Sound always; complete for
  // instantiations whose unconstrained variables weigh no more than the
  // weight of the index at `frontier_rank`. Returned in axiom-declaration
  // order, then by instantiation rank within one axiom.
  virtual std::vector<Index> relevant(const Atom& a,
                                      std::uint64_t frontier_rank) const = 0;

  // Herbrand-base enumeration.
  virtual std::optional<std::uint64_t> atom_count() const = 0;
  virtual Atom nth_atom(std::uint64_t rank) const = 0;  // throws std::out_of_range
  virtual std::uint64_t atom_rank(const Atom& a) const = 0;  // throws std::invalid_argument

  // Rebuild a full Index (with its rank) from its name and arguments;
  // nullopt when the axiom is unknown or the arity does not fit.
  virtual std::optional<Index> make_index(const std::string& axiom,
                                          std::vector<GroundTerm> args) const = 0;

  // Ground-term enumeration, when the theory carries one (the compiled
  // frontend does; table-backed theories have no term universe).
  virtual std::optional<GroundTerm> nth_term(std::uint64_t rank) const;
  virtual std::optional<std::uint64_t> term_rank(const GroundTerm& t) const;

  // Weight of the index at `rank`, clamped to the last index for finite
  // enumerations. Used as the completion bound for relevance matching.
  virtual std::uint64_t index_weight(std::uint64_t rank) const;
};

// A finite, parameterless theory given literally as a list of named ground
// compounds. Indices are the declaration positions; the atom enumeration is
// first-occurrence order across the compounds.
class TableTheory final : public GroundTheory {
 public:
  explicit TableTheory(std::vector<std::pair<std::string, Compound>> axioms);

  std::optional<std::uint64_t> index_count() const override;
  Index nth_index(std::uint64_t rank) const override;
  Compound th(const Index& i) const override;
  std::vector<Index> relevant(const Atom& a, std::uint64_t frontier_rank) const override;
  std::optional<std::uint64_t> atom_count() const override;
  Atom nth_atom(std::uint64_t rank) const override;
  std::uint64_t atom_rank(const Atom& a) const override;
  std::optional<Index> make_index(const std::string& axiom,
                                  std::vector<GroundTerm> args) const override;

 private:
  std::vector<std::pair<std::string, Compound>> axioms_;
  std::vector<Atom> atoms_;
};

// ---------------------------------------------------------------------------
// The pair order <i, a> and its predecessor
// ---------------------------------------------------------------------------

// A pair of an index and one atom of its compound, ordered lexicographically
// by index rank, then by the atom's position in atoms_of(Th i).
struct AtomPair {
  Index index;
  Atom atom;

  bool operator==(const AtomPair&) const = default;
  std::string str() const;
};

// Predecessor in the pair order; the global minimum is returned unchanged.
// Throws std::invalid_argument when `q.atom` does not occur in Th(q.index).
AtomPair pair_pred(const GroundTheory& th, const AtomPair& q);

// ---------------------------------------------------------------------------
// The tree checker
// ---------------------------------------------------------------------------

struct CheckReport {
  enum class Violation { None, LeafNotFalsified, DuplicateAtom };

  bool ok = true;
  Violation violation = Violation::None;
  Path path;           // the accumulated path at the offending position
  std::string detail;

  explicit operator bool() const { return ok; }
};

// Decides whether `t` is a Herbrand tree for `th`: every leaf's compound
// partially evaluates to false on its path, and no atom repeats along any
// path. Total; rejection reports the first violation in preorder.
CheckReport htree_check(const GroundTheory& th, const HerbrandTree& t);

}  // namespace herbrand
