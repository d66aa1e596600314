#pragma once

// Shared test utilities: example theories, independent oracles, and random
// generators. The oracles here are deliberately brute-force and independent
// of the library's evaluation path.

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "herbrand/builtins.hpp"
#include "herbrand/logic.hpp"
#include "herbrand/theory.hpp"

namespace testutil {

using namespace herbrand;

inline std::shared_ptr<const CompiledTheory> whitecrow() {
  static auto th = compile(parse_theory(whitecrow_theory_source()));
  return th;
}

inline std::shared_ptr<const CompiledTheory> pseudo() {
  static auto th = compile(parse_theory(pseudo_induction_theory_source()));
  return th;
}

inline std::shared_ptr<const CompiledTheory> pair_theory() {
  static auto th = compile(parse_theory(contradiction_pair_theory_source()));
  return th;
}

inline Atom atom0(const std::string& name) { return Atom{name, {}}; }

inline Atom crow42() { return Atom{"Crow", {GroundTerm::numeral(42)}}; }
inline Atom black42() { return Atom{"Black", {GroundTerm::numeral(42)}}; }
inline Atom white42() { return Atom{"White", {GroundTerm::numeral(42)}}; }

// --- oracles ---------------------------------------------------------------

// Truth-table oracle for peval: evaluate under every total valuation of the
// compound's atoms consistent with the path; all-true => True, all-false =>
// False, otherwise Unknown.
inline Truth peval_oracle(const Path& p, const Compound& c) {
  auto atoms = atoms_of(c);
  std::vector<Atom> open;
  Valuation base;
  for (const auto& a : atoms) {
    Truth t = find(p, a);
    if (t == Truth::Unknown)
      open.push_back(a);
    else
      base.assign(a, t == Truth::True);
  }
  bool saw_true = false, saw_false = false;
  std::uint32_t total = 1u << open.size();
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    Valuation val = base;
    for (std::size_t i = 0; i < open.size(); ++i)
      val.assign(open[i], (bits >> i) & 1);
    (eval(val, c) ? saw_true : saw_false) = true;
  }
  if (saw_true && !saw_false) return Truth::True;
  if (saw_false && !saw_true) return Truth::False;
  return Truth::Unknown;
}

// Exhaustive counter-example oracle: under every total valuation of the
// tree's atoms, descending the tree must reach a leaf whose compound the
// valuation falsifies.
inline bool exhaustive_tree_oracle(const GroundTheory& th, const HerbrandTree& tree) {
  auto atoms = tree.atoms();
  if (atoms.size() > 20) return false;  // oracle is 2^k
  std::uint32_t total = 1u << atoms.size();
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    Valuation val;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      val.assign(atoms[i], (bits >> i) & 1);
    const HerbrandTree* cur = &tree;
    while (!cur->is_leaf())
      cur = val(cur->atom()) ? &cur->when_true() : &cur->when_false();
    if (eval(val, th.th(cur->leaf_index()))) return false;
  }
  return true;
}

// Position of a pair in the <i, a> enumeration: all pairs of smaller
// indices, then the atom's slot inside its own compound.
inline std::uint64_t pair_position(const GroundTheory& th, const AtomPair& q) {
  std::uint64_t pos = 0;
  for (std::uint64_t r = 0; r < q.index.rank; ++r)
    pos += atoms_of(th.th(th.nth_index(r))).size();
  auto atoms = atoms_of(th.th(q.index));
  for (std::uint64_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == q.atom) return pos + i;
  throw std::logic_error("pair_position on malformed pair");
}

inline bool pair_less(const GroundTheory& th, const AtomPair& a, const AtomPair& b) {
  return pair_position(th, a) < pair_position(th, b);
}

// --- random generators -------------------------------------------------------

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(eng_);
  }
  bool coin() { return below(2) == 1; }

 private:
  std::mt19937_64 eng_;
};

inline Compound random_compound(Rng& rng, const std::vector<Atom>& atoms,
                                std::size_t size_budget) {
  if (size_budget <= 1 || rng.below(3) == 0)
    return Compound::atom(atoms[rng.below(atoms.size())]);
  switch (rng.below(3)) {
    case 0:
      return Compound::neg(random_compound(rng, atoms, size_budget - 1));
    case 1:
      return Compound::conj(random_compound(rng, atoms, size_budget / 2),
                            random_compound(rng, atoms, size_budget / 2));
    default:
      return Compound::disj(random_compound(rng, atoms, size_budget / 2),
                            random_compound(rng, atoms, size_budget / 2));
  }
}

inline Path random_path(Rng& rng, const std::vector<Atom>& atoms) {
  Path p;
  for (const auto& a : atoms)
    if (rng.coin()) p = p.extended(a, rng.coin());
  return p;
}

// Satisfiability by enumeration; the ground truth for the fuzz generators.
inline bool table_theory_satisfiable(const std::vector<Compound>& axioms,
                                     const std::vector<Atom>& atoms) {
  std::uint32_t total = 1u << atoms.size();
  for (std::uint32_t bits = 0; bits < total; ++bits) {
    Valuation val;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      val.assign(atoms[i], (bits >> i) & 1);
    bool ok = true;
    for (const auto& c : axioms)
      if (!eval(val, c)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}

// Random clause (disjunction of literals) over the atom list.
inline Compound random_clause(Rng& rng, const std::vector<Atom>& atoms) {
  std::size_t width = 1 + rng.below(2);
  Compound c = Compound::atom(atoms[rng.below(atoms.size())]);
  if (rng.coin()) c = Compound::neg(c);
  for (std::size_t i = 1; i < width; ++i) {
    Compound lit = Compound::atom(atoms[rng.below(atoms.size())]);
    if (rng.coin()) lit = Compound::neg(lit);
    c = Compound::disj(std::move(c), std::move(lit));
  }
  return c;
}

struct FuzzTheory {
  std::shared_ptr<TableTheory> theory;
  std::size_t atom_count;
  std::size_t axiom_count;
};

// Random theory over <=4 atoms and <=6 axioms with the required
// satisfiability, verified by exhaustive enumeration.
inline FuzzTheory random_table_theory(Rng& rng, bool want_satisfiable) {
  for (;;) {
    std::size_t k = 1 + rng.below(4);
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < k; ++i) atoms.push_back(atom0("A" + std::to_string(i)));
    std::size_t n = want_satisfiable ? 1 + rng.below(4) : 2 + rng.below(5);
    std::vector<Compound> axioms;
    for (std::size_t i = 0; i < n; ++i) {
      if (!want_satisfiable && rng.below(4) == 0)
        axioms.push_back(random_compound(rng, atoms, 5));
      else
        axioms.push_back(random_clause(rng, atoms));
    }
    if (table_theory_satisfiable(axioms, atoms) != want_satisfiable) continue;
    std::vector<std::pair<std::string, Compound>> named;
    for (std::size_t i = 0; i < axioms.size(); ++i)
      named.emplace_back("ax" + std::to_string(i), axioms[i]);
    return FuzzTheory{std::make_shared<TableTheory>(std::move(named)), k, n};
  }
}

}  // namespace testutil
