#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

#include "herbrand/kam.hpp"
#include "herbrand/logic.hpp"

namespace herbrand::kam {

// ---------------------------------------------------------------------------
// Second-order constructor encodings
// ---------------------------------------------------------------------------

// The k-th of n constructors with `params` type parameters and `args`
// constructor arguments:
//
//   \p1..\pm \a1..\aj \e1..\en  ek a1 ... aj
//
// Pattern matching is application of the encoded value to one eliminator per
// constructor. `position` is 1-based.
Term encode_constructor(std::size_t params, std::size_t args, std::size_t position,
                        std::size_t constructors);

// The shipped encodings and storage operators, as lambda-c source:
// booleans, pairs, or_introl/or_intror, naturals (Nat.O/Nat.S), atoms and
// indices as rank-wrapped naturals (Atoms.Mk/Indices.Mk), trees
// (Trees.Contrad/Trees.Exp), Mnat/Matom/Mindex/Mtree, and eval_tree.
const char* prelude_source();
const Program& prelude();

// Program = prelude + user source; duplicate names are an error.
Program with_prelude(const Program& user);

// ---------------------------------------------------------------------------
// Host value <-> canonical term
// ---------------------------------------------------------------------------

enum class ValueKind : std::uint8_t { Nat, Atom, Index, Tree };

Term encode_nat(std::uint64_t n);
Term encode_atom(const GroundTheory& th, const Atom& a);
Term encode_index(const GroundTheory& th, const Index& i);
Term encode_tree(const GroundTheory& th, const HerbrandTree& t);

// The storage operator forcing a value of the kind into canonical
// constructor form before handing it to a continuation.
Term storage_operator(ValueKind kind);

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Decoding runs the value against probe eliminators in a private machine
// sharing `prog`; the value may be any term reducing to a canonical form.
// Each throws DecodeError on stuck or out-of-fuel evaluation.
std::uint64_t decode_nat(const Program& prog, const Term& value, std::uint64_t fuel);
Atom decode_atom(const Program& prog, const GroundTheory& th, const Term& value,
                 std::uint64_t fuel);
Index decode_index(const Program& prog, const GroundTheory& th, const Term& value,
                   std::uint64_t fuel);
HerbrandTree decode_tree(const Program& prog, const GroundTheory& th,
                         const Term& value, std::uint64_t fuel);

// ---------------------------------------------------------------------------
// Sigma-0-1 witness extraction
// ---------------------------------------------------------------------------

class ExtractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Witness = std::variant<std::uint64_t, Atom, Index, HerbrandTree>;

// Applies the named realizer to the post-wrapper
//
//   T = M_kind (\x \y. y (stop x))
//
// and decodes the payload of `stop`. `th` is required for atom/index/tree
// kinds. Throws ExtractError when the run gets stuck, runs out of fuel, or
// the stop payload fails to decode.
Witness extract_witness(const Program& user, const std::string& realizer,
                        ValueKind kind, const GroundTheory* th, std::uint64_t fuel);

}  // namespace herbrand::kam
