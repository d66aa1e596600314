#pragma once

#include <memory>

#include "herbrand/logic.hpp"

namespace herbrand {

// Theory sources shipped under theories/, also embedded for tests and for
// the builtin contradiction proofs.
const char* whitecrow_theory_source();
const char* pseudo_induction_theory_source();
const char* contradiction_pair_theory_source();

// Hand-written lambda-c contradiction proofs for the two example theories;
// the entry point is named `proof`. Axiom realizers are referenced by their
// Axiom.<name>(.<term rank>)* names and generated on demand.
const char* whitecrow_proof_source();
const char* pseudo_induction_proof_source();

// A hand-built variant of the pseudo-induction theory whose refuted point
// sits one step deeper (the negated axiom is ~P(f^3(a)) instead of
// ~P(f^2(a))). It implements GroundTheory directly, with an infinite index
// enumeration and no file representation, so it doubles as an example of a
// custom theory behind the library interface.
std::shared_ptr<const GroundTheory> shifted_pseudo_theory();

}  // namespace herbrand
