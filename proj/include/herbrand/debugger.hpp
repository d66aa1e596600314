#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "herbrand/logic.hpp"

namespace herbrand {

// The walk's payoff: the falsified axiom instance together with the atom
// assignment that reached it.
struct CounterExample {
  Index index;
  std::vector<std::pair<Atom, bool>> assignment;  // in query order

  std::string str() const;
};

class WalkError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Walks a checker-accepted tree as a BDD against the oracle: at each inner
// node query the atom, descend the matching branch, record the answer.
// Refuses trees rejected by htree_check (throws WalkError).
CounterExample walk(const GroundTheory& th, const HerbrandTree& t,
                    const Valuation& oracle);

// True iff the recorded assignment falsifies Th(cex.index) under peval.
// Throws std::invalid_argument for an unknown index.
bool verify(const GroundTheory& th, const CounterExample& cex);

}  // namespace herbrand
