#pragma once

#include <stdexcept>
#include <string>

#include "herbrand/logic.hpp"

namespace herbrand {

class TreeIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Canonical JSON:
//   leaf: {"leaf":{"axiom":<name>,"args":[<term strings>]}}
//   node: {"node":{"atom":"<pred>(<args>)","true":<tree>,"false":<tree>}}
std::string tree_to_json(const HerbrandTree& t);

// Parses the canonical JSON back, resolving leaves against the theory so
// indices carry their ranks. Throws TreeIoError on malformed input or
// unknown axioms/atoms.
HerbrandTree tree_from_json(const GroundTheory& th, const std::string& text);

// Graphviz rendering: atom labels on inner nodes, "T"/"F" edge labels,
// axiom name + arguments on leaves.
std::string tree_to_dot(const HerbrandTree& t);

// Indented plain-text rendering.
std::string tree_to_text(const HerbrandTree& t);

}  // namespace herbrand
