#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "herbrand/logic.hpp"

namespace herbrand {

enum class Strategy : std::uint8_t { RelevanceFirst, Fair };

struct BuildConfig {
  std::uint64_t fuel = 100000;  // total index scans allowed across the build
  std::uint32_t max_depth = 64;
  Strategy strategy = Strategy::RelevanceFirst;
};

// Outcome of one extension step at a path: close the branch on a falsified
// instance, split on an atom, or give up.
struct NodeDecision {
  enum class Kind : std::uint8_t { Leaf, Branch, Exhausted };
  enum class Reason : std::uint8_t { None, Fuel, ModelFound };

  Kind kind;
  std::optional<Index> leaf;   // Kind::Leaf
  std::optional<Atom> branch;  // Kind::Branch
  Reason reason = Reason::None;
  std::string detail;

  static NodeDecision make_leaf(Index i);
  static NodeDecision make_branch(Atom a);
  static NodeDecision exhausted(Reason r, std::string detail);
};

struct BuildStats {
  std::uint64_t scanned = 0;      // indices evaluated by decide
  std::uint32_t deepest = 0;      // deepest path reached
  std::uint64_t decisions = 0;    // decide calls
};

struct BuildError {
  enum class Kind : std::uint8_t { FuelExhausted, DepthExceeded };
  Kind kind;
  Path deepest_open;  // the path under construction when the build stopped
  std::string message;
};

struct BuildResult {
  std::optional<HerbrandTree> tree;
  std::optional<BuildError> error;
  BuildStats stats;

  explicit operator bool() const { return tree.has_value(); }
};

// One decision at `p`.
//
// Fair strategy: scan indices in rank order from 0; the first falsified
// compound closes the branch, the first unknown one splits on its first
// unassigned atom. This picks the minimal <i, a> pair among candidates.
//
// Relevance-first: first scan the indices relevant to atoms already decided
// on `p` (in rank order, same leaf-before-branch priority per index), then
// fall back to the fair scan starting at `frontier`. Every evaluated index
// consumes fuel.
NodeDecision decide(const GroundTheory& th, const Path& p, const BuildConfig& cfg,
                    std::uint64_t frontier);

// Depth-first construction of a Herbrand tree; the true branch is built
// first. A returned tree always satisfies htree_check (final self-check).
// Exhaustion never yields a partial tree.
BuildResult build_tree(const GroundTheory& th, const BuildConfig& cfg = {});

}  // namespace herbrand
