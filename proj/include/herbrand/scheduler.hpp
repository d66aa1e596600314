#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "herbrand/kam.hpp"
#include "herbrand/kam_encode.hpp"
#include "herbrand/logic.hpp"

namespace herbrand::kam {

// ---------------------------------------------------------------------------
// The zipper store
// ---------------------------------------------------------------------------

// A zipper over the partial Herbrand tree being built. Leaves are threefold:
// a contradiction, a frozen process (work that remains to be done), or the
// unique working node, which is the zipper's focus. The reverse path from
// the working node to the root is the knowledge base K.
class ZipTree {
 public:
  struct PNode;
  using PTreePtr = std::shared_ptr<const PNode>;
  struct PNode {
    enum class Kind : std::uint8_t { Contrad, Frozen, Working, Node };
    Kind kind = Kind::Working;
    Index index;           // Contrad
    std::optional<Process> frozen;
    Atom atom;              // Node
    PTreePtr when_true, when_false;
  };

  ZipTree() = default;  // a single working node

  bool active() const { return active_; }  // a working node exists
  Path knowledge() const;

  // Replaces the working node by Node(a, Frozen(to_freeze), Working) and
  // moves the focus to the false branch.
  void expand(Atom a, Process to_freeze);

  // Seals the working node with Contrad(i); thaws the leftmost pending
  // frozen leaf if one remains (true branches first), otherwise completes
  // the tree.
  struct SealOutcome {
    std::optional<Process> resumed;
    std::optional<HerbrandTree> completed;
  };
  SealOutcome seal(Index i);

  void clear();  // fresh working root; empties any completed tree

  std::optional<HerbrandTree> completed_tree() const { return completed_; }
  std::uint64_t frozen_outstanding() const;
  std::string dump() const;

 private:
  struct Crumb {
    Atom atom;
    bool focus_true;   // whether the focus sits in the true branch
    PTreePtr sibling;  // the other branch
  };

  PTreePtr materialize(PTreePtr focus_replacement) const;

  std::vector<Crumb> crumbs_;
  bool active_ = true;
  std::optional<HerbrandTree> completed_;
};

// ---------------------------------------------------------------------------
// The scheduler machine
// ---------------------------------------------------------------------------

struct SchedulerEvent {
  enum class Kind : std::uint8_t {
    TestTrue,    // atom found true in K, no side effect
    TestFalse,   // atom found false in K, no side effect
    TestFork,    // new atom: freeze the true branch, continue false
    Contradict,  // branch sealed
    Thaw,        // a frozen process resumed
    Finish,
    Save,
    Reset,
  };
  Kind kind;
  std::optional<Atom> atom;
  std::optional<Index> index;
  Path knowledge;  // K before the side effect
};

// Builds the lambda-c realizer of one axiom instance: decides Th(i) under
// the evolving knowledge base through `test`, with second-order And/Or/Not
// handling, and invokes `contradict i` when the compound comes out false.
// The realizer takes one argument, the continuation run when Th(i) holds.
Term axiom_realizer(const GroundTheory& th, const Index& i);

// The reference name under which the realizer of `i` may be mentioned in
// program text: Axiom.<name> with one ".<term rank>" suffix per argument.
std::string axiom_ref_name(const GroundTheory& th, const Index& i);

// Raised by the five instructions on malformed input (bad atom encoding,
// undecodable contradiction label, finish with no stored continuation);
// carries the zipper state in its message.
class SchedulerAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A Krivine machine extended with the global zipper and cont stores and the
// five instructions test / contradict / reset / finish / save. One instance
// is strictly single-threaded.
class SchedulerMachine {
 public:
  SchedulerMachine(const Program& user, std::shared_ptr<const GroundTheory> th);

  Machine& machine() { return m_; }
  ZipTree& zipper() { return zipper_; }
  const std::optional<Term>& cont_store() const { return cont_; }

  void set_observer(std::function<void(const SchedulerEvent&)> obs) {
    observer_ = std::move(obs);
  }

  StepResult step(const Process& p) { return m_.step(p); }

  std::uint64_t frozen_created() const { return frozen_created_; }
  std::uint64_t thawed() const { return thawed_; }

  struct HerbrandRun {
    enum class Outcome : std::uint8_t { Tree, FuelExhausted, Aborted };
    Outcome outcome;
    std::optional<HerbrandTree> tree;
    std::uint64_t steps = 0;
    std::uint64_t frozen_created = 0;
    std::string message;  // diagnostics, including the zipper state
  };

  // Runs  eval_tree <proof> (\t. stop t)  to completion: the proof term
  // drives the axiom realizers, the zipper materializes the execution tree,
  // and the decoded result must pass htree_check.
  HerbrandRun run_herbrand(const std::string& proof, std::uint64_t fuel,
                           std::ostream* trace = nullptr);

 private:
  void register_instructions();
  StepResult do_finish(const Stack& pi);
  [[noreturn]] void abort_run(const std::string& what, const Stack& st);
  void notify(SchedulerEvent ev) const {
    if (observer_) observer_(std::move(ev));
  }

  std::shared_ptr<const GroundTheory> th_;
  Machine m_;
  ZipTree zipper_;
  std::optional<Term> cont_;
  std::uint64_t frozen_created_ = 0;
  std::uint64_t thawed_ = 0;
  std::uint64_t decode_fuel_ = 1000000;
  std::function<void(const SchedulerEvent&)> observer_;
};

}  // namespace herbrand::kam
