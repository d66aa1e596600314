#include "herbrand/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace herbrand::kam {

// ---------------------------------------------------------------------------
// ZipTree
// ---------------------------------------------------------------------------

namespace {

ZipTree::PTreePtr make_contrad(Index i) {
  auto n = std::make_shared<ZipTree::PNode>();
  n->kind = ZipTree::PNode::Kind::Contrad;
  n->index = std::move(i);
  return n;
}

ZipTree::PTreePtr make_frozen(Process p) {
  auto n = std::make_shared<ZipTree::PNode>();
  n->kind = ZipTree::PNode::Kind::Frozen;
  n->frozen = std::move(p);
  return n;
}

ZipTree::PTreePtr make_working() {
  auto n = std::make_shared<ZipTree::PNode>();
  n->kind = ZipTree::PNode::Kind::Working;
  return n;
}

ZipTree::PTreePtr make_node(Atom a, ZipTree::PTreePtr t, ZipTree::PTreePtr f) {
  auto n = std::make_shared<ZipTree::PNode>();
  n->kind = ZipTree::PNode::Kind::Node;
  n->atom = std::move(a);
  n->when_true = std::move(t);
  n->when_false = std::move(f);
  return n;
}

// Path to the leftmost Frozen leaf, true branches first; empty optional when
// no frozen leaf remains. Directions read root-to-leaf (true = left).
bool find_frozen(const ZipTree::PTreePtr& t, std::vector<bool>& dirs) {
  switch (t->kind) {
    case ZipTree::PNode::Kind::Frozen:
      return true;
    case ZipTree::PNode::Kind::Node:
      dirs.push_back(true);
      if (find_frozen(t->when_true, dirs)) return true;
      dirs.back() = false;
      if (find_frozen(t->when_false, dirs)) return true;
      dirs.pop_back();
      return false;
    default:
      return false;
  }
}

std::uint64_t count_frozen(const ZipTree::PTreePtr& t) {
  if (!t) return 0;
  switch (t->kind) {
    case ZipTree::PNode::Kind::Frozen:
      return 1;
    case ZipTree::PNode::Kind::Node:
      return count_frozen(t->when_true) + count_frozen(t->when_false);
    default:
      return 0;
  }
}

HerbrandTree project_complete(const ZipTree::PTreePtr& t) {
  switch (t->kind) {
    case ZipTree::PNode::Kind::Contrad:
      return HerbrandTree::leaf(t->index);
    case ZipTree::PNode::Kind::Node:
      return HerbrandTree::node(t->atom, project_complete(t->when_true),
                                project_complete(t->when_false));
    default:
      throw std::logic_error("projection of an incomplete zipper tree");
  }
}

void render(const ZipTree::PTreePtr& t, std::string& out, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  switch (t->kind) {
    case ZipTree::PNode::Kind::Contrad:
      out += pad + "contrad " + t->index.str() + "\n";
      return;
    case ZipTree::PNode::Kind::Frozen:
      out += pad + "frozen <" + t->frozen->str(60) + ">\n";
      return;
    case ZipTree::PNode::Kind::Working:
      out += pad + "working\n";
      return;
    case ZipTree::PNode::Kind::Node:
      out += pad + "node " + t->atom.str() + "\n";
      render(t->when_true, out, depth + 1);
      render(t->when_false, out, depth + 1);
      return;
  }
}

}  // namespace

Path ZipTree::knowledge() const {
  Path p;
  for (const auto& c : crumbs_) p = p.extended(c.atom, c.focus_true);
  return p;
}

ZipTree::PTreePtr ZipTree::materialize(PTreePtr focus_replacement) const {
  PTreePtr cur = std::move(focus_replacement);
  for (auto it = crumbs_.rbegin(); it != crumbs_.rend(); ++it) {
    cur = it->focus_true ? make_node(it->atom, cur, it->sibling)
                         : make_node(it->atom, it->sibling, cur);
  }
  return cur;
}

void ZipTree::expand(Atom a, Process to_freeze) {
  if (!active_) throw std::logic_error("expand on a completed zipper");
  crumbs_.push_back(Crumb{std::move(a), false, make_frozen(std::move(to_freeze))});
}

ZipTree::SealOutcome ZipTree::seal(Index i) {
  if (!active_) throw std::logic_error("seal on a completed zipper");
  PTreePtr root = materialize(make_contrad(std::move(i)));
  std::vector<bool> dirs;
  if (!find_frozen(root, dirs)) {
    completed_ = project_complete(root);
    active_ = false;
    crumbs_.clear();
    return SealOutcome{std::nullopt, completed_};
  }
  // Refocus on the frozen leaf: rebuild the crumbs along its path.
  crumbs_.clear();
  PTreePtr cur = root;
  for (bool dir : dirs) {
    crumbs_.push_back(Crumb{cur->atom, dir, dir ? cur->when_false : cur->when_true});
    cur = dir ? cur->when_true : cur->when_false;
  }
  assert(cur->kind == PNode::Kind::Frozen);
  return SealOutcome{cur->frozen, std::nullopt};
}

void ZipTree::clear() {
  crumbs_.clear();
  active_ = true;
  completed_.reset();
}

std::uint64_t ZipTree::frozen_outstanding() const {
  std::uint64_t n = 0;
  for (const auto& c : crumbs_) n += count_frozen(c.sibling);
  return n;
}

std::string ZipTree::dump() const {
  if (!active_) {
    if (completed_) return "completed: " + completed_->str() + "\n";
    return "empty\n";
  }
  std::string out;
  render(materialize(make_working()), out, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Axiom realizers
// ---------------------------------------------------------------------------

namespace {

Term realize(const GroundTheory& th, const Compound& c, Term on_true, Term on_false) {
  switch (c.kind()) {
    case Compound::Kind::Atom:
      return Term::apply_all(Term::instr("test"), {encode_atom(th, c.atom_ref()),
                                                   std::move(on_true),
                                                   std::move(on_false)});
    case Compound::Kind::And:
      return realize(th, c.lhs(), realize(th, c.rhs(), std::move(on_true), on_false),
                     on_false);
    case Compound::Kind::Or:
      return realize(th, c.lhs(), on_true,
                     realize(th, c.rhs(), on_true, std::move(on_false)));
    case Compound::Kind::Not:
      return realize(th, c.sub(), std::move(on_false), std::move(on_true));
  }
  throw std::logic_error("bad compound");
}

}  // namespace

Term axiom_realizer(const GroundTheory& th, const Index& i) {
  Term refute = Term::app(Term::instr("contradict"), encode_index(th, i));
  return Term::lam("k", realize(th, th.th(i), Term::var("k"), std::move(refute)));
}

std::string axiom_ref_name(const GroundTheory& th, const Index& i) {
  std::string name = "Axiom." + i.axiom;
  for (const auto& arg : i.args) {
    auto rank = th.term_rank(arg);
    if (!rank)
      throw std::invalid_argument("theory has no term enumeration to name " + i.str());
    name += "." + std::to_string(*rank);
  }
  return name;
}

// ---------------------------------------------------------------------------
// SchedulerMachine
// ---------------------------------------------------------------------------

SchedulerMachine::SchedulerMachine(const Program& user,
                                   std::shared_ptr<const GroundTheory> th)
    : th_(std::move(th)), m_(with_prelude(user)) {
  m_.register_basics();
  register_instructions();
  // Resolve Axiom.<name>(.<term rank>)* references to generated realizers.
  m_.set_fallback_resolver([this](const std::string& name) -> std::optional<Term> {
    if (name.rfind("Axiom.", 0) != 0) return std::nullopt;
    std::string rest = name.substr(6);
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= rest.size(); ++i) {
      if (i == rest.size() || rest[i] == '.') {
        parts.push_back(rest.substr(start, i - start));
        start = i + 1;
      }
    }
    if (parts.empty() || parts[0].empty()) return std::nullopt;
    std::vector<GroundTerm> args;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].empty() ||
          !std::all_of(parts[i].begin(), parts[i].end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        return std::nullopt;
      auto t = th_->nth_term(std::stoull(parts[i]));
      if (!t) return std::nullopt;
      args.push_back(std::move(*t));
    }
    auto idx = th_->make_index(parts[0], std::move(args));
    if (!idx) return std::nullopt;
    return axiom_realizer(*th_, *idx);
  });
}

void SchedulerMachine::abort_run(const std::string& what, const Stack&) {
  throw SchedulerAbort(what + "\nzipper:\n" + zipper_.dump());
}

StepResult SchedulerMachine::do_finish(const Stack& pi) {
  if (!cont_) abort_run("finish with no stored continuation", pi);
  auto tree = zipper_.completed_tree();
  if (!tree) abort_run("finish on an incomplete tree", pi);
  notify(SchedulerEvent{SchedulerEvent::Kind::Finish, std::nullopt, std::nullopt,
                        Path::empty()});
  Term encoded = encode_tree(*th_, *tree);
  return StepResult::next(Process{*cont_, pi.pushed(std::move(encoded))}, "finish");
}

void SchedulerMachine::register_instructions() {
  m_.register_instruction("test", [this](Machine&, const Stack& st) -> StepResult {
    if (st.depth() < 3)
      abort_run("test needs an atom and two continuations", st);
    Term a_enc = st.top();
    Stack s1 = st.rest();
    Term u1 = s1.top();
    Stack s2 = s1.rest();
    Term u2 = s2.top();
    Stack pi = s2.rest();
    if (!zipper_.active()) abort_run("test after the tree was completed", st);
    Atom a;
    try {
      a = decode_atom(m_.program(), *th_, a_enc, decode_fuel_);
    } catch (const DecodeError& e) {
      abort_run(std::string("test on a malformed atom encoding: ") + e.what(), st);
    }
    Path k = zipper_.knowledge();
    switch (find(k, a)) {
      case Truth::True:
        notify(SchedulerEvent{SchedulerEvent::Kind::TestTrue, a, std::nullopt, k});
        return StepResult::next(Process{u1, pi}, "test");
      case Truth::False:
        notify(SchedulerEvent{SchedulerEvent::Kind::TestFalse, a, std::nullopt, k});
        return StepResult::next(Process{u2, pi}, "test");
      case Truth::Unknown: {
        notify(SchedulerEvent{SchedulerEvent::Kind::TestFork, a, std::nullopt, k});
        zipper_.expand(a, Process{u1, pi});
        ++frozen_created_;
        return StepResult::next(Process{u2, pi}, "test");
      }
    }
    abort_run("unreachable", st);
  });

  m_.register_instruction("contradict", [this](Machine&, const Stack& st) -> StepResult {
    if (st.empty()) abort_run("contradict needs a label", st);
    Term label = st.top();
    Stack pi = st.rest();
    if (!zipper_.active()) abort_run("contradict after the tree was completed", st);
    Index i;
    try {
      i = decode_index(m_.program(), *th_, label, decode_fuel_);
    } catch (const DecodeError& e) {
      abort_run(std::string("contradict with an undecodable label: ") + e.what(), st);
    }
    notify(SchedulerEvent{SchedulerEvent::Kind::Contradict, std::nullopt, i,
                          zipper_.knowledge()});
    auto outcome = zipper_.seal(std::move(i));
    if (outcome.resumed) {
      ++thawed_;
      notify(SchedulerEvent{SchedulerEvent::Kind::Thaw, std::nullopt, std::nullopt,
                            zipper_.knowledge()});
      return StepResult::next(*outcome.resumed, "contradict");
    }
    return do_finish(pi);
  });

  m_.register_instruction("finish", [this](Machine&, const Stack& st) -> StepResult {
    return do_finish(st);
  });

  m_.register_instruction("save", [this](Machine&, const Stack& st) -> StepResult {
    if (st.depth() < 2) abort_run("save needs a continuation and a term", st);
    cont_ = st.top();
    Stack s1 = st.rest();
    Term k = s1.top();
    notify(SchedulerEvent{SchedulerEvent::Kind::Save, std::nullopt, std::nullopt,
                          Path::empty()});
    return StepResult::next(Process{k, s1.rest()}, "save");
  });

  m_.register_instruction("reset", [this](Machine&, const Stack& st) -> StepResult {
    if (st.empty()) abort_run("reset needs a continuation", st);
    zipper_.clear();
    notify(SchedulerEvent{SchedulerEvent::Kind::Reset, std::nullopt, std::nullopt,
                          Path::empty()});
    return StepResult::next(Process{st.top(), st.rest()}, "reset");
  });
}

SchedulerMachine::HerbrandRun SchedulerMachine::run_herbrand(const std::string& proof,
                                                             std::uint64_t fuel,
                                                             std::ostream* trace) {
  HerbrandRun out;
  out.outcome = HerbrandRun::Outcome::Aborted;
  if (!m_.program().defined(proof)) {
    out.message = "proof '" + proof + "' is not defined";
    return out;
  }
  Term retrieve = Term::lam("t", Term::app(Term::instr("stop"), Term::var("t")));
  Term entry = Term::apply_all(Term::ref("eval_tree"),
                               {Term::ref(proof), std::move(retrieve)});
  Machine::RunResult r;
  try {
    r = m_.run(Process{std::move(entry), Stack::nil()}, fuel, trace);
  } catch (const SchedulerAbort& e) {
    out.message = e.what();
    out.frozen_created = frozen_created_;
    return out;
  }
  out.steps = r.steps;
  out.frozen_created = frozen_created_;
  switch (r.outcome) {
    case Machine::RunResult::Outcome::FuelExhausted:
      out.outcome = HerbrandRun::Outcome::FuelExhausted;
      out.message = "fuel exhausted\nzipper:\n" + zipper_.dump();
      return out;
    case Machine::RunResult::Outcome::Stuck:
      out.message = "stuck: " + r.reason + " at " + r.final.str(160) + "\nzipper:\n" +
                    zipper_.dump();
      return out;
    case Machine::RunResult::Outcome::Halted:
      break;
  }
  if (r.halt.instruction != "stop" || r.halt.values.size() != 1) {
    out.message = "run halted without a stop payload";
    return out;
  }
  HerbrandTree tree = HerbrandTree::leaf(Index{});
  try {
    tree = decode_tree(m_.program(), *th_, r.halt.values[0], decode_fuel_);
  } catch (const DecodeError& e) {
    out.message = std::string("result does not decode to a tree: ") + e.what();
    return out;
  }
  if (auto report = htree_check(*th_, tree); !report) {
    out.message =
        "scheduler produced a tree rejected by the checker (bug in the proof "
        "term or the realizers): " +
        report.detail;
    return out;
  }
  out.outcome = HerbrandRun::Outcome::Tree;
  out.tree = std::move(tree);
  return out;
}

}  // namespace herbrand::kam
