#include "herbrand/logic.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace herbrand {

// ---------------------------------------------------------------------------
// Atom / Index rendering
// ---------------------------------------------------------------------------

std::string Atom::str() const {
  if (args.empty()) return pred;
  std::string out = pred + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].str();
  }
  return out + ")";
}

std::string Index::str() const {
  if (args.empty()) return axiom;
  std::string out = axiom + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ",";
    out += args[i].str();
  }
  return out + ")";
}

const char* to_string(Truth t) {
  switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    default: return "unknown";
  }
}

// ---------------------------------------------------------------------------
// Compound
// ---------------------------------------------------------------------------

struct Compound::Node {
  Kind kind = Kind::Atom;
  Atom atom;
  Compound left;   // And/Or lhs, Not operand
  Compound right;  // And/Or rhs
};

Compound::Kind Compound::kind() const { return node_->kind; }
const Atom& Compound::atom_ref() const { return node_->atom; }
const Compound& Compound::lhs() const { return node_->left; }
const Compound& Compound::rhs() const { return node_->right; }
const Compound& Compound::sub() const { return node_->left; }

Compound Compound::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->atom = std::move(a);
  Compound c;
  c.node_ = std::move(n);
  return c;
}

Compound Compound::conj(Compound l, Compound r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->left = std::move(l);
  n->right = std::move(r);
  Compound c;
  c.node_ = std::move(n);
  return c;
}

Compound Compound::disj(Compound l, Compound r) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->left = std::move(l);
  n->right = std::move(r);
  Compound c;
  c.node_ = std::move(n);
  return c;
}

Compound Compound::neg(Compound c) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->left = std::move(c);
  Compound out;
  out.node_ = std::move(n);
  return out;
}

bool Compound::operator==(const Compound& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Atom: return atom_ref() == o.atom_ref();
    case Kind::Not: return sub() == o.sub();
    default: return lhs() == o.lhs() && rhs() == o.rhs();
  }
}

std::string Compound::str() const {
  switch (kind()) {
    case Kind::Atom: return atom_ref().str();
    case Kind::Not: return "~" + sub().str();
    case Kind::And: return "(" + lhs().str() + " /\\ " + rhs().str() + ")";
    case Kind::Or: return "(" + lhs().str() + " \\/ " + rhs().str() + ")";
  }
  return "?";
}

namespace {

void collect_atoms(const Compound& c, std::vector<Atom>& out) {
  switch (c.kind()) {
    case Compound::Kind::Atom: {
      if (std::find(out.begin(), out.end(), c.atom_ref()) == out.end())
        out.push_back(c.atom_ref());
      return;
    }
    case Compound::Kind::Not:
      collect_atoms(c.sub(), out);
      return;
    default:
      collect_atoms(c.lhs(), out);
      collect_atoms(c.rhs(), out);
      return;
  }
}

}  // namespace

std::vector<Atom> atoms_of(const Compound& c) {
  std::vector<Atom> out;
  collect_atoms(c, out);
  return out;
}

// ---------------------------------------------------------------------------
// Path
// ---------------------------------------------------------------------------

Path Path::extended(Atom a, bool value) const {
  Path p = *this;
  p.entries_.push_back(Entry{std::move(a), value});
  return p;
}

Truth Path::find(const Atom& a) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->atom == a) return truth_of(it->value);
  return Truth::Unknown;
}

bool Path::well_formed() const {
  std::set<Atom> seen;
  for (const auto& e : entries_)
    if (!seen.insert(e.atom).second) return false;
  return true;
}

std::string Path::str() const {
  if (entries_.empty()) return "(empty)";
  std::string out;
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (!out.empty()) out += " ";
    out += it->atom.str();
    out += it->value ? "=T" : "=F";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

bool Valuation::operator()(const Atom& a) const {
  if (auto it = map_.find(a); it != map_.end()) return it->second;
  if (fn_) return fn_(a);
  if (default_) return *default_;
  throw std::domain_error("valuation undefined on atom " + a.str());
}

bool eval(const Valuation& val, const Compound& c) {
  switch (c.kind()) {
    case Compound::Kind::Atom: return val(c.atom_ref());
    case Compound::Kind::Not: return !eval(val, c.sub());
    case Compound::Kind::And: {
      bool l = eval(val, c.lhs());
      bool r = eval(val, c.rhs());
      return l && r;
    }
    case Compound::Kind::Or: {
      bool l = eval(val, c.lhs());
      bool r = eval(val, c.rhs());
      return l || r;
    }
  }
  return false;
}

Truth find(const Path& p, const Atom& a) { return p.find(a); }

Truth peval(const Path& p, const Compound& c) {
  switch (c.kind()) {
    case Compound::Kind::Atom: return p.find(c.atom_ref());
    case Compound::Kind::Not: return tri_not(peval(p, c.sub()));
    case Compound::Kind::And: return tri_and(peval(p, c.lhs()), peval(p, c.rhs()));
    case Compound::Kind::Or: return tri_or(peval(p, c.lhs()), peval(p, c.rhs()));
  }
  return Truth::Unknown;
}

// ---------------------------------------------------------------------------
// HerbrandTree
// ---------------------------------------------------------------------------

struct HerbrandTree::Node {
  std::optional<Index> leaf;
  Atom atom;
  HerbrandTree t, f;
};

bool HerbrandTree::is_leaf() const { return node_->leaf.has_value(); }
const Index& HerbrandTree::leaf_index() const { return *node_->leaf; }
const Atom& HerbrandTree::atom() const { return node_->atom; }
const HerbrandTree& HerbrandTree::when_true() const { return node_->t; }
const HerbrandTree& HerbrandTree::when_false() const { return node_->f; }

HerbrandTree HerbrandTree::leaf(Index i) {
  auto n = std::make_shared<Node>();
  n->leaf = std::move(i);
  HerbrandTree t;
  t.node_ = std::move(n);
  return t;
}

HerbrandTree HerbrandTree::node(Atom a, HerbrandTree when_true, HerbrandTree when_false) {
  auto n = std::make_shared<Node>();
  n->atom = std::move(a);
  n->t = std::move(when_true);
  n->f = std::move(when_false);
  HerbrandTree t;
  t.node_ = std::move(n);
  return t;
}

std::size_t HerbrandTree::leaf_count() const {
  if (is_leaf()) return 1;
  return when_true().leaf_count() + when_false().leaf_count();
}

std::size_t HerbrandTree::inner_count() const {
  if (is_leaf()) return 0;
  return 1 + when_true().inner_count() + when_false().inner_count();
}

std::size_t HerbrandTree::depth() const {
  if (is_leaf()) return 0;
  return 1 + std::max(when_true().depth(), when_false().depth());
}

namespace {
void collect_tree_atoms(const HerbrandTree& t, std::vector<Atom>& out) {
  if (t.is_leaf()) return;
  if (std::find(out.begin(), out.end(), t.atom()) == out.end())
    out.push_back(t.atom());
  collect_tree_atoms(t.when_true(), out);
  collect_tree_atoms(t.when_false(), out);
}
}  // namespace

std::vector<Atom> HerbrandTree::atoms() const {
  std::vector<Atom> out;
  collect_tree_atoms(*this, out);
  return out;
}

bool HerbrandTree::operator==(const HerbrandTree& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  if (is_leaf() != o.is_leaf()) return false;
  if (is_leaf()) return leaf_index() == o.leaf_index();
  return atom() == o.atom() && when_true() == o.when_true() &&
         when_false() == o.when_false();
}

std::string HerbrandTree::str() const {
  if (is_leaf()) return "Contrad(" + leaf_index().str() + ")";
  return "Exp(" + atom().str() + ", " + when_true().str() + ", " +
         when_false().str() + ")";
}

// ---------------------------------------------------------------------------
// TableTheory
// ---------------------------------------------------------------------------

TableTheory::TableTheory(std::vector<std::pair<std::string, Compound>> axioms)
    : axioms_(std::move(axioms)) {
  for (const auto& [name, c] : axioms_) {
    (void)name;
    for (const auto& a : atoms_of(c))
      if (std::find(atoms_.begin(), atoms_.end(), a) == atoms_.end())
        atoms_.push_back(a);
  }
}

std::optional<std::uint64_t> TableTheory::index_count() const {
  return axioms_.size();
}

Index TableTheory::nth_index(std::uint64_t rank) const {
  if (rank >= axioms_.size())
    throw std::out_of_range("index rank " + std::to_string(rank) +
                            " out of range (theory has " +
                            std::to_string(axioms_.size()) + " indices)");
  return Index{axioms_[rank].first, {}, rank};
}

Compound TableTheory::th(const Index& i) const {
  if (i.rank < axioms_.size() && axioms_[i.rank].first == i.axiom)
    return axioms_[i.rank].second;
  for (const auto& [name, c] : axioms_)
    if (name == i.axiom) return c;
  throw std::invalid_argument("unknown index " + i.str());
}

std::vector<Index> TableTheory::relevant(const Atom& a, std::uint64_t) const {
  std::vector<Index> out;
  for (std::uint64_t r = 0; r < axioms_.size(); ++r) {
    const auto& atoms = atoms_of(axioms_[r].second);
    if (std::find(atoms.begin(), atoms.end(), a) != atoms.end())
      out.push_back(Index{axioms_[r].first, {}, r});
  }
  return out;
}

std::optional<std::uint64_t> TableTheory::atom_count() const {
  return atoms_.size();
}

Atom TableTheory::nth_atom(std::uint64_t rank) const {
  if (rank >= atoms_.size())
    throw std::out_of_range("atom rank " + std::to_string(rank) + " out of range");
  return atoms_[rank];
}

std::uint64_t TableTheory::atom_rank(const Atom& a) const {
  for (std::uint64_t r = 0; r < atoms_.size(); ++r)
    if (atoms_[r] == a) return r;
  throw std::invalid_argument("atom " + a.str() + " not in theory");
}

std::optional<Index> TableTheory::make_index(const std::string& axiom,
                                             std::vector<GroundTerm> args) const {
  if (!args.empty()) return std::nullopt;
  for (std::uint64_t r = 0; r < axioms_.size(); ++r)
    if (axioms_[r].first == axiom) return Index{axiom, {}, r};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// GroundTheory defaults
// ---------------------------------------------------------------------------

std::optional<GroundTerm> GroundTheory::nth_term(std::uint64_t) const {
  return std::nullopt;
}

std::optional<std::uint64_t> GroundTheory::term_rank(const GroundTerm&) const {
  return std::nullopt;
}

std::uint64_t GroundTheory::index_weight(std::uint64_t rank) const {
  auto count = index_count();
  if (count && *count == 0) return 0;
  if (count && rank >= *count) rank = *count - 1;
  std::uint64_t w = 0;
  for (const auto& t : nth_index(rank).args) w += t.weight();
  return w;
}

// ---------------------------------------------------------------------------
// Pair order
// ---------------------------------------------------------------------------

std::string AtomPair::str() const {
  return "<" + index.str() + ", " + atom.str() + ">";
}

AtomPair pair_pred(const GroundTheory& th, const AtomPair& q) {
  const auto atoms = atoms_of(th.th(q.index));
  auto pos = std::find(atoms.begin(), atoms.end(), q.atom);
  if (pos == atoms.end())
    throw std::invalid_argument("malformed pair: atom " + q.atom.str() +
                                " does not occur in Th(" + q.index.str() + ")");
  if (pos != atoms.begin())
    return AtomPair{q.index, *(pos - 1)};
  if (q.index.rank == 0) return q;  // the global minimum, by convention
  Index prev = th.nth_index(q.index.rank - 1);
  const auto prev_atoms = atoms_of(th.th(prev));
  return AtomPair{std::move(prev), prev_atoms.back()};
}

// ---------------------------------------------------------------------------
// Checker
// ---------------------------------------------------------------------------

namespace {

bool check_rec(const GroundTheory& th, const HerbrandTree& t, const Path& p,
               CheckReport& report) {
  if (t.is_leaf()) {
    Truth v = peval(p, th.th(t.leaf_index()));
    if (v != Truth::False) {
      report.ok = false;
      report.violation = CheckReport::Violation::LeafNotFalsified;
      report.path = p;
      report.detail = "leaf " + t.leaf_index().str() + " has peval = " +
                      to_string(v) + " (needs false) on path [" + p.str() + "]";
      return false;
    }
    return true;
  }
  if (find(p, t.atom()) != Truth::Unknown) {
    report.ok = false;
    report.violation = CheckReport::Violation::DuplicateAtom;
    report.path = p;
    report.detail = "atom " + t.atom().str() +
                    " is already assigned on path [" + p.str() + "]";
    return false;
  }
  return check_rec(th, t.when_true(), p.extended(t.atom(), true), report) &&
         check_rec(th, t.when_false(), p.extended(t.atom(), false), report);
}

}  // namespace

CheckReport htree_check(const GroundTheory& th, const HerbrandTree& t) {
  CheckReport report;
  check_rec(th, t, Path::empty(), report);
  return report;
}

}  // namespace herbrand
