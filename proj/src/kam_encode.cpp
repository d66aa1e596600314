#include "herbrand/kam_encode.hpp"

namespace herbrand::kam {

Term encode_constructor(std::size_t params, std::size_t args, std::size_t position,
                        std::size_t constructors) {
  if (position < 1 || position > constructors)
    throw std::invalid_argument("constructor position out of range");
  Term body = Term::var("e" + std::to_string(position));
  for (std::size_t i = 1; i <= args; ++i)
    body = Term::app(std::move(body), Term::var("a" + std::to_string(i)));
  for (std::size_t i = constructors; i >= 1; --i)
    body = Term::lam("e" + std::to_string(i), std::move(body));
  for (std::size_t i = args; i >= 1; --i)
    body = Term::lam("a" + std::to_string(i), std::move(body));
  for (std::size_t i = params; i >= 1; --i)
    body = Term::lam("p" + std::to_string(i), std::move(body));
  return body;
}

// The data-type encodings follow the extraction convention: parameters
// first, then constructor arguments, then one eliminator per constructor.
// Atoms and indices are wrapped enumeration ranks, so their storage
// operators reduce to the one for naturals.
const char* prelude_source() {
  return R"(# second-order data encodings and storage operators

Define Bool.true  = \e1 \e2 e1 ;;
Define Bool.false = \e1 \e2 e2 ;;

Define Pair.mk = \p1 \p2 \a \b \e1 e1 a b ;;

Define or_introl = \p1 \p2 \a \e1 \e2 e1 a ;;
Define or_intror = \p1 \p2 \a \e1 \e2 e2 a ;;

Define Nat.O = \e1 \e2 e1 ;;
Define Nat.S = \a \e1 \e2 e2 a ;;

Define Atoms.Mk   = \a \e1 e1 a ;;
Define Indices.Mk = \a \e1 e1 a ;;

Define Trees.Contrad = \i \e1 \e2 e1 i ;;
Define Trees.Exp     = \a \t1 \t2 \e1 \e2 e2 a t1 t2 ;;

# storage operators: force the scrutinee and rebuild it in canonical form
Define Mnat f n = n (f Nat.O) (\p Mnat (\v f (Nat.S v)) p) ;;

Define Matom   f t = t (\n Mnat (\v f (Atoms.Mk v)) n) ;;
Define Mindex  f t = t (\n Mnat (\v f (Indices.Mk v)) n) ;;

Define Mtree f t =
  (t
    (Mindex (\i f (Trees.Contrad i)))
    (Matom (\a Mtree (\t1 Mtree (\t2 f (Trees.Exp a t1 t2))))) ) ;;

# harness for the scheduler machine
Define eval_tree proof k = save (Mtree k) proof ;;
)";
}

const Program& prelude() {
  static const Program p = parse_program(prelude_source());
  return p;
}

Program with_prelude(const Program& user) {
  Program p = prelude();
  p.merge(user);
  return p;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

Term encode_nat(std::uint64_t n) {
  Term t = Term::ref("Nat.O");
  for (std::uint64_t i = 0; i < n; ++i) t = Term::app(Term::ref("Nat.S"), std::move(t));
  return t;
}

Term encode_atom(const GroundTheory& th, const Atom& a) {
  return Term::app(Term::ref("Atoms.Mk"), encode_nat(th.atom_rank(a)));
}

Term encode_index(const GroundTheory& th, const Index& i) {
  std::uint64_t rank = i.rank;
  if (auto made = th.make_index(i.axiom, i.args)) rank = made->rank;
  return Term::app(Term::ref("Indices.Mk"), encode_nat(rank));
}

Term encode_tree(const GroundTheory& th, const HerbrandTree& t) {
  if (t.is_leaf())
    return Term::app(Term::ref("Trees.Contrad"), encode_index(th, t.leaf_index()));
  return Term::apply_all(Term::ref("Trees.Exp"),
                         {encode_atom(th, t.atom()), encode_tree(th, t.when_true()),
                          encode_tree(th, t.when_false())});
}

Term storage_operator(ValueKind kind) {
  switch (kind) {
    case ValueKind::Nat: return Term::ref("Mnat");
    case ValueKind::Atom: return Term::ref("Matom");
    case ValueKind::Index: return Term::ref("Mindex");
    case ValueKind::Tree: return Term::ref("Mtree");
  }
  throw std::invalid_argument("bad value kind");
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

namespace {

// Runs `value` against the given probe eliminators; each probe halts with
// the constructor arguments it received.
Machine::RunResult probe_run(const Program& prog, const Term& value,
                             const std::vector<std::pair<std::string, std::size_t>>& probes,
                             std::uint64_t fuel) {
  Machine m(prog);
  std::vector<Term> elims;
  for (const auto& [name, arity] : probes) {
    m.register_instruction(name, [name = name, arity = arity](
                                     Machine&, const Stack& st) -> StepResult {
      Halted h;
      h.instruction = name;
      Stack rest = st;
      for (std::size_t i = 0; i < arity; ++i) {
        if (rest.empty())
          return StepResult::stuck(Process{Term::instr(name), st},
                                   "probe needs " + std::to_string(arity) + " operand(s)");
        h.values.push_back(rest.top());
        rest = rest.rest();
      }
      return StepResult::halt(std::move(h), name);
    });
    elims.push_back(Term::instr(name));
  }
  return m.run(Process{Term::apply_all(value, elims), Stack::nil()}, fuel);
}

[[noreturn]] void decode_fail(const char* what, const Machine::RunResult& r) {
  std::string msg = std::string("decode of ") + what + " failed: ";
  if (r.outcome == Machine::RunResult::Outcome::FuelExhausted)
    msg += "fuel exhausted";
  else
    msg += "stuck (" + r.reason + ") at " + r.final.str(160);
  throw DecodeError(msg);
}

}  // namespace

std::uint64_t decode_nat(const Program& prog, const Term& value, std::uint64_t fuel) {
  std::uint64_t n = 0;
  Term cur = value;
  for (;;) {
    auto r = probe_run(prog, cur, {{"dec.zero", 0}, {"dec.succ", 1}}, fuel);
    if (r.outcome != Machine::RunResult::Outcome::Halted) decode_fail("nat", r);
    if (r.halt.instruction == "dec.zero") return n;
    ++n;
    cur = r.halt.values[0];
  }
}

Atom decode_atom(const Program& prog, const GroundTheory& th, const Term& value,
                 std::uint64_t fuel) {
  auto r = probe_run(prog, value, {{"dec.arg", 1}}, fuel);
  if (r.outcome != Machine::RunResult::Outcome::Halted) decode_fail("atom", r);
  std::uint64_t rank = decode_nat(prog, r.halt.values[0], fuel);
  try {
    return th.nth_atom(rank);
  } catch (const std::out_of_range& e) {
    throw DecodeError(std::string("decoded atom rank is out of range: ") + e.what());
  }
}

Index decode_index(const Program& prog, const GroundTheory& th, const Term& value,
                   std::uint64_t fuel) {
  auto r = probe_run(prog, value, {{"dec.arg", 1}}, fuel);
  if (r.outcome != Machine::RunResult::Outcome::Halted) decode_fail("index", r);
  std::uint64_t rank = decode_nat(prog, r.halt.values[0], fuel);
  try {
    return th.nth_index(rank);
  } catch (const std::out_of_range& e) {
    throw DecodeError(std::string("decoded index rank is out of range: ") + e.what());
  }
}

HerbrandTree decode_tree(const Program& prog, const GroundTheory& th,
                         const Term& value, std::uint64_t fuel) {
  auto r = probe_run(prog, value, {{"dec.contrad", 1}, {"dec.exp", 3}}, fuel);
  if (r.outcome != Machine::RunResult::Outcome::Halted) decode_fail("tree", r);
  if (r.halt.instruction == "dec.contrad")
    return HerbrandTree::leaf(decode_index(prog, th, r.halt.values[0], fuel));
  Atom a = decode_atom(prog, th, r.halt.values[0], fuel);
  HerbrandTree t = decode_tree(prog, th, r.halt.values[1], fuel);
  HerbrandTree f = decode_tree(prog, th, r.halt.values[2], fuel);
  return HerbrandTree::node(std::move(a), std::move(t), std::move(f));
}

// ---------------------------------------------------------------------------
// Witness extraction
// ---------------------------------------------------------------------------

Witness extract_witness(const Program& user, const std::string& realizer,
                        ValueKind kind, const GroundTheory* th, std::uint64_t fuel) {
  if ((kind != ValueKind::Nat) && th == nullptr)
    throw std::invalid_argument("witness extraction for this kind needs a theory");
  Program prog = with_prelude(user);
  if (!prog.defined(realizer))
    throw std::invalid_argument("realizer '" + realizer + "' is not defined");
  Machine m(prog);
  m.register_basics();
  // T = M_kind (\x \y. y (stop x))
  Term wrapper = Term::lam(
      "x", Term::lam("y", Term::app(Term::var("y"),
                                    Term::app(Term::instr("stop"), Term::var("x")))));
  Term t = Term::app(storage_operator(kind), std::move(wrapper));
  auto r = m.run(Process{Term::app(Term::ref(realizer), std::move(t)), Stack::nil()},
                 fuel);
  switch (r.outcome) {
    case Machine::RunResult::Outcome::FuelExhausted:
      throw ExtractError("witness extraction ran out of fuel");
    case Machine::RunResult::Outcome::Stuck:
      throw ExtractError("witness extraction got stuck: " + r.reason + " at " +
                         r.final.str(160));
    case Machine::RunResult::Outcome::Halted:
      break;
  }
  if (r.halt.instruction != "stop" || r.halt.values.size() != 1)
    throw ExtractError("computation halted without a stop payload");
  const Term& payload = r.halt.values[0];
  try {
    switch (kind) {
      case ValueKind::Nat: return decode_nat(prog, payload, fuel);
      case ValueKind::Atom: return decode_atom(prog, *th, payload, fuel);
      case ValueKind::Index: return decode_index(prog, *th, payload, fuel);
      case ValueKind::Tree: return decode_tree(prog, *th, payload, fuel);
    }
  } catch (const DecodeError& e) {
    throw ExtractError(std::string("stop payload is not a canonical value: ") + e.what());
  }
  throw std::invalid_argument("bad value kind");
}

}  // namespace herbrand::kam
