#include "herbrand/builtins.hpp"

#include <stdexcept>

namespace herbrand {

const char* whitecrow_theory_source() {
  return R"(option numerals;
pred Crow/1, Black/1, White/1;
axiom crow_black: forall n. ~Crow(n) \/ Black(n);
axiom not_bw:     forall n. ~(Black(n) /\ White(n));
axiom crow42:     Crow(42);
axiom white42:    White(42);
)";
}

const char* pseudo_induction_theory_source() {
  return R"(const a;
fun f/1;
pred P/1;
axiom step: forall x. P(x) -> P(f(x));
axiom base: P(a);
axiom neg:  ~P(f(f(a)));
)";
}

const char* contradiction_pair_theory_source() {
  return R"(const c;
pred P/1;
axiom t:  P(c);
axiom nt: ~P(c);
)";
}

const char* whitecrow_proof_source() {
  return R"(# Contradiction of the White Crow ornithology: bird 42 is a crow,
# crows are black, bird 42 is white, and nothing is black and white.
# The final continuation is unreachable for this theory.
Define Top.absurd = .type ;;

Define Top.crow_Th = \P1 \P2 \P3 \CB \nBW \C42 \W42
  C42 (CB (W42 (nBW Top.absurd))) ;;

Define proof = Top.crow_Th .type .type .type
  Axiom.crow_black.42 Axiom.not_bw.42 Axiom.crow42 Axiom.white42 ;;
)";
}

const char* pseudo_induction_proof_source() {
  return R"(# P holds at a and propagates along f, yet fails at f(f(a)).
Define Top.absurd = .type ;;

Define Top.pseudo_Th = \P1 \S0 \S1 \B \N
  B (S0 (S1 (N Top.absurd))) ;;

Define proof = Top.pseudo_Th .type
  Axiom.step.0 Axiom.step.1 Axiom.base Axiom.neg ;;
)";
}

namespace {

GroundTerm iterated_f(std::uint64_t n) {
  GroundTerm t = GroundTerm::constant("a");
  for (std::uint64_t i = 0; i < n; ++i) t = GroundTerm::apply("f", {std::move(t)});
  return t;
}

// Nesting depth of f^n(a); nullopt for terms outside the universe.
std::optional<std::uint64_t> f_depth(const GroundTerm& t) {
  const GroundTerm* cur = &t;
  std::uint64_t n = 0;
  while (!cur->is_numeral() && cur->symbol() == "f" && cur->args().size() == 1) {
    ++n;
    cur = &cur->args()[0];
  }
  if (cur->is_numeral() || cur->symbol() != "a" || !cur->args().empty())
    return std::nullopt;
  return n;
}

Atom nth_p(std::uint64_t n) { return Atom{"P", {iterated_f(n)}}; }

// Pseudo-induction with the refutation one step deeper: indices are base,
// neg, then step instances by argument depth; neg refutes P(f^3(a)).
class ShiftedPseudoTheory final : public GroundTheory {
 public:
  std::optional<std::uint64_t> index_count() const override { return std::nullopt; }

  Index nth_index(std::uint64_t rank) const override {
    if (rank == 0) return Index{"base", {}, 0};
    if (rank == 1) return Index{"neg", {}, 1};
    return Index{"step", {iterated_f(rank - 2)}, rank};
  }

  Compound th(const Index& i) const override {
    if (i.axiom == "base" && i.args.empty()) return Compound::atom(nth_p(0));
    if (i.axiom == "neg" && i.args.empty())
      return Compound::neg(Compound::atom(nth_p(3)));
    if (i.axiom == "step" && i.args.size() == 1) {
      auto n = f_depth(i.args[0]);
      if (n)
        return Compound::disj(Compound::neg(Compound::atom(nth_p(*n))),
                              Compound::atom(nth_p(*n + 1)));
    }
    throw std::invalid_argument("unknown index " + i.str());
  }

  std::vector<Index> relevant(const Atom& a, std::uint64_t) const override {
    auto n = a.pred == "P" && a.args.size() == 1 ? f_depth(a.args[0]) : std::nullopt;
    if (!n) return {};
    std::vector<Index> out;
    if (*n >= 1) out.push_back(nth_index(*n - 1 + 2));
    out.push_back(nth_index(*n + 2));
    if (*n == 0) out.push_back(nth_index(0));
    if (*n == 3) out.push_back(nth_index(1));
    return out;
  }

  std::optional<std::uint64_t> atom_count() const override { return std::nullopt; }

  Atom nth_atom(std::uint64_t rank) const override { return nth_p(rank); }

  std::uint64_t atom_rank(const Atom& a) const override {
    if (a.pred == "P" && a.args.size() == 1)
      if (auto n = f_depth(a.args[0])) return *n;
    throw std::invalid_argument("atom " + a.str() + " not in theory");
  }

  std::optional<Index> make_index(const std::string& axiom,
                                  std::vector<GroundTerm> args) const override {
    if (axiom == "base" && args.empty()) return Index{"base", {}, 0};
    if (axiom == "neg" && args.empty()) return Index{"neg", {}, 1};
    if (axiom == "step" && args.size() == 1)
      if (auto n = f_depth(args[0])) return Index{"step", std::move(args), *n + 2};
    return std::nullopt;
  }

  std::optional<GroundTerm> nth_term(std::uint64_t rank) const override {
    return iterated_f(rank);
  }

  std::optional<std::uint64_t> term_rank(const GroundTerm& t) const override {
    return f_depth(t);
  }
};

}  // namespace

std::shared_ptr<const GroundTheory> shifted_pseudo_theory() {
  return std::make_shared<ShiftedPseudoTheory>();
}

}  // namespace herbrand
