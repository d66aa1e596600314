#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "herbrand/logic.hpp"

using namespace herbrand;
using testutil::black42;
using testutil::crow42;
using testutil::peval_oracle;
using testutil::white42;

namespace {

// The ground White Crow fragment at n = 42, as a literal table. Enough for
// the checker and pair tests without the frontend.
std::shared_ptr<TableTheory> ground_whitecrow() {
  Compound cb = Compound::disj(Compound::neg(Compound::atom(crow42())),
                               Compound::atom(black42()));
  Compound nbw = Compound::neg(
      Compound::conj(Compound::atom(black42()), Compound::atom(white42())));
  return std::make_shared<TableTheory>(std::vector<std::pair<std::string, Compound>>{
      {"crow42", Compound::atom(crow42())},
      {"white42", Compound::atom(white42())},
      {"crow_black42", cb},
      {"not_bw42", nbw},
  });
}

HerbrandTree ground_whitecrow_tree(const TableTheory& th) {
  auto idx = [&](const std::string& name) { return *th.make_index(name, {}); };
  return HerbrandTree::node(
      crow42(),
      HerbrandTree::node(
          black42(),
          HerbrandTree::node(white42(), HerbrandTree::leaf(idx("not_bw42")),
                             HerbrandTree::leaf(idx("white42"))),
          HerbrandTree::leaf(idx("crow_black42"))),
      HerbrandTree::leaf(idx("crow42")));
}

}  // namespace

TEST_CASE("three-valued connectives follow the Kleene tables") {
  CHECK(tri_and(Truth::False, Truth::Unknown) == Truth::False);
  CHECK(tri_and(Truth::Unknown, Truth::False) == Truth::False);
  CHECK(tri_and(Truth::True, Truth::Unknown) == Truth::Unknown);
  CHECK(tri_or(Truth::True, Truth::Unknown) == Truth::True);
  CHECK(tri_or(Truth::Unknown, Truth::False) == Truth::Unknown);
  CHECK(tri_not(Truth::Unknown) == Truth::Unknown);
  CHECK(tri_not(Truth::False) == Truth::True);
}

TEST_CASE("eval follows standard Boolean semantics") {
  Atom c = crow42(), b = black42(), w = white42();

  Valuation v1;
  v1.assign(c, true);
  CHECK(eval(v1, Compound::atom(c)));

  // excluded middle holds under any valuation
  Compound em = Compound::disj(Compound::atom(c), Compound::neg(Compound::atom(c)));
  Valuation vt(true), vf(false);
  CHECK(eval(vt, em));
  CHECK(eval(vf, em));

  Valuation v2;
  v2.assign(b, true);
  v2.assign(w, true);
  Compound nbw = Compound::neg(Compound::conj(Compound::atom(b), Compound::atom(w)));
  CHECK_FALSE(eval(v2, nbw));
  // cross-check by the truth-table oracle on the empty path restriction
  Path p = Path::empty().extended(b, true).extended(w, true);
  CHECK(peval_oracle(p, nbw) == Truth::False);
}

TEST_CASE("find reads the partial interpretation from the node end") {
  Atom c = crow42(), w = white42();
  CHECK(find(Path::empty(), c) == Truth::Unknown);
  CHECK(find(Path::empty().extended(c, true), c) == Truth::True);
  // one step of recursion past the W42 entry
  Path p = Path::empty().extended(c, true).extended(w, false);
  CHECK(find(p, c) == Truth::True);
  CHECK(find(p, w) == Truth::False);
}

TEST_CASE("find resolves duplicate atoms to the entry nearest the node") {
  Atom c = crow42();
  Path malformed = Path::empty().extended(c, true).extended(c, false);
  CHECK_FALSE(malformed.well_formed());
  CHECK(find(malformed, c) == Truth::False);
}

TEST_CASE("peval examples") {
  Atom c = crow42(), b = black42(), w = white42();
  CHECK(peval(Path::empty(), Compound::atom(c)) == Truth::Unknown);
  CHECK(peval(Path::empty().extended(c, false), Compound::atom(c)) == Truth::False);

  // ~true \/ unknown stays unknown under the Kleene tables
  Compound cb = Compound::disj(Compound::neg(Compound::atom(c)), Compound::atom(b));
  Path pc = Path::empty().extended(c, true);
  CHECK(peval(pc, cb) == Truth::Unknown);
  CHECK(peval_oracle(pc, cb) == Truth::Unknown);

  // the leaf condition of the White Crow tree
  Compound nbw = Compound::neg(Compound::conj(Compound::atom(b), Compound::atom(w)));
  Path pbw = Path::empty().extended(b, true).extended(w, true);
  CHECK(peval(pbw, nbw) == Truth::False);
  CHECK(peval_oracle(pbw, nbw) == Truth::False);
}

TEST_CASE("atoms_of lists first occurrences in traversal order") {
  Atom c = crow42(), b = black42();
  CHECK(atoms_of(Compound::atom(c)) == std::vector<Atom>{c});

  Compound cb = Compound::disj(Compound::neg(Compound::atom(c)), Compound::atom(b));
  CHECK(atoms_of(cb) == std::vector<Atom>{c, b});

  Compound dup = Compound::conj(Compound::atom(c), Compound::atom(c));
  CHECK(atoms_of(dup) == std::vector<Atom>{c});
}

TEST_CASE("peval on an atomic compound coincides with find") {
  testutil::Rng rng(7001);
  std::vector<Atom> atoms = {crow42(), black42(), white42()};
  for (int i = 0; i < 200; ++i) {
    Path p = testutil::random_path(rng, atoms);
    const Atom& a = atoms[rng.below(atoms.size())];
    CHECK(peval(p, Compound::atom(a)) == find(p, a));
  }
}

TEST_CASE("Kleene monotonicity: defined peval values survive path extension") {
  testutil::Rng rng(7002);
  std::vector<Atom> atoms = {testutil::atom0("A0"), testutil::atom0("A1"),
                             testutil::atom0("A2"), testutil::atom0("A3"),
                             testutil::atom0("A4")};
  for (int i = 0; i < 500; ++i) {
    Compound c = testutil::random_compound(rng, atoms, 6);
    Path p = testutil::random_path(rng, atoms);
    Truth base = peval(p, c);
    if (base == Truth::Unknown) continue;
    Path q = p;
    for (const auto& a : atoms)
      if (find(q, a) == Truth::Unknown && rng.coin()) q = q.extended(a, rng.coin());
    CHECK(peval(q, c) == base);
  }
}

TEST_CASE("total valuations agreeing with a path agree with peval") {
  testutil::Rng rng(7003);
  std::vector<Atom> atoms = {testutil::atom0("A0"), testutil::atom0("A1"),
                             testutil::atom0("A2")};
  for (int i = 0; i < 300; ++i) {
    Compound c = testutil::random_compound(rng, atoms, 5);
    Path p = testutil::random_path(rng, atoms);
    Truth t = peval(p, c);
    if (t == Truth::Unknown) continue;
    // exhaustively extend p to total valuations
    std::vector<Atom> open;
    Valuation base;
    for (const auto& a : atoms) {
      if (find(p, a) == Truth::Unknown)
        open.push_back(a);
      else
        base.assign(a, find(p, a) == Truth::True);
    }
    for (std::uint32_t bits = 0; bits < (1u << open.size()); ++bits) {
      Valuation val = base;
      for (std::size_t k = 0; k < open.size(); ++k) val.assign(open[k], (bits >> k) & 1);
      CHECK(eval(val, c) == (t == Truth::True));
    }
  }
}

TEST_CASE("pair_pred walks the lexicographic pair order") {
  auto wc = testutil::whitecrow();

  Index i0 = wc->nth_index(0);  // crow42, single atom C42
  AtomPair minimum{i0, crow42()};
  CHECK(pair_pred(*wc, minimum) == minimum);  // the minimum maps to itself

  // predecessor within one compound: <crow_black@42, B42> -> <crow_black@42, C42>
  auto cb = wc->make_index("crow_black", {GroundTerm::numeral(42)});
  REQUIRE(cb.has_value());
  AtomPair q{*cb, black42()};
  AtomPair expect{*cb, crow42()};
  CHECK(pair_pred(*wc, q) == expect);

  // predecessor across indices: <white42, W42> -> <crow42, last atom of Th(crow42)>
  Index i1 = wc->nth_index(1);
  AtomPair across{i1, white42()};
  CHECK(pair_pred(*wc, across) == AtomPair{i0, crow42()});

  // malformed pair
  CHECK_THROWS_AS(pair_pred(*wc, AtomPair{i0, black42()}), std::invalid_argument);
}

TEST_CASE("iterating pair_pred reaches the minimum in exactly position steps") {
  using testutil::pair_less;
  using testutil::pair_position;
  for (auto th : {testutil::whitecrow(), testutil::pseudo()}) {
    for (std::uint64_t rank = 0; rank <= 20; ++rank) {
      Index i = th->nth_index(rank);
      for (const auto& a : atoms_of(th->th(i))) {
        AtomPair q{i, a};
        std::uint64_t expected_steps = pair_position(*th, q);
        std::uint64_t steps = 0;
        AtomPair cur = q;
        for (;;) {
          AtomPair prev = pair_pred(*th, cur);
          if (prev == cur) break;
          CHECK(pair_less(*th, prev, cur));  // strictly decreasing
          cur = prev;
          ++steps;
          REQUIRE(steps <= expected_steps);
        }
        CHECK(steps == expected_steps);
      }
    }
  }
}

TEST_CASE("htree_check accepts the White Crow tree and rejects tampering") {
  auto th = ground_whitecrow();

  // a bare leaf cannot be falsified by the empty path
  auto lone = HerbrandTree::leaf(*th->make_index("crow42", {}));
  auto r1 = htree_check(*th, lone);
  CHECK_FALSE(r1.ok);
  CHECK(r1.violation == CheckReport::Violation::LeafNotFalsified);
  CHECK(r1.path.is_empty());

  HerbrandTree good = ground_whitecrow_tree(*th);
  CHECK(htree_check(*th, good).ok);
  CHECK(testutil::exhaustive_tree_oracle(*th, good));

  // swapping the children of the White(42) node falsifies the true leaf
  HerbrandTree bad = HerbrandTree::node(
      crow42(),
      HerbrandTree::node(
          black42(),
          HerbrandTree::node(white42(), HerbrandTree::leaf(*th->make_index("white42", {})),
                             HerbrandTree::leaf(*th->make_index("not_bw42", {}))),
          HerbrandTree::leaf(*th->make_index("crow_black42", {}))),
      HerbrandTree::leaf(*th->make_index("crow42", {})));
  auto r2 = htree_check(*th, bad);
  CHECK_FALSE(r2.ok);
  CHECK(r2.violation == CheckReport::Violation::LeafNotFalsified);
  CHECK(find(r2.path, white42()) == Truth::True);
}

TEST_CASE("htree_check flags duplicate atoms along a path") {
  auto th = ground_whitecrow();
  auto leaf = HerbrandTree::leaf(*th->make_index("crow42", {}));
  HerbrandTree dup = HerbrandTree::node(
      crow42(), HerbrandTree::node(crow42(), leaf, leaf), leaf);
  auto r = htree_check(*th, dup);
  CHECK_FALSE(r.ok);
  CHECK(r.violation == CheckReport::Violation::DuplicateAtom);
}

TEST_CASE("accepted trees yield counter-examples under every valuation") {
  auto th = ground_whitecrow();
  HerbrandTree good = ground_whitecrow_tree(*th);
  REQUIRE(htree_check(*th, good).ok);
  CHECK(testutil::exhaustive_tree_oracle(*th, good));
}

TEST_CASE("valuations report undefined atoms when no fallback exists") {
  Valuation v = Valuation::from_function([](const Atom& a) -> bool {
    throw std::domain_error("no value for " + a.str());
  });
  CHECK_THROWS_AS(v(crow42()), std::domain_error);
  Valuation d(true);
  CHECK(d(crow42()));
}
