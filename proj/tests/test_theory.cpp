#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "herbrand/theory.hpp"

using namespace herbrand;

TEST_CASE("parses the White Crow theory") {
  TheorySpec spec = parse_theory(whitecrow_theory_source());
  CHECK(spec.signature.predicates.size() == 3);
  CHECK(spec.signature.numerals);
  CHECK(spec.signature.constants.empty());
  REQUIRE(spec.axioms.size() == 4);
  CHECK(spec.axioms[0].name == "crow_black");
  CHECK(spec.axioms[0].vars == std::vector<std::string>{"n"});
  CHECK(spec.axioms[2].name == "crow42");
  CHECK(spec.axioms[2].vars.empty());
}

TEST_CASE("parses the pseudo-induction theory") {
  TheorySpec spec = parse_theory(pseudo_induction_theory_source());
  CHECK(spec.signature.constants == std::vector<std::string>{"a"});
  REQUIRE(spec.signature.functions.size() == 1);
  CHECK(spec.signature.functions[0].name == "f");
  CHECK(spec.signature.functions[0].arity == 1);
  REQUIRE(spec.signature.predicates.size() == 1);
  CHECK(spec.axioms.size() == 3);
}

TEST_CASE("parse errors carry their location") {
  SUBCASE("unbound variable") {
    try {
      parse_theory("pred P/1;\naxiom bad: P(x);\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("unbound variable 'x'") != std::string::npos);
    }
  }
  SUBCASE("unknown predicate") {
    CHECK_THROWS_AS(parse_theory("axiom a: Q;\n"), ParseError);
  }
  SUBCASE("arity mismatch") {
    CHECK_THROWS_AS(parse_theory("pred P/2; const c;\naxiom a: P(c);\n"), ParseError);
  }
  SUBCASE("numerals require the option") {
    CHECK_THROWS_AS(parse_theory("pred P/1;\naxiom a: P(3);\n"), ParseError);
  }
  SUBCASE("duplicate symbol") {
    CHECK_THROWS_AS(parse_theory("const c; pred c/1;\n"), ParseError);
  }
  SUBCASE("duplicate axiom name") {
    CHECK_THROWS_AS(parse_theory("pred P/0;\naxiom a: P;\naxiom a: ~P;\n"), ParseError);
  }
  SUBCASE("unknown option") {
    CHECK_THROWS_AS(parse_theory("option frobnicate;\n"), ParseError);
  }
  SUBCASE("syntax error") {
    CHECK_THROWS_AS(parse_theory("pred P/0;\naxiom a: P /\\;\n"), ParseError);
  }
}

TEST_CASE("implication and equivalence desugar at parse time") {
  auto th = compile(parse_theory("const c; pred P/1, Q/1;\n"
                                 "axiom imp: P(c) -> Q(c);\n"
                                 "axiom iff: P(c) <-> Q(c);\n"));
  Atom pc{"P", {GroundTerm::constant("c")}};
  Atom qc{"Q", {GroundTerm::constant("c")}};
  Compound imp = th->th(*th->make_index("imp", {}));
  CHECK(imp == Compound::disj(Compound::neg(Compound::atom(pc)), Compound::atom(qc)));
  Compound iff = th->th(*th->make_index("iff", {}));
  CHECK(iff ==
        Compound::conj(
            Compound::disj(Compound::neg(Compound::atom(pc)), Compound::atom(qc)),
            Compound::disj(Compound::neg(Compound::atom(qc)), Compound::atom(pc))));
}

TEST_CASE("term enumeration orders terms by weight") {
  auto ps = testutil::pseudo();
  CHECK(ps->term_at(0) == GroundTerm::constant("a"));
  CHECK(ps->term_at(1) == GroundTerm::apply("f", {GroundTerm::constant("a")}));
  CHECK(ps->term_at(2) ==
        GroundTerm::apply("f", {GroundTerm::apply("f", {GroundTerm::constant("a")})}));

  // a numerals-only signature enumerates the literals in magnitude order
  auto nums = compile(parse_theory("option numerals; pred P/1;\naxiom a: P(0);\n"));
  CHECK(nums->term_at(5) == GroundTerm::numeral(5));

  auto wc = testutil::whitecrow();
  CHECK(wc->term_at(42) == GroundTerm::numeral(42));
}

TEST_CASE("term enumeration rejects an empty universe") {
  auto th = compile(parse_theory("pred P/0;\naxiom a: P;\naxiom b: ~P;\n"));
  CHECK(th->term_count() == 0);
  CHECK_THROWS_AS(th->term_at(0), std::out_of_range);
}

TEST_CASE("compile rejects quantified axioms over an empty universe") {
  CHECK_THROWS_AS(compile(parse_theory("pred P/1; fun f/1;\naxiom a: forall x. P(x);\n")),
                  std::invalid_argument);
}

TEST_CASE("index enumeration puts parameterless axioms first") {
  auto wc = testutil::whitecrow();
  CHECK(wc->nth_index(0).axiom == "crow42");
  CHECK(wc->nth_index(1).axiom == "white42");
  Index third = wc->nth_index(2);
  CHECK(third.axiom == "crow_black");
  REQUIRE(third.args.size() == 1);
  CHECK(third.args[0] == GroundTerm::numeral(0));
  // cross-check the first 10 indices against a brute-force listing
  std::vector<std::string> names;
  for (std::uint64_t k = 0; k < 10; ++k) names.push_back(wc->nth_index(k).str());
  CHECK(names == std::vector<std::string>{"crow42", "white42", "crow_black(0)",
                                          "not_bw(0)", "crow_black(1)", "not_bw(1)",
                                          "crow_black(2)", "not_bw(2)", "crow_black(3)",
                                          "not_bw(3)"});
}

TEST_CASE("a finite index set reports out-of-range ranks") {
  auto th = compile(parse_theory("pred P/0;\naxiom only: P;\n"));
  CHECK(th->index_count() == 1);
  CHECK(th->nth_index(0).axiom == "only");
  CHECK_THROWS_AS(th->nth_index(1), std::out_of_range);
}

TEST_CASE("ground substitutes instance arguments into the axiom body") {
  auto wc = testutil::whitecrow();
  auto cb42 = wc->make_index("crow_black", {GroundTerm::numeral(42)});
  REQUIRE(cb42.has_value());
  CHECK(wc->th(*cb42) ==
        Compound::disj(Compound::neg(Compound::atom(testutil::crow42())),
                       Compound::atom(testutil::black42())));
  CHECK(wc->th(wc->nth_index(0)) == Compound::atom(testutil::crow42()));

  auto ps = testutil::pseudo();
  GroundTerm fa = GroundTerm::apply("f", {GroundTerm::constant("a")});
  GroundTerm ffa = GroundTerm::apply("f", {fa});
  auto step_fa = ps->make_index("step", {fa});
  REQUIRE(step_fa.has_value());
  CHECK(ps->th(*step_fa) ==
        Compound::disj(Compound::neg(Compound::atom(Atom{"P", {fa}})),
                       Compound::atom(Atom{"P", {ffa}})));
}

TEST_CASE("ground is stable across calls") {
  auto ps = testutil::pseudo();
  Index i = ps->nth_index(5);
  CHECK(ps->th(i) == ps->th(i));
}

TEST_CASE("relevant_indices finds matching instantiations") {
  auto wc = testutil::whitecrow();
  auto rel = wc->relevant(testutil::crow42(), 0);
  REQUIRE(rel.size() == 2);
  CHECK(rel[0].axiom == "crow_black");
  CHECK(rel[0].args == std::vector<GroundTerm>{GroundTerm::numeral(42)});
  CHECK(rel[1].axiom == "crow42");

  auto ps = testutil::pseudo();
  GroundTerm a = GroundTerm::constant("a");
  GroundTerm fa = GroundTerm::apply("f", {a});
  auto rel2 = ps->relevant(Atom{"P", {fa}}, 0);
  REQUIRE(rel2.size() == 2);
  CHECK(rel2[0].axiom == "step");
  CHECK(rel2[0].args == std::vector<GroundTerm>{a});
  CHECK(rel2[1].axiom == "step");
  CHECK(rel2[1].args == std::vector<GroundTerm>{fa});

  CHECK(wc->relevant(Atom{"P", {}}, 0).empty());  // unknown predicate matches nothing
}

TEST_CASE("relevant_indices agrees with a brute-force scan") {
  for (auto th : {testutil::whitecrow(), testutil::pseudo()}) {
    for (std::uint64_t ar = 0; ar < 100; ++ar) {
      Atom a = th->nth_atom(ar);
      std::vector<std::uint64_t> brute;
      for (std::uint64_t r = 0; r < 500; ++r) {
        Compound c = th->th(th->nth_index(r));
        auto atoms = atoms_of(c);
        if (std::find(atoms.begin(), atoms.end(), a) != atoms.end()) brute.push_back(r);
      }
      std::vector<std::uint64_t> got;
      for (const auto& i : th->relevant(a, 500))
        if (i.rank < 500) got.push_back(i.rank);
      std::sort(got.begin(), got.end());
      CHECK(got == brute);
    }
  }
}

TEST_CASE("relevance completes unconstrained variables up to the frontier weight") {
  // y does not occur in the P(x) pattern, so matching P(c) must enumerate y
  auto th = compile(parse_theory("const c, d; pred P/1, Q/1;\n"
                                 "axiom both: forall x y. ~P(x) \\/ Q(y);\n"
                                 "axiom ground_p: P(c);\n"));
  Atom pc{"P", {GroundTerm::constant("c")}};
  auto rel = th->relevant(pc, 10);
  // expect (both, c, c), (both, c, d) and (ground_p)
  REQUIRE(rel.size() == 3);
  CHECK(rel[0].axiom == "both");
  CHECK(rel[1].axiom == "both");
  CHECK(rel[2].axiom == "ground_p");
}

TEST_CASE("enumerations are mutually inverse over the first 10^4 ranks") {
  auto rich = compile(parse_theory("const a, b; fun f/1, g/2; pred P/1, Q/2;\n"
                                   "axiom ax: forall x y. P(x) \\/ Q(x, y);\n"));
  for (auto th : {testutil::whitecrow(), testutil::pseudo(), rich}) {
    std::optional<std::uint64_t> terms = th->term_count();
    std::uint64_t term_limit = terms ? std::min<std::uint64_t>(*terms, 10000) : 10000;
    for (std::uint64_t k = 0; k < term_limit; ++k)
      CHECK(th->rank_of_term(th->term_at(k)) == k);
    std::optional<std::uint64_t> idxs = th->index_count();
    std::uint64_t idx_limit = idxs ? std::min<std::uint64_t>(*idxs, 10000) : 10000;
    for (std::uint64_t k = 0; k < idx_limit; ++k) {
      Index i = th->nth_index(k);
      CHECK(th->rank_of_index(i.axiom, i.args) == k);
    }
    std::optional<std::uint64_t> atoms = th->atom_count();
    std::uint64_t atom_limit = atoms ? std::min<std::uint64_t>(*atoms, 10000) : 10000;
    for (std::uint64_t k = 0; k < atom_limit; ++k)
      CHECK(th->atom_rank(th->nth_atom(k)) == k);
  }
}

TEST_CASE("enumeration is fair: weights never decrease along ranks") {
  auto rich = compile(parse_theory("const a; fun f/1, g/2; pred P/1;\n"
                                   "axiom ax: forall x. P(x);\n"));
  std::uint64_t prev = 0;
  for (std::uint64_t k = 0; k < 300; ++k) {
    std::uint64_t w = rich->term_at(k).weight();
    CHECK(w >= prev);
    prev = w;
  }
}

TEST_CASE("compile validates the spec") {
  TheorySpec empty;
  empty.signature.constants.push_back("c");
  CHECK_THROWS_AS(compile(std::move(empty)), std::invalid_argument);

  auto ps = testutil::pseudo();
  auto step_a = ps->make_index("step", {GroundTerm::constant("a")});
  REQUIRE(step_a.has_value());
  auto atoms = atoms_of(ps->th(*step_a));
  GroundTerm a = GroundTerm::constant("a");
  CHECK(atoms == std::vector<Atom>{Atom{"P", {a}},
                                   Atom{"P", {GroundTerm::apply("f", {a})}}});
}

TEST_CASE("make_index rejects unknown axioms and wrong arities") {
  auto wc = testutil::whitecrow();
  CHECK_FALSE(wc->make_index("nonsense", {}).has_value());
  CHECK_FALSE(wc->make_index("crow_black", {}).has_value());
  CHECK_FALSE(wc->make_index("crow42", {GroundTerm::numeral(1)}).has_value());
}

TEST_CASE("the hand-built pseudo variant refutes one step deeper") {
  auto shifted = shifted_pseudo_theory();
  auto neg_shifted = shifted->make_index("neg", {});
  REQUIRE(neg_shifted.has_value());
  GroundTerm a = GroundTerm::constant("a");
  GroundTerm f3 = GroundTerm::apply("f", {GroundTerm::apply("f", {GroundTerm::apply("f", {a})})});
  CHECK(shifted->th(*neg_shifted) == Compound::neg(Compound::atom(Atom{"P", {f3}})));

  // the frontend derives f^2(a) from the theory text
  auto ps = testutil::pseudo();
  auto neg_text = ps->make_index("neg", {});
  REQUIRE(neg_text.has_value());
  GroundTerm f2 = GroundTerm::apply("f", {GroundTerm::apply("f", {a})});
  CHECK(ps->th(*neg_text) == Compound::neg(Compound::atom(Atom{"P", {f2}})));
}

TEST_CASE("ground atom and term text round-trips") {
  testutil::Rng rng(9004);
  auto ps = testutil::pseudo();
  for (std::uint64_t k = 0; k < 50; ++k) {
    GroundTerm t = ps->term_at(rng.below(200));
    CHECK(parse_ground_term(t.str()) == t);
    Atom a = ps->nth_atom(rng.below(200));
    Atom back = parse_ground_atom(a.str());
    CHECK(back == a);
  }
  CHECK(parse_ground_atom("P") == Atom{"P", {}});
  CHECK_THROWS_AS(parse_ground_atom("P(("), ParseError);
}

TEST_CASE("the shipped theory files match the embedded sources") {
  // guards against drift between theories/*.thy and the builtin copies
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string dir = HERBRAND_SOURCE_DIR "/theories/";
  CHECK(slurp(dir + "whitecrow.thy") == whitecrow_theory_source());
  CHECK(slurp(dir + "pseudo_induction.thy") == pseudo_induction_theory_source());
  CHECK(slurp(dir + "contradiction_pair.thy") == contradiction_pair_theory_source());
}
