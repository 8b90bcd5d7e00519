#include <functional>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rz/cterm.hpp"
#include "rz/derivation.hpp"
#include "rz/errors.hpp"
#include "rz/formula.hpp"
#include "rz/term.hpp"

using namespace rz;

namespace {

Formula propA() { return Formula::prop("A"); }
Formula propB() { return Formula::prop("B"); }
SetTerm sv(const char* n) { return SetTerm::var(n); }

bool throws_containing(const std::function<void()>& f, const std::string& needle) {
  try {
    f();
  } catch (const CheckError& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("individual terms parse, print and substitute") {
  CHECK(parse_set_term("2") == st_num(2));
  CHECK(to_string(st_num(3)) == "3");
  CHECK(st_num_value(st_num(7)) == 7u);
  CHECK(!st_num_value(sv("x")).has_value());
  CHECK(!st_num_value(SetTerm::fun("s", {sv("x")})).has_value());

  SetTerm t = parse_set_term("(pair (s x) (gimel y))");
  CHECK(vars(t) == std::set<std::string>{"x", "y"});
  SetTerm u = subst(t, "x", st_num(1));
  CHECK(vars(u) == std::set<std::string>{"y"});
  CHECK(parse_set_term(to_string(u)) == u);

  CHECK(signature_arity("s") == 1);
  CHECK(signature_arity("pair") == 2);
  CHECK(signature_arity("0") == 0);
  CHECK(signature_arity("nonesuch") == -1);

  CHECK_THROWS_AS(parse_set_term("(frob x)"), ParseError);
  CHECK_THROWS_AS(parse_set_term("(s x y)"), ParseError);
  CHECK_THROWS_AS(parse_set_term("(s)"), ParseError);
}

TEST_CASE("the expander rewrites each sugar form to its published core shape") {
  Formula A = propA(), B = propB(), bot = Formula::bottom();

  CHECK(expand_one(Formula::negate(A)) == Formula::implies(A, bot));
  CHECK(expand_one(Formula::conj(A, B)) ==
        Formula::implies(Formula::implies(A, Formula::implies(B, bot)), bot));
  CHECK(expand_one(Formula::disj(A, B)) ==
        Formula::implies(Formula::implies(A, bot),
                         Formula::implies(Formula::implies(B, bot), bot)));

  Formula inA = Formula::rel(RelOp::NotIn, sv("x"), sv("a"));
  CHECK(alpha_equal(expand_one(Formula::exists("x", {inA})),
                    Formula::implies(Formula::forall("x", Formula::implies(inA, bot)), bot)));
  // brace lists chain their members as antecedents
  CHECK(alpha_equal(
      expand_one(Formula::exists("x", {inA, A})),
      Formula::implies(
          Formula::forall("x", Formula::implies(inA, Formula::implies(A, bot))), bot)));

  // restricted quantification unfolds through the strong membership relation
  CHECK(alpha_equal(
      expand_one(Formula::forall_eps("x", sv("a"), inA)),
      Formula::forall("x", Formula::implies(Formula::implies(inA, bot),
                                            Formula::rel(RelOp::NotEps, sv("x"), sv("a"))))));

  // the integer predicate, over the strong membership relation (the storage
  // theorem's proof reads the numeral stacks straight out of the set)
  SetTerm n2 = st_num(2);
  Formula want = Formula::forall(
      "x",
      Formula::implies(
          Formula::forall("y", Formula::implies(
                                   Formula::rel(RelOp::NotEps,
                                                SetTerm::fun("s", {sv("y")}), sv("x")),
                                   Formula::rel(RelOp::NotEps, sv("y"), sv("x")))),
          Formula::implies(Formula::rel(RelOp::NotEps, n2, sv("x")),
                           Formula::rel(RelOp::NotEps, st_num(0), sv("x")))));
  CHECK(alpha_equal(expand_one(Formula::int_of(n2)), want));
}

TEST_CASE("equivalences denote pairs and flatten in antecedent position") {
  Formula A = propA(), B = propB();
  std::vector<Formula> pr = expand(Formula::iff(A, B));
  REQUIRE(pr.size() == 2);
  CHECK(pr[0] == Formula::implies(A, B));
  CHECK(pr[1] == Formula::implies(B, A));
  CHECK_THROWS_AS(expand_one(Formula::iff(A, B)), CheckError);
  CHECK(expand(Formula::simeq(sv("a"), sv("b"))).size() == 2);
  CHECK(expand(Formula::sim(sv("a"), sv("b"))).size() == 2);

  // (A <-> B) -> C becomes (A -> B), (B -> A) -> C
  Formula c = Formula::prop("C");
  CHECK(expand_one(Formula::implies(Formula::iff(A, B), c)) ==
        Formula::implies(pr[0], Formula::implies(pr[1], c)));
  // and under a quantifier the pair stays a pair
  CHECK(expand(Formula::forall("x", Formula::iff(A, B))).size() == 2);
}

TEST_CASE("expansion is total on the sugar and idempotent on its output") {
  Formula A = propA();
  SetTerm a = sv("a"), b = sv("b");
  std::vector<Formula> sugar = {
      Formula::negate(A),
      Formula::conj(A, A),
      Formula::disj(A, A),
      Formula::exists("x", {Formula::rel(RelOp::NotIn, sv("x"), a)}),
      Formula::forall_eps("x", a, Formula::rel(RelOp::NotIn, sv("x"), b)),
      Formula::exists_eps("x", a, {Formula::rel(RelOp::Subseteq, sv("x"), b)}),
      Formula::iff(A, A),
      Formula::simeq(a, b),
      Formula::sim(a, b),
      Formula::ssub(a, b),
      Formula::eps(a, b),
      Formula::in(a, b),
      Formula::eq(a, b),
      Formula::neq(a, b),
      Formula::int_of(st_num(1)),
      Formula::forall_ent("n", Formula::rel(RelOp::NotIn, sv("n"), a)),
      Formula::forall_gimel("x", {a, b}, Formula::rel(RelOp::NotEps, sv("x"), a)),
      Formula::eq_cond(a, b, Formula::iff(A, A)),
  };
  for (const Formula& f : sugar) {
    std::vector<Formula> out = expand(f);
    REQUIRE(!out.empty());
    for (const Formula& g : out) {
      CHECK(g.is_core());
      std::vector<Formula> again = expand(g);
      REQUIRE(again.size() == 1);
      CHECK(again[0] == g);
    }
  }
}

TEST_CASE("substitution avoids capture and alpha equality ignores binder names") {
  Formula f = Formula::forall("x", Formula::rel(RelOp::NotIn, sv("x"), sv("a")));
  CHECK(free_vars(f) == std::set<std::string>{"a"});
  Formula g = subst(f, "a", sv("x"));  // incoming x must not be captured
  CHECK(free_vars(g) == std::set<std::string>{"x"});
  CHECK(alpha_equal(g, Formula::forall("z", Formula::rel(RelOp::NotIn, sv("z"), sv("x")))));
  CHECK(!alpha_equal(g, f));

  CHECK(alpha_equal(Formula::forall("x", Formula::rel(RelOp::Subseteq, sv("x"), sv("x"))),
                    Formula::forall("y", Formula::rel(RelOp::Subseteq, sv("y"), sv("y")))));
  CHECK(!alpha_equal(Formula::forall("x", Formula::rel(RelOp::Subseteq, sv("x"), sv("a"))),
                     Formula::forall("x", Formula::rel(RelOp::Subseteq, sv("a"), sv("x")))));
}

TEST_CASE("formula text roundtrips through the parser") {
  for (const char* text : {
           "top",
           "bot",
           "(prop A)",
           "(-> (prop A) (prop B))",
           "(not-eps x a)",
           "(not-in (s x) (gimel a))",
           "(subseteq 0 a)",
           "(all x (-> (not-eps x a) bot))",
           "(all-ent n (not-in n a))",
           "(eqc x y (prop A))",
           "(not (prop A))",
           "(and (prop A) (prop B))",
           "(or (prop A) (prop B))",
           "(iff (prop A) (prop B))",
           "(ex x (not-in x a))",
           "(ex x (not-in x a) (prop A))",
           "(all-eps x a (subseteq x x))",
           "(ex-eps x a (subseteq x x) (prop A))",
           "(simeq a b)",
           "(sim a b)",
           "(ssub a b)",
           "(eps x a)",
           "(in x a)",
           "(eq a b)",
           "(neq a b)",
           "(int 2)",
       }) {
    Formula f = parse_formula(text);
    CHECK(parse_formula(to_string(f)) == f);
  }
  CHECK_THROWS_AS(parse_formula("(frobnicate x)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(all 2 top)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(->)"), ParseError);
}

TEST_CASE("the checker extracts the published programs from small derivations") {
  Formula A = propA(), B = propB(), bot = Formula::bottom();

  Derivation id = Derivation::lam("u", A, Derivation::hyp("u", A), Formula::implies(A, A));
  CHECK(check(id) == CTerm::constant(Comb::I));
  CHECK(extract(id).kind() == LambdaTerm::Kind::Abs);

  Derivation kd = Derivation::lam(
      "u", A, Derivation::lam("v", B, Derivation::hyp("u", A), Formula::implies(B, A)),
      Formula::implies(A, Formula::implies(B, A)));
  CHECK(to_term(check(kd)) == parse_term("(E K)"));

  Formula peirce_f =
      Formula::implies(Formula::implies(Formula::implies(A, B), A), A);
  CHECK(check(Derivation::peirce(peirce_f)) == CTerm::constant(Comb::Cc));
  CHECK_THROWS_AS(check(Derivation::peirce(Formula::implies(A, A))), CheckError);

  // anything follows from bottom; the program is the identity on the proof
  Derivation ef = Derivation::lam(
      "p", bot, Derivation::efq(Derivation::hyp("p", bot), A), Formula::implies(bot, A));
  CHECK(check(ef) == CTerm::constant(Comb::I));

  // open derivations keep exactly the used hypotheses free
  Context ctx{{"f", Formula::implies(A, B)}, {"x", A}, {"unused", B}};
  Derivation m = Derivation::mp(Derivation::hyp("f", Formula::implies(A, B)),
                                Derivation::hyp("x", A), B);
  CTerm r = check(m, ctx);
  CHECK(r == CTerm::app(CTerm::var("f"), CTerm::var("x")));
  CHECK(free_vars(r) == std::set<std::string>{"f", "x"});
}

TEST_CASE("quantifier rules generalize and instantiate with eigenvariable discipline") {
  SetTerm vx = sv("x"), va = sv("a");
  Formula sub = Formula::rel(RelOp::Subseteq, vx, va);
  Formula impl = Formula::implies(sub, sub);
  Derivation body = Derivation::lam("h", sub, Derivation::hyp("h", sub), impl);
  Derivation gen = Derivation::all_intro("x", body, Formula::forall("x", impl));

  // hypotheses not mentioning the eigenvariable are fine
  Context okctx{{"g", Formula::rel(RelOp::Subseteq, sv("y"), va)}};
  CHECK(check(gen, okctx) == CTerm::constant(Comb::I));

  Formula sub1 = Formula::rel(RelOp::Subseteq, st_num(1), va);
  Derivation el =
      Derivation::all_elim(st_num(1), gen, Formula::implies(sub1, sub1));
  CHECK(check(el) == CTerm::constant(Comb::I));

  // a hypothesis with the eigenvariable free is rejected, and named
  Context bad{{"h", sub}};
  Derivation viol =
      Derivation::all_intro("x", Derivation::hyp("h", sub), Formula::forall("x", sub));
  CHECK(throws_containing([&] { check(viol, bad); }, "eigenvariable"));

  // wrong witness: the conclusion must be the body instantiated
  Formula wrong = Formula::implies(sub1, Formula::rel(RelOp::Subseteq, st_num(2), va));
  CHECK_THROWS_AS(check(Derivation::all_elim(st_num(1), gen, wrong)), CheckError);
}

TEST_CASE("pair goals pass through hypotheses but cannot feed one argument") {
  Formula A = propA(), B = propB();
  Formula pair = Formula::iff(A, B);
  Context pc{{"h", pair}, {"f", Formula::implies(A, B)}, {"x", A}};
  CHECK_NOTHROW(check(Derivation::hyp("h", pair), pc));
  std::vector<Formula> comps = expand(pair);
  CHECK_NOTHROW(check(Derivation::hyp("h", comps[0]), pc));
  CHECK_NOTHROW(check(Derivation::hyp("h", comps[1]), pc));

  // a minor premise expanding to two formulas is one argument for two needs
  Derivation bad_minor = Derivation::mp(Derivation::hyp("f", Formula::implies(A, B)),
                                        Derivation::hyp("h", pair), B);
  CHECK_THROWS_AS(check(bad_minor, pc), CheckError);
}

TEST_CASE("check failures name the offending rule and hypothesis") {
  Formula A = propA();
  CHECK(throws_containing([&] { check(Derivation::hyp("zzz", A)); }, "zzz"));
  // mismatch deep in a tree still reports
  Derivation deep = Derivation::lam(
      "u", A, Derivation::hyp("u", Formula::prop("B")), Formula::implies(A, A));
  CHECK_THROWS_AS(check(deep), CheckError);
}

TEST_CASE("derivations print and parse back exactly") {
  Formula A = propA(), B = propB();
  Derivation id = Derivation::lam("u", A, Derivation::hyp("u", A), Formula::implies(A, A));
  Derivation kd = Derivation::lam(
      "u", A, Derivation::lam("v", B, Derivation::hyp("u", A), Formula::implies(B, A)),
      Formula::implies(A, Formula::implies(B, A)));
  SetTerm va = sv("a");
  Formula sub = Formula::rel(RelOp::Subseteq, sv("x"), va);
  Formula impl = Formula::implies(sub, sub);
  Derivation gen = Derivation::all_intro(
      "x", Derivation::lam("h", sub, Derivation::hyp("h", sub), impl),
      Formula::forall("x", impl));
  for (const Derivation& d : {id, kd, gen}) {
    CHECK(parse_derivation(to_string(d)) == d);
  }

  Context ctx{{"f", Formula::implies(A, B)}, {"x", A}};
  Derivation m = Derivation::mp(Derivation::hyp("f", Formula::implies(A, B)),
                                Derivation::hyp("x", A), B);
  auto [c2, d2] = parse_sequent(sequent_to_string(ctx, m));
  CHECK(c2 == ctx);
  CHECK(d2 == m);

  // the documented flat form
  auto [c3, d3] = parse_sequent("(derivation (context (h (prop A))) (hyp h (prop A)))");
  CHECK(check(d3, c3) == CTerm::var("h"));
  CHECK_THROWS_AS(parse_derivation("(mp (prop A))"), ParseError);
}

TEST_CASE("axiom schemes instantiate closed and serve as hypotheses") {
  Formula f = Formula::eps(sv("x"), sv("a"));
  std::vector<Formula> axioms = {
      axiom_extensionality_membership(),
      axiom_extensionality_inclusion(),
      axiom_foundation(f, "x"),
      axiom_comprehension(f, "x"),
      axiom_pairing(),
      axiom_union(),
      axiom_power(),
      axiom_collection(Formula::eps(sv("y"), sv("x")), "x", "y"),
      axiom_infinity(Formula::eps(sv("y"), sv("x")), "x", "y"),
  };
  for (const Formula& ax : axioms) {
    CHECK(free_vars(ax).empty());
    for (const Formula& g : expand(ax)) CHECK(g.is_core());
    Context ctx{{"ax", ax}};
    CHECK(check(Derivation::hyp("ax", ax), ctx) == CTerm::var("ax"));
  }
}
