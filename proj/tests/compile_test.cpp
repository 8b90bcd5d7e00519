#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "rz/cterm.hpp"
#include "rz/errors.hpp"
#include "rz/machine.hpp"
#include "rz/term.hpp"

using namespace rz;

namespace {

// Self-contained restatement of binder elimination, recursion and occurrence
// check included, so the library shares no code with it.
bool occurs(const CTerm& t, const std::string& x) {
  switch (t.kind()) {
    case CTerm::Kind::Var:
      return t.name() == x;
    case CTerm::Kind::App:
      return occurs(t.fn(), x) || occurs(t.arg(), x);
    default:
      return false;
  }
}

CTerm cc(Comb c) { return CTerm::constant(c); }

CTerm abstract_oracle(const std::string& x, const CTerm& t) {
  if (!occurs(t, x)) return CTerm::app(cc(Comb::K), t);               // 1
  if (t.kind() == CTerm::Kind::Var) return cc(Comb::I);               // 2
  const CTerm& f = t.fn();
  const CTerm& u = t.arg();
  if (!occurs(u, x)) {                                                // 3
    CTerm inner = abstract_oracle(x, CTerm::app(cc(Comb::E), f));
    return CTerm::app(CTerm::app(cc(Comb::C), inner), u);
  }
  if (u.kind() == CTerm::Kind::Var) {  // u is x itself
    if (!occurs(f, x)) return CTerm::app(cc(Comb::E), f);             // 4
    return CTerm::app(cc(Comb::W),
                      abstract_oracle(x, CTerm::app(cc(Comb::E), f)));  // 5
  }
  // u = (u1 u2) containing x                                            6
  return abstract_oracle(
      x, CTerm::app(CTerm::app(CTerm::app(cc(Comb::B), f), u.fn()), u.arg()));
}

std::vector<CTerm> enumerate_depth2() {
  std::vector<CTerm> layer0;
  layer0.push_back(CTerm::var("x"));
  layer0.push_back(CTerm::var("y"));
  for (int c = 0; c < kCombCount; ++c) layer0.push_back(cc(static_cast<Comb>(c)));
  std::vector<CTerm> layer1 = layer0;
  for (const CTerm& a : layer0)
    for (const CTerm& b : layer0) layer1.push_back(CTerm::app(a, b));
  std::vector<CTerm> layer2 = layer0;
  for (const CTerm& a : layer1)
    for (const CTerm& b : layer1) layer2.push_back(CTerm::app(a, b));
  return layer2;
}

}  // namespace

TEST_CASE("abstraction agrees with the six-rule oracle on all small terms") {
  std::vector<CTerm> all = enumerate_depth2();
  CHECK(all.size() == 12110);
  for (const CTerm& t : all) {
    for (const char* v : {"x", "y"}) {
      CTerm got = abstract(v, t);
      CHECK(got == abstract_oracle(v, t));
      CHECK(!contains_var(got, v));
    }
  }
}

TEST_CASE("abstraction matches the published cases one by one") {
  CTerm x = CTerm::var("x");
  CTerm y = CTerm::var("y");
  CTerm K = cc(Comb::K), E = cc(Comb::E), W = cc(Comb::W), I = cc(Comb::I),
        C = cc(Comb::C), B = cc(Comb::B);
  // 1: constant body
  CHECK(abstract("x", K) == CTerm::app(K, K));
  CHECK(abstract("x", y) == CTerm::app(K, y));
  // 2: the variable itself
  CHECK(abstract("x", x) == I);
  // 4: (f x) with x not in f
  CHECK(abstract("x", CTerm::app(y, x)) == CTerm::app(E, y));
  // 5: (x x) duplicates
  CHECK(abstract("x", CTerm::app(x, x)) == CTerm::app(W, CTerm::app(E, E)));
  // 3: (x y) pushes the argument aside
  CHECK(abstract("x", CTerm::app(x, y)) ==
        CTerm::app(CTerm::app(C, CTerm::app(E, E)), y));
  // 6: argument is an application containing x
  CHECK(abstract("x", CTerm::app(y, CTerm::app(x, x))) ==
        abstract("x", CTerm::app(CTerm::app(CTerm::app(B, y), x), x)));
}

TEST_CASE("compile eliminates binders innermost first") {
  // identity and the two-binder projection
  CHECK(compile(parse_lambda("\\x. x")) == cc(Comb::I));
  CHECK(compile(parse_lambda("\\x. \\y. x")) ==
        CTerm::app(cc(Comb::E), cc(Comb::K)));
  // self application
  CHECK(to_term(compile(parse_lambda("\\x. x x"))) ==
        parse_term("(W (E E))"));
  // shadowing: the inner binder owns the variable
  CHECK(compile(parse_lambda("\\x. \\x. x")) ==
        CTerm::app(cc(Comb::K), cc(Comb::I)));
  // free variables survive compilation
  CTerm open = compile(parse_lambda("\\x. y x"));
  CHECK(open == CTerm::app(cc(Comb::E), CTerm::var("y")));
  CHECK(free_vars(open) == std::set<std::string>{"y"});
}

TEST_CASE("substitute replaces named variables and commutes with abstraction") {
  rzt::Rng rng(301);
  for (int i = 0; i < 300; ++i) {
    CTerm t = rzt::gen_cterm(rng, {"x", "y"}, 4);
    Term a = rzt::gen_term(rng, 2, true);
    std::map<std::string, Term> b{{"y", a}};
    // binding y then abstracting x equals abstracting x then binding y
    CHECK(substitute(abstract("x", t), b) == abstract("x", substitute(t, b)));
    // substitution removes the variable
    CHECK(!contains_var(substitute(t, {{"x", a}, {"y", a}}), "x"));
  }
  // unbound variables survive
  CTerm open = CTerm::app(CTerm::var("x"), CTerm::var("z"));
  CTerm half = substitute(open, {{"x", Term::comb(Comb::I)}});
  CHECK(free_vars(half) == std::set<std::string>{"z"});
}

TEST_CASE("to_term and from_term convert exactly on closed terms") {
  rzt::Rng rng(302);
  for (int i = 0; i < 300; ++i) {
    Term t = rzt::gen_term(rng, 4, true);
    CHECK(to_term(from_term(t)) == t);
  }
  CHECK_THROWS_AS(to_term(CTerm::var("x")), std::invalid_argument);
  CHECK_THROWS_AS(to_term(CTerm::app(cc(Comb::I), CTerm::var("q"))),
                  std::invalid_argument);
}

TEST_CASE("machine replay confirms the substitution law on random bodies") {
  rzt::Rng rng(303);
  Stack pi = Stack::constant(0);
  for (int i = 0; i < 200; ++i) {
    CTerm t = rzt::gen_cterm(rng, {"x", "y", "z"}, 4);
    std::vector<std::pair<std::string, Term>> args;
    for (const char* v : {"x", "y", "z"})
      args.emplace_back(v, rzt::gen_term(rng, 2, true));
    CHECK(substitution_law_holds(t, args, pi, 100000));
  }
  // closed body with no binders holds reflexively
  CHECK(substitution_law_holds(cc(Comb::K), {}, pi, 0));
  // the replay respects the budget
  CTerm dup = CTerm::app(CTerm::var("x"), CTerm::var("x"));
  CHECK(!substitution_law_holds(dup, {{"x", Term::comb(Comb::I)}}, pi, 1));
}

TEST_CASE("lambda parsing handles binders, juxtaposition and parentheses") {
  // application is left associative, abstraction body extends right
  LambdaTerm l = parse_lambda("\\f. \\x. f (f x)");
  CHECK(l.kind() == LambdaTerm::Kind::Abs);
  CHECK(l.binder() == "f");
  CHECK(l.body().binder() == "x");
  const LambdaTerm& b = l.body().body();
  CHECK(b.kind() == LambdaTerm::Kind::App);
  CHECK(b.fn().name() == "f");
  CHECK(b.arg().kind() == LambdaTerm::Kind::App);

  // constants keep their machine meaning, other identifiers are variables
  LambdaTerm m = parse_lambda("cc (\\k. sigma k)");
  CHECK(m.fn().as_comb() == Comb::Cc);
  CHECK(m.arg().body().fn().name() == "sigma");

  // x y z groups as (x y) z
  CTerm c = compile(parse_lambda("\\x. \\y. \\z. x z (y z)"));
  Term s_comb = to_term(c);
  // the classic substitution combinator really distributes its argument
  Process p{Term::app(Term::app(Term::app(s_comb, Term::comb(Comb::K)),
                                Term::comb(Comb::K)),
                      Term::comb(Comb::I)),
            Stack::constant(0)};
  CHECK(reduces_to(p, parse_process("I * pi0"), 1000));

  for (const char* bad : {"", "\\", "\\x", "\\x.", "(x", "x)", "\\2. x",
                          "x (", "\\x x"}) {
    CHECK_THROWS_AS(parse_lambda(bad), ParseError);
  }
}

TEST_CASE("printed c-terms read back naturally") {
  CTerm t = CTerm::app(CTerm::app(cc(Comb::C), CTerm::var("phi")),
                       CTerm::lit(numeral(2)));
  std::string s = to_string(t);
  CHECK(s.find("phi") != std::string::npos);
  CHECK(s.find("C") != std::string::npos);
  // a literal prints as its machine form
  CHECK(s.find(to_string(numeral(2))) != std::string::npos);
}
