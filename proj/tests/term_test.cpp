#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "rz/errors.hpp"
#include "rz/term.hpp"

using namespace rz;

TEST_CASE("combinator names roundtrip") {
  for (int i = 0; i < kCombCount; ++i) {
    Comb c = static_cast<Comb>(i);
    auto back = comb_from_name(comb_name(c));
    REQUIRE(back.has_value());
    CHECK(*back == c);
  }
  CHECK(!comb_from_name("Z").has_value());
  CHECK(!comb_from_name("").has_value());
}

TEST_CASE("structural equality is independent of construction path") {
  Term a = Term::app(Term::comb(Comb::B), Term::comb(Comb::C));
  Term b = Term::app(Term::comb(Comb::B), Term::comb(Comb::C));
  CHECK(a == b);
  CHECK(a.hash() == b.hash());
  CHECK(a != Term::app(Term::comb(Comb::C), Term::comb(Comb::B)));

  Stack s1 = Stack::push(a, Stack::constant(2));
  Stack s2 = Stack::push(b, Stack::constant(2));
  CHECK(s1 == s2);
  CHECK(s1 != Stack::push(a, Stack::constant(3)));
  CHECK(Process{a, s1} == Process{b, s2});
}

TEST_CASE("stack depth counts pushes above the constant") {
  Stack s = Stack::constant(0);
  CHECK(s.depth() == 0);
  for (std::uint32_t i = 1; i <= 5; ++i) {
    s = Stack::push(Term::comb(Comb::I), s);
    CHECK(s.depth() == i);
  }
  CHECK(s.rest().depth() == 4);
}

TEST_CASE("proof-like terms are exactly the continuation-free ones") {
  CHECK(is_proof_like(Term::comb(Comb::Cc)));
  Term k = Term::cont(Stack::constant(0));
  CHECK(!is_proof_like(k));
  CHECK(!is_proof_like(Term::app(Term::comb(Comb::I), k)));
  CHECK(is_proof_like(numeral(7)));

  // closure under application, both directions
  rzt::Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    Term f = rzt::gen_term(rng, 3, true);
    Term x = rzt::gen_term(rng, 3, true);
    CHECK(is_proof_like(Term::app(f, x)) == (is_proof_like(f) && is_proof_like(x)));
  }
}

TEST_CASE("term_cmp and stack_cmp are total orders consistent with equality") {
  rzt::Rng rng(102);
  std::vector<Term> ts;
  for (int i = 0; i < 40; ++i) ts.push_back(rzt::gen_term(rng, 3, true));
  for (const Term& a : ts)
    for (const Term& b : ts) {
      int ab = term_cmp(a, b);
      int ba = term_cmp(b, a);
      CHECK(((ab == 0) == (a == b)));
      CHECK(ab == -ba);
    }
  // transitivity on a sorted chain
  std::sort(ts.begin(), ts.end(),
            [](const Term& a, const Term& b) { return term_cmp(a, b) < 0; });
  for (std::size_t i = 0; i + 2 < ts.size(); ++i)
    CHECK(term_cmp(ts[i], ts[i + 2]) <= 0);

  std::vector<Stack> ss;
  for (int i = 0; i < 30; ++i) ss.push_back(rzt::gen_stack(rng, 2, true, 3));
  for (const Stack& a : ss)
    for (const Stack& b : ss) {
      CHECK(((stack_cmp(a, b) == 0) == (a == b)));
      CHECK(stack_cmp(a, b) == -stack_cmp(b, a));
    }
}

TEST_CASE("numerals have the successor shape and are recognized exactly") {
  CHECK(to_string(numeral(0)) == "(K I)");
  for (unsigned n = 0; n < 12; ++n) {
    Term t = numeral(n);
    auto v = numeral_value(t);
    REQUIRE(v.has_value());
    CHECK(*v == n);
    if (n > 0) CHECK(t == Term::app(sigma(), numeral(n - 1)));
    CHECK(is_proof_like(t));
  }
  CHECK(!numeral_value(Term::comb(Comb::I)).has_value());
  CHECK(!numeral_value(Term::app(sigma(), Term::comb(Comb::I))).has_value());
  // (sigma)(K I) with sigma misassembled is not a numeral
  Term fake = Term::app(Term::app(Term::comb(Comb::B), Term::comb(Comb::W)),
                        numeral(0));
  CHECK(!numeral_value(fake).has_value());
}

TEST_CASE("sigma is (BW)(BB)") {
  Term bw = Term::app(Term::comb(Comb::B), Term::comb(Comb::W));
  Term bb = Term::app(Term::comb(Comb::B), Term::comb(Comb::B));
  CHECK(sigma() == Term::app(bw, bb));
}

TEST_CASE("printer output parses back to an equal value") {
  rzt::Rng rng(103);
  for (int i = 0; i < 400; ++i) {
    Term t = rzt::gen_term(rng, 4, true);
    CHECK(parse_term(to_string(t)) == t);
    Stack s = rzt::gen_stack(rng, 3, true, 4);
    CHECK(parse_stack(to_string(s)) == s);
    Process p{t, s};
    CHECK(parse_process(to_string(p)) == p);
  }
}

TEST_CASE("parser accepts the documented forms") {
  CHECK(parse_term("B") == Term::comb(Comb::B));
  CHECK(parse_term("cc") == Term::comb(Comb::Cc));
  CHECK(parse_term("qt") == Term::comb(Comb::Qt));
  CHECK(parse_term("(I K)") == Term::app(Term::comb(Comb::I), Term::comb(Comb::K)));
  CHECK(parse_term("k[pi3]") == Term::cont(Stack::constant(3)));
  CHECK(parse_term("  ( I\n K )  ") == parse_term("(I K)"));

  Stack s = parse_stack("I . K . pi0");
  CHECK(s == Stack::push(Term::comb(Comb::I),
                         Stack::push(Term::comb(Comb::K), Stack::constant(0))));
  Process p = parse_process("I * K . pi0");
  CHECK(p.head == Term::comb(Comb::I));
  CHECK(p.stack == parse_stack("K . pi0"));
}

TEST_CASE("parser rejects malformed input") {
  for (const char* bad : {"", "(", "(I", "(I K", "Z", "k[", "k[K]", "pi",
                          "I K", "(I K))", "k[pi-1]"}) {
    CHECK_THROWS_AS(parse_term(bad), ParseError);
  }
  CHECK_THROWS_AS(parse_stack("I . K"), ParseError);
  CHECK_THROWS_AS(parse_stack("pi0 . I"), ParseError);
  CHECK_THROWS_AS(parse_process("I K . pi0"), ParseError);
  CHECK_THROWS_AS(parse_process("* pi0"), ParseError);
}

TEST_CASE("size memo counts shared structure once per query") {
  SizeMemo memo;
  Term i = Term::comb(Comb::I);
  CHECK(memo.term_size(i, 100) == 1);
  Term a = Term::app(i, i);
  CHECK(memo.term_size(a, 100) == 3);
  // deep chain saturates at cap + 1
  Term chain = i;
  for (int d = 0; d < 64; ++d) chain = Term::app(chain, i);
  CHECK(memo.term_size(chain, 10) == 11);

  // a push node costs 1 on top of its term, the stack constant costs 1
  Stack s = Stack::push(a, Stack::constant(0));
  CHECK(memo.stack_size(s, 100) == 3 + 1 + 1);
  CHECK(memo.process_size(Process{a, s}, 100) == 3 + 5);
}

TEST_CASE("constant scan unions stack constants everywhere") {
  Term k2 = Term::cont(Stack::push(Term::comb(Comb::B), Stack::constant(2)));
  Term head = Term::app(k2, Term::comb(Comb::I));
  Stack st = Stack::push(Term::cont(Stack::constant(5)), Stack::constant(0));
  std::set<std::uint32_t> want{0, 2, 5};
  CHECK(constant_indices(Process{head, st}) == want);

  ConstantScan scan;
  scan.scan(head);
  CHECK(scan.found() == std::set<std::uint32_t>{2});
  scan.scan(st);
  CHECK(scan.found() == want);
  // re-scanning adds nothing and stays cheap on shared nodes
  scan.scan(head);
  CHECK(scan.found() == want);
}

TEST_CASE("deep towers print, parse and destruct without recursion blowups") {
  Term t = Term::comb(Comb::I);
  for (int i = 0; i < 200000; ++i) t = Term::app(t, Term::comb(Comb::K));
  std::string text = to_string(t);
  CHECK(text.size() > 200000u);
  Term back = parse_term(text);
  CHECK(back == t);
  // teardown of both copies happens at scope exit; reaching here is the test
  CHECK(is_proof_like(t));
}
