#include <cstdint>
#include <set>

#include "doctest.h"
#include "gen.hpp"
#include "rz/numbering.hpp"
#include "rz/term.hpp"

using namespace rz;

TEST_CASE("cantor pairing is a bijection on an initial segment") {
  std::set<BigNat> seen;
  for (std::uint64_t x = 0; x < 60; ++x) {
    for (std::uint64_t y = 0; y < 60; ++y) {
      BigNat z = cantor_pair(x, y);
      CHECK(seen.insert(z).second);
      auto [bx, by] = cantor_unpair(z);
      CHECK(bx == x);
      CHECK(by == y);
      CHECK(z >= x);
      CHECK(z >= y);
    }
  }
  // unpair then pair is the identity on raw codes
  for (std::uint64_t z = 0; z < 2000; ++z) {
    auto [x, y] = cantor_unpair(z);
    CHECK(cantor_pair(x, y) == z);
  }
}

TEST_CASE("combinator codes follow declaration order") {
  for (int c = 0; c < kCombCount; ++c) {
    Term t = Term::comb(static_cast<Comb>(c));
    CHECK(encode_term(t) == c);
    CHECK(decode_term(c) == t);
  }
  // hand-checked composite codes
  CHECK(encode_term(parse_term("(B B)")) == 8);
  CHECK(encode_term(parse_term("(C B)")) == 10);
  CHECK(encode_term(parse_term("(E E)")) == 32);
  CHECK(encode_term(parse_term("(I K)")) == 72);
  CHECK(encode_term(Term::cont(Stack::constant(0))) == 9);
  CHECK(encode_stack(Stack::constant(3)) == 6);
}

TEST_CASE("decode inverts encode on random terms and stacks") {
  rzt::Rng rng(401);
  for (int i = 0; i < 400; ++i) {
    Term t = rzt::gen_term(rng, 4, true);
    CHECK(decode_term(encode_term(t)) == t);
    Stack s = rzt::gen_stack(rng, 4, true);
    CHECK(decode_stack(encode_stack(s)) == s);
  }
}

TEST_CASE("encode inverts decode on an initial segment of codes") {
  for (std::uint64_t n = 0; n < 4000; ++n) {
    CHECK(encode_term(decode_term(n)) == n);
    CHECK(encode_stack(decode_stack(n)) == n);
  }
}

TEST_CASE("the bounded encoder agrees with the exact one") {
  rzt::Rng rng(402);
  for (int i = 0; i < 400; ++i) {
    Term t = rzt::gen_term(rng, 4, true);
    BigNat full = encode_term(t);
    auto capped = encode_term_bounded(t, 100000);
    if (full <= 100000) {
      REQUIRE(capped.has_value());
      CHECK(BigNat(*capped) == full);
    } else {
      CHECK(!capped.has_value());
    }
  }
  // exact boundary
  CHECK(encode_term_bounded(parse_term("(I K)"), 72).has_value());
  CHECK(!encode_term_bounded(parse_term("(I K)"), 71).has_value());
}

TEST_CASE("proof-likeness is decidable on codes without decoding") {
  for (std::uint64_t n = 0; n < 4000; ++n) {
    CHECK(code_is_proof_like(n) == is_proof_like(decode_term(n)));
  }
  rzt::Rng rng(403);
  for (int i = 0; i < 200; ++i) {
    Term t = rzt::gen_term(rng, 4, true);
    CHECK(code_is_proof_like(encode_term(t)) == is_proof_like(t));
  }
}

TEST_CASE("numerals grow codes fast but stay decodable") {
  // the code of a numeral explodes combinatorially; small ones roundtrip
  for (unsigned n = 0; n <= 6; ++n) {
    Term t = numeral(n);
    CHECK(decode_term(encode_term(t)) == t);
  }
}
