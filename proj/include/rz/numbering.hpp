#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <utility>

#include "rz/term.hpp"

namespace rz {

// Unbounded natural number backing the numbering.
using BigNat = boost::multiprecision::cpp_int;

// Cantor pairing on naturals: pair(x, y) = (x + y)(x + y + 1)/2 + y.
// pair(x, y) >= x and pair(x, y) >= y, so a value's code bounds the codes of
// everything inside it; the bounded encoder exploits this to abort early.
BigNat cantor_pair(const BigNat& x, const BigNat& y);
std::pair<BigNat, BigNat> cantor_unpair(const BigNat& z);

// The numbering of terms and stacks:
//   term code 0..7           the eight combinators, in Comb declaration order
//   term code 8 + 2m         (f a)   with m = pair(code f, code a)
//   term code 8 + 2m + 1     k[s]    with m = code of s
//   stack code 2j            pi<j>
//   stack code 2m + 1        t . s   with m = pair(code t, code s)
// encode and decode are mutually inverse bijections with the naturals.
// Both directions are iterative and safe on machine-deep values.
BigNat encode_term(const Term& t);
BigNat encode_stack(const Stack& s);
Term decode_term(const BigNat& n);
Stack decode_stack(const BigNat& n);

// encode_term capped: the code when it is <= bound, nullopt otherwise.
// Oversized intermediates are never materialized.
std::optional<std::uint64_t> encode_term_bounded(const Term& t, std::uint64_t bound);

// Whether decode_term(n) is proof-like, decided on the code alone without
// building the term.
bool code_is_proof_like(const BigNat& n);

}  // namespace rz
