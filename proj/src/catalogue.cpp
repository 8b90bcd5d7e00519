#include "rz/catalogue.hpp"

#include <initializer_list>
#include <map>
#include <stdexcept>
#include <utility>

#include "rz/cterm.hpp"
#include "rz/numbering.hpp"

namespace rz {
namespace {

using Bindings = std::map<std::string, Term>;

Term build(const std::string& source, const Bindings& bindings) {
  return to_term(substitute(compile(parse_lambda(source)), bindings));
}

// Church-style iterate: \f. \x. f (f (... (f x))).
Term church(unsigned n) {
  LambdaTerm f = LambdaTerm::var("f");
  LambdaTerm body = LambdaTerm::var("x");
  for (unsigned i = 0; i < n; ++i) body = LambdaTerm::app(f, body);
  return to_term(compile(LambdaTerm::abs("f", LambdaTerm::abs("x", body))));
}

Process proc(const Term& head, std::initializer_list<Term> args,
             const Stack& tail) {
  std::vector<Term> v(args);
  Stack s = tail;
  for (auto it = v.rbegin(); it != v.rend(); ++it) s = Stack::push(*it, s);
  return Process{head, s};
}

std::vector<CatalogueEntry> build_entries() {
  std::vector<CatalogueEntry> out;
  auto add = [&out](std::string name, const std::string& source,
                    const Bindings& b, std::vector<Contract> contracts) {
    out.push_back(CatalogueEntry{std::move(name), source, build(source, b),
                                 std::move(contracts)});
  };

  const Stack pi = Stack::constant(0);
  const Term kpi = Term::cont(pi);
  const Term B = Term::comb(Comb::B);
  const Term C = Term::comb(Comb::C);
  const Term E = Term::comb(Comb::E);
  const Term I = Term::comb(Comb::I);
  const Term K = Term::comb(Comb::K);
  const Term zero = numeral(0);
  const Term one = numeral(1);

  const Term sig = sigma();
  add("sigma", "(B W) (B B)", {},
      {{"applies the first argument to the second and the second to the third",
        proc(sig, {B, C, E}, pi),
        proc(Term::app(Term::app(B, C), Term::app(C, E)), {}, pi), 50},
       {"spare stack entries ride along untouched",
        proc(sig, {B, C, E}, Stack::push(I, pi)),
        proc(Term::app(Term::app(B, C), Term::app(C, E)), {},
             Stack::push(I, pi)),
        50}});

  const std::string half_src = "\\x. x x";
  const Term half = build(half_src, {});
  const Term omega = build("(" + half_src + ") (" + half_src + ")", {});
  const Term yterm = build(
      "(\\a. \\f. f (a a f)) (\\a. \\f. f (a a f))", {});
  add("Y", "(\\a. \\f. f (a a f)) (\\a. \\f. f (a a f))", {},
      {{"delivers its own application back to the head argument",
        proc(yterm, {K}, pi), proc(K, {Term::app(yterm, K)}, pi), 200},
       {"spare stack entries ride along untouched",
        proc(yterm, {K, I, E}, pi),
        proc(K, {Term::app(yterm, K), I, E}, pi), 200}});
  add("A", "\\a. \\f. f (a a f)", {},
      {{"unfolds one fixed point stage",
        proc(build("\\a. \\f. f (a a f)", {}), {B, C}, pi),
        proc(C, {Term::app(Term::app(B, B), C)}, pi), 200}});

  {
    std::vector<Contract> cs;
    for (unsigned n : {0u, 1u, 2u, 4u}) {
      cs.push_back({"counts down one stage, compounding the first argument "
                    "onto the second (n = " + std::to_string(n) + ")",
                    proc(numeral(n + 1), {E, I}, pi),
                    proc(numeral(n), {E, Term::app(E, I)}, pi), 60});
    }
    add("numeral_chain", "sigma zero", {{"sigma", sig}, {"zero", zero}}, cs);
  }

  {
    std::vector<Contract> cs;
    for (unsigned n : {0u, 3u, 7u}) {
      cs.push_back({"steps aside and lets the numeral drive (n = " +
                    std::to_string(n) + ")",
                    proc(I, {numeral(n), E, K}, pi),
                    proc(numeral(n), {E, K}, pi), 5});
    }
    cs.push_back({"chained descent from the successor form",
                  proc(numeral(3), {E, K}, pi),
                  proc(numeral(2), {E, Term::app(E, K)}, pi), 60});
    add("recurrence", "I", {}, cs);
  }

  add("eq_intro", "\\x. x I", {},
      {{"feeds the identity to its argument",
        proc(build("\\x. x I", {}), {K}, pi), proc(K, {I}, pi), 10}});
  add("eq_elim", "\\x. \\y. cc \\k. y (k x)", {},
      {{"hands the second argument the first, sealed under the current "
        "continuation",
        proc(build("\\x. \\y. cc \\k. y (k x)", {}), {B, C}, pi),
        proc(C, {Term::app(kpi, B)}, pi), 200}});

  add("nat_quant_fwd", "\\x. \\y. \\z. y (x z)", {},
      {{"the middle argument receives the first applied to the third",
        proc(build("\\x. \\y. \\z. y (x z)", {}), {B, C, E}, pi),
        proc(C, {Term::app(B, E)}, pi), 200}});
  add("nat_quant_bwd", "\\x. \\y. cc \\k. x k y", {},
      {{"offers the current continuation to its first argument",
        proc(build("\\x. \\y. cc \\k. x k y", {}), {B, C}, pi),
        proc(B, {kpi, C}, pi), 200}});

  add("succ_shift", "\\g. \\x. g (sigma x)", {{"sigma", sig}},
      {{"wraps the successor around the second argument",
        proc(build("\\g. \\x. g (sigma x)", {{"sigma", sig}}), {K, I}, pi),
        proc(K, {Term::app(sig, I)}, pi), 200},
       {"sends a numeral to its successor",
        proc(build("\\g. \\x. g (sigma x)", {{"sigma", sig}}),
             {K, numeral(2)}, pi),
        proc(K, {numeral(3)}, pi), 200}});

  {
    const std::string src = "\\n. \\f. n (\\g. \\x. g (sigma x)) f zero";
    const Term st = build(src, {{"sigma", sig}, {"zero", zero}});
    std::vector<Contract> cs;
    for (unsigned n : {0u, 1u, 2u, 3u, 5u, 10u}) {
      cs.push_back({"rebuilds the numeral from a Church iterate (n = " +
                    std::to_string(n) + ")",
                    proc(st, {church(n), E}, pi),
                    proc(E, {numeral(n)}, pi), 5000});
    }
    add("storage", src, {{"sigma", sig}, {"zero", zero}}, cs);
  }

  add("bool_split", "\\x. \\y. \\f. f x y", {},
      {{"passes both stored answers to the selector",
        proc(build("\\x. \\y. \\f. f x y", {}), {B, C, E}, pi),
        proc(E, {B, C}, pi), 200}});

  {
    const Term t = build("\\x. qt x x", {});
    add("neac", "\\x. qt x x", {},
        {{"delivers the head argument its own code (a constant)",
          proc(t, {I}, pi), proc(I, {numeral(3)}, pi), 30},
         {"delivers the head argument its own code (an application)",
          proc(t, {Term::app(B, B)}, pi),
          proc(Term::app(B, B), {numeral(8)}, pi), 40}});
  }
  add("apply_with_code", "\\x. \\y. qt y x x", {},
      {{"calls the second argument with the first's code and the first "
        "itself",
        proc(build("\\x. \\y. qt y x x", {}), {I, K}, pi),
        proc(K, {numeral(3), I}, pi), 200}});

  add("omega", "(\\x. x x) (\\x. x x)", {},
      {{"duplicates the self application",
        proc(omega, {}, pi), proc(half, {half}, pi), 5},
       {"the loop closes back onto the seed",
        proc(half, {half}, pi), proc(omega, {}, pi), 7}});
  const Term omega0 = build("omega zero", {{"omega", omega}, {"zero", zero}});
  add("omega0", "omega zero", {{"omega", omega}, {"zero", zero}},
      {{"stages its tag and keeps looping",
        proc(omega0, {}, pi), proc(omega, {zero}, pi), 3}});
  const Term omega1 = build("omega one", {{"omega", omega}, {"one", one}});
  add("omega1", "omega one", {{"omega", omega}, {"one", one}},
      {{"stages its tag and keeps looping",
        proc(omega1, {}, pi), proc(omega, {one}, pi), 3}});

  add("capture_pair", "\\f. cc \\k. f (omega1 k) (omega0 k)",
      {{"omega0", omega0}, {"omega1", omega1}},
      {{"presents both loop tags sealed with the current continuation",
        proc(build("\\f. cc \\k. f (omega1 k) (omega0 k)",
                   {{"omega0", omega0}, {"omega1", omega1}}),
             {K}, pi),
        proc(K, {Term::app(omega1, kpi), Term::app(omega0, kpi)}, pi), 2000}});

  {
    const Bindings b = {{"a0", numeral(0)}, {"a1", numeral(1)},
                        {"a2", numeral(2)}};
    const std::string src =
        "\\x. \\y. cc \\k. x (k y a0) (x (k y a1) (k y a2))";
    const Term t = build(src, b);
    auto tag = [&](unsigned i) {
      return Term::app(Term::app(kpi, C), numeral(i));
    };
    add("capture_triple", src, b,
        {{"spreads three tagged retries across the head argument",
          proc(t, {B, C}, pi),
          proc(B, {tag(0), Term::app(Term::app(B, tag(1)), tag(2))}, pi),
          2000}});
  }

  {
    const std::string src = "\\x. \\y. cc \\k. y (\\z. x z z (omega k z))";
    const Term t = build(src, {{"omega", omega}});
    const Term probe =
        to_term(substitute(compile(parse_lambda("\\z. x z z (omega k z)")),
                           {{"x", B}, {"omega", omega}, {"k", kpi}}));
    add("capture_probe", src, {{"omega", omega}},
        {{"hands the second argument a duplicating probe that can always "
          "restart",
          proc(t, {B, C}, pi), proc(C, {probe}, pi), 2000}});
  }
  {
    const std::string src =
        "\\x. \\y. cc \\k. x (\\n. cc \\h. y h h (omega k (\\f. f h n)))";
    const Term t = build(src, {{"omega", omega}});
    const Term probe = to_term(substitute(
        compile(parse_lambda("\\n. cc \\h. y h h (omega k (\\f. f h n))")),
        {{"y", C}, {"omega", omega}, {"k", kpi}}));
    add("capture_probe_indexed", src, {{"omega", omega}},
        {{"hands the first argument an index aware probe",
          proc(t, {B, C}, pi), proc(B, {probe}, pi), 2000}});
  }
  {
    const std::string src = "\\a. \\x. \\y. cc \\k. y (\\z. x z z (k a z))";
    const Term t = build(src, {});
    const Term probe =
        to_term(substitute(compile(parse_lambda("\\z. x z z (k a z)")),
                           {{"a", I}, {"x", B}, {"k", kpi}}));
    add("capture_probe_tagged", src, {},
        {{"hands the third argument a probe that retries under a fixed tag",
          proc(t, {I, B, C}, pi), proc(C, {probe}, pi), 2000}});
  }

  return out;
}

const std::vector<CatalogueEntry>& entries() {
  static const std::vector<CatalogueEntry> es = build_entries();
  return es;
}

}  // namespace

const std::vector<std::string>& catalogue_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const CatalogueEntry& e : entries()) v.push_back(e.name);
    return v;
  }();
  return names;
}

const CatalogueEntry& get(const std::string& name) {
  for (const CatalogueEntry& e : entries()) {
    if (e.name == name) return e;
  }
  throw std::out_of_range("no catalogue entry named '" + name + "'");
}

CatalogueReport run_contracts(const std::string& name,
                              std::uint64_t budget_override) {
  const CatalogueEntry& e = get(name);
  CatalogueReport rep;
  rep.name = e.name;
  rep.all_passed = true;
  for (const Contract& c : e.contracts) {
    std::uint64_t budget = budget_override ? budget_override : c.budget;
    ContractOutcome o;
    o.description = c.description;
    o.budget = budget;
    o.passed = reduces_to(c.initial, c.expected, budget);
    if (!o.passed) rep.all_passed = false;
    rep.outcomes.push_back(std::move(o));
  }
  return rep;
}

}  // namespace rz
