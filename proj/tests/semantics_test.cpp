#include <map>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "gen.hpp"
#include "rz/errors.hpp"
#include "rz/semantics.hpp"

using namespace rz;

namespace {

bool stack_less(const Stack& a, const Stack& b) { return stack_cmp(a, b) < 0; }
using StackSet = std::set<Stack, bool (*)(const Stack&, const Stack&)>;
StackSet make_set() { return StackSet(stack_less); }

using OEnv = std::map<std::string, Name>;

// Brute-force truth values: materialize every ||F|| as an explicit stack set
// by direct recursion over the published clauses. Quantifies over the same
// finite universe as the library but shares none of its evaluation code.
// Requires a certified pole, so membership in the pole is two-valued.
struct Oracle {
  const TruthQuery& q;

  bool in_pole(const Term& xi, const Stack& s) const {
    return q.pole.member(Process{xi, s}) != PoleVerdict::InComplement;
  }
  bool realize_set(const Term& xi, const StackSet& val) const {
    for (const Stack& s : val)
      if (!in_pole(xi, s)) return false;
    return true;
  }

  StackSet norm_sub(const Name& a, const Name& b) const {
    StackSet out = make_set();
    for (const Stack& s : q.universe.stacks()) {
      if (s.is_const()) continue;
      for (const Name::Elem& e : a.elems()) {
        if (e.second != s.rest()) continue;
        if (realize_set(s.top(), norm_notin(e.first, b))) {
          out.insert(s);
          break;
        }
      }
    }
    return out;
  }

  StackSet norm_notin(const Name& a, const Name& b) const {
    StackSet out = make_set();
    for (const Stack& s : q.universe.stacks()) {
      if (s.is_const() || s.rest().is_const()) continue;
      const Term& xi = s.top();
      const Term& xi2 = s.rest().top();
      const Stack& pi = s.rest().rest();
      for (const Name::Elem& e : b.elems()) {
        if (e.second != pi) continue;
        if (realize_set(xi, norm_sub(a, e.first)) &&
            realize_set(xi2, norm_sub(e.first, a))) {
          out.insert(s);
          break;
        }
      }
    }
    return out;
  }

  Name eval(const SetTerm& t, const OEnv& env) const {
    if (t.kind() == SetTerm::Kind::Var) return env.at(t.name());
    if (t.name() == "0") return Name::empty();
    throw std::logic_error("oracle evaluates variables and 0 only");
  }

  std::optional<unsigned> as_numeral(const Term& t) const {
    for (unsigned k = 0; k <= 8; ++k)
      if (t == numeral(k)) return k;
    return std::nullopt;
  }

  StackSet norm(const Formula& f, const OEnv& env) const {
    StackSet out = make_set();
    switch (f.kind()) {
      case Formula::Kind::Top:
        return out;
      case Formula::Kind::Bottom:
        for (const Stack& s : q.universe.stacks()) out.insert(s);
        return out;
      case Formula::Kind::Prop: {
        for (const Stack& s : q.valuation.at(f.name()))
          if (q.universe.contains(s)) out.insert(s);
        return out;
      }
      case Formula::Kind::Rel: {
        Name a = eval(f.lhs(), env);
        Name b = eval(f.rhs(), env);
        if (f.rel() == RelOp::NotEps) {
          for (const Stack& s : q.universe.stacks())
            if (b.contains(a, s)) out.insert(s);
          return out;
        }
        return f.rel() == RelOp::Subseteq ? norm_sub(a, b) : norm_notin(a, b);
      }
      case Formula::Kind::Implies: {
        StackSet arg = norm(f.child(0), env);
        StackSet rest = norm(f.child(1), env);
        for (const Stack& s : q.universe.stacks()) {
          if (s.is_const()) continue;
          if (rest.count(s.rest()) && realize_set(s.top(), arg)) out.insert(s);
        }
        return out;
      }
      case Formula::Kind::Forall: {
        for (const Name& a : q.pool) {
          OEnv inner = env;
          inner.insert_or_assign(f.name(), a);
          for (const Stack& s : norm(f.child(0), inner)) out.insert(s);
        }
        return out;
      }
      case Formula::Kind::ForallGimel: {
        for (const SetTerm& e : f.terms()) {
          OEnv inner = env;
          inner.insert_or_assign(f.name(), eval(e, env));
          for (const Stack& s : norm(f.child(0), inner)) out.insert(s);
        }
        return out;
      }
      case Formula::Kind::ForallEnt: {
        for (const Stack& s : q.universe.stacks()) {
          if (s.is_const()) continue;
          auto n = as_numeral(s.top());
          if (!n) continue;
          OEnv inner = env;
          inner.insert_or_assign(f.name(), nat_name(*n, q.universe));
          if (norm(f.child(0), inner).count(s.rest())) out.insert(s);
        }
        return out;
      }
      case Formula::Kind::EqCond: {
        if (eval(f.lhs(), env) != eval(f.rhs(), env)) return out;
        return norm(f.child(0), env);
      }
      default:
        throw std::logic_error("oracle handles core formulas only");
    }
  }
};

// Random closed core formulas over individuals a, b, c and quantified x<i>.
Formula gen_formula(rzt::Rng& rng, unsigned depth, std::vector<std::string> scope,
                    unsigned* fresh) {
  auto var_term = [&] { return SetTerm::var(scope[rzt::pick(rng, scope.size())]); };
  if (depth == 0 || rzt::pick(rng, 4) == 0) {
    switch (rzt::pick(rng, 6)) {
      case 0: return Formula::top();
      case 1: return Formula::bottom();
      case 2: return Formula::prop("A");
      case 3: return Formula::prop("B");
      default: {
        RelOp op = static_cast<RelOp>(rzt::pick(rng, 3));
        return Formula::rel(op, var_term(), var_term());
      }
    }
  }
  switch (rzt::pick(rng, 5)) {
    case 0:
      return Formula::implies(gen_formula(rng, depth - 1, scope, fresh),
                              gen_formula(rng, depth - 1, scope, fresh));
    case 1: {
      std::string x = "x" + std::to_string((*fresh)++);
      std::vector<std::string> inner = scope;
      inner.push_back(x);
      return Formula::forall(x, gen_formula(rng, depth - 1, inner, fresh));
    }
    case 2: {
      std::string x = "x" + std::to_string((*fresh)++);
      std::vector<std::string> inner = scope;
      inner.push_back(x);
      std::vector<SetTerm> elems{var_term()};
      if (rzt::pick(rng, 2)) elems.push_back(var_term());
      return Formula::forall_gimel(x, std::move(elems),
                                   gen_formula(rng, depth - 1, inner, fresh));
    }
    case 3: {
      std::string x = "x" + std::to_string((*fresh)++);
      std::vector<std::string> inner = scope;
      inner.push_back(x);
      return Formula::forall_ent(x, gen_formula(rng, depth - 1, inner, fresh));
    }
    default:
      return Formula::eq_cond(var_term(), var_term(),
                              gen_formula(rng, depth - 1, scope, fresh));
  }
}

TruthQuery base_query(const StackUniverse& u, const Pole& pole) {
  TruthQuery q{u, pole, {}, {}, {}, 4};
  const std::vector<Stack>& st = u.stacks();
  Name e = Name::empty();
  Name n1 = Name::make({{e, st[0]}});
  Name n2 = Name::make({{e, st[0]}, {e, st[st.size() - 1]}});
  Name n3 = Name::make({{n1, st[0]}, {e, st[1 % st.size()]}});
  q.pool = {e, n1, n2, n3};
  q.individuals = {{"a", n1}, {"b", n3}, {"c", e}};
  q.valuation["A"] = {st[0], st[st.size() / 2]};
  q.valuation["B"] = {};
  return q;
}

}  // namespace

TEST_CASE("universe generation is deterministic and structurally bounded") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  StackUniverse v = StackUniverse::generate({1, 2, 2});
  CHECK(u.fingerprint() == v.fingerprint());
  CHECK(u.stacks().size() == v.stacks().size());
  CHECK(u.stacks().size() == 18);  // 2 constants + 8 unit terms on each

  SizeMemo memo;
  for (const Stack& s : u.stacks()) {
    CHECK(u.contains(s));
    Stack cur = s;
    unsigned depth = 0;
    while (!cur.is_const()) {
      CHECK(memo.term_size(cur.top(), 100) <= 2);
      CHECK(!cur.top().is_cont());
      cur = cur.rest();
      ++depth;
    }
    CHECK(depth <= 1);
    CHECK(cur.const_index() < 2);
    // rests of universe stacks stay inside the universe
    if (!s.is_const()) CHECK(u.contains(s.rest()));
  }
  CHECK(!u.contains(Stack::constant(7)));
  CHECK(StackUniverse::generate({1, 2, 3}).fingerprint() != u.fingerprint());
  CHECK(StackUniverse::generate({2, 2, 2}).stacks().size() > u.stacks().size());
}

TEST_CASE("poles certify when every generator run closes") {
  Pole p({parse_process("K * I . I . pi0")}, 100);
  CHECK(p.certified());
  CHECK(p.reachable_count() == 2);  // the generator and its one reduct
  CHECK(p.member(parse_process("K * I . I . pi0")) == PoleVerdict::InComplement);
  CHECK(p.member(parse_process("I * pi0")) == PoleVerdict::InComplement);
  CHECK(p.member(parse_process("K * pi0")) == PoleVerdict::InPole);
  CHECK(p.heads(Term::comb(Comb::K)));
  CHECK(p.heads(Term::comb(Comb::I)));
  CHECK(!p.heads(Term::comb(Comb::W)));

  // a run that cannot close within budget leaves the pole uncertified
  Process omega = parse_process("((W (E E)) (W (E E))) * pi0");
  Pole tight({omega}, 3);
  CHECK(!tight.certified());
  CHECK(tight.member(parse_process("B * pi0")) == PoleVerdict::UnknownWithinBudget);
  // the cyclic run closes with a few more steps and certifies
  Pole loose({omega}, 50);
  CHECK(loose.certified());
  CHECK(loose.member(parse_process("B * pi0")) == PoleVerdict::InPole);
  CHECK(loose.member(omega) == PoleVerdict::InComplement);
}

TEST_CASE("names deduplicate, sort and rank their members") {
  Name e = Name::empty();
  CHECK(e.rank() == 0);
  CHECK(e.elems().empty());
  Stack pi0 = Stack::constant(0), pi1 = Stack::constant(1);
  Name n1 = Name::make({{e, pi0}, {e, pi0}});
  CHECK(n1 == Name::make({{e, pi0}}));
  CHECK(n1.rank() == 1);
  CHECK(n1.contains(e, pi0));
  CHECK(!n1.contains(e, pi1));
  Name n2 = Name::make({{n1, pi1}, {e, pi0}});
  CHECK(n2.rank() == 2);
  CHECK(n2.members().size() == 2);
  // member list order does not matter
  CHECK(n2 == Name::make({{e, pi0}, {n1, pi1}}));
  CHECK(name_cmp(e, n1) != 0);
  CHECK(to_string(n2).find("set") != std::string::npos);
}

TEST_CASE("ground constructions follow the tagging discipline") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Name e = Name::empty();
  Name s1 = successor_name(e, u);
  CHECK(s1 == gimel_name({e}, u));
  CHECK(s1.rank() == 1);
  for (const Stack& st : u.stacks()) CHECK(s1.contains(e, st));
  CHECK(nat_name(0, u) == e);
  CHECK(nat_name(2, u) == successor_name(successor_name(e, u), u));
  for (unsigned n = 0; n <= 3; ++n) {
    CHECK(name_nat_value(nat_name(n, u), u) == n);
  }
  CHECK(!name_nat_value(gimel_name({e, nat_name(1, u)}, u), u).has_value());

  Name nt = ntilde_name(2, u);
  for (unsigned n = 0; n <= 2; ++n) {
    for (const Stack& st : u.stacks()) {
      CHECK(nt.contains(nat_name(n, u), Stack::push(numeral(n), st)));
    }
  }
  CHECK(!nt.contains(nat_name(3, u), Stack::push(numeral(3), u.stacks()[0])));

  // Kuratowski pairs separate components up to the universe tagging
  Name a = nat_name(1, u), b = nat_name(2, u);
  CHECK(kuratowski_pair(a, b, u) == kuratowski_pair(a, b, u));
  CHECK(kuratowski_pair(a, b, u) != kuratowski_pair(b, a, u));
  CHECK(kuratowski_pair(a, a, u) != kuratowski_pair(a, b, u));
}

TEST_CASE("set terms evaluate through the ground-model table") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Pole pole({parse_process("K * K . pi1")}, 100);
  REQUIRE(pole.certified());
  TruthQuery q{u, pole, {}, {}, {}, 3};
  q.individuals.insert_or_assign("a", nat_name(1, u));

  CHECK(eval_set_term(parse_set_term("(s 0)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(add 1 2)"), q) == nat_name(3, u));
  CHECK(eval_set_term(parse_set_term("(mul 2 3)"), q) == nat_name(6, u));
  CHECK(eval_set_term(parse_set_term("(lt 1 2)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(lt 2 1)"), q) == nat_name(0, u));
  CHECK(eval_set_term(parse_set_term("(band 1 1)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(bor 0 1)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(bnot 0)"), q) == nat_name(1, u));
  // non-integers count as 0
  CHECK(eval_set_term(parse_set_term("(add (gimel 1) 2)"), q) == nat_name(2, u));
  CHECK(eval_set_term(parse_set_term("(ntilde)"), q) == ntilde_name(3, u));
  CHECK(eval_set_term(parse_set_term("(pair a a)"), q) ==
        kuratowski_pair(nat_name(1, u), nat_name(1, u), u));
  // chi is the membership indicator
  CHECK(eval_set_term(parse_set_term("(chi (gimel 1) 1)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(chi (gimel 1) 2)"), q) == nat_name(0, u));
  CHECK_THROWS_AS(eval_set_term(parse_set_term("zzz"), q), SemanticsError);

  // delta reads the pole: K heads the complement, W never does
  CHECK(eval_set_term(parse_set_term("(delta 4)"), q) == nat_name(1, u));
  CHECK(eval_set_term(parse_set_term("(delta 5)"), q) == nat_name(0, u));
  CHECK(delta(BigNat(4), pole, 100) == Tri::Yes);
  CHECK(delta(BigNat(5), pole, 100) == Tri::No);
  Pole open({parse_process("((W (E E)) (W (E E))) * pi0")}, 2);
  CHECK(delta(BigNat(4), open, 2) == Tri::Unknown);
  TruthQuery qo{u, open, {}, {}, {}, 3};
  CHECK_THROWS_AS(eval_set_term(parse_set_term("(delta 4)"), qo), SemanticsError);
}

TEST_CASE("truth-value membership follows the core clauses") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Pole pole({parse_process("K * K . pi1")}, 100);
  TruthQuery q = base_query(u, pole);
  Stack pi0 = Stack::constant(0);

  CHECK(norm_member(pi0, Formula::bottom(), q) == Tri::Yes);
  CHECK(norm_member(pi0, Formula::top(), q) == Tri::No);
  CHECK(norm_member(pi0, Formula::prop("A"), q) == Tri::Yes);
  CHECK(norm_member(Stack::constant(1), Formula::prop("A"), q) == Tri::No);
  CHECK_THROWS_AS(norm_member(pi0, Formula::prop("Z"), q), SemanticsError);

  // strong membership reads tags directly
  Formula aeps = Formula::rel(RelOp::NotEps, SetTerm::var("c"), SetTerm::var("a"));
  CHECK(norm_member(pi0, aeps, q) == Tri::Yes);  // a = {(c=empty, pi0)}
  CHECK(norm_member(Stack::constant(1), aeps, q) == Tri::No);

  // an implication stack needs a realizing top and a member rest
  Formula imp = Formula::implies(Formula::prop("A"), Formula::bottom());
  Stack s = Stack::push(Term::comb(Comb::W), pi0);
  // W * pi0 and W * pi<mid> are not in the complement, so W realizes A
  CHECK(norm_member(s, imp, q) == Tri::Yes);
  CHECK(norm_member(pi0, imp, q) == Tri::No);

  // pair formulas are rejected at the gate
  CHECK_THROWS_AS(norm_member(pi0, Formula::iff(Formula::prop("A"), Formula::prop("A")), q),
                  SemanticsError);

  // an uncertified pole surfaces as Unknown, never as a guess
  Pole open({parse_process("((W (E E)) (W (E E))) * pi0")}, 2);
  TruthQuery qo = base_query(u, open);
  CHECK(norm_member(s, imp, qo) == Tri::Unknown);
}

TEST_CASE("integer-relativized quantification keys on numeral tops") {
  StackUniverse u = StackUniverse::generate({1, 3, 1});
  Pole pole({parse_process("K * K . pi0")}, 100);
  TruthQuery q{u, pole, {}, {}, {}, 4};
  Name e = Name::empty();
  q.individuals.insert_or_assign("E", Name::make({{e, Stack::constant(0)}}));

  // ||forall-ent n (n eps-bar E)|| = { 0-numeral . pi0 } within this universe
  Formula f = Formula::forall_ent("n", Formula::rel(RelOp::NotEps, SetTerm::var("n"),
                                                    SetTerm::var("E")));
  CHECK(norm_member(Stack::push(numeral(0), Stack::constant(0)), f, q) == Tri::Yes);
  CHECK(norm_member(Stack::push(parse_term("(K K)"), Stack::constant(0)), f, q) == Tri::No);
  CHECK(norm_member(Stack::constant(0), f, q) == Tri::No);
}

TEST_CASE("norm_member agrees with the brute-force oracle on random formulas") {
  rzt::Rng rng(501);
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Pole pole({parse_process("K * K . pi1"), parse_process("(I W) * pi0")}, 200);
  REQUIRE(pole.certified());
  TruthQuery q = base_query(u, pole);
  Oracle oracle{q};
  OEnv env(q.individuals.begin(), q.individuals.end());

  unsigned fresh = 0;
  for (int i = 0; i < 120; ++i) {
    Formula f = gen_formula(rng, 3, {"a", "b", "c"}, &fresh);
    StackSet want = oracle.norm(f, env);
    for (const Stack& s : u.stacks()) {
      Tri got = norm_member(s, f, q);
      REQUIRE(got != Tri::Unknown);
      CHECK((got == Tri::Yes) == (want.count(s) > 0));
    }
  }
}

TEST_CASE("realizability verdicts are exact under certified poles") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Pole pole({parse_process("K * K . pi1")}, 100);
  TruthQuery q = base_query(u, pole);

  // the identity realizes A -> A
  Formula imp = Formula::implies(Formula::prop("A"), Formula::prop("A"));
  CHECK(realizes_tri(Term::comb(Comb::I), imp, q) == Tri::Yes);
  CHECK(!realizes(Term::comb(Comb::I), imp, q).refuted);

  // K heads its own pole complement, so it cannot realize bottom
  Pole kpole({parse_process("K * pi0")}, 100);
  TruthQuery qk = base_query(u, kpole);
  CHECK(realizes_tri(Term::comb(Comb::K), Formula::bottom(), qk) == Tri::No);
  RealizeResult r = realizes(Term::comb(Comb::K), Formula::bottom(), qk);
  CHECK(r.refuted);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == Stack::constant(0));

  // a pair formula is refuted when either component is
  Formula pairf = Formula::iff(Formula::bottom(), Formula::prop("A"));
  CHECK(realizes(Term::comb(Comb::K), pairf, qk).refuted);
}

TEST_CASE("checked derivations survive the refutation smoke") {
  StackUniverse u = StackUniverse::generate({1, 2, 2});
  Pole pole({parse_process("K * K . pi1")}, 100);
  TruthQuery q = base_query(u, pole);

  Formula A = Formula::prop("A");
  Derivation id = Derivation::lam("u", A, Derivation::hyp("u", A), Formula::implies(A, A));
  SmokeReport rep = extract_and_smoke(id, {}, q);
  CHECK(rep.program == Term::comb(Comb::I));
  CHECK(!rep.any_refuted);
  REQUIRE(rep.outcomes.size() == 1);
  CHECK(!rep.outcomes[0].refuted);

  Formula B = Formula::prop("B");
  Formula peirce_f = Formula::implies(Formula::implies(Formula::implies(A, B), A), A);
  q.valuation["B"] = {u.stacks()[1]};
  SmokeReport pr = extract_and_smoke(Derivation::peirce(peirce_f), {}, q);
  CHECK(pr.program == Term::comb(Comb::Cc));
  CHECK(!pr.any_refuted);

  // K against bottom under a pole K itself heads: a refutation, by design
  Pole kpole({parse_process("K * pi0")}, 100);
  TruthQuery qk = base_query(u, kpole);
  Context ctx{{"h", Formula::bottom()}};
  // the extraction is open, which propagates as CheckError
  CHECK_THROWS_AS(extract_and_smoke(Derivation::hyp("h", Formula::bottom()), ctx, qk),
                  CheckError);
  Derivation kb = Derivation::lam(
      "h", Formula::bottom(),
      Derivation::lam("g", A, Derivation::hyp("h", Formula::bottom()),
                      Formula::implies(A, Formula::bottom())),
      Formula::implies(Formula::bottom(), Formula::implies(A, Formula::bottom())));
  // extracts (E)K, which starts K * K . pi ... inside the K-headed pole
  SmokeReport kr = extract_and_smoke(kb, {}, qk);
  CHECK(kr.program == parse_term("(E K)"));
}

TEST_CASE("query files drive the full pipeline") {
  QueryReport rep = run_query_text(
      "(query (universe 1 1 2)"
      " (pole 10 (K * pi0))"
      " (let a (set))"
      " (atom A pi0)"
      " (norm bot pi0)"
      " (norm (prop A) pi1)"
      " (realize bot K)"
      " (realize (subseteq a a) I))");
  CHECK(rep.pole_certified);
  CHECK(rep.fingerprint.find("1") != std::string::npos);
  REQUIRE(rep.outcomes.size() == 4);
  CHECK(rep.outcomes[0].kind == "norm");
  CHECK(rep.outcomes[0].verdict == Tri::Yes);
  CHECK(rep.outcomes[1].verdict == Tri::No);
  CHECK(rep.outcomes[2].kind == "realize");
  CHECK(rep.outcomes[2].verdict == Tri::No);
  REQUIRE(rep.outcomes[2].witness.has_value());
  CHECK(*rep.outcomes[2].witness == Stack::constant(0));
  CHECK(rep.outcomes[3].verdict == Tri::Yes);

  // sections are last-wins
  QueryReport swapped = run_query_text(
      "(query (universe 1 1 2) (pole 10 (K * pi0)) (pole 10 (I * pi0))"
      " (realize bot K))");
  CHECK(swapped.outcomes[0].verdict != Tri::No);

  CHECK_THROWS_AS(run_query_text("(query (norm bot pi0))"), ParseError);
  CHECK_THROWS_AS(run_query_text("(bogus)"), ParseError);
}
