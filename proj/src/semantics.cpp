#include "rz/semantics.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reader.hpp"
#include "rz/cterm.hpp"
#include "rz/errors.hpp"
#include "sexpr.hpp"

namespace rz {

namespace {

int elem_cmp(const Name::Elem& a, const Name::Elem& b) {
  if (int c = Name::cmp(a.first, b.first)) return c;
  return stack_cmp(a.second, b.second);
}

bool proc_less(const Process& a, const Process& b) {
  if (int c = term_cmp(a.head, b.head)) return c < 0;
  return stack_cmp(a.stack, b.stack) < 0;
}

}  // namespace

struct Name::Node {
  std::vector<Elem> elems;
  unsigned rank = 0;
};

Name Name::empty() {
  static const Name kEmpty{std::make_shared<const Node>()};
  return kEmpty;
}

Name Name::make(std::vector<Elem> elems) {
  std::sort(elems.begin(), elems.end(),
            [](const Elem& a, const Elem& b) { return elem_cmp(a, b) < 0; });
  elems.erase(std::unique(elems.begin(), elems.end(),
                          [](const Elem& a, const Elem& b) { return elem_cmp(a, b) == 0; }),
              elems.end());
  auto node = std::make_shared<Node>();
  unsigned r = 0;
  for (const Elem& e : elems) r = std::max(r, e.first.rank() + 1);
  node->elems = std::move(elems);
  node->rank = r;
  return Name{std::move(node)};
}

const std::vector<Name::Elem>& Name::elems() const { return p_->elems; }

unsigned Name::rank() const { return p_->rank; }

bool Name::contains(const Name& member, const Stack& tag) const {
  for (const Elem& e : p_->elems) {
    if (cmp(e.first, member) == 0 && e.second == tag) return true;
  }
  return false;
}

std::vector<Name> Name::members() const {
  // elems are sorted by member first, so equal members are consecutive
  std::vector<Name> out;
  for (const Elem& e : p_->elems) {
    if (out.empty() || cmp(out.back(), e.first) != 0) out.push_back(e.first);
  }
  return out;
}

int Name::cmp(const Name& a, const Name& b) {
  if (a.p_ == b.p_) return 0;
  if (a.p_->rank != b.p_->rank) return a.p_->rank < b.p_->rank ? -1 : 1;
  const auto& x = a.p_->elems;
  const auto& y = b.p_->elems;
  std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = elem_cmp(x[i], y[i])) return c;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

int name_cmp(const Name& a, const Name& b) { return Name::cmp(a, b); }

unsigned rank(const Name& a) { return a.rank(); }

std::string to_string(const Name& a) {
  std::string out = "(set";
  for (const Name::Elem& e : a.elems()) {
    out += " (";
    out += to_string(e.first);
    out += " ";
    out += to_string(e.second);
    out += ")";
  }
  out += ")";
  return out;
}

StackUniverse StackUniverse::generate(const UniverseParams& p) {
  if (p.constant_count == 0) throw SemanticsError("universe needs at least one stack constant");
  constexpr std::size_t kStackCap = 200000;

  // application-only terms grouped by node count
  std::vector<std::vector<Term>> by_size(p.max_term_size + 1);
  if (p.max_term_size >= 1) {
    for (int c = 0; c < kCombCount; ++c) by_size[1].push_back(Term::comb(static_cast<Comb>(c)));
  }
  for (unsigned n = 2; n <= p.max_term_size; ++n) {
    for (unsigned i = 1; i + 1 < n; ++i) {
      for (const Term& f : by_size[i]) {
        for (const Term& a : by_size[n - 1 - i]) by_size[n].push_back(Term::app(f, a));
      }
    }
  }
  std::vector<Term> terms;
  for (const auto& group : by_size) terms.insert(terms.end(), group.begin(), group.end());

  StackUniverse u;
  u.params_ = p;
  std::vector<Stack> prev;
  for (std::uint32_t j = 0; j < p.constant_count; ++j) prev.push_back(Stack::constant(j));
  u.stacks_ = prev;
  for (unsigned d = 1; d <= p.max_depth; ++d) {
    std::vector<Stack> next;
    for (const Term& t : terms) {
      for (const Stack& s : prev) next.push_back(Stack::push(t, s));
    }
    u.stacks_.insert(u.stacks_.end(), next.begin(), next.end());
    if (u.stacks_.size() > kStackCap) {
      throw SemanticsError("universe too large: over " + std::to_string(kStackCap) + " stacks");
    }
    prev = std::move(next);
  }

  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const Stack& s : u.stacks_) mix(s.hash());
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  u.fingerprint_ = "d" + std::to_string(p.max_depth) + ".t" + std::to_string(p.max_term_size) +
                   ".c" + std::to_string(p.constant_count) + ".n" +
                   std::to_string(u.stacks_.size()) + "." + hex;
  return u;
}

bool StackUniverse::contains(const Stack& s) const {
  return std::any_of(stacks_.begin(), stacks_.end(), [&](const Stack& t) { return t == s; });
}

std::string to_string(const UniverseParams& p) {
  return "max_depth=" + std::to_string(p.max_depth) +
         " max_term_size=" + std::to_string(p.max_term_size) +
         " constant_count=" + std::to_string(p.constant_count);
}

const char* pole_verdict_name(PoleVerdict v) {
  switch (v) {
    case PoleVerdict::InComplement: return "in-complement";
    case PoleVerdict::InPole: return "in-pole";
    case PoleVerdict::UnknownWithinBudget: return "unknown-within-budget";
  }
  return "?";
}

Pole::Pole(std::vector<Process> generators, std::uint64_t budget)
    : generators_(std::move(generators)), budget_(budget), certified_(true) {
  // hash-bucketed membership while collecting; sorted vector afterwards
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<Process>> seen;
  auto add = [&seen](const Process& p) {
    auto& bucket = seen[{p.head.hash(), p.stack.hash()}];
    for (const Process& q : bucket) {
      if (q == p) return false;
    }
    bucket.push_back(p);
    return true;
  };
  for (const Process& g : generators_) {
    // a revisited state merges into a thread whose future is already
    // explored (or already marked uncertified by its owner)
    if (!add(g)) continue;
    Process cur = g;
    bool settled = false;
    for (std::uint64_t i = 0; i < budget_; ++i) {
      try {
        StepOutcome out = step(cur);
        if (out.stuck()) {
          settled = true;
          break;
        }
        cur = *out.next;
      } catch (const QuoteOverflowError&) {
        break;  // the thread outruns what we can materialize
      }
      if (!add(cur)) {
        settled = true;
        break;
      }
    }
    if (!settled) certified_ = false;
  }
  for (auto& entry : seen) {
    for (Process& p : entry.second) reachable_.push_back(std::move(p));
  }
  std::sort(reachable_.begin(), reachable_.end(), proc_less);
}

PoleVerdict Pole::member(const Process& p) const {
  auto it = std::lower_bound(reachable_.begin(), reachable_.end(), p, proc_less);
  if (it != reachable_.end() && *it == p) return PoleVerdict::InComplement;
  return certified_ ? PoleVerdict::InPole : PoleVerdict::UnknownWithinBudget;
}

bool Pole::heads(const Term& t) const {
  auto it = std::lower_bound(
      reachable_.begin(), reachable_.end(), t,
      [](const Process& p, const Term& q) { return term_cmp(p.head, q) < 0; });
  return it != reachable_.end() && term_cmp(it->head, t) == 0;
}

PoleVerdict pole_member(const Process& p, const Pole& pole) { return pole.member(p); }

Name gimel_name(const std::vector<Name>& members, const StackUniverse& u) {
  std::vector<Name::Elem> es;
  es.reserve(members.size() * u.stacks().size());
  for (const Name& m : members) {
    for (const Stack& s : u.stacks()) es.emplace_back(m, s);
  }
  return Name::make(std::move(es));
}

Name successor_name(const Name& a, const StackUniverse& u) { return gimel_name({a}, u); }

Name nat_name(unsigned n, const StackUniverse& u) {
  Name a = Name::empty();
  for (unsigned i = 0; i < n; ++i) a = successor_name(a, u);
  return a;
}

std::optional<unsigned> name_nat_value(const Name& a, const StackUniverse& u) {
  // the rank pins the only candidate value
  unsigned k = a.rank();
  if (a == nat_name(k, u)) return k;
  return std::nullopt;
}

Name ntilde_name(unsigned n_max, const StackUniverse& u) {
  std::vector<Name::Elem> es;
  for (unsigned n = 0; n <= n_max; ++n) {
    Name nn = nat_name(n, u);
    Term num = numeral(n);
    for (const Stack& s : u.stacks()) es.emplace_back(nn, Stack::push(num, s));
  }
  return Name::make(std::move(es));
}

Name kuratowski_pair(const Name& a, const Name& b, const StackUniverse& u) {
  Name sing = gimel_name({a}, u);
  Name both = gimel_name({a, b}, u);
  return gimel_name({sing, both}, u);
}

namespace {

using Env = std::map<std::string, Name>;

// arithmetic on integer names is totalized: anything else counts as 0
constexpr unsigned kIntNameCap = 4096;

unsigned int_value(const Name& a, const StackUniverse& u) {
  return name_nat_value(a, u).value_or(0);
}

Name int_name(unsigned long long v, const StackUniverse& u) {
  if (v > kIntNameCap) {
    throw SemanticsError("integer name out of range: " + std::to_string(v));
  }
  return nat_name(static_cast<unsigned>(v), u);
}

Name eval_term(const SetTerm& t, const Env& env, const TruthQuery& q) {
  const StackUniverse& u = q.universe;
  if (t.kind() == SetTerm::Kind::Var) {
    auto it = env.find(t.name());
    if (it == env.end()) throw SemanticsError("unbound variable '" + t.name() + "'");
    return it->second;
  }
  std::vector<Name> args;
  args.reserve(t.args().size());
  for (const SetTerm& a : t.args()) args.push_back(eval_term(a, env, q));
  const std::string& f = t.name();
  if (f == "0") return Name::empty();
  if (f == "s") return successor_name(args[0], u);
  if (f == "gimel") return gimel_name(args[0].members(), u);
  if (f == "chi") {
    for (const Name& m : args[0].members()) {
      if (m == args[1]) return int_name(1, u);
    }
    return int_name(0, u);
  }
  if (f == "delta") {
    Term xi = decode_term(BigNat(int_value(args[0], u)));
    if (q.pole.heads(xi)) return int_name(1, u);
    if (q.pole.certified()) return int_name(0, u);
    throw SemanticsError("delta undecided: pole run not certified within budget");
  }
  if (f == "pair") return kuratowski_pair(args[0], args[1], u);
  if (f == "band") {
    return int_name(int_value(args[0], u) == 1 && int_value(args[1], u) == 1 ? 1 : 0, u);
  }
  if (f == "bor") {
    return int_name(int_value(args[0], u) == 1 || int_value(args[1], u) == 1 ? 1 : 0, u);
  }
  if (f == "bnot") return int_name(int_value(args[0], u) == 1 ? 0 : 1, u);
  if (f == "lt") return int_name(int_value(args[0], u) < int_value(args[1], u) ? 1 : 0, u);
  if (f == "add") {
    return int_name(static_cast<unsigned long long>(int_value(args[0], u)) + int_value(args[1], u), u);
  }
  if (f == "mul") {
    return int_name(static_cast<unsigned long long>(int_value(args[0], u)) * int_value(args[1], u), u);
  }
  if (f == "ntilde") return ntilde_name(q.ent_bound, u);
  throw SemanticsError("no interpretation for symbol '" + f + "'");
}

Tri norm_core(const Stack& pi, const Formula& f, const Env& env, const TruthQuery& q);

// the realizability scan: No needs a definite escape on a definite member
// stack; Yes needs every universe stack settled safe
template <typename NormFn>
Tri realize_scan(const Term& xi, const TruthQuery& q, NormFn&& normf) {
  bool unknown = false;
  for (const Stack& s : q.universe.stacks()) {
    Tri m = normf(s);
    if (m == Tri::No) continue;
    PoleVerdict v = q.pole.member(Process{xi, s});
    if (v == PoleVerdict::InPole) continue;
    if (m == Tri::Yes && v == PoleVerdict::InComplement) return Tri::No;
    unknown = true;
  }
  return unknown ? Tri::Unknown : Tri::Yes;
}

Tri realizes_sub(const Term& xi, const Name& a, const Name& b, const TruthQuery& q);
Tri realizes_notin(const Term& xi, const Name& a, const Name& b, const TruthQuery& q);

// value-level clauses; the (max rank, min rank) pair drops lexicographically
// across the mutual recursion, so it terminates
Tri norm_sub(const Name& a, const Name& b, const Stack& s, const TruthQuery& q) {
  if (s.is_const()) return Tri::No;
  const Term& xi = s.top();
  const Stack& pi = s.rest();
  Tri acc = Tri::No;
  for (const Name::Elem& e : a.elems()) {
    if (e.second != pi) continue;
    acc = tri_or(acc, realizes_notin(xi, e.first, b, q));
    if (acc == Tri::Yes) return acc;
  }
  return acc;
}

Tri norm_notin(const Name& a, const Name& b, const Stack& s, const TruthQuery& q) {
  if (s.is_const()) return Tri::No;
  const Term& xi = s.top();
  const Stack& r = s.rest();
  if (r.is_const()) return Tri::No;
  const Term& xi2 = r.top();
  const Stack& pi = r.rest();
  Tri acc = Tri::No;
  for (const Name::Elem& e : b.elems()) {
    if (e.second != pi) continue;
    acc = tri_or(acc, tri_and(realizes_sub(xi, a, e.first, q), realizes_sub(xi2, e.first, a, q)));
    if (acc == Tri::Yes) return acc;
  }
  return acc;
}

Tri realizes_sub(const Term& xi, const Name& a, const Name& b, const TruthQuery& q) {
  return realize_scan(xi, q, [&](const Stack& s) { return norm_sub(a, b, s, q); });
}

Tri realizes_notin(const Term& xi, const Name& a, const Name& b, const TruthQuery& q) {
  return realize_scan(xi, q, [&](const Stack& s) { return norm_notin(a, b, s, q); });
}

Tri realizes_component(const Term& xi, const Formula& f, const Env& env, const TruthQuery& q) {
  return realize_scan(xi, q, [&](const Stack& s) { return norm_core(s, f, env, q); });
}

Tri norm_core(const Stack& pi, const Formula& f, const Env& env, const TruthQuery& q) {
  switch (f.kind()) {
    case Formula::Kind::Top:
      return Tri::No;
    case Formula::Kind::Bottom:
      return Tri::Yes;
    case Formula::Kind::Prop: {
      auto it = q.valuation.find(f.name());
      if (it == q.valuation.end()) {
        throw SemanticsError("no valuation for atom '" + f.name() + "'");
      }
      for (const Stack& s : it->second) {
        if (s == pi) return Tri::Yes;
      }
      return Tri::No;
    }
    case Formula::Kind::Rel: {
      Name a = eval_term(f.lhs(), env, q);
      Name b = eval_term(f.rhs(), env, q);
      switch (f.rel()) {
        case RelOp::NotEps:
          return b.contains(a, pi) ? Tri::Yes : Tri::No;
        case RelOp::Subseteq:
          return norm_sub(a, b, pi, q);
        case RelOp::NotIn:
          return norm_notin(a, b, pi, q);
      }
      return Tri::Unknown;
    }
    case Formula::Kind::Implies: {
      if (pi.is_const()) return Tri::No;
      return tri_and(realizes_component(pi.top(), f.child(0), env, q),
                     norm_core(pi.rest(), f.child(1), env, q));
    }
    case Formula::Kind::Forall: {
      Tri acc = Tri::No;
      for (const Name& a : q.pool) {
        Env inner = env;
        inner.insert_or_assign(f.name(), a);
        acc = tri_or(acc, norm_core(pi, f.child(0), inner, q));
        if (acc == Tri::Yes) return acc;
      }
      return acc;
    }
    case Formula::Kind::ForallEnt: {
      if (pi.is_const()) return Tri::No;
      auto n = numeral_value(pi.top());
      if (!n) return Tri::No;
      if (*n > kIntNameCap) {
        throw SemanticsError("numeral too deep for an integer name: " + std::to_string(*n));
      }
      Env inner = env;
      inner.insert_or_assign(f.name(), nat_name(static_cast<unsigned>(*n), q.universe));
      return norm_core(pi.rest(), f.child(0), inner, q);
    }
    case Formula::Kind::ForallGimel: {
      Tri acc = Tri::No;
      for (const SetTerm& e : f.terms()) {
        // element terms live outside the binder, so the outer env applies
        Name a = eval_term(e, env, q);
        Env inner = env;
        inner.insert_or_assign(f.name(), a);
        acc = tri_or(acc, norm_core(pi, f.child(0), inner, q));
        if (acc == Tri::Yes) return acc;
      }
      return acc;
    }
    case Formula::Kind::EqCond: {
      Name a = eval_term(f.lhs(), env, q);
      Name b = eval_term(f.rhs(), env, q);
      if (a != b) return Tri::No;
      return norm_core(pi, f.child(0), env, q);
    }
    default:
      throw SemanticsError("truth values are defined on core formulas only");
  }
}

Formula single_core(const Formula& f) {
  std::vector<Formula> comps = expand(f);
  if (comps.size() != 1) {
    throw SemanticsError("formula expands to a pair of " + std::to_string(comps.size()) +
                         " components; query each component separately");
  }
  return comps[0];
}

Env base_env(const TruthQuery& q) { return Env(q.individuals.begin(), q.individuals.end()); }

}  // namespace

Name eval_set_term(const SetTerm& t, const TruthQuery& q) {
  return eval_term(t, base_env(q), q);
}

Tri delta(const BigNat& n, const Pole& pole, std::uint64_t budget) {
  std::optional<Pole> rebuilt;
  const Pole* p = &pole;
  if (budget != pole.budget()) {
    rebuilt.emplace(pole.generators(), budget);
    p = &*rebuilt;
  }
  Term xi = decode_term(n);
  if (p->heads(xi)) return Tri::Yes;
  if (p->certified()) return Tri::No;
  return Tri::Unknown;
}

Tri norm_member(const Stack& pi, const Formula& f, const TruthQuery& q) {
  return norm_core(pi, single_core(f), base_env(q), q);
}

Tri realizes_tri(const Term& xi, const Formula& f, const TruthQuery& q) {
  Env env = base_env(q);
  Tri acc = Tri::Yes;
  for (const Formula& comp : expand(f)) {
    acc = tri_and(acc, realizes_component(xi, comp, env, q));
    if (acc == Tri::No) return acc;
  }
  return acc;
}

RealizeResult realizes(const Term& xi, const Formula& f, const TruthQuery& q) {
  Env env = base_env(q);
  for (const Formula& comp : expand(f)) {
    for (const Stack& s : q.universe.stacks()) {
      if (norm_core(s, comp, env, q) != Tri::Yes) continue;
      if (q.pole.member(Process{xi, s}) == PoleVerdict::InComplement) {
        return RealizeResult{true, s};
      }
    }
  }
  return RealizeResult{};
}

SmokeReport extract_and_smoke(const Derivation& d, const Context& context, const TruthQuery& q) {
  CTerm ext = check(d, context);
  Term prog = [&ext] {
    try {
      return to_term(ext);
    } catch (const std::invalid_argument& e) {
      throw CheckError(std::string("open extraction: ") + e.what());
    }
  }();
  SmokeReport rep{std::move(ext), prog, {}, false};
  Env env = base_env(q);
  for (const Formula& comp : expand(d.concl())) {
    SmokeOutcome out{comp, false, std::nullopt};
    for (const Stack& s : q.universe.stacks()) {
      if (norm_core(s, comp, env, q) != Tri::Yes) continue;
      if (q.pole.member(Process{prog, s}) == PoleVerdict::InComplement) {
        out.refuted = true;
        out.witness = s;
        break;
      }
    }
    rep.any_refuted = rep.any_refuted || out.refuted;
    rep.outcomes.push_back(std::move(out));
  }
  return rep;
}

namespace {

std::string node_text(const sx::Node& n) {
  if (n.is_atom) return n.atom;
  std::string out = "(";
  bool first = true;
  for (const sx::Node& k : n.items) {
    if (!first) out += " ";
    out += node_text(k);
    first = false;
  }
  out += ")";
  return out;
}

std::string join_items(const std::vector<sx::Node>& items, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < items.size(); ++i) {
    if (!out.empty()) out += " ";
    out += node_text(items[i]);
  }
  return out;
}

unsigned long parse_natural(const sx::Node& n, const char* what) {
  if (!n.is_atom || n.atom.empty() ||
      !std::all_of(n.atom.begin(), n.atom.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw ParseError(std::string("expected a natural number for ") + what + " at offset " +
                     std::to_string(n.offset));
  }
  if (n.atom.size() > 12) {
    throw ParseError(std::string(what) + " too large at offset " + std::to_string(n.offset));
  }
  return std::stoul(n.atom);
}

Name name_from_node(const sx::Node& n) {
  if (n.is_atom || n.items.empty() || !n.items[0].is_atom || n.items[0].atom != "set") {
    throw ParseError("expected (set (NAME STACK) ...) at offset " + std::to_string(n.offset));
  }
  std::vector<Name::Elem> es;
  for (std::size_t i = 1; i < n.items.size(); ++i) {
    const sx::Node& e = n.items[i];
    if (e.is_atom || e.items.size() < 2) {
      throw ParseError("expected (NAME STACK) element at offset " + std::to_string(e.offset));
    }
    Name m = name_from_node(e.items[0]);
    Stack s = parse_stack(join_items(e.items, 1));
    es.emplace_back(std::move(m), std::move(s));
  }
  return Name::make(std::move(es));
}

Stack stack_from_node(const sx::Node& n) {
  return parse_stack(n.is_atom ? n.atom : join_items(n.items, 0));
}

}  // namespace

QueryReport run_query_text(std::string_view text) {
  sx::Node root = sx::parse_one(text);
  if (root.is_atom || root.items.empty() || !root.items[0].is_atom ||
      root.items[0].atom != "query") {
    throw ParseError("expected a (query ...) record at offset " + std::to_string(root.offset));
  }

  std::optional<UniverseParams> params;
  std::optional<std::uint64_t> pole_budget;
  std::vector<Process> gens;
  std::vector<Name> pool;
  std::map<std::string, std::vector<Stack>> valuation;
  std::map<std::string, Name> individuals;
  unsigned ent_bound = 4;
  struct Ask {
    bool realize = false;
    Formula formula;
    std::string subject_text;
  };
  std::vector<Ask> asks;

  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const sx::Node& sec = root.items[i];
    if (sec.is_atom || sec.items.empty() || !sec.items[0].is_atom) {
      throw ParseError("expected a (section ...) at offset " + std::to_string(sec.offset));
    }
    const std::string& head = sec.items[0].atom;
    if (head == "universe") {
      if (sec.items.size() != 4) {
        throw ParseError("universe takes DEPTH TERM-SIZE CONSTANTS at offset " +
                         std::to_string(sec.offset));
      }
      params = UniverseParams{static_cast<unsigned>(parse_natural(sec.items[1], "depth")),
                              static_cast<unsigned>(parse_natural(sec.items[2], "term size")),
                              static_cast<unsigned>(parse_natural(sec.items[3], "constant count"))};
    } else if (head == "pole") {
      if (sec.items.size() < 2) {
        throw ParseError("pole takes BUDGET then generators at offset " +
                         std::to_string(sec.offset));
      }
      pole_budget = parse_natural(sec.items[1], "budget");
      gens.clear();  // repeated sections replace, so a spliced override wins
      for (std::size_t j = 2; j < sec.items.size(); ++j) {
        const sx::Node& g = sec.items[j];
        gens.push_back(parse_process(g.is_atom ? g.atom : join_items(g.items, 0)));
      }
    } else if (head == "pool") {
      for (std::size_t j = 1; j < sec.items.size(); ++j) pool.push_back(name_from_node(sec.items[j]));
    } else if (head == "ent-bound") {
      if (sec.items.size() != 2) {
        throw ParseError("ent-bound takes one number at offset " + std::to_string(sec.offset));
      }
      ent_bound = static_cast<unsigned>(parse_natural(sec.items[1], "ent-bound"));
    } else if (head == "let") {
      if (sec.items.size() != 3 || !sec.items[1].is_atom ||
          !detail::valid_var_name(sec.items[1].atom)) {
        throw ParseError("expected (let x NAME) at offset " + std::to_string(sec.offset));
      }
      individuals.insert_or_assign(sec.items[1].atom, name_from_node(sec.items[2]));
    } else if (head == "atom") {
      if (sec.items.size() < 2 || !sec.items[1].is_atom) {
        throw ParseError("expected (atom A STACK ...) at offset " + std::to_string(sec.offset));
      }
      std::vector<Stack>& v = valuation[sec.items[1].atom];
      for (std::size_t j = 2; j < sec.items.size(); ++j) v.push_back(stack_from_node(sec.items[j]));
    } else if (head == "norm" || head == "realize") {
      if (sec.items.size() < 3) {
        throw ParseError("expected (" + head + " F SUBJECT) at offset " +
                         std::to_string(sec.offset));
      }
      asks.push_back(Ask{head == "realize", detail::formula_from_node(sec.items[1]),
                         join_items(sec.items, 2)});
    } else {
      throw ParseError("unknown query section '" + head + "' at offset " +
                       std::to_string(sec.offset));
    }
  }

  if (!params || !pole_budget) {
    throw ParseError("query needs a (universe ...) and a (pole ...) section");
  }

  TruthQuery q{StackUniverse::generate(*params), Pole(std::move(gens), *pole_budget),
               std::move(pool), std::move(valuation), std::move(individuals), ent_bound};

  QueryReport rep{q.universe.fingerprint(), q.pole.certified(), {}};
  for (const Ask& ask : asks) {
    if (ask.realize) {
      Term t = parse_term(ask.subject_text);
      Tri v = realizes_tri(t, ask.formula, q);
      RealizeResult rr = realizes(t, ask.formula, q);
      rep.outcomes.push_back(QueryOutcome{"realize", to_string(ask.formula), to_string(t), v,
                                          rr.witness});
    } else {
      Stack s = parse_stack(ask.subject_text);
      Tri v = norm_member(s, ask.formula, q);
      rep.outcomes.push_back(QueryOutcome{"norm", to_string(ask.formula), to_string(s), v,
                                          std::nullopt});
    }
  }
  return rep;
}

}  // namespace rz
