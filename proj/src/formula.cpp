#include "rz/formula.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "reader.hpp"

namespace rz {

namespace {

struct SigEntry {
  const char* name;
  int arity;
};

// invariant: symbol names never collide with variable names (vars reject them)
constexpr SigEntry kSignature[] = {
    {"0", 0},    {"s", 1},    {"gimel", 1}, {"chi", 2},  {"delta", 1},
    {"pair", 2}, {"band", 2}, {"bor", 2},   {"bnot", 1}, {"lt", 2},
    {"add", 2},  {"mul", 2},  {"ntilde", 0},
};

}  // namespace

bool detail::valid_var_name(std::string_view n) {
  if (n.empty()) return false;
  char c = n[0];
  if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')) return false;
  for (char ch : n) {
    bool ok = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
              (ch >= '0' && ch <= '9') || ch == '_' || ch == '\'';
    if (!ok) return false;
  }
  return signature_arity(n) < 0;
}

namespace {

using detail::valid_var_name;

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  if (!avoid.count(base)) return base;
  for (unsigned i = 0;; ++i) {
    std::string cand = base + std::to_string(i);
    if (!avoid.count(cand)) return cand;
  }
}

}  // namespace

int signature_arity(std::string_view symbol) {
  for (const auto& e : kSignature) {
    if (symbol == e.name) return e.arity;
  }
  return -1;
}

SetTerm SetTerm::var(std::string name) {
  if (!valid_var_name(name)) throw std::invalid_argument("bad variable name '" + name + "'");
  SetTerm t;
  t.kind_ = Kind::Var;
  t.name_ = std::move(name);
  return t;
}

SetTerm SetTerm::fun(std::string symbol, std::vector<SetTerm> args) {
  int a = signature_arity(symbol);
  if (a < 0) throw std::invalid_argument("unknown function symbol '" + symbol + "'");
  if (static_cast<std::size_t>(a) != args.size()) {
    throw std::invalid_argument("symbol '" + symbol + "' takes " + std::to_string(a) +
                                " arguments, got " + std::to_string(args.size()));
  }
  SetTerm t;
  t.kind_ = Kind::Fun;
  t.name_ = std::move(symbol);
  t.args_ = std::move(args);
  return t;
}

bool SetTerm::operator==(const SetTerm& o) const {
  if (kind_ != o.kind_ || name_ != o.name_ || args_.size() != o.args_.size()) return false;
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (!(args_[i] == o.args_[i])) return false;
  }
  return true;
}

SetTerm st_num(unsigned n) {
  SetTerm t = SetTerm::fun("0", {});
  for (unsigned i = 0; i < n; ++i) t = SetTerm::fun("s", {t});
  return t;
}

std::optional<unsigned> st_num_value(const SetTerm& t) {
  const SetTerm* cur = &t;
  unsigned n = 0;
  while (cur->kind() == SetTerm::Kind::Fun && cur->name() == "s") {
    ++n;
    cur = &cur->args()[0];
  }
  if (cur->kind() == SetTerm::Kind::Fun && cur->name() == "0") return n;
  return std::nullopt;
}

std::set<std::string> vars(const SetTerm& t) {
  std::set<std::string> out;
  if (t.kind() == SetTerm::Kind::Var) {
    out.insert(t.name());
    return out;
  }
  for (const auto& a : t.args()) {
    auto sub = vars(a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

SetTerm subst(const SetTerm& t, std::string_view x, const SetTerm& value) {
  if (t.kind() == SetTerm::Kind::Var) return t.name() == x ? value : t;
  std::vector<SetTerm> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(subst(a, x, value));
  return SetTerm::fun(t.name(), std::move(args));
}

std::string to_string(const SetTerm& t) {
  if (auto n = st_num_value(t)) return std::to_string(*n);
  if (t.kind() == SetTerm::Kind::Var) return t.name();
  if (t.args().empty()) return t.name();
  std::string out = "(" + t.name();
  for (const auto& a : t.args()) {
    out += ' ';
    out += to_string(a);
  }
  out += ')';
  return out;
}

SetTerm detail::set_term_from_node(const sx::Node& n) {
  if (n.is_atom) {
    const std::string& a = n.atom;
    if (a.empty()) throw ParseError("empty atom at offset " + std::to_string(n.offset));
    if (std::all_of(a.begin(), a.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      unsigned long v = 0;
      for (char c : a) {
        v = v * 10 + static_cast<unsigned long>(c - '0');
        if (v > 1000000) throw ParseError("numeral too large at offset " + std::to_string(n.offset));
      }
      return st_num(static_cast<unsigned>(v));
    }
    int ar = signature_arity(a);
    if (ar == 0) return SetTerm::fun(a, {});
    if (ar > 0) {
      throw ParseError("function symbol '" + a + "' needs arguments at offset " +
                       std::to_string(n.offset));
    }
    if (!valid_var_name(a)) {
      throw ParseError("bad variable '" + a + "' at offset " + std::to_string(n.offset));
    }
    return SetTerm::var(a);
  }
  if (n.items.empty() || !n.items[0].is_atom) {
    throw ParseError("expected a function symbol at offset " + std::to_string(n.offset));
  }
  const std::string& sym = n.items[0].atom;
  int ar = signature_arity(sym);
  if (ar < 0) throw ParseError("unknown function symbol '" + sym + "' at offset " +
                               std::to_string(n.items[0].offset));
  if (static_cast<std::size_t>(ar) + 1 != n.items.size()) {
    throw ParseError("symbol '" + sym + "' takes " + std::to_string(ar) +
                     " arguments at offset " + std::to_string(n.offset));
  }
  std::vector<SetTerm> args;
  for (std::size_t i = 1; i < n.items.size(); ++i) args.push_back(set_term_from_node(n.items[i]));
  return SetTerm::fun(sym, std::move(args));
}

namespace {
using detail::set_term_from_node;
}  // namespace

SetTerm parse_set_term(std::string_view text) { return detail::set_term_from_node(sx::parse_one(text)); }

const char* rel_name(RelOp r) {
  switch (r) {
    case RelOp::NotEps: return "not-eps";
    case RelOp::NotIn: return "not-in";
    default: return "subseteq";
  }
}

struct Formula::Node {
  Kind k = Kind::Top;
  std::string name;  // Prop name or binder
  RelOp r = RelOp::NotEps;
  std::vector<SetTerm> terms;
  std::vector<Formula> kids;
  bool core_all = false;
};

namespace {

using FK = Formula::Kind;

bool is_core_kind(FK k) {
  switch (k) {
    case FK::Top:
    case FK::Bottom:
    case FK::Prop:
    case FK::Rel:
    case FK::Implies:
    case FK::Forall:
    case FK::ForallEnt:
    case FK::ForallGimel:
    case FK::EqCond:
      return true;
    default:
      return false;
  }
}

bool is_binder_kind(FK k) {
  switch (k) {
    case FK::Forall:
    case FK::ForallEnt:
    case FK::ForallGimel:
    case FK::Exists:
    case FK::ForallEps:
    case FK::ExistsEps:
      return true;
    default:
      return false;
  }
}

}  // namespace

Formula Formula::make(Kind k, std::string name, RelOp r, std::vector<SetTerm> terms,
                      std::vector<Formula> kids) {
  auto node = std::make_shared<Node>();
  node->k = k;
  node->name = std::move(name);
  node->r = r;
  node->terms = std::move(terms);
  node->kids = std::move(kids);
  bool core = is_core_kind(k);
  for (const auto& kid : node->kids) core = core && kid.is_core();
  node->core_all = core;
  return Formula(std::shared_ptr<const Node>(std::move(node)));
}

Formula Formula::top() { return make(FK::Top, "", RelOp::NotEps, {}, {}); }
Formula Formula::bottom() { return make(FK::Bottom, "", RelOp::NotEps, {}, {}); }

Formula Formula::prop(std::string name) {
  if (!valid_var_name(name)) throw std::invalid_argument("bad atom name '" + name + "'");
  return make(FK::Prop, std::move(name), RelOp::NotEps, {}, {});
}

Formula Formula::rel(RelOp r, SetTerm lhs, SetTerm rhs) {
  return make(FK::Rel, "", r, {std::move(lhs), std::move(rhs)}, {});
}

Formula Formula::implies(Formula a, Formula b) {
  return make(FK::Implies, "", RelOp::NotEps, {}, {std::move(a), std::move(b)});
}

Formula Formula::implies_chain(std::vector<Formula> antecedents, Formula b) {
  for (auto it = antecedents.rbegin(); it != antecedents.rend(); ++it) {
    b = implies(*it, std::move(b));
  }
  return b;
}

namespace {
void check_binder(const std::string& var) {
  if (!valid_var_name(var)) throw std::invalid_argument("bad binder name '" + var + "'");
}
}  // namespace

Formula Formula::forall(std::string var, Formula body) {
  check_binder(var);
  return make(FK::Forall, std::move(var), RelOp::NotEps, {}, {std::move(body)});
}

Formula Formula::forall_ent(std::string var, Formula body) {
  check_binder(var);
  return make(FK::ForallEnt, std::move(var), RelOp::NotEps, {}, {std::move(body)});
}

Formula Formula::forall_gimel(std::string var, std::vector<SetTerm> elems, Formula body) {
  check_binder(var);
  return make(FK::ForallGimel, std::move(var), RelOp::NotEps, std::move(elems),
                   {std::move(body)});
}

Formula Formula::eq_cond(SetTerm t, SetTerm u, Formula body) {
  return make(FK::EqCond, "", RelOp::NotEps, {std::move(t), std::move(u)},
                   {std::move(body)});
}

Formula Formula::negate(Formula a) {
  return make(FK::Not, "", RelOp::NotEps, {}, {std::move(a)});
}
Formula Formula::conj(Formula a, Formula b) {
  return make(FK::And, "", RelOp::NotEps, {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make(FK::Or, "", RelOp::NotEps, {}, {std::move(a), std::move(b)});
}

Formula Formula::exists(std::string var, std::vector<Formula> body) {
  check_binder(var);
  if (body.empty()) throw std::invalid_argument("exists needs at least one formula");
  return make(FK::Exists, std::move(var), RelOp::NotEps, {}, std::move(body));
}

Formula Formula::forall_eps(std::string var, SetTerm bound, Formula body) {
  check_binder(var);
  return make(FK::ForallEps, std::move(var), RelOp::NotEps, {std::move(bound)},
                   {std::move(body)});
}

Formula Formula::exists_eps(std::string var, SetTerm bound, std::vector<Formula> body) {
  check_binder(var);
  if (body.empty()) throw std::invalid_argument("exists needs at least one formula");
  return make(FK::ExistsEps, std::move(var), RelOp::NotEps, {std::move(bound)},
                   std::move(body));
}

Formula Formula::iff(Formula a, Formula b) {
  return make(FK::Iff, "", RelOp::NotEps, {}, {std::move(a), std::move(b)});
}
Formula Formula::simeq(SetTerm t, SetTerm u) {
  return make(FK::Simeq, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::sim(SetTerm t, SetTerm u) {
  return make(FK::Sim, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::ssub(SetTerm t, SetTerm u) {
  return make(FK::Ssub, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::eps(SetTerm t, SetTerm u) {
  return make(FK::Eps, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::in(SetTerm t, SetTerm u) {
  return make(FK::In, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::eq(SetTerm t, SetTerm u) {
  return make(FK::Eq, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::neq(SetTerm t, SetTerm u) {
  return make(FK::Neq, "", RelOp::NotEps, {std::move(t), std::move(u)}, {});
}
Formula Formula::int_of(SetTerm t) {
  return make(FK::IntOf, "", RelOp::NotEps, {std::move(t)}, {});
}

Formula::Kind Formula::kind() const { return p_->k; }
const std::string& Formula::name() const { return p_->name; }
RelOp Formula::rel() const { return p_->r; }
const SetTerm& Formula::lhs() const { return p_->terms[0]; }
const SetTerm& Formula::rhs() const { return p_->terms[1]; }
const std::vector<SetTerm>& Formula::terms() const { return p_->terms; }
const std::vector<Formula>& Formula::kids() const { return p_->kids; }
const Formula& Formula::child(std::size_t i) const { return p_->kids[i]; }
bool Formula::is_core() const { return p_->core_all; }

bool Formula::operator==(const Formula& o) const {
  if (p_ == o.p_) return true;
  if (p_->k != o.p_->k || p_->name != o.p_->name || p_->r != o.p_->r) return false;
  if (p_->terms.size() != o.p_->terms.size() || p_->kids.size() != o.p_->kids.size()) return false;
  for (std::size_t i = 0; i < p_->terms.size(); ++i) {
    if (!(p_->terms[i] == o.p_->terms[i])) return false;
  }
  for (std::size_t i = 0; i < p_->kids.size(); ++i) {
    if (!(p_->kids[i] == o.p_->kids[i])) return false;
  }
  return true;
}

std::vector<Formula> expand(const Formula& f) {
  using K = FK;
  auto expand_all = [](const std::vector<Formula>& fs) {
    std::vector<Formula> out;
    for (const auto& g : fs) {
      auto sub = expand(g);
      out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
  };
  switch (f.kind()) {
    case K::Top:
    case K::Bottom:
    case K::Prop:
    case K::Rel:
      return {f};
    case K::Implies: {
      auto la = expand(f.child(0));
      auto lb = expand(f.child(1));
      std::vector<Formula> out;
      out.reserve(lb.size());
      for (auto& b : lb) out.push_back(Formula::implies_chain(la, b));
      return out;
    }
    case K::Forall: {
      std::vector<Formula> out;
      for (auto& g : expand(f.child(0))) out.push_back(Formula::forall(f.name(), g));
      return out;
    }
    case K::ForallEnt: {
      std::vector<Formula> out;
      for (auto& g : expand(f.child(0))) out.push_back(Formula::forall_ent(f.name(), g));
      return out;
    }
    case K::ForallGimel: {
      std::vector<Formula> out;
      for (auto& g : expand(f.child(0))) {
        out.push_back(Formula::forall_gimel(f.name(), f.terms(), g));
      }
      return out;
    }
    case K::EqCond: {
      std::vector<Formula> out;
      for (auto& g : expand(f.child(0))) out.push_back(Formula::eq_cond(f.lhs(), f.rhs(), g));
      return out;
    }
    case K::Not:
      return {Formula::implies_chain(expand(f.child(0)), Formula::bottom())};
    case K::And: {
      auto la = expand(f.child(0));
      auto lb = expand(f.child(1));
      la.insert(la.end(), lb.begin(), lb.end());
      return {Formula::implies(Formula::implies_chain(std::move(la), Formula::bottom()),
                               Formula::bottom())};
    }
    case K::Or: {
      Formula na = Formula::implies_chain(expand(f.child(0)), Formula::bottom());
      Formula nb = Formula::implies_chain(expand(f.child(1)), Formula::bottom());
      return {Formula::implies_chain({na, nb}, Formula::bottom())};
    }
    case K::Exists: {
      auto all = expand_all(f.kids());
      return {Formula::implies(
          Formula::forall(f.name(), Formula::implies_chain(std::move(all), Formula::bottom())),
          Formula::bottom())};
    }
    case K::ForallEps: {
      Formula neg = Formula::implies_chain(expand(f.child(0)), Formula::bottom());
      return {Formula::forall(
          f.name(),
          Formula::implies(neg, Formula::rel(RelOp::NotEps, SetTerm::var(f.name()), f.lhs())))};
    }
    case K::ExistsEps: {
      auto all = expand_all(f.kids());
      Formula inner = Formula::implies_chain(
          std::move(all), Formula::rel(RelOp::NotEps, SetTerm::var(f.name()), f.lhs()));
      return {Formula::implies(Formula::forall(f.name(), inner), Formula::bottom())};
    }
    case K::Iff: {
      auto la = expand(f.child(0));
      auto lb = expand(f.child(1));
      std::vector<Formula> out;
      for (auto& b : lb) out.push_back(Formula::implies_chain(la, b));
      for (auto& a : la) out.push_back(Formula::implies_chain(lb, a));
      return out;
    }
    case K::Simeq:
      return {Formula::rel(RelOp::Subseteq, f.lhs(), f.rhs()),
              Formula::rel(RelOp::Subseteq, f.rhs(), f.lhs())};
    case K::Ssub: {
      std::set<std::string> avoid = vars(f.lhs());
      auto vr = vars(f.rhs());
      avoid.insert(vr.begin(), vr.end());
      std::string z = fresh_name("z", avoid);
      SetTerm zv = SetTerm::var(z);
      return {Formula::forall(z, Formula::implies(Formula::rel(RelOp::NotIn, zv, f.rhs()),
                                                  Formula::rel(RelOp::NotIn, zv, f.lhs())))};
    }
    case K::Sim: {
      auto a = expand(Formula::ssub(f.lhs(), f.rhs()));
      auto b = expand(Formula::ssub(f.rhs(), f.lhs()));
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case K::Eps:
      return {Formula::implies(Formula::rel(RelOp::NotEps, f.lhs(), f.rhs()), Formula::bottom())};
    case K::In:
      return {Formula::implies(Formula::rel(RelOp::NotIn, f.lhs(), f.rhs()), Formula::bottom())};
    case K::Neq:
      return {Formula::eq_cond(f.lhs(), f.rhs(), Formula::bottom())};
    case K::Eq:
      return {Formula::implies(Formula::eq_cond(f.lhs(), f.rhs(), Formula::bottom()),
                               Formula::bottom())};
    case K::IntOf: {
      std::set<std::string> avoid = vars(f.lhs());
      std::string x = fresh_name("x", avoid);
      avoid.insert(x);
      std::string y = fresh_name("y", avoid);
      SetTerm xv = SetTerm::var(x);
      SetTerm yv = SetTerm::var(y);
      Formula step = Formula::forall(
          y, Formula::implies(Formula::rel(RelOp::NotEps, SetTerm::fun("s", {yv}), xv),
                              Formula::rel(RelOp::NotEps, yv, xv)));
      Formula head = Formula::rel(RelOp::NotEps, f.lhs(), xv);
      Formula concl = Formula::rel(RelOp::NotEps, st_num(0), xv);
      return {Formula::forall(x, Formula::implies_chain({step, head}, concl))};
    }
  }
  throw std::logic_error("unreachable formula kind");
}

Formula expand_one(const Formula& f) {
  auto v = expand(f);
  if (v.size() != 1) {
    throw CheckError("formula expands to " + std::to_string(v.size()) +
                     " formulas where a single one is required: " + to_string(f));
  }
  return v[0];
}

namespace {

void fv_into(const Formula& f, std::set<std::string>& out) {
  using K = FK;
  switch (f.kind()) {
    case K::Forall:
    case K::ForallEnt:
    case K::Exists: {
      std::set<std::string> inner;
      for (const auto& kid : f.kids()) fv_into(kid, inner);
      inner.erase(f.name());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case K::ForallGimel: {
      // the element list is evaluated outside the binder's scope
      for (const auto& t : f.terms()) {
        auto v = vars(t);
        out.insert(v.begin(), v.end());
      }
      std::set<std::string> inner;
      fv_into(f.child(0), inner);
      inner.erase(f.name());
      out.insert(inner.begin(), inner.end());
      return;
    }
    case K::ForallEps:
    case K::ExistsEps: {
      // the bound term sits under the binder, matching the expansion
      std::set<std::string> inner = vars(f.lhs());
      for (const auto& kid : f.kids()) fv_into(kid, inner);
      inner.erase(f.name());
      out.insert(inner.begin(), inner.end());
      return;
    }
    default: {
      for (const auto& t : f.terms()) {
        auto v = vars(t);
        out.insert(v.begin(), v.end());
      }
      for (const auto& kid : f.kids()) fv_into(kid, out);
      return;
    }
  }
}

Formula rebuild(const Formula& f, std::string name, std::vector<SetTerm> terms,
                std::vector<Formula> kids) {
  switch (f.kind()) {
    case FK::Top:
    case FK::Bottom:
      return f;
    case FK::Prop:
      return Formula::prop(std::move(name));
    case FK::Rel:
      return Formula::rel(f.rel(), std::move(terms[0]), std::move(terms[1]));
    case FK::Implies:
      return Formula::implies(std::move(kids[0]), std::move(kids[1]));
    case FK::Forall:
      return Formula::forall(std::move(name), std::move(kids[0]));
    case FK::ForallEnt:
      return Formula::forall_ent(std::move(name), std::move(kids[0]));
    case FK::ForallGimel:
      return Formula::forall_gimel(std::move(name), std::move(terms), std::move(kids[0]));
    case FK::EqCond:
      return Formula::eq_cond(std::move(terms[0]), std::move(terms[1]), std::move(kids[0]));
    case FK::Not:
      return Formula::negate(std::move(kids[0]));
    case FK::And:
      return Formula::conj(std::move(kids[0]), std::move(kids[1]));
    case FK::Or:
      return Formula::disj(std::move(kids[0]), std::move(kids[1]));
    case FK::Exists:
      return Formula::exists(std::move(name), std::move(kids));
    case FK::ForallEps:
      return Formula::forall_eps(std::move(name), std::move(terms[0]), std::move(kids[0]));
    case FK::ExistsEps:
      return Formula::exists_eps(std::move(name), std::move(terms[0]), std::move(kids));
    case FK::Iff:
      return Formula::iff(std::move(kids[0]), std::move(kids[1]));
    case FK::Simeq:
      return Formula::simeq(std::move(terms[0]), std::move(terms[1]));
    case FK::Sim:
      return Formula::sim(std::move(terms[0]), std::move(terms[1]));
    case FK::Ssub:
      return Formula::ssub(std::move(terms[0]), std::move(terms[1]));
    case FK::Eps:
      return Formula::eps(std::move(terms[0]), std::move(terms[1]));
    case FK::In:
      return Formula::in(std::move(terms[0]), std::move(terms[1]));
    case FK::Eq:
      return Formula::eq(std::move(terms[0]), std::move(terms[1]));
    case FK::Neq:
      return Formula::neq(std::move(terms[0]), std::move(terms[1]));
    case FK::IntOf:
      return Formula::int_of(std::move(terms[0]));
  }
  throw std::logic_error("unreachable formula kind");
}

}  // namespace

std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  fv_into(f, out);
  return out;
}

Formula subst(const Formula& f, std::string_view x, const SetTerm& value) {
  auto sub_terms = [&](const std::vector<SetTerm>& ts) {
    std::vector<SetTerm> out;
    out.reserve(ts.size());
    for (const auto& t : ts) out.push_back(subst(t, x, value));
    return out;
  };
  auto sub_kids = [&](const std::vector<Formula>& ks) {
    std::vector<Formula> out;
    out.reserve(ks.size());
    for (const auto& k : ks) out.push_back(subst(k, x, value));
    return out;
  };
  if (!is_binder_kind(f.kind())) {
    return rebuild(f, f.name(), sub_terms(f.terms()), sub_kids(f.kids()));
  }

  // ForallGimel's element list is outside the binder scope and always rewritten.
  bool gimel = f.kind() == FK::ForallGimel;
  std::vector<SetTerm> outer_terms = gimel ? sub_terms(f.terms()) : f.terms();

  if (f.name() == x) {
    return rebuild(f, f.name(), gimel ? std::move(outer_terms) : f.terms(), f.kids());
  }

  std::string binder = f.name();
  std::vector<SetTerm> scope_terms = gimel ? std::move(outer_terms) : f.terms();
  std::vector<Formula> scope_kids = f.kids();

  if (vars(value).count(binder)) {
    std::set<std::string> avoid = vars(value);
    auto fvf = free_vars(f);
    avoid.insert(fvf.begin(), fvf.end());
    avoid.insert(std::string(x));
    avoid.insert(binder);
    std::string renamed = fresh_name(binder, avoid);
    SetTerm rv = SetTerm::var(renamed);
    if (!gimel) {
      std::vector<SetTerm> ts;
      ts.reserve(scope_terms.size());
      for (const auto& t : scope_terms) ts.push_back(subst(t, binder, rv));
      scope_terms = std::move(ts);
    }
    std::vector<Formula> ks;
    ks.reserve(scope_kids.size());
    for (const auto& k : scope_kids) ks.push_back(subst(k, binder, rv));
    scope_kids = std::move(ks);
    binder = renamed;
  }

  if (!gimel) {
    std::vector<SetTerm> ts;
    ts.reserve(scope_terms.size());
    for (const auto& t : scope_terms) ts.push_back(subst(t, x, value));
    scope_terms = std::move(ts);
  }
  std::vector<Formula> ks;
  ks.reserve(scope_kids.size());
  for (const auto& k : scope_kids) ks.push_back(subst(k, x, value));
  return rebuild(f, std::move(binder), std::move(scope_terms), std::move(ks));
}

namespace {

using Env = std::map<std::string, int>;

bool st_alpha(const SetTerm& a, const SetTerm& b, const Env& ea, const Env& eb) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == SetTerm::Kind::Var) {
    auto ia = ea.find(a.name());
    auto ib = eb.find(b.name());
    if (ia != ea.end()) return ib != eb.end() && ia->second == ib->second;
    return ib == eb.end() && a.name() == b.name();
  }
  if (a.name() != b.name() || a.args().size() != b.args().size()) return false;
  for (std::size_t i = 0; i < a.args().size(); ++i) {
    if (!st_alpha(a.args()[i], b.args()[i], ea, eb)) return false;
  }
  return true;
}

bool f_alpha(const Formula& a, const Formula& b, Env ea, Env eb, int depth) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == FK::Prop) return a.name() == b.name();
  if (a.kind() == FK::Rel && a.rel() != b.rel()) return false;
  if (a.terms().size() != b.terms().size() || a.kids().size() != b.kids().size()) return false;

  if (!is_binder_kind(a.kind())) {
    for (std::size_t i = 0; i < a.terms().size(); ++i) {
      if (!st_alpha(a.terms()[i], b.terms()[i], ea, eb)) return false;
    }
    for (std::size_t i = 0; i < a.kids().size(); ++i) {
      if (!f_alpha(a.kids()[i], b.kids()[i], ea, eb, depth)) return false;
    }
    return true;
  }

  // ForallGimel elements sit outside the binder scope.
  if (a.kind() == FK::ForallGimel) {
    for (std::size_t i = 0; i < a.terms().size(); ++i) {
      if (!st_alpha(a.terms()[i], b.terms()[i], ea, eb)) return false;
    }
  }
  Env ia = ea;
  Env ib = eb;
  ia[a.name()] = depth;
  ib[b.name()] = depth;
  if (a.kind() == FK::ForallEps || a.kind() == FK::ExistsEps) {
    if (!st_alpha(a.lhs(), b.lhs(), ia, ib)) return false;
  }
  for (std::size_t i = 0; i < a.kids().size(); ++i) {
    if (!f_alpha(a.kids()[i], b.kids()[i], ia, ib, depth + 1)) return false;
  }
  return true;
}

}  // namespace

bool alpha_equal(const Formula& a, const Formula& b) { return f_alpha(a, b, {}, {}, 0); }

namespace {

void print_formula(const Formula& f, std::string& out) {
  using K = FK;
  auto pt = [&](const SetTerm& t) { out += to_string(t); };
  switch (f.kind()) {
    case K::Top:
      out += "top";
      return;
    case K::Bottom:
      out += "bot";
      return;
    case K::Prop:
      out += "(prop " + f.name() + ")";
      return;
    case K::Rel:
      out += "(";
      out += rel_name(f.rel());
      out += ' ';
      pt(f.lhs());
      out += ' ';
      pt(f.rhs());
      out += ')';
      return;
    case K::Implies: {
      out += "(->";
      const Formula* cur = &f;
      while (cur->kind() == K::Implies) {
        out += ' ';
        print_formula(cur->child(0), out);
        cur = &cur->child(1);
      }
      out += ' ';
      print_formula(*cur, out);
      out += ')';
      return;
    }
    case K::Forall:
    case K::ForallEnt: {
      out += f.kind() == K::Forall ? "(all " : "(all-ent ";
      out += f.name();
      out += ' ';
      print_formula(f.child(0), out);
      out += ')';
      return;
    }
    case K::ForallGimel: {
      out += "(all-gimel " + f.name() + " (";
      for (std::size_t i = 0; i < f.terms().size(); ++i) {
        if (i) out += ' ';
        pt(f.terms()[i]);
      }
      out += ") ";
      print_formula(f.child(0), out);
      out += ')';
      return;
    }
    case K::EqCond: {
      out += "(eqc ";
      pt(f.lhs());
      out += ' ';
      pt(f.rhs());
      out += ' ';
      print_formula(f.child(0), out);
      out += ')';
      return;
    }
    case K::Not: {
      out += "(not ";
      print_formula(f.child(0), out);
      out += ')';
      return;
    }
    case K::And:
    case K::Or:
    case K::Iff: {
      out += f.kind() == K::And ? "(and " : f.kind() == K::Or ? "(or " : "(iff ";
      print_formula(f.child(0), out);
      out += ' ';
      print_formula(f.child(1), out);
      out += ')';
      return;
    }
    case K::Exists: {
      out += "(ex " + f.name();
      for (const auto& kid : f.kids()) {
        out += ' ';
        print_formula(kid, out);
      }
      out += ')';
      return;
    }
    case K::ForallEps: {
      out += "(all-eps " + f.name() + ' ';
      pt(f.lhs());
      out += ' ';
      print_formula(f.child(0), out);
      out += ')';
      return;
    }
    case K::ExistsEps: {
      out += "(ex-eps " + f.name() + ' ';
      pt(f.lhs());
      for (const auto& kid : f.kids()) {
        out += ' ';
        print_formula(kid, out);
      }
      out += ')';
      return;
    }
    case K::Simeq:
    case K::Sim:
    case K::Ssub:
    case K::Eps:
    case K::In:
    case K::Eq:
    case K::Neq: {
      const char* head = f.kind() == K::Simeq ? "simeq"
                        : f.kind() == K::Sim  ? "sim"
                        : f.kind() == K::Ssub ? "ssub"
                        : f.kind() == K::Eps  ? "eps"
                        : f.kind() == K::In   ? "in"
                        : f.kind() == K::Eq   ? "eq"
                                              : "neq";
      out += '(';
      out += head;
      out += ' ';
      pt(f.lhs());
      out += ' ';
      pt(f.rhs());
      out += ')';
      return;
    }
    case K::IntOf: {
      out += "(int ";
      pt(f.lhs());
      out += ')';
      return;
    }
  }
}

std::string binder_from(const sx::Node& n, std::size_t idx) {
  if (!n.items[idx].is_atom || !valid_var_name(n.items[idx].atom)) {
    throw ParseError("expected a binder name at offset " + std::to_string(n.items[idx].offset));
  }
  return n.items[idx].atom;
}

void need_items(const sx::Node& n, std::size_t count, const char* what) {
  if (n.items.size() != count) {
    throw ParseError(std::string(what) + " has the wrong shape at offset " +
                     std::to_string(n.offset));
  }
}

}  // namespace

Formula detail::formula_from_node(const sx::Node& n) {
  if (n.is_atom) {
    if (n.atom == "top") return Formula::top();
    if (n.atom == "bot") return Formula::bottom();
    throw ParseError("expected a formula at offset " + std::to_string(n.offset));
  }
  if (n.items.empty() || !n.items[0].is_atom) {
    throw ParseError("expected a formula head at offset " + std::to_string(n.offset));
  }
  const std::string& h = n.items[0].atom;
  auto term_at = [&](std::size_t i) { return set_term_from_node(n.items[i]); };
  auto kid_at = [&](std::size_t i) { return formula_from_node(n.items[i]); };

  if (h == "prop") {
    need_items(n, 2, "prop");
    if (!n.items[1].is_atom || !valid_var_name(n.items[1].atom)) {
      throw ParseError("prop needs a name at offset " + std::to_string(n.offset));
    }
    return Formula::prop(n.items[1].atom);
  }
  if (h == "not-eps" || h == "not-in" || h == "subseteq") {
    need_items(n, 3, h.c_str());
    RelOp r = h == "not-eps" ? RelOp::NotEps : h == "not-in" ? RelOp::NotIn : RelOp::Subseteq;
    return Formula::rel(r, term_at(1), term_at(2));
  }
  if (h == "->") {
    if (n.items.size() < 3) throw ParseError("-> needs at least two formulas at offset " +
                                             std::to_string(n.offset));
    std::vector<Formula> ants;
    for (std::size_t i = 1; i + 1 < n.items.size(); ++i) ants.push_back(kid_at(i));
    return Formula::implies_chain(std::move(ants), kid_at(n.items.size() - 1));
  }
  if (h == "all" || h == "all-ent") {
    need_items(n, 3, h.c_str());
    std::string v = binder_from(n, 1);
    return h == "all" ? Formula::forall(v, kid_at(2)) : Formula::forall_ent(v, kid_at(2));
  }
  if (h == "all-gimel") {
    need_items(n, 4, "all-gimel");
    std::string v = binder_from(n, 1);
    if (n.items[2].is_atom) {
      throw ParseError("all-gimel needs an element list at offset " +
                       std::to_string(n.items[2].offset));
    }
    std::vector<SetTerm> elems;
    for (const auto& item : n.items[2].items) elems.push_back(set_term_from_node(item));
    return Formula::forall_gimel(v, std::move(elems), kid_at(3));
  }
  if (h == "eqc") {
    need_items(n, 4, "eqc");
    return Formula::eq_cond(term_at(1), term_at(2), kid_at(3));
  }
  if (h == "not") {
    need_items(n, 2, "not");
    return Formula::negate(kid_at(1));
  }
  if (h == "and" || h == "or" || h == "iff") {
    need_items(n, 3, h.c_str());
    Formula a = kid_at(1);
    Formula b = kid_at(2);
    return h == "and" ? Formula::conj(a, b) : h == "or" ? Formula::disj(a, b) : Formula::iff(a, b);
  }
  if (h == "ex") {
    if (n.items.size() < 3) throw ParseError("ex needs a body at offset " + std::to_string(n.offset));
    std::string v = binder_from(n, 1);
    std::vector<Formula> body;
    for (std::size_t i = 2; i < n.items.size(); ++i) body.push_back(kid_at(i));
    return Formula::exists(v, std::move(body));
  }
  if (h == "all-eps") {
    need_items(n, 4, "all-eps");
    return Formula::forall_eps(binder_from(n, 1), term_at(2), kid_at(3));
  }
  if (h == "ex-eps") {
    if (n.items.size() < 4) throw ParseError("ex-eps needs a body at offset " + std::to_string(n.offset));
    std::string v = binder_from(n, 1);
    SetTerm bound = term_at(2);
    std::vector<Formula> body;
    for (std::size_t i = 3; i < n.items.size(); ++i) body.push_back(kid_at(i));
    return Formula::exists_eps(v, std::move(bound), std::move(body));
  }
  if (h == "simeq" || h == "sim" || h == "ssub" || h == "eps" || h == "in" || h == "eq" ||
      h == "neq") {
    need_items(n, 3, h.c_str());
    SetTerm t = term_at(1);
    SetTerm u = term_at(2);
    if (h == "simeq") return Formula::simeq(t, u);
    if (h == "sim") return Formula::sim(t, u);
    if (h == "ssub") return Formula::ssub(t, u);
    if (h == "eps") return Formula::eps(t, u);
    if (h == "in") return Formula::in(t, u);
    if (h == "eq") return Formula::eq(t, u);
    return Formula::neq(t, u);
  }
  if (h == "int") {
    need_items(n, 2, "int");
    return Formula::int_of(term_at(1));
  }
  throw ParseError("unknown formula head '" + h + "' at offset " + std::to_string(n.offset));
}

std::string to_string(const Formula& f) {
  std::string out;
  print_formula(f, out);
  return out;
}

Formula parse_formula(std::string_view text) { return detail::formula_from_node(sx::parse_one(text)); }

namespace {

// Universal closure over sorted parameter names, outermost first.
Formula close_params(const std::set<std::string>& params, Formula f) {
  std::vector<std::string> sorted(params.begin(), params.end());
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) f = Formula::forall(*it, f);
  return f;
}

}  // namespace

Formula axiom_extensionality_membership() {
  SetTerm x = SetTerm::var("x");
  SetTerm y = SetTerm::var("y");
  SetTerm z = SetTerm::var("z");
  return Formula::forall(
      "x", Formula::forall("y", Formula::iff(Formula::in(x, y),
                                             Formula::exists_eps("z", y, {Formula::simeq(x, z)}))));
}

Formula axiom_extensionality_inclusion() {
  SetTerm x = SetTerm::var("x");
  SetTerm y = SetTerm::var("y");
  SetTerm z = SetTerm::var("z");
  return Formula::forall(
      "x", Formula::forall("y", Formula::iff(Formula::rel(RelOp::Subseteq, x, y),
                                             Formula::forall_eps("z", x, Formula::in(z, y)))));
}

Formula axiom_foundation(const Formula& f, const std::string& x) {
  auto params = free_vars(f);
  params.erase(x);
  std::set<std::string> avoid = free_vars(f);
  avoid.insert(x);
  std::string y = fresh_name("y", avoid);
  avoid.insert(y);
  std::string a = fresh_name("a", avoid);
  Formula fy = subst(f, x, SetTerm::var(y));
  Formula fa = subst(f, x, SetTerm::var(a));
  Formula inner = Formula::forall(
      x, Formula::implies(Formula::forall_eps(y, SetTerm::var(x), fy), f));
  return close_params(params, Formula::forall(a, Formula::implies(inner, fa)));
}

Formula axiom_comprehension(const Formula& f, const std::string& x) {
  auto params = free_vars(f);
  params.erase(x);
  std::set<std::string> avoid = free_vars(f);
  avoid.insert(x);
  std::string a = fresh_name("a", avoid);
  avoid.insert(a);
  std::string b = fresh_name("b", avoid);
  SetTerm xv = SetTerm::var(x);
  Formula body = Formula::forall(
      x, Formula::iff(Formula::eps(xv, SetTerm::var(b)),
                      Formula::conj(Formula::eps(xv, SetTerm::var(a)), f)));
  return close_params(params, Formula::forall(a, Formula::exists(b, {body})));
}

Formula axiom_pairing() {
  SetTerm a = SetTerm::var("a");
  SetTerm b = SetTerm::var("b");
  SetTerm x = SetTerm::var("x");
  return Formula::forall(
      "a", Formula::forall("b", Formula::exists("x", {Formula::eps(a, x), Formula::eps(b, x)})));
}

Formula axiom_union() {
  SetTerm a = SetTerm::var("a");
  SetTerm x = SetTerm::var("x");
  SetTerm y = SetTerm::var("y");
  SetTerm b = SetTerm::var("b");
  return Formula::forall(
      "a", Formula::exists(
               "b", {Formula::forall_eps("x", a, Formula::forall_eps("y", x, Formula::eps(y, b)))}));
}

Formula axiom_power() {
  SetTerm a = SetTerm::var("a");
  SetTerm x = SetTerm::var("x");
  SetTerm y = SetTerm::var("y");
  SetTerm z = SetTerm::var("z");
  Formula inner = Formula::forall(
      "z", Formula::iff(Formula::eps(z, y), Formula::conj(Formula::eps(z, a), Formula::eps(z, x))));
  return Formula::forall(
      "a",
      Formula::exists("b", {Formula::forall("x", Formula::exists_eps("y", SetTerm::var("b"),
                                                                     {inner}))}));
}

Formula axiom_collection(const Formula& f, const std::string& x, const std::string& y) {
  auto params = free_vars(f);
  params.erase(x);
  params.erase(y);
  std::set<std::string> avoid = free_vars(f);
  avoid.insert(x);
  avoid.insert(y);
  std::string a = fresh_name("a", avoid);
  avoid.insert(a);
  std::string b = fresh_name("b", avoid);
  Formula inner =
      Formula::implies(Formula::exists(y, {f}), Formula::exists_eps(y, SetTerm::var(b), {f}));
  return close_params(
      params, Formula::forall(a, Formula::exists(b, {Formula::forall_eps(x, SetTerm::var(a),
                                                                         inner)})));
}

Formula axiom_infinity(const Formula& f, const std::string& x, const std::string& y) {
  auto params = free_vars(f);
  params.erase(x);
  params.erase(y);
  std::set<std::string> avoid = free_vars(f);
  avoid.insert(x);
  avoid.insert(y);
  std::string a = fresh_name("a", avoid);
  avoid.insert(a);
  std::string b = fresh_name("b", avoid);
  Formula inner =
      Formula::implies(Formula::exists(y, {f}), Formula::exists_eps(y, SetTerm::var(b), {f}));
  return close_params(
      params,
      Formula::forall(a, Formula::exists(b, {Formula::eps(SetTerm::var(a), SetTerm::var(b)),
                                             Formula::forall_eps(x, SetTerm::var(b), inner)})));
}

}  // namespace rz
