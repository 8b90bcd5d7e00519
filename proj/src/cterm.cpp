#include "rz/cterm.hpp"

#include <cctype>
#include <stdexcept>
#include <variant>
#include <vector>

#include "rz/errors.hpp"
#include "rz/machine.hpp"

namespace rz {

struct CVarTag {
  std::string name;
};
struct CAppTag {
  CTerm fn;
  CTerm arg;
};

struct CNode {
  std::variant<CVarTag, Comb, CAppTag, Term> v;
};

CTerm CTerm::var(std::string name) {
  return CTerm(std::make_shared<const CNode>(CNode{CVarTag{std::move(name)}}));
}
CTerm CTerm::constant(Comb c) { return CTerm(std::make_shared<const CNode>(CNode{c})); }
CTerm CTerm::app(const CTerm& fn, const CTerm& arg) {
  return CTerm(std::make_shared<const CNode>(CNode{CAppTag{fn, arg}}));
}
CTerm CTerm::lit(const Term& t) { return CTerm(std::make_shared<const CNode>(CNode{t})); }

CTerm::Kind CTerm::kind() const {
  switch (p_->v.index()) {
    case 0: return Kind::Var;
    case 1: return Kind::Const;
    case 2: return Kind::App;
    default: return Kind::Lit;
  }
}
const std::string& CTerm::name() const { return std::get<0>(p_->v).name; }
Comb CTerm::as_comb() const { return std::get<1>(p_->v); }
const CTerm& CTerm::fn() const { return std::get<2>(p_->v).fn; }
const CTerm& CTerm::arg() const { return std::get<2>(p_->v).arg; }
const Term& CTerm::literal() const { return std::get<3>(p_->v); }

bool CTerm::operator==(const CTerm& o) const {
  if (p_.get() == o.p_.get()) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Var: return name() == o.name();
    case Kind::Const: return as_comb() == o.as_comb();
    case Kind::App: return fn() == o.fn() && arg() == o.arg();
    case Kind::Lit: return literal() == o.literal();
  }
  return false;
}

bool contains_var(const CTerm& t, std::string_view x) {
  switch (t.kind()) {
    case CTerm::Kind::Var: return t.name() == x;
    case CTerm::Kind::App: return contains_var(t.fn(), x) || contains_var(t.arg(), x);
    default: return false;
  }
}

namespace {

void collect_vars(const CTerm& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case CTerm::Kind::Var:
      out.insert(t.name());
      break;
    case CTerm::Kind::App:
      collect_vars(t.fn(), out);
      collect_vars(t.arg(), out);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<std::string> free_vars(const CTerm& t) {
  std::set<std::string> out;
  collect_vars(t, out);
  return out;
}

// -- lambda terms ---------------------------------------------------------------

struct LVarTag {
  std::string name;
};
struct LAppTag {
  LambdaTerm fn;
  LambdaTerm arg;
};
struct LAbsTag {
  std::string binder;
  LambdaTerm body;
};

struct LNode {
  std::variant<LVarTag, Comb, LAppTag, LAbsTag> v;
};

LambdaTerm LambdaTerm::var(std::string name) {
  return LambdaTerm(std::make_shared<const LNode>(LNode{LVarTag{std::move(name)}}));
}
LambdaTerm LambdaTerm::constant(Comb c) {
  return LambdaTerm(std::make_shared<const LNode>(LNode{c}));
}
LambdaTerm LambdaTerm::app(const LambdaTerm& fn, const LambdaTerm& arg) {
  return LambdaTerm(std::make_shared<const LNode>(LNode{LAppTag{fn, arg}}));
}
LambdaTerm LambdaTerm::abs(std::string binder, const LambdaTerm& body) {
  return LambdaTerm(std::make_shared<const LNode>(LNode{LAbsTag{std::move(binder), body}}));
}

LambdaTerm::Kind LambdaTerm::kind() const {
  switch (p_->v.index()) {
    case 0: return Kind::Var;
    case 1: return Kind::Const;
    case 2: return Kind::App;
    default: return Kind::Abs;
  }
}
const std::string& LambdaTerm::name() const { return std::get<0>(p_->v).name; }
Comb LambdaTerm::as_comb() const { return std::get<1>(p_->v); }
const LambdaTerm& LambdaTerm::fn() const { return std::get<2>(p_->v).fn; }
const LambdaTerm& LambdaTerm::arg() const { return std::get<2>(p_->v).arg; }
const std::string& LambdaTerm::binder() const { return std::get<3>(p_->v).binder; }
const LambdaTerm& LambdaTerm::body() const { return std::get<3>(p_->v).body; }

// -- abstraction ------------------------------------------------------------------

namespace {

const CTerm& cE() {
  static const CTerm t = CTerm::constant(Comb::E);
  return t;
}

// Fuel guards against a non-terminating case analysis; the bound is far
// beyond anything a legitimate input reaches.
CTerm abstract_fuel(std::string_view x, CTerm t, std::uint64_t& fuel) {
  for (;;) {
    if (fuel-- == 0) throw std::logic_error("abstraction ran out of fuel");
    // 1. x not in t -> (K t)
    if (!contains_var(t, x)) return CTerm::app(CTerm::constant(Comb::K), t);
    // 2. t = x -> I
    if (t.kind() == CTerm::Kind::Var) return CTerm::constant(Comb::I);
    // from here t is an application containing x
    const CTerm& f = t.fn();
    const CTerm& a = t.arg();
    // 3. t = (f u), x not in u -> ((C λx(E f)) u)
    if (!contains_var(a, x)) {
      CTerm inner = abstract_fuel(x, CTerm::app(cE(), f), fuel);
      return CTerm::app(CTerm::app(CTerm::constant(Comb::C), inner), a);
    }
    if (a.kind() == CTerm::Kind::Var) {
      // 4. t = (f x), x not in f -> (E f)
      if (!contains_var(f, x)) return CTerm::app(cE(), f);
      // 5. t = (f x), x in f -> (W λx(E f))
      CTerm inner = abstract_fuel(x, CTerm::app(cE(), f), fuel);
      return CTerm::app(CTerm::constant(Comb::W), inner);
    }
    // 6. t = (f (u v)), x in (u v) -> λx (((B f) u) v)
    t = CTerm::app(CTerm::app(CTerm::app(CTerm::constant(Comb::B), f), a.fn()), a.arg());
  }
}

}  // namespace

CTerm abstract(std::string_view x, const CTerm& t) {
  std::uint64_t fuel = 100000000ull;
  return abstract_fuel(x, t, fuel);
}

CTerm compile(const LambdaTerm& l) {
  switch (l.kind()) {
    case LambdaTerm::Kind::Var: return CTerm::var(l.name());
    case LambdaTerm::Kind::Const: return CTerm::constant(l.as_comb());
    case LambdaTerm::Kind::App: return CTerm::app(compile(l.fn()), compile(l.arg()));
    case LambdaTerm::Kind::Abs: return abstract(l.binder(), compile(l.body()));
  }
  throw std::logic_error("unreachable");
}

CTerm substitute(const CTerm& t, const std::map<std::string, Term>& bindings) {
  switch (t.kind()) {
    case CTerm::Kind::Var: {
      auto it = bindings.find(t.name());
      if (it == bindings.end()) return t;
      return CTerm::lit(it->second);
    }
    case CTerm::Kind::App: {
      CTerm f = substitute(t.fn(), bindings);
      CTerm a = substitute(t.arg(), bindings);
      return CTerm::app(f, a);
    }
    default:
      return t;
  }
}

Term to_term(const CTerm& t) {
  switch (t.kind()) {
    case CTerm::Kind::Var:
      throw std::invalid_argument("open c-term: free variable " + t.name());
    case CTerm::Kind::Const: return Term::comb(t.as_comb());
    case CTerm::Kind::App: return Term::app(to_term(t.fn()), to_term(t.arg()));
    case CTerm::Kind::Lit: return t.literal();
  }
  throw std::logic_error("unreachable");
}

CTerm from_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Comb: return CTerm::constant(t.as_comb());
    case Term::Kind::App: return CTerm::app(from_term(t.fn()), from_term(t.arg()));
    case Term::Kind::Cont: return CTerm::lit(t);
  }
  throw std::logic_error("unreachable");
}

bool substitution_law_holds(const CTerm& t,
                            const std::vector<std::pair<std::string, Term>>& args,
                            const Stack& pi, std::uint64_t budget) {
  CTerm closed = t;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    closed = abstract(it->first, closed);
  }
  Stack loaded = pi;
  for (auto it = args.rbegin(); it != args.rend(); ++it) {
    loaded = Stack::push(it->second, loaded);
  }
  std::map<std::string, Term> bindings;
  for (const auto& [name, value] : args) bindings.emplace(name, value);
  Process start{to_term(closed), loaded};
  Process target{to_term(substitute(t, bindings)), pi};
  return reduces_to(start, target, budget);
}

// -- text -------------------------------------------------------------------------

std::string to_string(const CTerm& t) {
  switch (t.kind()) {
    case CTerm::Kind::Var: return t.name();
    case CTerm::Kind::Const: return comb_name(t.as_comb());
    case CTerm::Kind::App: return "(" + to_string(t.fn()) + " " + to_string(t.arg()) + ")";
    case CTerm::Kind::Lit: return to_string(t.literal());
  }
  return "?";
}

namespace {

struct LLexer {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg + " at offset " + std::to_string(i));
  }
  std::string ident() {
    skip_ws();
    std::size_t start = i;
    if (i >= s.size() ||
        !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
      fail("expected identifier");
    }
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    return std::string(s.substr(start, i - start));
  }
};

LambdaTerm parse_lambda_body(LLexer& lx);

// var, constant, or parenthesized body
LambdaTerm parse_lambda_atom(LLexer& lx) {
  char c = lx.peek();
  if (c == '(') {
    ++lx.i;
    LambdaTerm t = parse_lambda_body(lx);
    if (lx.peek() != ')') lx.fail("expected ')'");
    ++lx.i;
    return t;
  }
  std::string id = lx.ident();
  if (auto cb = comb_from_name(id)) return LambdaTerm::constant(*cb);
  return LambdaTerm::var(std::move(id));
}

// juxtaposition, left-associative; `\x.` captures everything to its right
LambdaTerm parse_lambda_body(LLexer& lx) {
  if (lx.peek() == '\\') {
    ++lx.i;
    std::string binder = lx.ident();
    if (comb_from_name(binder)) lx.fail("binder '" + binder + "' is a constant name");
    if (lx.peek() != '.') lx.fail("expected '.' after binder");
    ++lx.i;
    return LambdaTerm::abs(std::move(binder), parse_lambda_body(lx));
  }
  LambdaTerm t = parse_lambda_atom(lx);
  for (;;) {
    char c = lx.peek();
    if (c == '(' || std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t = LambdaTerm::app(t, parse_lambda_atom(lx));
    } else if (c == '\\') {
      // a trailing abstraction is the final argument: f \x. b = f (\x. b)
      t = LambdaTerm::app(t, parse_lambda_body(lx));
      return t;
    } else {
      return t;
    }
  }
}

}  // namespace

LambdaTerm parse_lambda(std::string_view text) {
  LLexer lx{text};
  LambdaTerm t = parse_lambda_body(lx);
  if (lx.peek() != '\0') lx.fail("trailing input after lambda term");
  return t;
}

}  // namespace rz
