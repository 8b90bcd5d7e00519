#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "rz/term.hpp"

namespace rz {

struct CNode;
using CPtr = std::shared_ptr<const CNode>;

// A c-term: a machine term with named variables. Lit wraps an arbitrary
// machine term (a continuation, a numeral, ...) as an opaque constant, which
// is what lets substitution bind variables to any Term.
class CTerm {
 public:
  enum class Kind { Var, Const, App, Lit };

  static CTerm var(std::string name);
  static CTerm constant(Comb c);
  static CTerm app(const CTerm& fn, const CTerm& arg);
  static CTerm lit(const Term& t);

  Kind kind() const;
  const std::string& name() const;  // pre: Var
  Comb as_comb() const;             // pre: Const
  const CTerm& fn() const;          // pre: App
  const CTerm& arg() const;         // pre: App
  const Term& literal() const;      // pre: Lit

  bool operator==(const CTerm& o) const;
  bool operator!=(const CTerm& o) const { return !(*this == o); }

 private:
  explicit CTerm(CPtr p) : p_(std::move(p)) {}
  CPtr p_;
};

bool contains_var(const CTerm& t, std::string_view x);
std::set<std::string> free_vars(const CTerm& t);

// Lambda terms over the same constants, with binders.
struct LNode;
using LPtr = std::shared_ptr<const LNode>;

class LambdaTerm {
 public:
  enum class Kind { Var, Const, App, Abs };

  static LambdaTerm var(std::string name);
  static LambdaTerm constant(Comb c);
  static LambdaTerm app(const LambdaTerm& fn, const LambdaTerm& arg);
  static LambdaTerm abs(std::string binder, const LambdaTerm& body);

  Kind kind() const;
  const std::string& name() const;    // pre: Var
  Comb as_comb() const;               // pre: Const
  const LambdaTerm& fn() const;       // pre: App
  const LambdaTerm& arg() const;      // pre: App
  const std::string& binder() const;  // pre: Abs
  const LambdaTerm& body() const;     // pre: Abs

 private:
  explicit LambdaTerm(LPtr p) : p_(std::move(p)) {}
  LPtr p_;
};

// Abstraction elimination: the result behaves as λx t and never contains x.
// Cases are tried in order, first match wins:
//   1. x not in t          ->  (K t)
//   2. t = x               ->  I
//   3. t = (f u), x not in u -> ((C λx(E f)) u)
//   4. t = (f x), x not in f -> (E f)
//   5. t = (f x), x in f     -> (W λx(E f))
//   6. t = (f (u v)), x in (u v) -> λx (((B f) u) v)
CTerm abstract(std::string_view x, const CTerm& t);

// Eliminates every binder, innermost first. Free variables survive as Var.
CTerm compile(const LambdaTerm& l);

// Plain replacement of variables by literal machine terms (c-terms have no
// binders, so nothing can be captured). Unbound variables survive.
CTerm substitute(const CTerm& t, const std::map<std::string, Term>& bindings);

// Conversion to a machine term; throws std::invalid_argument on free
// variables. from_term is lossless: to_term(from_term(t)) == t.
Term to_term(const CTerm& t);
CTerm from_term(const Term& t);

// The compilation soundness law: for t with free variables x1..xn bound in
// order by args, checks by machine replay that
//   λx1...λxn t  *  a1 . ... . an . pi   reaches   t[a/x]  *  pi
// within budget.
bool substitution_law_holds(const CTerm& t,
                            const std::vector<std::pair<std::string, Term>>& args,
                            const Stack& pi, std::uint64_t budget);

// Text forms. Lambda syntax: `\x. body` (body extends right), application by
// juxtaposition (left-associative), parentheses, constants as in the terms
// module, every other identifier a variable.
std::string to_string(const CTerm& t);
LambdaTerm parse_lambda(std::string_view text);

}  // namespace rz
