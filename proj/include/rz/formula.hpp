#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rz/errors.hpp"

namespace rz {

// First-order individual terms over a fixed function-symbol signature:
//   0        : the empty set
//   s        : successor, s(a) = {a} x Pi
//   gimel    : gimel(a) = a x Pi
//   chi      : chi(e, x) = 1 if x is a member of e, else 0 (the indicator 1_E)
//   delta    : delta(n) = 0 iff the term with code n realizes bottom
//   pair     : Kuratowski pair {{a},{a,b}}
//   band bor : Boolean and / or on {0,1}; anything else counts as 0
//   bnot     : Boolean negation
//   lt       : lt(m,n) = 1 if m,n are integers and m < n, else 0
//   add mul  : arithmetic on integer values; non-integers count as 0
//   ntilde   : the set of integers paired with their numeral stacks
// The symbols are interpreted by the semantics module over finite names;
// here they are pure syntax.
class SetTerm {
 public:
  enum class Kind { Var, Fun };

  static SetTerm var(std::string name);
  static SetTerm fun(std::string symbol, std::vector<SetTerm> args);

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }    // Var and Fun symbol
  const std::vector<SetTerm>& args() const { return args_; }

  bool operator==(const SetTerm& o) const;
  bool operator!=(const SetTerm& o) const { return !(*this == o); }

 private:
  SetTerm() = default;
  Kind kind_ = Kind::Var;
  std::string name_;
  std::vector<SetTerm> args_;
};

// s^n(0). st_num_value inverts it on exactly those terms.
SetTerm st_num(unsigned n);
std::optional<unsigned> st_num_value(const SetTerm& t);

// Arity of a signature symbol, or -1 if the symbol is not in the signature.
int signature_arity(std::string_view symbol);

std::set<std::string> vars(const SetTerm& t);
SetTerm subst(const SetTerm& t, std::string_view x, const SetTerm& value);

std::string to_string(const SetTerm& t);
SetTerm parse_set_term(std::string_view text);

// The three primitive relation symbols. NotEps is the strong (non-)membership
// a-not-eps-b with truth value {pi : (a,pi) in b}; NotIn and Subseteq are the
// extensional pair defined by the mutual rank recursion.
enum class RelOp { NotEps, NotIn, Subseteq };

const char* rel_name(RelOp r);

// Formulas. The core constructors are Top, Bottom, Prop, Rel, Implies,
// Forall, ForallEnt, ForallGimel and EqCond; everything below Not in the
// kind list is sugar that expand() rewrites away. Prop atoms stand for the
// schematic letters A, B, ... of derivations; their truth values come from a
// valuation in the semantics context.
//
// EqCond is the conditional t = u |> F whose truth value is empty when the
// ground values of t and u differ and the value of F when they coincide.
// ForallEnt binds an integer variable with numeral-tagged stacks; ForallGimel
// quantifies over an explicit finite list of individuals (the finite stand-in
// for a ground-model set E).
class Formula {
 public:
  enum class Kind {
    Top, Bottom, Prop, Rel, Implies, Forall, ForallEnt, ForallGimel, EqCond,
    Not, And, Or, Exists, ForallEps, ExistsEps,
    Iff, Simeq, Sim, Ssub, Eps, In, Eq, Neq, IntOf
  };

  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name);
  static Formula rel(RelOp r, SetTerm lhs, SetTerm rhs);
  static Formula implies(Formula a, Formula b);
  // A1, ..., An -> b, right-nested; n = 0 gives b itself.
  static Formula implies_chain(std::vector<Formula> antecedents, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula forall_ent(std::string var, Formula body);
  static Formula forall_gimel(std::string var, std::vector<SetTerm> elems, Formula body);
  static Formula eq_cond(SetTerm t, SetTerm u, Formula body);

  static Formula negate(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  // Exists x {F1, ..., Fk}, k >= 1.
  static Formula exists(std::string var, std::vector<Formula> body);
  static Formula forall_eps(std::string var, SetTerm bound, Formula body);
  static Formula exists_eps(std::string var, SetTerm bound, std::vector<Formula> body);
  static Formula iff(Formula a, Formula b);
  static Formula simeq(SetTerm t, SetTerm u);
  static Formula sim(SetTerm t, SetTerm u);
  static Formula ssub(SetTerm t, SetTerm u);
  static Formula eps(SetTerm t, SetTerm u);
  static Formula in(SetTerm t, SetTerm u);
  static Formula eq(SetTerm t, SetTerm u);
  static Formula neq(SetTerm t, SetTerm u);
  static Formula int_of(SetTerm t);

  Kind kind() const;
  const std::string& name() const;               // Prop name or binder
  RelOp rel() const;                             // pre: Rel
  const SetTerm& lhs() const;                    // first term argument
  const SetTerm& rhs() const;                    // second term argument
  const std::vector<SetTerm>& terms() const;     // all term arguments
  const std::vector<Formula>& kids() const;
  const Formula& child(std::size_t i) const;

  // True when this node and every descendant is a core constructor.
  bool is_core() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

 private:
  struct Node;
  static Formula make(Kind k, std::string name, RelOp r, std::vector<SetTerm> terms,
                      std::vector<Formula> kids);
  explicit Formula(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

// Rewrites all sugar into core constructors. A formula denotes a LIST of
// core formulas: iff, simeq and sim denote pairs, and pairs flatten when
// they sit to the left of an implication (A1,...,An -> B), under a
// quantifier, inside a brace list, or under an eq-condition. expand returns
// that list (singleton for everything except top-level pairs); expand_one
// demands a singleton and raises CheckError on a proper pair.
std::vector<Formula> expand(const Formula& f);
Formula expand_one(const Formula& f);

std::set<std::string> free_vars(const Formula& f);

// Capture-avoiding substitution of an individual term for a free variable.
Formula subst(const Formula& f, std::string_view x, const SetTerm& value);

// Structural equality up to renaming of bound variables.
bool alpha_equal(const Formula& a, const Formula& b);

std::string to_string(const Formula& f);
Formula parse_formula(std::string_view text);

// The axiom schemes of ZF_eps, as instantiable closed hypotheses. Schematic
// instances take the formula F and the names of its designated free
// variables; the remaining free variables of F become universally quantified
// parameters and auxiliary bound names are chosen fresh.
Formula axiom_extensionality_membership();
Formula axiom_extensionality_inclusion();
Formula axiom_foundation(const Formula& f, const std::string& x);
Formula axiom_comprehension(const Formula& f, const std::string& x);
Formula axiom_pairing();
Formula axiom_union();
Formula axiom_power();
Formula axiom_collection(const Formula& f, const std::string& x, const std::string& y);
Formula axiom_infinity(const Formula& f, const std::string& x, const std::string& y);

}  // namespace rz
