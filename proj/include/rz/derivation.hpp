#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "rz/cterm.hpp"
#include "rz/formula.hpp"

namespace rz {

// A context is an ordered list of named hypotheses. Later entries shadow
// earlier ones with the same name.
using Context = std::vector<std::pair<std::string, Formula>>;

// Fully annotated natural-deduction trees. Every node carries its own
// conclusion; check() only verifies the annotations, it never searches.
//
// A formula whose expansion is a pair counts as two obligations discharged by
// one term, so pairs pass through hyp (either component may be selected),
// through consequents of mp and lam, and through all-intro, all-elim and efq
// unchanged. The minor premise of mp and the discharged hypothesis of lam
// must expand to a single core formula: one argument position cannot feed
// two obligations.
class Derivation {
 public:
  enum class Rule { Hyp, Mp, Lam, AllIntro, AllElim, Peirce, Efq };

  // rule 1: the hypothesis var, whose formula yields the conclusion
  static Derivation hyp(std::string var, Formula concl);
  // rule 2: major proves (minor's formula -> conclusion)
  static Derivation mp(Derivation major, Derivation minor, Formula concl);
  // rule 3: discharges var : hypothesis from body's context
  static Derivation lam(std::string var, Formula hypothesis, Derivation body, Formula concl);
  // rule 4: generalizes body's conclusion over var (the eigenvariable)
  static Derivation all_intro(std::string var, Derivation body, Formula concl);
  // rule 5: instantiates body's universal conclusion at the witness
  static Derivation all_elim(SetTerm witness, Derivation body, Formula concl);
  // rule 6: conclusion must have the shape ((A -> B) -> A) -> A
  static Derivation peirce(Formula concl);
  // rule 7: body proves bottom, the conclusion is arbitrary
  static Derivation efq(Derivation body, Formula concl);

  Rule rule() const;
  const char* rule_name() const;
  const std::string& var() const;          // pre: Hyp, Lam or AllIntro
  const Formula& hypothesis() const;       // pre: Lam
  const SetTerm& witness() const;          // pre: AllElim
  const Formula& concl() const;
  const std::vector<Derivation>& kids() const;

  bool operator==(const Derivation& o) const;
  bool operator!=(const Derivation& o) const { return !(*this == o); }

 private:
  struct Node;
  static Derivation make(Rule r, std::string var, Formula hyp_formula, SetTerm witness,
                         Formula concl, std::vector<Derivation> kids);
  explicit Derivation(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

// Verifies every node against its rule and returns the extracted program,
// binders already eliminated. Free variables of the result are exactly the
// context hypotheses the derivation used. Formulas are compared after
// expansion, up to renaming of bound variables. Throws CheckError naming the
// rule path from the root to the offending node.
CTerm check(const Derivation& d, const Context& context = {});

// The extracted program with binders still in place. Same checks as check().
LambdaTerm extract(const Derivation& d, const Context& context = {});

// Nested parenthesized records:
//   (derivation (context (x F) ...) node)
// where node is one of
//   (hyp x F) | (mp F major minor) | (lam x H F body)
//   (all-intro x F body) | (all-elim t F body) | (peirce F) | (efq F body)
// with F the node's conclusion. Printing and parsing roundtrip exactly.
std::string to_string(const Derivation& d);
std::string sequent_to_string(const Context& context, const Derivation& d);
Derivation parse_derivation(std::string_view text);
std::pair<Context, Derivation> parse_sequent(std::string_view text);

}  // namespace rz
