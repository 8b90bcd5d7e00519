#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rz/derivation.hpp"
#include "rz/formula.hpp"
#include "rz/machine.hpp"
#include "rz/numbering.hpp"
#include "rz/term.hpp"
#include "rz/tri.hpp"

namespace rz {

// A hereditarily finite individual: a finite set of (member, tag stack)
// pairs. Elements are kept sorted and deduplicated, so equal sets compare
// equal structurally. rank is precomputed: 0 for the empty name, else
// 1 + the largest member rank. Tag stacks do not contribute to rank.
class Name {
 public:
  using Elem = std::pair<Name, Stack>;

  static Name empty();
  static Name make(std::vector<Elem> elems);

  const std::vector<Elem>& elems() const;
  unsigned rank() const;
  bool contains(const Name& member, const Stack& tag) const;
  // distinct member names, tags stripped
  std::vector<Name> members() const;

  bool operator==(const Name& o) const { return cmp(*this, o) == 0; }
  bool operator!=(const Name& o) const { return cmp(*this, o) != 0; }
  static int cmp(const Name& a, const Name& b);

 private:
  struct Node;
  explicit Name(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

int name_cmp(const Name& a, const Name& b);
std::string to_string(const Name& a);

// The finite stand-in for the infinite stack space. Generation is
// deterministic in the parameters: every stack constant pi_0 .. pi_{c-1},
// then every push of an application-only term of size <= max_term_size onto
// a shallower stack, up to max_depth pushes deep. Universes are value
// objects; the fingerprint names the parameters and a content hash so every
// reported verdict can be traced to the universe it was computed against.
struct UniverseParams {
  unsigned max_depth = 1;
  unsigned max_term_size = 2;
  unsigned constant_count = 2;
};

class StackUniverse {
 public:
  static StackUniverse generate(const UniverseParams& p);

  const std::vector<Stack>& stacks() const { return stacks_; }
  const UniverseParams& params() const { return params_; }
  const std::string& fingerprint() const { return fingerprint_; }
  bool contains(const Stack& s) const;

 private:
  StackUniverse() = default;
  UniverseParams params_;
  std::vector<Stack> stacks_;
  std::string fingerprint_;
};

// A pole given by generators: its complement is exactly the set of reducts
// of the generator processes (their threads), so the pole is a final segment
// by construction. The constructor runs every generator for up to `budget`
// steps with cycle detection and records the reachable processes; certified()
// reports whether every run ended Stuck or Cyclic, in which case the
// complement is complete and absence from it proves pole membership.
enum class PoleVerdict { InComplement, InPole, UnknownWithinBudget };

const char* pole_verdict_name(PoleVerdict v);

class Pole {
 public:
  Pole(std::vector<Process> generators, std::uint64_t budget);

  const std::vector<Process>& generators() const { return generators_; }
  std::uint64_t budget() const { return budget_; }
  bool certified() const { return certified_; }
  std::size_t reachable_count() const { return reachable_.size(); }
  PoleVerdict member(const Process& p) const;
  // true when some reachable process has this head term; with a certified
  // pole this decides whether the term realizes bottom (against all stacks,
  // not just a universe)
  bool heads(const Term& t) const;

 private:
  std::vector<Process> generators_;
  std::uint64_t budget_ = 0;
  bool certified_ = false;
  std::vector<Process> reachable_;  // sorted by (term, stack) order
};

PoleVerdict pole_member(const Process& p, const Pole& pole);

// Everything a truth-value computation ranges over. pool is the range of
// unrestricted forall; valuation assigns stack sets to prop atoms;
// individuals assigns names to free formula variables; ent_bound caps the
// ntilde approximation.
struct TruthQuery {
  StackUniverse universe;
  Pole pole;
  std::vector<Name> pool;
  std::map<std::string, std::vector<Stack>> valuation;
  std::map<std::string, Name> individuals;
  unsigned ent_bound = 4;
};

unsigned rank(const Name& a);

// Ground-model constructions, all relative to a universe.
Name gimel_name(const std::vector<Name>& members, const StackUniverse& u);
Name successor_name(const Name& a, const StackUniverse& u);
Name nat_name(unsigned n, const StackUniverse& u);
// the integer n with nat_name(n) == a, if there is one
std::optional<unsigned> name_nat_value(const Name& a, const StackUniverse& u);
Name ntilde_name(unsigned n_max, const StackUniverse& u);
Name kuratowski_pair(const Name& a, const Name& b, const StackUniverse& u);

// Evaluates a ground set term to a Name. Free variables resolve through
// q.individuals. Throws SemanticsError on unbound variables and on a delta
// application the pole cannot decide.
Name eval_set_term(const SetTerm& t, const TruthQuery& q);

// Bounded evaluation of the escape indicator on term codes. Yes stands for
// value 1: some reachable process of the pole has head xi_n, so xi_n escapes
// on that stack (definite even when uncertified). No stands for value 0: the
// pole is certified and no reachable process has head xi_n, so xi_n sends
// every stack whatsoever into the pole. Unknown otherwise. The budget
// overrides the pole's own when it differs.
Tri delta(const BigNat& n, const Pole& pole, std::uint64_t budget);

// Stack membership in the truth value of a closed formula; the formula must
// expand to a single core formula. Yes/No are exact relative to (universe,
// pole); Unknown only arises from uncertified pole runs.
Tri norm_member(const Stack& pi, const Formula& f, const TruthQuery& q);

// Three-valued realizability: No means refuted (some universe stack is in
// the truth value and the process provably escapes the pole), Yes means
// certified against every universe stack, Unknown otherwise.
Tri realizes_tri(const Term& xi, const Formula& f, const TruthQuery& q);

struct RealizeResult {
  bool refuted = false;
  std::optional<Stack> witness;  // set iff refuted
};

// Refutation search: sound, never confirms. A pair formula is refuted when
// either component is.
RealizeResult realizes(const Term& xi, const Formula& f, const TruthQuery& q);

// Checks the derivation, closes the extracted program, and runs the
// refutation search against every expanded component of the conclusion.
// Check failures and open extractions propagate as CheckError.
struct SmokeOutcome {
  Formula component;
  bool refuted = false;
  std::optional<Stack> witness;
};

struct SmokeReport {
  CTerm extracted;
  Term program;
  std::vector<SmokeOutcome> outcomes;
  bool any_refuted = false;
};

SmokeReport extract_and_smoke(const Derivation& d, const Context& context, const TruthQuery& q);

// Declarative query files: one (query ...) record containing
//   (universe DEPTH TERM-SIZE CONSTANTS)
//   (pole BUDGET (PROCESS) ...)
//   (pool NAME ...)            optional
//   (ent-bound N)              optional
//   (let x NAME) ...           optional individuals
//   (atom A STACK ...) ...     optional valuation entries
//   (norm F STACK) ...         membership questions
//   (realize F TERM) ...       realizability questions
// where NAME ::= (set (NAME STACK) ...), and STACK / TERM use the machine's
// own notation, tokenized by the surrounding record.
struct QueryOutcome {
  std::string kind;  // "norm" or "realize"
  std::string formula;
  std::string subject;  // the stack or term, printed
  Tri verdict = Tri::Unknown;
  std::optional<Stack> witness;
};

struct QueryReport {
  std::string fingerprint;
  bool pole_certified = false;
  std::vector<QueryOutcome> outcomes;
};

QueryReport run_query_text(std::string_view text);

std::string to_string(const UniverseParams& p);

}  // namespace rz
