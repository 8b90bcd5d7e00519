#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

namespace rz {

// The eight elementary combinators. The declaration order is the code order
// used by the numbering table, so it must not be rearranged.
enum class Comb : std::uint8_t { B = 0, C = 1, E = 2, I = 3, K = 4, W = 5, Cc = 6, Qt = 7 };
inline constexpr int kCombCount = 8;

const char* comb_name(Comb c);
std::optional<Comb> comb_from_name(std::string_view s);

struct TermNode;
struct StackNode;
using TermPtr = std::shared_ptr<const TermNode>;
using StackPtr = std::shared_ptr<const StackNode>;

class Term;

// A stack is a right-nested sequence of pushed terms ending in a stack
// constant pi<j>. Immutable; copies share structure.
class Stack {
 public:
  enum class Kind { Const, Push };

  static Stack constant(std::uint32_t index);
  static Stack push(const Term& top, const Stack& rest);

  Kind kind() const;
  bool is_const() const { return kind() == Kind::Const; }
  std::uint32_t const_index() const;  // pre: is_const()
  const Term& top() const;            // pre: !is_const()
  const Stack& rest() const;          // pre: !is_const()
  std::uint32_t depth() const;        // pushes above the final constant
  std::uint64_t hash() const;
  const void* id() const;             // node identity; stable while any copy lives

  bool operator==(const Stack& o) const;
  bool operator!=(const Stack& o) const { return !(*this == o); }

 private:
  friend class Term;
  friend struct TermNode;
  friend struct StackNode;
  explicit Stack(StackPtr p) : p_(std::move(p)) {}
  StackPtr p_;
};

// A term is an elementary combinator, an application, or a continuation
// capturing a stack. Immutable; copies share structure. Continuations are the
// only way stacks occur inside terms.
class Term {
 public:
  enum class Kind { Comb, App, Cont };

  static Term comb(Comb c);
  static Term app(const Term& fn, const Term& arg);
  static Term cont(const Stack& s);

  Kind kind() const;
  bool is_comb() const { return kind() == Kind::Comb; }
  bool is_app() const { return kind() == Kind::App; }
  bool is_cont() const { return kind() == Kind::Cont; }
  Comb as_comb() const;          // pre: is_comb()
  const Term& fn() const;        // pre: is_app()
  const Term& arg() const;       // pre: is_app()
  const Stack& saved() const;    // pre: is_cont()
  std::uint64_t hash() const;
  const void* id() const;

  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  friend class Stack;
  friend struct TermNode;
  friend struct StackNode;
  friend bool is_proof_like(const Term&);
  explicit Term(TermPtr p) : p_(std::move(p)) {}
  TermPtr p_;
};

// A process: term against stack.
struct Process {
  Term head;
  Stack stack;

  bool operator==(const Process& o) const { return head == o.head && stack == o.stack; }
  bool operator!=(const Process& o) const { return !(*this == o); }
  std::uint64_t hash() const;
};

// A term is proof-like when no continuation (hence no stack constant) occurs
// in it. Closed under application in both directions.
bool is_proof_like(const Term& t);

// Structural total order; 0 on equality. Stable across runs, so anything
// keyed on it (canonical name order, fingerprints) is deterministic.
int term_cmp(const Term& a, const Term& b);
int stack_cmp(const Stack& a, const Stack& b);

// sigma = (BW)(BB), the successor combinator of the numeral system.
const Term& sigma();

// numeral(0) = KI; numeral(n+1) = (sigma)numeral(n).
Term numeral(std::uint64_t n);

// Recognizes exactly the terms built by numeral(); anything else is nullopt.
std::optional<std::uint64_t> numeral_value(const Term& t);

// Canonical text syntax. Constants B C E I K W cc qt; application "(t u)";
// continuation "k[<stack>]"; stack "t . t . pi<j>"; process "t * stack".
// Whitespace-insensitive on input; printer output parses back to an equal
// value. Printing is iterative and safe on machine-deep values.
std::string to_string(const Term& t);
std::string to_string(const Stack& s);
std::string to_string(const Process& p);
Term parse_term(std::string_view text);
Stack parse_stack(std::string_view text);
Process parse_process(std::string_view text);

// Logical tree size in nodes, saturating at cap + 1. The memo is keyed on
// node identity, so keep one instance per cap value; shared structure across
// queries is then counted once.
class SizeMemo {
 public:
  std::uint64_t term_size(const Term& t, std::uint64_t cap);
  std::uint64_t stack_size(const Stack& s, std::uint64_t cap);
  std::uint64_t process_size(const Process& p, std::uint64_t cap);

 private:
  std::unordered_map<const void*, std::uint64_t> memo_;
};

// Union of stack-constant indices over everything scanned. The visited set
// persists across calls, so scanning the states of a run pays only for nodes
// not seen before.
class ConstantScan {
 public:
  void scan(const Term& t);
  void scan(const Stack& s);
  void scan(const Process& p);
  const std::set<std::uint32_t>& found() const { return found_; }

 private:
  std::unordered_set<const void*> visited_;
  std::set<std::uint32_t> found_;
};

// One-shot convenience over ConstantScan.
std::set<std::uint32_t> constant_indices(const Process& p);

// -- node layout ------------------------------------------------------------

struct TermApp {
  Term fn;
  Term arg;
};

struct TermNode {
  std::variant<Comb, TermApp, Stack> v;
  std::uint64_t h;
  bool prooflike;
  ~TermNode();  // iterative teardown; deep chains must not recurse
  static void drain(std::vector<TermPtr>&& tq, std::vector<StackPtr>&& sq);
};

struct StackPush {
  Term top;
  Stack rest;
};

struct StackNode {
  std::variant<std::uint32_t, StackPush> v;
  std::uint64_t h;
  std::uint32_t depth;
  ~StackNode();
};

inline Stack::Kind Stack::kind() const {
  return p_->v.index() == 0 ? Kind::Const : Kind::Push;
}
inline std::uint32_t Stack::const_index() const { return std::get<0>(p_->v); }
inline const Term& Stack::top() const { return std::get<1>(p_->v).top; }
inline const Stack& Stack::rest() const { return std::get<1>(p_->v).rest; }
inline std::uint32_t Stack::depth() const { return p_->depth; }
inline std::uint64_t Stack::hash() const { return p_->h; }
inline const void* Stack::id() const { return p_.get(); }

inline Term::Kind Term::kind() const {
  switch (p_->v.index()) {
    case 0: return Kind::Comb;
    case 1: return Kind::App;
    default: return Kind::Cont;
  }
}
inline Comb Term::as_comb() const { return std::get<0>(p_->v); }
inline const Term& Term::fn() const { return std::get<1>(p_->v).fn; }
inline const Term& Term::arg() const { return std::get<1>(p_->v).arg; }
inline const Stack& Term::saved() const { return std::get<2>(p_->v); }
inline std::uint64_t Term::hash() const { return p_->h; }
inline const void* Term::id() const { return p_.get(); }

inline bool is_proof_like(const Term& t) { return t.p_->prooflike; }

}  // namespace rz

template <>
struct std::hash<rz::Term> {
  std::size_t operator()(const rz::Term& t) const noexcept { return static_cast<std::size_t>(t.hash()); }
};
template <>
struct std::hash<rz::Stack> {
  std::size_t operator()(const rz::Stack& s) const noexcept { return static_cast<std::size_t>(s.hash()); }
};
template <>
struct std::hash<rz::Process> {
  std::size_t operator()(const rz::Process& p) const noexcept { return static_cast<std::size_t>(p.hash()); }
};
