#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rz/semantics.hpp"
#include "rz/term.hpp"
#include "rz/tri.hpp"

namespace rz {

// theta_n: the n-th proof-like term in code order. Total, injective and
// strictly increasing in code; the inverse is computable by filtering the
// code line, which is also how this is implemented.
Term prooflike_enum(std::uint64_t n);

enum class ThreadStatus { Ongoing, Cyclic, Stuck };
const char* thread_status_name(ThreadStatus s);

// One thread of the model: theta_n run against its private constant pi_n with
// cycle detection. When the status is Cyclic or Stuck, the trace is the whole
// thread as a set of processes; Ongoing means the step budget (or the quote
// materialization cap) cut the run short of a certificate.
struct ThreadReport {
  std::uint64_t index = 0;
  std::vector<Process> trace;  // state 0 is theta_n * pi_n
  ThreadStatus status = ThreadStatus::Ongoing;
  std::uint64_t prefix_length = 0;  // Cyclic: states before the loop
  std::uint64_t period = 0;         // Cyclic: loop length
  // stack-constant indices occurring anywhere in any recorded state; the
  // locality law says this never exceeds {n}
  std::set<std::uint32_t> constants_seen;

  bool complete() const { return status != ThreadStatus::Ongoing; }
};

ThreadReport run_thread(std::uint64_t n, std::uint64_t budget);

// Yes: p occurs in the explored prefix of thread n. No: the thread completed
// within budget and p is absent, a certificate since the trace then is the
// whole thread. Unknown: absent from an incomplete prefix.
Tri in_thread(const Process& p, std::uint64_t n, std::uint64_t budget);

// The only thread that could contain p, read off the stack constants
// occurring in it (continuations inside the head included). nullopt when the
// occurring indices disagree, since a state of thread n carries no constant
// but pi_n.
std::optional<std::uint32_t> locate_thread(const Process& p);

// theta_n * pi_n is state 0 of thread n by definition, so theta_n escapes the
// pole on its own constant. Checking this for every n below a bound is the
// coherence of the model.
struct CoherenceReport {
  std::uint64_t checked = 0;
  std::vector<std::uint64_t> failures;

  bool all_pass() const { return failures.empty(); }
};

CoherenceReport coherence_check(std::uint64_t n_threads, std::uint64_t budget = 16);

// The pole of the model, cut to the first n_threads threads: generators
// theta_n * pi_n for n < n_threads. The complement is under-approximated, so
// every report built on this must carry n_threads along.
Pole make_thread_pole(std::uint64_t n_threads, std::uint64_t budget);

// The loop argument. p_i = ((k[pi]) alpha) zeta_i * rho funnels to
// alpha * pi in exactly three steps (push, push, k) whatever rho is, so all
// three entries share the tail of alpha * pi. Once that tail revisits its
// entry process it is periodic forever, and a capture term with a zeta not
// already inside the loop can never reach head position again.
struct LoopDemoReport {
  bool funnel_ok = false;   // all three entries reach alpha * pi as push, push, k
  bool applicable = false;  // the tail revisits alpha * pi within budget
  std::uint64_t period = 0; // loop length when applicable
  std::vector<std::uint32_t> heading;  // zeta indices whose capture term heads a tail state
  bool counterexample = false;         // all three head the same tail; must never happen
  std::string note;                    // why the loop claim does not apply, when it does not
};

// pre: the zetas are pairwise distinct. The entry stack rho is taken to be pi
// itself; the k step discards it, so the choice is invisible in the tail.
LoopDemoReport loop_argument_demo(const Term& alpha, const std::array<Term, 3>& zetas,
                                  const Stack& pi, std::uint64_t budget);

}  // namespace rz
