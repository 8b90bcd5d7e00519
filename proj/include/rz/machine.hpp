#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rz/term.hpp"

namespace rz {

// Largest code the quote rule will turn into a numeral; beyond it the step
// throws QuoteOverflowError instead of materializing the numeral.
inline constexpr std::uint64_t kDefaultNumeralCap = 1000000;

// States larger than this many nodes are exempt from cycle comparison.
inline constexpr std::uint64_t kDefaultStateSizeCap = 1000000;

// One machine step: the fired rule and the next process, or stuck when no
// rule matches (an elementary head with insufficient stack depth).
struct StepOutcome {
  std::optional<Process> next;
  const char* rule = nullptr;  // set iff next is set

  bool stuck() const { return !next.has_value(); }
};

// Exactly one rule matches any process, keyed on the head constructor and
// stack depth:
//   (f a) * pi            -> f * a . pi                          push
//   I * x . pi            -> x * pi                              I
//   K * x . y . pi        -> x * pi                              K
//   E * x . y . pi        -> (x y) * pi                          E
//   W * x . y . pi        -> x * y . y . pi                      W
//   C * x . y . z . pi    -> x * z . y . pi                      C
//   B * x . y . z . pi    -> (x (y z)) * pi                      B
//   cc * x . pi           -> x * k[pi] . pi                      cc
//   k[pi] * x . rest      -> x * pi                              k
//   qt * x . y . pi       -> x * numeral(encode(y)) . pi         qt
StepOutcome step(const Process& p, std::uint64_t numeral_cap = kDefaultNumeralCap);

enum class RunStatus { Stuck, BudgetExhausted, Cyclic };
const char* run_status_name(RunStatus s);

// trace[i] is the state after i steps (entry 0 is the initial process) and
// rules[i] names the rule that produced it ("init" for entry 0). On Cyclic
// the trace ends at the first state equal to an earlier one:
// trace[prefix_length] == trace[prefix_length + period] == trace.back().
struct RunReport {
  RunStatus status = RunStatus::Stuck;
  std::vector<Process> trace;
  std::vector<const char*> rules;
  std::uint64_t prefix_length = 0;  // Cyclic only
  std::uint64_t period = 0;         // Cyclic only

  const Process& last() const { return trace.back(); }
  std::uint64_t steps() const { return trace.size() - 1; }
};

RunReport run(const Process& p, std::uint64_t budget, bool detect_cycles = true,
              std::uint64_t state_size_cap = kDefaultStateSizeCap,
              std::uint64_t numeral_cap = kDefaultNumeralCap);

// Whether q appears in the run of p within budget steps (reflexive: p itself
// counts). Streams in constant memory, no trace, no cycle map.
bool reduces_to(const Process& p, const Process& q, std::uint64_t budget,
                std::uint64_t numeral_cap = kDefaultNumeralCap);

}  // namespace rz
