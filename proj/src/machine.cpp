#include "rz/machine.hpp"

#include <string>
#include <unordered_map>

#include "rz/errors.hpp"
#include "rz/numbering.hpp"

namespace rz {

StepOutcome step(const Process& p, std::uint64_t numeral_cap) {
  const Term& h = p.head;
  const Stack& s = p.stack;
  switch (h.kind()) {
    case Term::Kind::App:
      return {Process{h.fn(), Stack::push(h.arg(), s)}, "push"};
    case Term::Kind::Cont:
      if (s.depth() < 1) return {};
      return {Process{s.top(), h.saved()}, "k"};
    case Term::Kind::Comb:
      break;
  }
  std::uint32_t d = s.depth();
  switch (h.as_comb()) {
    case Comb::I:
      if (d < 1) return {};
      return {Process{s.top(), s.rest()}, "I"};
    case Comb::K:
      if (d < 2) return {};
      return {Process{s.top(), s.rest().rest()}, "K"};
    case Comb::E:
      if (d < 2) return {};
      return {Process{Term::app(s.top(), s.rest().top()), s.rest().rest()}, "E"};
    case Comb::W: {
      if (d < 2) return {};
      const Term& x = s.top();
      const Term& y = s.rest().top();
      const Stack& pi = s.rest().rest();
      return {Process{x, Stack::push(y, Stack::push(y, pi))}, "W"};
    }
    case Comb::C: {
      if (d < 3) return {};
      const Term& x = s.top();
      const Term& y = s.rest().top();
      const Term& z = s.rest().rest().top();
      const Stack& pi = s.rest().rest().rest();
      return {Process{x, Stack::push(z, Stack::push(y, pi))}, "C"};
    }
    case Comb::B: {
      if (d < 3) return {};
      const Term& x = s.top();
      const Term& y = s.rest().top();
      const Term& z = s.rest().rest().top();
      const Stack& pi = s.rest().rest().rest();
      return {Process{Term::app(x, Term::app(y, z)), pi}, "B"};
    }
    case Comb::Cc: {
      if (d < 1) return {};
      const Stack& pi = s.rest();
      return {Process{s.top(), Stack::push(Term::cont(pi), pi)}, "cc"};
    }
    case Comb::Qt: {
      if (d < 2) return {};
      const Term& x = s.top();
      const Term& y = s.rest().top();
      const Stack& pi = s.rest().rest();
      auto code = encode_term_bounded(y, numeral_cap);
      if (!code) {
        throw QuoteOverflowError("quoted term's code exceeds the numeral cap " +
                                 std::to_string(numeral_cap));
      }
      return {Process{x, Stack::push(numeral(*code), pi)}, "qt"};
    }
  }
  return {};  // unreachable
}

const char* run_status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Stuck: return "stuck";
    case RunStatus::BudgetExhausted: return "budget-exhausted";
    case RunStatus::Cyclic: return "cyclic";
  }
  return "?";
}

RunReport run(const Process& p, std::uint64_t budget, bool detect_cycles,
              std::uint64_t state_size_cap, std::uint64_t numeral_cap) {
  RunReport r;
  r.trace.push_back(p);
  r.rules.push_back("init");
  std::unordered_map<Process, std::uint64_t> seen;
  SizeMemo sizes;  // sound: every measured state stays alive in the trace
  auto note = [&](const Process& q, std::uint64_t index) -> std::optional<std::uint64_t> {
    if (!detect_cycles) return std::nullopt;
    if (sizes.process_size(q, state_size_cap) > state_size_cap) return std::nullopt;
    auto [it, fresh] = seen.emplace(q, index);
    if (!fresh) return it->second;
    return std::nullopt;
  };
  note(p, 0);
  for (std::uint64_t i = 0; i < budget; ++i) {
    StepOutcome so = step(r.trace.back(), numeral_cap);
    if (so.stuck()) {
      r.status = RunStatus::Stuck;
      return r;
    }
    r.trace.push_back(*so.next);
    r.rules.push_back(so.rule);
    if (auto prev = note(r.trace.back(), r.trace.size() - 1)) {
      r.status = RunStatus::Cyclic;
      r.prefix_length = *prev;
      r.period = (r.trace.size() - 1) - *prev;
      return r;
    }
  }
  r.status = RunStatus::BudgetExhausted;
  return r;
}

bool reduces_to(const Process& p, const Process& q, std::uint64_t budget,
                std::uint64_t numeral_cap) {
  Process cur = p;
  if (cur == q) return true;
  for (std::uint64_t i = 0; i < budget; ++i) {
    StepOutcome so = step(cur, numeral_cap);
    if (so.stuck()) return false;
    cur = *so.next;
    if (cur == q) return true;
  }
  return false;
}

}  // namespace rz
