#include "rz/threads.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "rz/errors.hpp"
#include "rz/machine.hpp"
#include "rz/numbering.hpp"

namespace rz {

Term prooflike_enum(std::uint64_t n) {
  static std::mutex mu;
  static std::vector<BigNat> codes;  // strictly increasing by construction
  std::lock_guard<std::mutex> lock(mu);
  BigNat next = codes.empty() ? BigNat(0) : BigNat(codes.back() + 1);
  while (codes.size() <= n) {
    if (code_is_proof_like(next)) codes.push_back(next);
    ++next;
  }
  return decode_term(codes[static_cast<std::size_t>(n)]);
}

const char* thread_status_name(ThreadStatus s) {
  switch (s) {
    case ThreadStatus::Ongoing: return "ongoing";
    case ThreadStatus::Cyclic: return "cyclic";
    case ThreadStatus::Stuck: return "stuck";
  }
  return "?";
}

ThreadReport run_thread(std::uint64_t n, std::uint64_t budget) {
  if (n > 0xffffffffull) {
    throw std::invalid_argument("thread index exceeds the stack-constant range");
  }
  ThreadReport rep;
  rep.index = n;
  Process cur{prooflike_enum(n), Stack::constant(static_cast<std::uint32_t>(n))};
  ConstantScan scan;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::size_t>> seen;
  auto remember = [&](const Process& p) {
    seen[{p.head.hash(), p.stack.hash()}].push_back(rep.trace.size());
    rep.trace.push_back(p);
    scan.scan(p);
  };
  remember(cur);
  for (std::uint64_t i = 0; i < budget; ++i) {
    try {
      StepOutcome out = step(cur);
      if (out.stuck()) {
        rep.status = ThreadStatus::Stuck;
        break;
      }
      cur = *out.next;
    } catch (const QuoteOverflowError&) {
      break;  // Ongoing: the thread outruns what we can materialize
    }
    std::optional<std::size_t> back;
    auto it = seen.find({cur.head.hash(), cur.stack.hash()});
    if (it != seen.end()) {
      for (std::size_t j : it->second) {
        if (rep.trace[j] == cur) {
          back = j;
          break;
        }
      }
    }
    if (back) {
      // same convention as the machine runner: the trace ends at the first
      // state equal to an earlier one
      rep.trace.push_back(cur);
      rep.status = ThreadStatus::Cyclic;
      rep.prefix_length = *back;
      rep.period = rep.trace.size() - 1 - *back;
      break;
    }
    remember(cur);
  }
  rep.constants_seen = scan.found();
  return rep;
}

Tri in_thread(const Process& p, std::uint64_t n, std::uint64_t budget) {
  ThreadReport rep = run_thread(n, budget);
  for (const Process& s : rep.trace) {
    if (s == p) return Tri::Yes;
  }
  return rep.complete() ? Tri::No : Tri::Unknown;
}

std::optional<std::uint32_t> locate_thread(const Process& p) {
  std::set<std::uint32_t> cs = constant_indices(p);
  if (cs.size() == 1) return *cs.begin();
  return std::nullopt;
}

CoherenceReport coherence_check(std::uint64_t n_threads, std::uint64_t budget) {
  CoherenceReport rep;
  for (std::uint64_t n = 0; n < n_threads; ++n) {
    Process origin{prooflike_enum(n), Stack::constant(static_cast<std::uint32_t>(n))};
    bool ok = in_thread(origin, n, budget) == Tri::Yes &&
              locate_thread(origin) == static_cast<std::uint32_t>(n);
    if (!ok) rep.failures.push_back(n);
    ++rep.checked;
  }
  return rep;
}

Pole make_thread_pole(std::uint64_t n_threads, std::uint64_t budget) {
  if (n_threads > 0xffffffffull) {
    throw std::invalid_argument("thread index exceeds the stack-constant range");
  }
  std::vector<Process> gens;
  gens.reserve(static_cast<std::size_t>(n_threads));
  for (std::uint64_t n = 0; n < n_threads; ++n) {
    gens.push_back(Process{prooflike_enum(n), Stack::constant(static_cast<std::uint32_t>(n))});
  }
  return Pole(std::move(gens), budget);
}

LoopDemoReport loop_argument_demo(const Term& alpha, const std::array<Term, 3>& zetas,
                                  const Stack& pi, std::uint64_t budget) {
  if (zetas[0] == zetas[1] || zetas[0] == zetas[2] || zetas[1] == zetas[2]) {
    throw std::invalid_argument("the three capture arguments must be pairwise distinct");
  }
  LoopDemoReport rep;
  Process target{alpha, pi};

  auto capture = [&](int i) {
    return Term::app(Term::app(Term::cont(pi), alpha), zetas[static_cast<std::size_t>(i)]);
  };
  rep.funnel_ok = true;
  for (int i = 0; i < 3; ++i) {
    Process p{capture(i), pi};
    static const char* const expect[] = {"push", "push", "k"};
    bool ok = true;
    for (int s = 0; s < 3 && ok; ++s) {
      StepOutcome out = step(p);
      ok = !out.stuck() && std::string_view(out.rule) == expect[s];
      if (ok) p = *out.next;
    }
    if (!ok || p != target) rep.funnel_ok = false;
  }

  RunReport r;
  try {
    r = run(target, budget);
  } catch (const QuoteOverflowError&) {
    rep.note = "quote materialization overflow while following the tail";
    return rep;
  }
  if (r.status == RunStatus::Cyclic && r.prefix_length == 0) {
    rep.applicable = true;
    rep.period = r.period;
  } else if (r.status == RunStatus::Cyclic) {
    rep.note = "the tail loops without revisiting its entry process";
  } else if (r.status == RunStatus::Stuck) {
    rep.note = "the tail halts, so there is no second appearance";
  } else {
    rep.note = "budget exhausted before a second appearance";
  }
  for (std::uint32_t i = 0; i < 3; ++i) {
    Term t = capture(static_cast<int>(i));
    for (const Process& s : r.trace) {
      if (s.head == t) {
        rep.heading.push_back(i);
        break;
      }
    }
  }
  rep.counterexample = rep.heading.size() == 3;
  return rep;
}

}  // namespace rz
