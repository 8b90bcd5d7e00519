#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rz/machine.hpp"
#include "rz/term.hpp"

namespace rz {

// One machine-replayable reduction claim: starting the machine on `initial`
// reaches the state `expected` within `budget` steps.
struct Contract {
  std::string description;
  Process initial;
  Process expected;
  std::uint64_t budget = 0;
};

// A named closed term together with the reduction contracts that pin its
// behaviour. `source` is the lambda text the term was compiled from;
// identifiers in it that are not machine constants (sigma, zero, omega, ...)
// were resolved against earlier entries or numerals before conversion, so the
// registered term is always closed.
struct CatalogueEntry {
  std::string name;
  std::string source;
  Term term;
  std::vector<Contract> contracts;
};

// Registered names, in registration order.
const std::vector<std::string>& catalogue_names();

// Lookup by name. Throws std::out_of_range naming the entry when it is not
// registered.
const CatalogueEntry& get(const std::string& name);

struct ContractOutcome {
  std::string description;
  std::uint64_t budget = 0;  // budget the replay actually used
  bool passed = false;
};

struct CatalogueReport {
  std::string name;
  bool all_passed = false;
  std::vector<ContractOutcome> outcomes;
};

// Replays every contract of the named entry on the machine. A nonzero
// budget_override replaces each contract's declared budget.
CatalogueReport run_contracts(const std::string& name,
                              std::uint64_t budget_override = 0);

}  // namespace rz
