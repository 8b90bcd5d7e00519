#pragma once

#include <stdexcept>
#include <string>

namespace rz {

// Raised by the text-format readers (terms, formulas, derivations, universe
// and pole files). `what()` carries a byte offset where known.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a quote step would materialize a numeral larger than the
// configured cap. The step itself is well defined; the bound is a resource
// limit, like running out of memory, and is never hit by in-repo workloads.
struct QuoteOverflowError : std::runtime_error {
  explicit QuoteOverflowError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by the derivation checker on an ill-formed proof tree. Carries the
// path of rule names from the root to the offending node.
struct CheckError : std::runtime_error {
  explicit CheckError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised by semantic evaluation: free variables in a query formula, unknown
// propositional atoms, bad function-symbol arity, or an undecidable
// pole-dependent symbol.
struct SemanticsError : std::runtime_error {
  explicit SemanticsError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace rz
