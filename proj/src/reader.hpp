#pragma once

// Node-level readers shared by the parenthesized-record parsers. Internal to
// the library; the public entry points live in the individual headers.

#include "rz/formula.hpp"
#include "sexpr.hpp"

namespace rz::detail {

SetTerm set_term_from_node(const sx::Node& n);
Formula formula_from_node(const sx::Node& n);
bool valid_var_name(std::string_view n);

}  // namespace rz::detail
