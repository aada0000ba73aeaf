#pragma once

#include <stdexcept>
#include <string>

#include "strym/ir.hpp"

namespace strym::ir {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses the textual rendering produced by print(). Inverse of print on
// canonical (generated) trees, up to user tags.
Program parse_program(const std::string& text);
ExprPtr parse_expr_text(const std::string& text);

}  // namespace strym::ir
