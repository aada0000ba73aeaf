#pragma once

#include <string>

#include "strym/ir.hpp"

namespace strym::ir {

// Deterministic textual rendering. Binder statements (let/var/proc/for) are
// printed flat: their body is the rest of the enclosing block, which is how
// generated programs are structured. print(parse(print(p))) == print(p).
std::string print(const ExprPtr& e);
std::string print(const StmtPtr& s, int indent = 0);
std::string print(const Program& p);

}  // namespace strym::ir
