#pragma once

#include <string>
#include <vector>

#include "strym/ir.hpp"

namespace strym::ir {

struct ScopeViolation {
  std::string name;
  std::string reason;  // unbound / wrong-kind / duplicate-binder / bad-result
  std::string path;
};

struct ScopeReport {
  std::vector<ScopeViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Every Var/CellGet/CellSet/ProcCall must be bound by a dominating binder of
// the right kind; binder names must be globally unique (gensym discipline);
// the result cell must scope over the end of the program.
ScopeReport scope_check(const Program& p);

struct TypeCheckResult {
  bool ok = true;
  std::string message;
  std::string path;
};

// Monomorphic checking over Ty. Requires a scope-correct program.
TypeCheckResult type_check(const Program& p);

}  // namespace strym::ir
