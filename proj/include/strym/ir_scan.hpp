#pragma once

#include <string>
#include <vector>

#include "strym/ir.hpp"

namespace strym::ir {

struct AllocSite {
  std::string node;  // "Pair", "Cons", "Some", "SomePair", "ProcDef"
  std::string path;
};

struct AllocReport {
  // Allocation nodes syntactically inside a For/While body (or a While
  // condition, which re-evaluates per iteration), excluding user-tagged
  // nodes.
  long long loop_allocs_nonuser = 0;
  std::vector<AllocSite> locations;
};

// Static check behind the no-allocation guarantee: sound for this IR
// because the only dynamic dispatch is ProcCall of statically named or
// statically stored procedures.
AllocReport alloc_scan(const Program& p);

}  // namespace strym::ir
