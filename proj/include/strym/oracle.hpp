#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "strym/ir_eval.hpp"
#include "strym/pipeline_spec.hpp"

// Direct, unstaged reference semantics of the combinator language: plain
// pull streams over values, evaluated by their textbook list semantics.
// Ground truth for equivalence testing; allocates freely.
namespace strym::oracle {

enum class OracleErrorKind { BudgetExhausted, DivByZero, Unsupported };

struct OracleError : std::runtime_error {
  OracleErrorKind kind;
  OracleError(OracleErrorKind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

inline constexpr long long kDefaultBudget = 1'000'000;

struct OracleResult {
  ir::Value value;
  long long reduced_elements = 0;  // stream length seen by the reducer
};

OracleResult oracle_run(const pspec::PipelineSpec& spec,
                        const std::map<std::string, std::vector<long long>>& arrays,
                        long long budget = kDefaultBudget);

inline ir::Value oracle_eval(
    const pspec::PipelineSpec& spec,
    const std::map<std::string, std::vector<long long>>& arrays,
    long long budget = kDefaultBudget) {
  return oracle_run(spec, arrays, budget).value;
}

}  // namespace strym::oracle
