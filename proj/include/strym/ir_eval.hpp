#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "strym/ir.hpp"

namespace strym::ir {

// ---------------------------------------------------------------------------
// Runtime values

struct Value;
struct ValuePair;
struct ListNode;
struct ProcClosure;

struct Value {
  enum class K { Int, Bool, Unit, Arr, Pair, List, Some, None, Proc };
  K k = K::Unit;
  long long i = 0;  // Int payload, Bool as 0/1
  std::shared_ptr<const std::vector<long long>> arr;
  std::shared_ptr<const ValuePair> pair;
  std::shared_ptr<const ListNode> list;  // null list ptr with k==List is nil
  std::shared_ptr<const Value> some;
  std::shared_ptr<const ProcClosure> proc;
};

struct ValuePair {
  Value a, b;
};
struct ListNode {
  Value head;
  std::shared_ptr<const ListNode> tail;
};

Value v_int(long long v);
Value v_bool(bool v);
Value v_unit();
Value v_arr(std::vector<long long> elems);
Value v_pair(Value a, Value b);
Value v_nil();
Value v_cons(Value head, const Value& tail);
Value v_some(Value payload);
Value v_none();

bool value_equal(const Value& a, const Value& b);
std::string value_to_string(const Value& v);

// ---------------------------------------------------------------------------
// Instrumentation

struct Counters {
  // Every Stmt/Expr node visit (loop iterations revisit their body); the
  // fuel bound applies to this count.
  long long steps = 0;
  // Operation count excluding pure naming: Let binders, Var and literal
  // leaves, and Seq/Skip glue are free. This is the machine-cost proxy the
  // benchmark ratios use.
  long long work = 0;
  long long allocs = 0;
  long long allocs_user = 0;
  // Non-user allocations observed after the first iteration of a
  // top-level loop has begun (init-time set-up is exempt).
  long long steady_allocs_nonuser = 0;
  // Writes to the program's result cell (one per consumed element for
  // folded pipelines).
  long long result_cell_sets = 0;
};

enum class EvalErrorKind {
  FuelExhausted,
  DivByZero,
  OutOfBounds,
  BadInput,
  Internal,
};

struct EvalError : std::runtime_error {
  EvalErrorKind kind;
  EvalError(EvalErrorKind k, const std::string& msg)
      : std::runtime_error(msg), kind(k) {}
};

struct EvalResult {
  Value value;
  Counters counters;
};

inline constexpr long long kDefaultFuel = 100'000'000;

// Big-step evaluation of a checked program. Deterministic; one evaluator
// instance per call, so concurrent evaluations need separate calls only.
EvalResult eval(const Program& p, const std::vector<Value>& inputs,
                long long fuel = kDefaultFuel);

}  // namespace strym::ir
