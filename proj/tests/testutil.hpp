#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "strym/bench.hpp"
#include "strym/ir_check.hpp"
#include "strym/ir_eval.hpp"
#include "strym/oracle.hpp"
#include "strym/pipeline_spec.hpp"

// Shared helpers: running programs against named inputs and the random
// pipeline grammar used by the property tests (nesting depth <= 3, at most
// 2 zips, arrays of length <= 32, constants in [-8, 8], every infinite
// source guarded by a take).
namespace testutil {

using strym::bench::Inputs;

inline std::vector<strym::ir::Value> input_values(
    const strym::ir::Program& prog, const Inputs& inputs) {
  std::vector<strym::ir::Value> vals;
  for (const auto& [name, ty] : prog.params) {
    (void)ty;
    vals.push_back(strym::ir::v_arr(inputs.at(name)));
  }
  return vals;
}

inline strym::ir::Value run_program(const strym::ir::Program& prog,
                                    const Inputs& inputs,
                                    long long fuel = 50'000'000) {
  return strym::ir::eval(prog, input_values(prog, inputs), fuel).value;
}

struct DiffOutcome {
  bool match = false;
  std::string generated;
  std::string oracle;
};

// Compiled-vs-oracle comparison; arithmetic errors must agree in kind.
inline DiffOutcome diff_spec(const strym::pspec::PipelineSpec& spec,
                             const Inputs& inputs,
                             long long fuel = 50'000'000,
                             long long budget = 4'000'000) {
  DiffOutcome out;
  strym::ir::Program prog = strym::pspec::compile_spec(spec);
  try {
    out.generated = strym::ir::value_to_string(run_program(prog, inputs, fuel));
  } catch (const strym::ir::EvalError& e) {
    out.generated = e.kind == strym::ir::EvalErrorKind::DivByZero
                        ? "div-by-zero"
                        : std::string("error:") + e.what();
  }
  try {
    out.oracle = strym::ir::value_to_string(
        strym::oracle::oracle_eval(spec, inputs, budget));
  } catch (const strym::oracle::OracleError& e) {
    out.oracle = e.kind == strym::oracle::OracleErrorKind::DivByZero
                     ? "div-by-zero"
                     : std::string("error:") + e.what();
  }
  out.match = out.generated == out.oracle;
  return out;
}

// ---------------------------------------------------------------------------
// Random pipelines

class RandomPipelines {
 public:
  explicit RandomPipelines(unsigned long long seed) : rng_(seed) {}

  strym::pspec::PipelineSpec top() {
    zip_budget_ = 2;
    bind_counter_ = 0;
    strym::pspec::PipelineSpec spec = pipe({}, 0);
    spec.reduce = reduce();
    return spec;
  }

  Inputs inputs() {
    Inputs in;
    in["arr1"] = array(32);
    in["arr2"] = array(8);
    in["arr3"] = array(4);
    in["arr4"] = array(4);
    return in;
  }

 private:
  using ExprNodePtr = strym::pspec::ExprNodePtr;

  long long ri(long long lo, long long hi) {
    return std::uniform_int_distribution<long long>(lo, hi)(rng_);
  }

  std::vector<long long> array(long long max_len) {
    std::vector<long long> v(static_cast<size_t>(ri(0, max_len)));
    for (auto& x : v) x = ri(-8, 8);
    return v;
  }

  ExprNodePtr node(std::string op, std::vector<ExprNodePtr> args = {}) {
    auto n = std::make_shared<strym::pspec::ExprNode>();
    n->op = std::move(op);
    n->args = std::move(args);
    return n;
  }
  ExprNodePtr lit(long long v) {
    auto n = std::make_shared<strym::pspec::ExprNode>();
    n->op = "lit";
    n->lit = v;
    return n;
  }
  ExprNodePtr var(const std::string& name) {
    auto n = std::make_shared<strym::pspec::ExprNode>();
    n->op = "var";
    n->var = name;
    return n;
  }

  ExprNodePtr int_expr(const std::vector<std::string>& vars, int depth) {
    if (depth <= 0 || ri(0, 2) == 0) {
      if (!vars.empty() && ri(0, 2) > 0)
        return var(vars[static_cast<size_t>(ri(0, static_cast<long long>(vars.size()) - 1))]);
      return lit(ri(-8, 8));
    }
    switch (ri(0, 5)) {
      case 0:
        return node("add", {int_expr(vars, depth - 1), int_expr(vars, depth - 1)});
      case 1:
        return node("sub", {int_expr(vars, depth - 1), int_expr(vars, depth - 1)});
      case 2:
        return node("mul", {int_expr(vars, depth - 1), int_expr(vars, depth - 1)});
      case 3:
        return node("min", {int_expr(vars, depth - 1), int_expr(vars, depth - 1)});
      case 4:
        // Nonzero literal divisor: arithmetic errors are exercised via the
        // shared-semantics grid test, not random pipelines.
        return node("div", {int_expr(vars, depth - 1), lit(ri(0, 1) ? ri(1, 8) : -ri(1, 8))});
      default:
        return node("mod", {int_expr(vars, depth - 1), lit(ri(0, 1) ? ri(1, 8) : -ri(1, 8))});
    }
  }

  ExprNodePtr bool_expr(const std::vector<std::string>& vars) {
    static const char* cmps[] = {"lt", "le", "eq", "gt", "ge"};
    ExprNodePtr base = node(cmps[ri(0, 4)], {int_expr(vars, 1), int_expr(vars, 1)});
    if (ri(0, 3) == 0) {
      ExprNodePtr other =
          node(cmps[ri(0, 4)], {int_expr(vars, 1), int_expr(vars, 1)});
      return node(ri(0, 1) ? "and" : "or", {base, other});
    }
    if (ri(0, 5) == 0) return node("not", {base});
    return base;
  }

  std::string array_for_depth(int depth) {
    long long lo = std::min<long long>(depth, 3);
    return "arr" + std::to_string(ri(lo, 3) + 1);
  }

  strym::pspec::Source source(const std::vector<std::string>& vars,
                              int depth) {
    strym::pspec::Source src;
    long long pick = ri(0, 3);
    if (pick <= 1) {
      src.kind = strym::pspec::Source::Kind::OfArr;
      src.param = array_for_depth(depth);
      return src;
    }
    if (pick == 2) {
      src.kind = strym::pspec::Source::Kind::Iota;
      src.iota_start = int_expr(vars, 1);
      return src;
    }
    src.kind = strym::pspec::Source::Kind::Unfold;
    if (ri(0, 9) == 0) {
      src.unfold_step = node("none");
    } else {
      std::vector<std::string> step_vars = vars;
      step_vars.push_back("s");
      src.unfold_step =
          node("some_pair", {int_expr(step_vars, 1), int_expr(step_vars, 1)});
    }
    src.unfold_seed = int_expr(vars, 1);
    return src;
  }

  bool infinite(const strym::pspec::Source& src) {
    using K = strym::pspec::Source::Kind;
    if (src.kind == K::OfArr) return false;
    if (src.kind == K::Iota) return true;
    return src.unfold_step->op != "none";
  }

  strym::pspec::PipelineSpec pipe(std::vector<std::string> vars, int depth) {
    strym::pspec::PipelineSpec spec;
    spec.source = source(vars, depth);
    long long take_cap = depth == 0 ? 40 : 8;
    long long n_ops = ri(0, 3);
    bool used_flat_map = false;
    for (long long i = 0; i < n_ops; ++i) {
      strym::pspec::OpStep op;
      switch (ri(0, 4)) {
        case 0: {
          op.kind = strym::pspec::OpStep::Kind::Map;
          std::vector<std::string> v2 = vars;
          v2.push_back("x");
          op.expr = int_expr(v2, 2);
          break;
        }
        case 1: {
          op.kind = strym::pspec::OpStep::Kind::Filter;
          std::vector<std::string> v2 = vars;
          v2.push_back("x");
          op.expr = bool_expr(v2);
          break;
        }
        case 2: {
          op.kind = strym::pspec::OpStep::Kind::Take;
          // Occasionally degenerate (zero or negative).
          op.take_n = ri(0, 9) == 0 ? ri(-2, 0) : ri(0, take_cap);
          break;
        }
        case 3: {
          if (used_flat_map || depth >= 3) continue;
          used_flat_map = true;
          op.kind = strym::pspec::OpStep::Kind::FlatMap;
          op.bind = "b" + std::to_string(++bind_counter_);
          std::vector<std::string> v2 = vars;
          v2.push_back(op.bind);
          op.pipe = std::make_shared<const strym::pspec::PipelineSpec>(
              pipe(v2, depth + 1));
          break;
        }
        default: {
          if (zip_budget_ <= 0 || depth >= 3) continue;
          --zip_budget_;
          op.kind = strym::pspec::OpStep::Kind::ZipWith;
          op.expr = int_expr({"e1", "e2"}, 2);
          op.pipe = std::make_shared<const strym::pspec::PipelineSpec>(
              pipe(vars, depth + 1));
          break;
        }
      }
      spec.ops.push_back(std::move(op));
    }
    if (infinite(spec.source)) {
      bool has_take = false;
      for (const auto& op : spec.ops)
        has_take = has_take || op.kind == strym::pspec::OpStep::Kind::Take;
      if (!has_take) {
        strym::pspec::OpStep op;
        op.kind = strym::pspec::OpStep::Kind::Take;
        op.take_n = ri(0, take_cap);
        size_t pos = static_cast<size_t>(
            ri(0, static_cast<long long>(spec.ops.size())));
        spec.ops.insert(spec.ops.begin() + static_cast<long>(pos), op);
      }
    }
    return spec;
  }

  strym::pspec::Reduce reduce() {
    strym::pspec::Reduce r;
    switch (ri(0, 3)) {
      case 0:
      case 1:
        r.kind = strym::pspec::Reduce::Kind::Sum;
        break;
      case 2:
        r.kind = strym::pspec::Reduce::Kind::Fold;
        r.fold_op = int_expr({"z", "a"}, 2);
        r.fold_seed = ri(-8, 8);
        break;
      default:
        r.kind = strym::pspec::Reduce::Kind::FoldCons;
        break;
    }
    return r;
  }

  std::mt19937_64 rng_;
  int zip_budget_ = 2;
  int bind_counter_ = 0;
};

}  // namespace testutil
