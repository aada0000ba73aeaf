#include "strym/oracle.hpp"

#include <functional>
#include <memory>
#include <optional>

#include "strym/arith.hpp"

namespace strym::oracle {

using ir::Value;
using pspec::ExprNodePtr;
using pspec::OpStep;
using pspec::PipelineSpec;
using pspec::Source;

namespace {

struct Budget {
  long long remaining;
  void spend() {
    if (--remaining < 0)
      throw OracleError(OracleErrorKind::BudgetExhausted,
                        "oracle element budget exhausted");
  }
};
using BudgetPtr = std::shared_ptr<Budget>;

using Env = std::map<std::string, Value>;

long long as_int(const Value& v) {
  if (v.k != Value::K::Int)
    throw OracleError(OracleErrorKind::Unsupported, "expected int");
  return v.i;
}
bool as_bool(const Value& v) {
  if (v.k != Value::K::Bool)
    throw OracleError(OracleErrorKind::Unsupported, "expected bool");
  return v.i != 0;
}

Value eval_expr(const ExprNodePtr& e, const Env& env) {
  const std::string& op = e->op;
  if (op == "lit") return ir::v_int(e->lit);
  if (op == "var") {
    auto it = env.find(e->var);
    if (it == env.end())
      throw OracleError(OracleErrorKind::Unsupported,
                        "unknown variable " + e->var);
    return it->second;
  }
  if (op == "nil") return ir::v_nil();
  if (op == "none") return ir::v_none();
  if (op == "not") return ir::v_bool(!as_bool(eval_expr(e->args[0], env)));
  if (op == "some") return ir::v_some(eval_expr(e->args[0], env));
  if (op == "and") {
    if (!as_bool(eval_expr(e->args[0], env))) return ir::v_bool(false);
    return ir::v_bool(as_bool(eval_expr(e->args[1], env)));
  }
  if (op == "or") {
    if (as_bool(eval_expr(e->args[0], env))) return ir::v_bool(true);
    return ir::v_bool(as_bool(eval_expr(e->args[1], env)));
  }
  Value a = eval_expr(e->args[0], env);
  Value b = eval_expr(e->args[1], env);
  if (op == "pair") return ir::v_pair(std::move(a), std::move(b));
  if (op == "cons") {
    if (b.k != Value::K::List)
      throw OracleError(OracleErrorKind::Unsupported, "cons onto non-list");
    return ir::v_cons(std::move(a), b);
  }
  if (op == "some_pair")
    return ir::v_some(ir::v_pair(std::move(a), std::move(b)));
  long long x = as_int(a), y = as_int(b);
  try {
    if (op == "add") return ir::v_int(arith::add(x, y));
    if (op == "sub") return ir::v_int(arith::sub(x, y));
    if (op == "mul") return ir::v_int(arith::mul(x, y));
    if (op == "div") return ir::v_int(arith::div_trunc(x, y));
    if (op == "mod") return ir::v_int(arith::mod_trunc(x, y));
    if (op == "min") return ir::v_int(arith::min2(x, y));
  } catch (const arith::DivByZero&) {
    throw OracleError(OracleErrorKind::DivByZero, "division by zero");
  }
  if (op == "lt") return ir::v_bool(x < y);
  if (op == "le") return ir::v_bool(x <= y);
  if (op == "eq") return ir::v_bool(x == y);
  if (op == "gt") return ir::v_bool(x > y);
  if (op == "ge") return ir::v_bool(x >= y);
  throw OracleError(OracleErrorKind::Unsupported, "bad op " + op);
}

// A pull stream of values; next() yields the next element or nothing.
struct OStream {
  std::function<std::optional<Value>()> next;
};

using Arrays = std::map<std::string, std::vector<long long>>;

OStream build_stream(const PipelineSpec& spec, const Env& env,
                     const Arrays& arrays, const BudgetPtr& budget);

OStream build_source(const Source& src, const Env& env, const Arrays& arrays,
                     const BudgetPtr& budget) {
  switch (src.kind) {
    case Source::Kind::OfArr: {
      auto it = arrays.find(src.param);
      if (it == arrays.end())
        throw OracleError(OracleErrorKind::Unsupported,
                          "missing input array " + src.param);
      auto data = std::make_shared<const std::vector<long long>>(it->second);
      auto idx = std::make_shared<size_t>(0);
      auto b = budget;
      return {[data, idx, b]() -> std::optional<Value> {
        if (*idx >= data->size()) return std::nullopt;
        b->spend();
        return ir::v_int((*data)[(*idx)++]);
      }};
    }
    case Source::Kind::Iota: {
      auto n = std::make_shared<long long>(as_int(eval_expr(src.iota_start, env)));
      auto b = budget;
      return {[n, b]() -> std::optional<Value> {
        b->spend();
        long long v = *n;
        *n = arith::add(*n, 1);
        return ir::v_int(v);
      }};
    }
    case Source::Kind::Unfold: {
      // State mirrors the staged encoding: option of (element, next seed),
      // primed with the step applied to the seed.
      ExprNodePtr step = src.unfold_step;
      Env base = env;
      auto apply_step = [step, base](long long s) {
        Env e2 = base;
        e2["s"] = ir::v_int(s);
        return eval_expr(step, e2);
      };
      auto cur = std::make_shared<Value>(
          apply_step(as_int(eval_expr(src.unfold_seed, env))));
      auto b = budget;
      return {[cur, apply_step, b]() -> std::optional<Value> {
        if (cur->k == Value::K::None) return std::nullopt;
        if (cur->k != Value::K::Some || cur->some->k != Value::K::Pair)
          throw OracleError(OracleErrorKind::Unsupported,
                            "unfold step must yield Some(elem, seed) or None");
        b->spend();
        Value el = cur->some->pair->a;
        long long next_seed = as_int(cur->some->pair->b);
        *cur = apply_step(next_seed);
        return el;
      }};
    }
  }
  throw OracleError(OracleErrorKind::Unsupported, "bad source");
}

OStream build_stream(const PipelineSpec& spec, const Env& env,
                     const Arrays& arrays, const BudgetPtr& budget) {
  OStream s = build_source(spec.source, env, arrays, budget);
  for (const auto& op : spec.ops) {
    switch (op.kind) {
      case OpStep::Kind::Map: {
        ExprNodePtr body = op.expr;
        Env base = env;
        OStream src = s;
        s = {[src, body, base]() -> std::optional<Value> {
          auto v = src.next();
          if (!v) return std::nullopt;
          Env e2 = base;
          e2["x"] = *v;
          return eval_expr(body, e2);
        }};
        break;
      }
      case OpStep::Kind::Filter: {
        ExprNodePtr body = op.expr;
        Env base = env;
        OStream src = s;
        s = {[src, body, base]() -> std::optional<Value> {
          for (;;) {
            auto v = src.next();
            if (!v) return std::nullopt;
            Env e2 = base;
            e2["x"] = *v;
            if (as_bool(eval_expr(body, e2))) return v;
          }
        }};
        break;
      }
      case OpStep::Kind::Take: {
        auto left = std::make_shared<long long>(op.take_n);
        OStream src = s;
        s = {[src, left]() -> std::optional<Value> {
          if (*left <= 0) return std::nullopt;
          auto v = src.next();
          if (!v) return std::nullopt;
          --*left;
          return v;
        }};
        break;
      }
      case OpStep::Kind::FlatMap: {
        pspec::SpecPtr pipe = op.pipe;
        std::string bind = op.bind;
        Env base = env;
        OStream outer = s;
        auto inner = std::make_shared<std::optional<OStream>>();
        auto arrs = arrays;
        auto b = budget;
        s = {[outer, inner, pipe, bind, base, arrs, b]()
                 -> std::optional<Value> {
          for (;;) {
            if (*inner) {
              auto v = (*inner)->next();
              if (v) return v;
              inner->reset();
            }
            auto o = outer.next();
            if (!o) return std::nullopt;
            Env e2 = base;
            e2[bind] = *o;
            *inner = build_stream(*pipe, e2, arrs, b);
          }
        }};
        break;
      }
      case OpStep::Kind::ZipWith: {
        OStream other = build_stream(*op.pipe, env, arrays, budget);
        ExprNodePtr f = op.expr;
        Env base = env;
        OStream src = s;
        s = {[src, other, f, base]() -> std::optional<Value> {
          auto a = src.next();
          if (!a) return std::nullopt;
          auto b = other.next();
          if (!b) return std::nullopt;
          Env e2 = base;
          e2["e1"] = *a;
          e2["e2"] = *b;
          return eval_expr(f, e2);
        }};
        break;
      }
    }
  }
  return s;
}

}  // namespace

OracleResult oracle_run(const PipelineSpec& spec,
                        const std::map<std::string, std::vector<long long>>& arrays,
                        long long budget) {
  if (!spec.reduce)
    throw OracleError(OracleErrorKind::Unsupported,
                      "top-level pipeline needs a reduce");
  auto b = std::make_shared<Budget>(Budget{budget});
  OStream s = build_stream(spec, Env{}, arrays, b);
  OracleResult out;
  switch (spec.reduce->kind) {
    case pspec::Reduce::Kind::Sum: {
      long long acc = 0;
      while (auto v = s.next()) {
        acc = arith::add(acc, as_int(*v));
        ++out.reduced_elements;
      }
      out.value = ir::v_int(acc);
      return out;
    }
    case pspec::Reduce::Kind::Fold: {
      Value acc = ir::v_int(spec.reduce->fold_seed);
      ExprNodePtr f = spec.reduce->fold_op;
      while (auto v = s.next()) {
        Env env;
        env["z"] = acc;
        env["a"] = *v;
        acc = eval_expr(f, env);
        ++out.reduced_elements;
      }
      out.value = acc;
      return out;
    }
    case pspec::Reduce::Kind::FoldCons: {
      Value acc = ir::v_nil();
      while (auto v = s.next()) {
        acc = ir::v_cons(*v, acc);
        ++out.reduced_elements;
      }
      out.value = acc;
      return out;
    }
  }
  throw OracleError(OracleErrorKind::Unsupported, "bad reduce");
}

}  // namespace strym::oracle
