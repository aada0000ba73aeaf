#include "strym/pipeline_spec.hpp"

#include <map>
#include <set>

#include <json.hpp>

#include "strym/api.hpp"
#include "strym/staged.hpp"

namespace strym::pspec {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Expression parsing

namespace {

const std::set<std::string>& known_ops() {
  static const std::set<std::string> ops = {
      "add", "sub", "mul", "div", "mod", "min", "lt",   "le",
      "eq",  "gt",  "ge",  "and", "or",  "not", "pair", "cons",
      "nil", "some", "none", "some_pair", "var", "lit"};
  return ops;
}

size_t op_arity(const std::string& op) {
  if (op == "not" || op == "some") return 1;
  if (op == "nil" || op == "none") return 0;
  return 2;
}

ExprNodePtr parse_expr(const json& j, const std::string& path) {
  auto node = std::make_shared<ExprNode>();
  if (j.is_number_integer()) {
    node->op = "lit";
    node->lit = j.get<long long>();
    return node;
  }
  if (!j.is_array() || j.empty() || !j[0].is_string())
    throw SpecError("expression must be a number or [op, args...]", path);
  std::string op = j[0].get<std::string>();
  if (!known_ops().count(op))
    throw SpecError("unknown expression op '" + op + "'", path);
  node->op = op;
  if (op == "var") {
    if (j.size() != 2 || !j[1].is_string())
      throw SpecError("var expects one name", path);
    node->var = j[1].get<std::string>();
    return node;
  }
  if (op == "lit") {
    if (j.size() != 2 || !j[1].is_number_integer())
      throw SpecError("lit expects one integer", path);
    node->lit = j[1].get<long long>();
    return node;
  }
  size_t arity = op_arity(op);
  if (j.size() != arity + 1)
    throw SpecError("op '" + op + "' expects " + std::to_string(arity) +
                        " argument(s), got " + std::to_string(j.size() - 1),
                    path);
  for (size_t i = 1; i < j.size(); ++i) {
    node->args.push_back(
        parse_expr(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return node;
}

json expr_to_json(const ExprNodePtr& e) {
  if (e->op == "lit") return json(e->lit);
  json out = json::array();
  out.push_back(e->op);
  if (e->op == "var") {
    out.push_back(e->var);
    return out;
  }
  for (const auto& a : e->args) out.push_back(expr_to_json(a));
  return out;
}

// ---------------------------------------------------------------------------
// Spec parsing

PipelineSpec parse_pipe(const json& j, const std::string& path,
                        bool allow_reduce, std::vector<std::string>& warnings,
                        const ParseOptions& opts);

Source parse_source(const json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1)
    throw SpecError("source must be an object with one key", path);
  Source src;
  if (j.contains("of_arr")) {
    if (!j["of_arr"].is_string())
      throw SpecError("of_arr expects a parameter name", path + ".of_arr");
    src.kind = Source::Kind::OfArr;
    src.param = j["of_arr"].get<std::string>();
    return src;
  }
  if (j.contains("iota")) {
    src.kind = Source::Kind::Iota;
    src.iota_start = parse_expr(j["iota"], path + ".iota");
    return src;
  }
  if (j.contains("unfold")) {
    const json& u = j["unfold"];
    if (!u.is_object() || !u.contains("step") || !u.contains("seed"))
      throw SpecError("unfold expects {step, seed}", path + ".unfold");
    src.kind = Source::Kind::Unfold;
    src.unfold_step = parse_expr(u["step"], path + ".unfold.step");
    src.unfold_seed = parse_expr(u["seed"], path + ".unfold.seed");
    return src;
  }
  throw SpecError("unknown source kind", path);
}

OpStep parse_op(const json& j, const std::string& path,
                std::vector<std::string>& warnings,
                const ParseOptions& opts) {
  if (!j.is_object() || j.size() != 1)
    throw SpecError("op must be an object with one key", path);
  OpStep op;
  if (j.contains("map")) {
    op.kind = OpStep::Kind::Map;
    op.expr = parse_expr(j["map"], path + ".map");
    return op;
  }
  if (j.contains("filter")) {
    op.kind = OpStep::Kind::Filter;
    op.expr = parse_expr(j["filter"], path + ".filter");
    return op;
  }
  if (j.contains("take")) {
    if (!j["take"].is_number_integer())
      throw SpecError("take expects an integer", path + ".take");
    op.kind = OpStep::Kind::Take;
    op.take_n = j["take"].get<long long>();
    return op;
  }
  if (j.contains("flat_map")) {
    const json& f = j["flat_map"];
    if (!f.is_object() || !f.contains("bind") || !f.contains("pipe") ||
        !f["bind"].is_string())
      throw SpecError("flat_map expects {bind, pipe}", path + ".flat_map");
    op.kind = OpStep::Kind::FlatMap;
    op.bind = f["bind"].get<std::string>();
    op.pipe = std::make_shared<const PipelineSpec>(parse_pipe(
        f["pipe"], path + ".flat_map.pipe", false, warnings, opts));
    return op;
  }
  if (j.contains("zip_with")) {
    const json& z = j["zip_with"];
    if (!z.is_object() || !z.contains("f") || !z.contains("with"))
      throw SpecError("zip_with expects {f, with}", path + ".zip_with");
    op.kind = OpStep::Kind::ZipWith;
    op.expr = parse_expr(z["f"], path + ".zip_with.f");
    op.pipe = std::make_shared<const PipelineSpec>(parse_pipe(
        z["with"], path + ".zip_with.with", false, warnings, opts));
    return op;
  }
  for (auto it = j.begin(); it != j.end(); ++it)
    throw SpecError("unknown op '" + it.key() + "'", path);
  throw SpecError("empty op", path);
}

Reduce parse_reduce(const json& j, const std::string& path) {
  Reduce r;
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "sum") {
      r.kind = Reduce::Kind::Sum;
      return r;
    }
    if (s == "fold_cons") {
      r.kind = Reduce::Kind::FoldCons;
      return r;
    }
    throw SpecError("unknown reduce '" + s + "'", path);
  }
  if (j.is_object() && j.contains("fold")) {
    const json& f = j["fold"];
    if (!f.is_object() || !f.contains("op") || !f.contains("seed") ||
        !f["seed"].is_number_integer())
      throw SpecError("fold expects {op, seed}", path + ".fold");
    r.kind = Reduce::Kind::Fold;
    r.fold_op = parse_expr(f["op"], path + ".fold.op");
    r.fold_seed = f["seed"].get<long long>();
    return r;
  }
  throw SpecError("unknown reduce form", path);
}

// An iota source is always infinite; an unfold is infinite unless its step
// is the immediate None.
bool source_infinite(const Source& src) {
  switch (src.kind) {
    case Source::Kind::OfArr:
      return false;
    case Source::Kind::Iota:
      return true;
    case Source::Kind::Unfold:
      return !(src.unfold_step && src.unfold_step->op == "none");
  }
  return false;
}

PipelineSpec parse_pipe(const json& j, const std::string& path,
                        bool allow_reduce, std::vector<std::string>& warnings,
                        const ParseOptions& opts) {
  if (!j.is_object()) throw SpecError("pipeline must be an object", path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "source" && it.key() != "ops" && it.key() != "reduce")
      throw SpecError("unknown key '" + it.key() + "'", path);
  }
  if (!j.contains("source")) throw SpecError("missing source", path);
  PipelineSpec spec;
  spec.source = parse_source(j["source"], path + ".source");
  if (j.contains("ops")) {
    if (!j["ops"].is_array()) throw SpecError("ops must be a list", path);
    for (size_t i = 0; i < j["ops"].size(); ++i) {
      spec.ops.push_back(parse_op(
          j["ops"][i], path + ".ops[" + std::to_string(i) + "]", warnings,
          opts));
    }
  }
  if (j.contains("reduce")) {
    if (!allow_reduce)
      throw SpecError("embedded pipelines cannot reduce", path + ".reduce");
    spec.reduce = parse_reduce(j["reduce"], path + ".reduce");
  } else if (allow_reduce) {
    throw SpecError("missing reduce", path);
  }
  // Every infinite source must be dominated by a take in its own chain.
  if (source_infinite(spec.source)) {
    bool taken = false;
    for (const auto& op : spec.ops) {
      if (op.kind == OpStep::Kind::Take) taken = true;
    }
    if (!taken) {
      std::string msg = "infinite source without take (at " + path + ")";
      if (opts.strict) throw SpecError("infinite source without take", path);
      warnings.push_back(msg);
    }
  }
  return spec;
}

json source_to_json(const Source& src) {
  json j = json::object();
  switch (src.kind) {
    case Source::Kind::OfArr:
      j["of_arr"] = src.param;
      break;
    case Source::Kind::Iota:
      j["iota"] = expr_to_json(src.iota_start);
      break;
    case Source::Kind::Unfold:
      j["unfold"] = {{"step", expr_to_json(src.unfold_step)},
                     {"seed", expr_to_json(src.unfold_seed)}};
      break;
  }
  return j;
}

json pipe_to_json(const PipelineSpec& spec) {
  json j = json::object();
  j["source"] = source_to_json(spec.source);
  json ops = json::array();
  for (const auto& op : spec.ops) {
    switch (op.kind) {
      case OpStep::Kind::Map:
        ops.push_back({{"map", expr_to_json(op.expr)}});
        break;
      case OpStep::Kind::Filter:
        ops.push_back({{"filter", expr_to_json(op.expr)}});
        break;
      case OpStep::Kind::Take:
        ops.push_back({{"take", op.take_n}});
        break;
      case OpStep::Kind::FlatMap:
        ops.push_back(
            {{"flat_map",
              {{"bind", op.bind}, {"pipe", pipe_to_json(*op.pipe)}}}});
        break;
      case OpStep::Kind::ZipWith:
        ops.push_back({{"zip_with",
                        {{"f", expr_to_json(op.expr)},
                         {"with", pipe_to_json(*op.pipe)}}}});
        break;
    }
  }
  if (!ops.empty()) j["ops"] = ops;
  if (spec.reduce) {
    switch (spec.reduce->kind) {
      case Reduce::Kind::Sum:
        j["reduce"] = "sum";
        break;
      case Reduce::Kind::FoldCons:
        j["reduce"] = "fold_cons";
        break;
      case Reduce::Kind::Fold:
        j["reduce"] = {{"fold",
                        {{"op", expr_to_json(spec.reduce->fold_op)},
                         {"seed", spec.reduce->fold_seed}}}};
        break;
    }
  }
  return j;
}

}  // namespace

ParsedSpec parse_spec(const std::string& json_text, const ParseOptions& opts) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw SpecError(std::string("bad JSON: ") + err.what(), "$");
  }
  ParsedSpec out;
  out.spec = parse_pipe(j, "$", true, out.warnings, opts);
  return out;
}

std::string serialize_spec(const PipelineSpec& spec) {
  return pipe_to_json(spec).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Parameters

namespace {
void collect_params(const PipelineSpec& spec, std::vector<std::string>& out) {
  if (spec.source.kind == Source::Kind::OfArr) {
    bool seen = false;
    for (const auto& p : out) seen = seen || p == spec.source.param;
    if (!seen) out.push_back(spec.source.param);
  }
  for (const auto& op : spec.ops) {
    if (op.pipe) collect_params(*op.pipe, out);
  }
}
}  // namespace

std::vector<std::string> spec_params(const PipelineSpec& spec) {
  std::vector<std::string> out;
  collect_params(spec, out);
  return out;
}

// ---------------------------------------------------------------------------
// Compilation through the combinator API

namespace {

using staged::Code;
using staged::CodeBool;
using staged::CodeInt;

using Env = std::map<std::string, Code>;

Code compile_expr(const ExprNodePtr& e, const Env& env) {
  const std::string& op = e->op;
  if (op == "lit") return staged::as_code(staged::lit(e->lit));
  if (op == "var") {
    auto it = env.find(e->var);
    if (it == env.end())
      throw SpecError("unknown variable '" + e->var + "'", "compile");
    return it->second;
  }
  if (op == "nil") return staged::nilE();
  if (op == "none") return staged::noneE();
  if (op == "not")
    return staged::as_code(
        staged::not_(CodeBool{compile_expr(e->args[0], env).e}));
  if (op == "some") return staged::someE(compile_expr(e->args[0], env));
  Code a = compile_expr(e->args[0], env);
  Code b = compile_expr(e->args[1], env);
  CodeInt ai{a.e}, bi{b.e};
  if (op == "add") return staged::as_code(staged::add(ai, bi));
  if (op == "sub") return staged::as_code(staged::sub(ai, bi));
  if (op == "mul") return staged::as_code(staged::mul(ai, bi));
  if (op == "div") return staged::as_code(staged::div_(ai, bi));
  if (op == "mod") return staged::as_code(staged::mod_(ai, bi));
  if (op == "min") return staged::as_code(staged::min_(ai, bi));
  if (op == "lt") return staged::as_code(staged::lt(ai, bi));
  if (op == "le") return staged::as_code(staged::le(ai, bi));
  if (op == "eq") return staged::as_code(staged::eq(ai, bi));
  if (op == "gt") return staged::as_code(staged::gt(ai, bi));
  if (op == "ge") return staged::as_code(staged::ge(ai, bi));
  if (op == "and")
    return staged::as_code(staged::and_(CodeBool{a.e}, CodeBool{b.e}));
  if (op == "or")
    return staged::as_code(staged::or_(CodeBool{a.e}, CodeBool{b.e}));
  if (op == "pair") return staged::pairE(a, b);
  if (op == "cons") return staged::consE(a, b);
  if (op == "some_pair") return staged::somePairE(a, b);
  throw SpecError("unknown expression op '" + op + "'", "compile");
}

api::Pipeline build_pipe(const api::SessionPtr& session,
                         const PipelineSpec& spec, const Env& env,
                         const std::map<std::string, staged::CodeArr>& arrays);

api::Pipeline build_source(const api::SessionPtr& session, const Source& src,
                           const Env& env,
                           const std::map<std::string, staged::CodeArr>& arrays) {
  switch (src.kind) {
    case Source::Kind::OfArr:
      return api::of_arr(session, arrays.at(src.param));
    case Source::Kind::Iota:
      return api::iota(session,
                       CodeInt{compile_expr(src.iota_start, env).e});
    case Source::Kind::Unfold: {
      ExprNodePtr step = src.unfold_step;
      Env base = env;
      return api::unfold(
          session,
          [step, base](CodeInt s) {
            Env e2 = base;
            e2["s"] = staged::as_code(s);
            return compile_expr(step, e2);
          },
          CodeInt{compile_expr(src.unfold_seed, env).e});
    }
  }
  throw SpecError("bad source", "compile");
}

api::Pipeline build_pipe(const api::SessionPtr& session,
                         const PipelineSpec& spec, const Env& env,
                         const std::map<std::string, staged::CodeArr>& arrays) {
  api::Pipeline p = build_source(session, spec.source, env, arrays);
  for (const auto& op : spec.ops) {
    switch (op.kind) {
      case OpStep::Kind::Map: {
        ExprNodePtr body = op.expr;
        Env base = env;
        p = api::map(
            [body, base](CodeInt x) {
              Env e2 = base;
              e2["x"] = staged::as_code(x);
              return CodeInt{compile_expr(body, e2).e};
            },
            std::move(p));
        break;
      }
      case OpStep::Kind::Filter: {
        ExprNodePtr body = op.expr;
        Env base = env;
        p = api::filter(
            [body, base](CodeInt x) {
              Env e2 = base;
              e2["x"] = staged::as_code(x);
              return CodeBool{compile_expr(body, e2).e};
            },
            std::move(p));
        break;
      }
      case OpStep::Kind::Take:
        p = api::take(staged::lit(op.take_n), std::move(p));
        break;
      case OpStep::Kind::FlatMap: {
        SpecPtr pipe = op.pipe;
        std::string bind = op.bind;
        Env base = env;
        auto arrs = arrays;
        p = api::flat_map(
            [session, pipe, bind, base, arrs](CodeInt x) {
              Env e2 = base;
              e2[bind] = staged::as_code(x);
              return build_pipe(session, *pipe, e2, arrs);
            },
            std::move(p));
        break;
      }
      case OpStep::Kind::ZipWith: {
        api::Pipeline q = build_pipe(session, *op.pipe, env, arrays);
        ExprNodePtr f = op.expr;
        Env base = env;
        p = api::zip_with(
            [f, base](Code e1, Code e2) {
              Env env2 = base;
              env2["e1"] = e1;
              env2["e2"] = e2;
              return compile_expr(f, env2);
            },
            std::move(p), std::move(q));
        break;
      }
    }
  }
  return p;
}

}  // namespace

ir::Program compile_spec(const PipelineSpec& spec) {
  if (!spec.reduce) throw SpecError("top-level pipeline needs a reduce", "$");
  api::SessionPtr session = api::make_session();
  std::map<std::string, staged::CodeArr> arrays;
  for (const auto& name : spec_params(spec)) {
    arrays.emplace(name, session->param_arr(name));
  }
  Env env;
  api::Pipeline p = build_pipe(session, spec, env, arrays);
  switch (spec.reduce->kind) {
    case Reduce::Kind::Sum:
      return api::sum(std::move(p));
    case Reduce::Kind::FoldCons:
      return api::fold(
          [](Code z, Code a) { return staged::consE(a, z); }, staged::nilE(),
          std::move(p));
    case Reduce::Kind::Fold: {
      ExprNodePtr f = spec.reduce->fold_op;
      return api::fold(
          [f](Code z, Code a) {
            Env env2;
            env2["z"] = z;
            env2["a"] = a;
            return compile_expr(f, env2);
          },
          staged::as_code(staged::lit(spec.reduce->fold_seed)), std::move(p));
    }
  }
  throw SpecError("bad reduce", "$");
}

}  // namespace strym::pspec
