#include "strym/ir_check.hpp"

#include <unordered_map>
#include <unordered_set>

namespace strym::ir {

// ---------------------------------------------------------------------------
// Scope checking

namespace {

enum class BindKind { Value, Cell, Proc };

struct ScopeCtx {
  ScopeReport report;
  std::unordered_set<std::string> all_binders;
  std::vector<std::string> path;

  std::string path_str() const {
    std::string out;
    for (const auto& p : path) {
      if (!out.empty()) out += ".";
      out += p;
    }
    return out;
  }

  void violation(const std::string& name, const std::string& reason) {
    report.violations.push_back({name, reason, path_str()});
  }
};

using ScopeEnv = std::unordered_map<std::string, BindKind>;

struct PathGuard {
  ScopeCtx& ctx;
  PathGuard(ScopeCtx& c, std::string seg) : ctx(c) {
    ctx.path.push_back(std::move(seg));
  }
  ~PathGuard() { ctx.path.pop_back(); }
};

void bind(ScopeCtx& ctx, ScopeEnv& env, const std::string& name,
          BindKind kind) {
  if (!ctx.all_binders.insert(name).second) {
    ctx.violation(name, "duplicate-binder");
  }
  env[name] = kind;
}

void check_expr(ScopeCtx& ctx, const ScopeEnv& env, const ExprPtr& e) {
  if (!e) return;
  switch (e->kind) {
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) {
        ctx.violation(e->name, "unbound");
      } else if (it->second == BindKind::Cell) {
        ctx.violation(e->name, "wrong-kind: cell used as value");
      }
      break;
    }
    case Expr::Kind::CellGet: {
      auto it = env.find(e->name);
      if (it == env.end()) {
        ctx.violation(e->name, "unbound");
      } else if (it->second != BindKind::Cell) {
        ctx.violation(e->name, "wrong-kind: value used as cell");
      }
      break;
    }
    default:
      break;
  }
  check_expr(ctx, env, e->a);
  check_expr(ctx, env, e->b);
}

void check_stmt(ScopeCtx& ctx, ScopeEnv env, const StmtPtr& s) {
  if (!s) return;
  switch (s->kind) {
    case Stmt::Kind::Let: {
      PathGuard g(ctx, "let " + s->name);
      check_expr(ctx, env, s->e);
      bind(ctx, env, s->name, BindKind::Value);
      check_stmt(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::CellNew: {
      PathGuard g(ctx, "var " + s->name);
      check_expr(ctx, env, s->e);
      bind(ctx, env, s->name, BindKind::Cell);
      check_stmt(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::CellSet: {
      PathGuard g(ctx, "set " + s->name);
      auto it = env.find(s->name);
      if (it == env.end()) {
        ctx.violation(s->name, "unbound");
      } else if (it->second != BindKind::Cell) {
        ctx.violation(s->name, "wrong-kind: assignment to non-cell");
      }
      check_expr(ctx, env, s->e);
      break;
    }
    case Stmt::Kind::For: {
      PathGuard g(ctx, "for " + s->name);
      check_expr(ctx, env, s->e);
      bind(ctx, env, s->name, BindKind::Value);
      check_stmt(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::While: {
      PathGuard g(ctx, "while");
      check_expr(ctx, env, s->e);
      check_stmt(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::If: {
      PathGuard g(ctx, "if");
      check_expr(ctx, env, s->e);
      check_stmt(ctx, env, s->s1);
      check_stmt(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::Match: {
      PathGuard g(ctx, "match");
      check_expr(ctx, env, s->e);
      ScopeEnv some_env = env;
      bind(ctx, some_env, s->name, BindKind::Value);
      if (!s->name2.empty()) bind(ctx, some_env, s->name2, BindKind::Value);
      check_stmt(ctx, some_env, s->s1);
      check_stmt(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::ProcDef: {
      PathGuard g(ctx, "proc " + s->name);
      bind(ctx, env, s->name, BindKind::Proc);
      check_stmt(ctx, env, s->s1);
      check_stmt(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::ProcCall: {
      auto it = env.find(s->name);
      if (it == env.end()) {
        ctx.violation(s->name, "unbound");
      } else if (it->second == BindKind::Cell) {
        ctx.violation(s->name, "wrong-kind: cell called as procedure");
      }
      break;
    }
    case Stmt::Kind::Seq: {
      for (size_t i = 0; i < s->stmts.size(); ++i) {
        PathGuard g(ctx, "[" + std::to_string(i) + "]");
        check_stmt(ctx, env, s->stmts[i]);
      }
      break;
    }
    case Stmt::Kind::Skip:
      break;
  }
}

// The result cell must be declared on the spine of the body, so that its
// scope covers the end of the program.
bool result_on_spine(const StmtPtr& s, const std::string& name) {
  if (!s) return false;
  switch (s->kind) {
    case Stmt::Kind::CellNew:
      if (s->name == name) return true;
      return result_on_spine(s->s1, name);
    case Stmt::Kind::Let:
      return result_on_spine(s->s1, name);
    case Stmt::Kind::ProcDef:
      return result_on_spine(s->s2, name);
    case Stmt::Kind::Seq:
      for (const auto& x : s->stmts) {
        if (result_on_spine(x, name)) return true;
      }
      return false;
    default:
      return false;
  }
}

}  // namespace

ScopeReport scope_check(const Program& p) {
  ScopeCtx ctx;
  ScopeEnv env;
  for (const auto& [name, ty] : p.params) {
    (void)ty;
    bind(ctx, env, name, BindKind::Value);
  }
  ctx.path.push_back("body");
  check_stmt(ctx, env, p.body);
  ctx.path.pop_back();
  if (!result_on_spine(p.body, p.result_name)) {
    ctx.violation(p.result_name, "bad-result: cell not in scope at end");
  }
  return ctx.report;
}

// ---------------------------------------------------------------------------
// Type checking

namespace {

struct TypeError {
  std::string message;
  std::string path;
};

struct TypeCtx {
  std::vector<std::string> path;

  std::string path_str() const {
    std::string out;
    for (const auto& p : path) {
      if (!out.empty()) out += ".";
      out += p;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw TypeError{msg, path_str()};
  }
};

using TypeEnv = std::unordered_map<std::string, std::pair<TyPtr, BindKind>>;

TyPtr infer(TypeCtx& ctx, const TypeEnv& env, const ExprPtr& e);

void require(TypeCtx& ctx, const TypeEnv& env, const ExprPtr& e,
             const TyPtr& want, const char* what) {
  TyPtr got = infer(ctx, env, e);
  if (!ty_compatible(got, want)) {
    ctx.fail(std::string(what) + ": expected " + ty_to_string(want) +
             ", actual " + ty_to_string(got));
  }
}

TyPtr infer(TypeCtx& ctx, const TypeEnv& env, const ExprPtr& e) {
  if (!e) ctx.fail("missing expression");
  switch (e->kind) {
    case Expr::Kind::IntLit:
      return ty_int();
    case Expr::Kind::BoolLit:
      return ty_bool();
    case Expr::Kind::UnitLit:
      return ty_unit();
    case Expr::Kind::Var: {
      auto it = env.find(e->name);
      if (it == env.end()) ctx.fail("unbound variable " + e->name);
      if (it->second.second == BindKind::Cell)
        ctx.fail("cell " + e->name + " used as value");
      return it->second.first;
    }
    case Expr::Kind::Binop:
      require(ctx, env, e->a, ty_int(), "binop lhs");
      require(ctx, env, e->b, ty_int(), "binop rhs");
      return ty_int();
    case Expr::Kind::Cmp: {
      if (e->cop == CmpOp::Eq) {
        TyPtr ta = infer(ctx, env, e->a);
        TyPtr tb = infer(ctx, env, e->b);
        if (ty_compatible(ta, ty_int()) && ty_compatible(tb, ty_int()))
          return ty_bool();
        // Option emptiness test: one side must be the None literal.
        bool none_side = e->a->kind == Expr::Kind::None ||
                         e->b->kind == Expr::Kind::None;
        if (none_side && ty_compatible(ta, tb)) return ty_bool();
        ctx.fail("cmp '==': expected int/int or option vs None, actual " +
                 ty_to_string(ta) + " vs " + ty_to_string(tb));
      }
      require(ctx, env, e->a, ty_int(), "cmp lhs");
      require(ctx, env, e->b, ty_int(), "cmp rhs");
      return ty_bool();
    }
    case Expr::Kind::And:
    case Expr::Kind::Or:
      require(ctx, env, e->a, ty_bool(), "logic lhs");
      require(ctx, env, e->b, ty_bool(), "logic rhs");
      return ty_bool();
    case Expr::Kind::Not:
      require(ctx, env, e->a, ty_bool(), "not operand");
      return ty_bool();
    case Expr::Kind::ArrLen:
      require(ctx, env, e->a, ty_arr_int(), "len operand");
      return ty_int();
    case Expr::Kind::ArrGet:
      require(ctx, env, e->a, ty_arr_int(), "index base");
      require(ctx, env, e->b, ty_int(), "index");
      return ty_int();
    case Expr::Kind::CellGet: {
      auto it = env.find(e->name);
      if (it == env.end()) ctx.fail("unbound cell " + e->name);
      if (it->second.second != BindKind::Cell)
        ctx.fail(e->name + " is not a cell");
      return it->second.first;
    }
    case Expr::Kind::Pair:
      return ty_pair(infer(ctx, env, e->a), infer(ctx, env, e->b));
    case Expr::Kind::Cons: {
      TyPtr h = infer(ctx, env, e->a);
      TyPtr t = infer(ctx, env, e->b);
      if (!ty_compatible(t, ty_list(h)))
        ctx.fail("cons tail: expected " + ty_to_string(ty_list(h)) +
                 ", actual " + ty_to_string(t));
      return ty_merge(t, ty_list(h));
    }
    case Expr::Kind::Nil:
      return ty_list(ty_unknown());
    case Expr::Kind::Some:
      return ty_option(infer(ctx, env, e->a));
    case Expr::Kind::None:
      return ty_option(ty_unknown());
    case Expr::Kind::SomePair:
      return ty_option(
          ty_pair(infer(ctx, env, e->a), infer(ctx, env, e->b)));
  }
  ctx.fail("bad expression node");
}

struct TypePathGuard {
  TypeCtx& ctx;
  TypePathGuard(TypeCtx& c, std::string seg) : ctx(c) {
    ctx.path.push_back(std::move(seg));
  }
  ~TypePathGuard() { ctx.path.pop_back(); }
};

void check_stmt_ty(TypeCtx& ctx, TypeEnv env, const StmtPtr& s) {
  if (!s) return;
  switch (s->kind) {
    case Stmt::Kind::Let: {
      TypePathGuard g(ctx, "let " + s->name);
      if (!s->ty || ty_contains_unknown(s->ty))
        ctx.fail("let binder needs a concrete type");
      require(ctx, env, s->e, s->ty, "let rhs");
      env[s->name] = {s->ty, BindKind::Value};
      check_stmt_ty(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::CellNew: {
      TypePathGuard g(ctx, "var " + s->name);
      if (!s->ty || ty_contains_unknown(s->ty))
        ctx.fail("cell needs a concrete type");
      require(ctx, env, s->e, s->ty, "cell init");
      env[s->name] = {s->ty, BindKind::Cell};
      check_stmt_ty(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::CellSet: {
      TypePathGuard g(ctx, "set " + s->name);
      auto it = env.find(s->name);
      if (it == env.end()) ctx.fail("unbound cell " + s->name);
      if (it->second.second != BindKind::Cell)
        ctx.fail(s->name + " is not a cell");
      require(ctx, env, s->e, it->second.first, "cell assignment");
      break;
    }
    case Stmt::Kind::For: {
      TypePathGuard g(ctx, "for " + s->name);
      require(ctx, env, s->e, ty_int(), "for bound");
      env[s->name] = {ty_int(), BindKind::Value};
      check_stmt_ty(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::While: {
      TypePathGuard g(ctx, "while");
      require(ctx, env, s->e, ty_bool(), "while condition");
      check_stmt_ty(ctx, env, s->s1);
      break;
    }
    case Stmt::Kind::If: {
      TypePathGuard g(ctx, "if");
      require(ctx, env, s->e, ty_bool(), "if condition");
      check_stmt_ty(ctx, env, s->s1);
      check_stmt_ty(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::Match: {
      TypePathGuard g(ctx, "match");
      TyPtr scrut = infer(ctx, env, s->e);
      if (scrut->kind != Ty::Kind::Option)
        ctx.fail("match scrutinee: expected option, actual " +
                 ty_to_string(scrut));
      TyPtr payload = scrut->a;
      if (!payload || payload->kind == Ty::Kind::Unknown)
        ctx.fail("match scrutinee payload type is not determined");
      TypeEnv some_env = env;
      if (!s->name2.empty()) {
        if (payload->kind != Ty::Kind::Pair)
          ctx.fail("match Some(a, s): scrutinee must be option of pair, "
                   "actual " +
                   ty_to_string(scrut));
        some_env[s->name] = {payload->a, BindKind::Value};
        some_env[s->name2] = {payload->b, BindKind::Value};
      } else {
        if (payload->kind == Ty::Kind::Pair)
          ctx.fail("match Some(a): option of pair needs two binders");
        some_env[s->name] = {payload, BindKind::Value};
      }
      check_stmt_ty(ctx, some_env, s->s1);
      check_stmt_ty(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::ProcDef: {
      TypePathGuard g(ctx, "proc " + s->name);
      env[s->name] = {ty_proc(), BindKind::Proc};
      check_stmt_ty(ctx, env, s->s1);
      check_stmt_ty(ctx, env, s->s2);
      break;
    }
    case Stmt::Kind::ProcCall: {
      auto it = env.find(s->name);
      if (it == env.end()) ctx.fail("unbound procedure " + s->name);
      if (!ty_equal(it->second.first, ty_proc()))
        ctx.fail("call of non-procedure " + s->name + ": actual " +
                 ty_to_string(it->second.first));
      break;
    }
    case Stmt::Kind::Seq: {
      for (size_t i = 0; i < s->stmts.size(); ++i) {
        TypePathGuard g(ctx, "[" + std::to_string(i) + "]");
        check_stmt_ty(ctx, env, s->stmts[i]);
      }
      break;
    }
    case Stmt::Kind::Skip:
      break;
  }
}

}  // namespace

TypeCheckResult type_check(const Program& p) {
  TypeCtx ctx;
  TypeEnv env;
  try {
    for (const auto& [name, ty] : p.params) {
      if (!ty || ty_contains_unknown(ty)) {
        ctx.fail("param " + name + " needs a concrete type");
      }
      env[name] = {ty, BindKind::Value};
    }
    ctx.path.push_back("body");
    check_stmt_ty(ctx, env, p.body);
    ctx.path.pop_back();
    // The declared result type must match the result cell's declaration.
    bool found = false;
    for_each_stmt(p.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::CellNew && s.name == p.result_name) {
        found = true;
        if (!ty_equal(s.ty, p.result_ty)) {
          throw TypeError{"result cell type mismatch: declared " +
                              ty_to_string(p.result_ty) + ", cell is " +
                              ty_to_string(s.ty),
                          "result"};
        }
      }
    });
    if (!found)
      throw TypeError{"result cell " + p.result_name + " not declared",
                      "result"};
  } catch (const TypeError& err) {
    return {false, err.message, err.path};
  }
  return {true, "", ""};
}

}  // namespace strym::ir
