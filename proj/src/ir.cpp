#include "strym/ir.hpp"

#include <algorithm>
#include <unordered_map>

namespace strym::ir {

// ---------------------------------------------------------------------------
// Types

namespace {
TyPtr make_ty(Ty::Kind k, TyPtr a = nullptr, TyPtr b = nullptr) {
  auto t = std::make_shared<Ty>();
  t->kind = k;
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}
}  // namespace

TyPtr ty_int() {
  static const TyPtr t = make_ty(Ty::Kind::Int);
  return t;
}
TyPtr ty_bool() {
  static const TyPtr t = make_ty(Ty::Kind::Bool);
  return t;
}
TyPtr ty_unit() {
  static const TyPtr t = make_ty(Ty::Kind::Unit);
  return t;
}
TyPtr ty_arr_int() {
  static const TyPtr t = make_ty(Ty::Kind::ArrInt);
  return t;
}
TyPtr ty_proc() {
  static const TyPtr t = make_ty(Ty::Kind::Proc);
  return t;
}
TyPtr ty_unknown() {
  static const TyPtr t = make_ty(Ty::Kind::Unknown);
  return t;
}
TyPtr ty_pair(TyPtr a, TyPtr b) {
  return make_ty(Ty::Kind::Pair, std::move(a), std::move(b));
}
TyPtr ty_list(TyPtr elem) { return make_ty(Ty::Kind::List, std::move(elem)); }
TyPtr ty_option(TyPtr elem) {
  return make_ty(Ty::Kind::Option, std::move(elem));
}

bool ty_equal(const TyPtr& a, const TyPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Ty::Kind::Pair:
      return ty_equal(a->a, b->a) && ty_equal(a->b, b->b);
    case Ty::Kind::List:
    case Ty::Kind::Option:
      return ty_equal(a->a, b->a);
    default:
      return true;
  }
}

bool ty_compatible(const TyPtr& a, const TyPtr& b) {
  if (!a || !b) return false;
  if (a->kind == Ty::Kind::Unknown || b->kind == Ty::Kind::Unknown)
    return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Ty::Kind::Pair:
      return ty_compatible(a->a, b->a) && ty_compatible(a->b, b->b);
    case Ty::Kind::List:
    case Ty::Kind::Option:
      return ty_compatible(a->a, b->a);
    default:
      return true;
  }
}

TyPtr ty_merge(const TyPtr& a, const TyPtr& b) {
  if (!a) return b;
  if (!b) return a;
  if (a->kind == Ty::Kind::Unknown) return b;
  if (b->kind == Ty::Kind::Unknown) return a;
  switch (a->kind) {
    case Ty::Kind::Pair:
      return ty_pair(ty_merge(a->a, b->a), ty_merge(a->b, b->b));
    case Ty::Kind::List:
      return ty_list(ty_merge(a->a, b->a));
    case Ty::Kind::Option:
      return ty_option(ty_merge(a->a, b->a));
    default:
      return a;
  }
}

bool ty_contains_unknown(const TyPtr& t) {
  if (!t) return true;
  switch (t->kind) {
    case Ty::Kind::Unknown:
      return true;
    case Ty::Kind::Pair:
      return ty_contains_unknown(t->a) || ty_contains_unknown(t->b);
    case Ty::Kind::List:
    case Ty::Kind::Option:
      return ty_contains_unknown(t->a);
    default:
      return false;
  }
}

std::string ty_to_string(const TyPtr& t) {
  if (!t) return "<null>";
  switch (t->kind) {
    case Ty::Kind::Int:
      return "int";
    case Ty::Kind::Bool:
      return "bool";
    case Ty::Kind::Unit:
      return "unit";
    case Ty::Kind::ArrInt:
      return "arr_int";
    case Ty::Kind::Proc:
      return "proc";
    case Ty::Kind::Unknown:
      return "?";
    case Ty::Kind::Pair:
      return "pair<" + ty_to_string(t->a) + ", " + ty_to_string(t->b) + ">";
    case Ty::Kind::List:
      return "list<" + ty_to_string(t->a) + ">";
    case Ty::Kind::Option:
      return "option<" + ty_to_string(t->a) + ">";
  }
  return "<bad>";
}

// ---------------------------------------------------------------------------
// Expression factories

namespace {
std::shared_ptr<Expr> make_expr(Expr::Kind k, bool user) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->user_tag = user;
  return e;
}
}  // namespace

ExprPtr int_lit(long long v, bool user) {
  auto e = make_expr(Expr::Kind::IntLit, user);
  e->ival = v;
  return e;
}
ExprPtr bool_lit(bool v, bool user) {
  auto e = make_expr(Expr::Kind::BoolLit, user);
  e->bval = v;
  return e;
}
ExprPtr unit_lit(bool user) { return make_expr(Expr::Kind::UnitLit, user); }
ExprPtr var(std::string name, bool user) {
  auto e = make_expr(Expr::Kind::Var, user);
  e->name = std::move(name);
  return e;
}
ExprPtr binop(BinOp op, ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::Binop, user);
  e->bop = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::Cmp, user);
  e->cop = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr and_e(ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::And, user);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr or_e(ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::Or, user);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr not_e(ExprPtr a, bool user) {
  auto e = make_expr(Expr::Kind::Not, user);
  e->a = std::move(a);
  return e;
}
ExprPtr arr_len(ExprPtr arr, bool user) {
  auto e = make_expr(Expr::Kind::ArrLen, user);
  e->a = std::move(arr);
  return e;
}
ExprPtr arr_get(ExprPtr arr, ExprPtr idx, bool user) {
  auto e = make_expr(Expr::Kind::ArrGet, user);
  e->a = std::move(arr);
  e->b = std::move(idx);
  return e;
}
ExprPtr cell_get(std::string cell, bool user) {
  auto e = make_expr(Expr::Kind::CellGet, user);
  e->name = std::move(cell);
  return e;
}
ExprPtr pair_e(ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::Pair, user);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr cons_e(ExprPtr head, ExprPtr tail, bool user) {
  auto e = make_expr(Expr::Kind::Cons, user);
  e->a = std::move(head);
  e->b = std::move(tail);
  return e;
}
ExprPtr nil_e(bool user) { return make_expr(Expr::Kind::Nil, user); }
ExprPtr some_e(ExprPtr a, bool user) {
  auto e = make_expr(Expr::Kind::Some, user);
  e->a = std::move(a);
  return e;
}
ExprPtr none_e(bool user) { return make_expr(Expr::Kind::None, user); }
ExprPtr some_pair_e(ExprPtr a, ExprPtr b, bool user) {
  auto e = make_expr(Expr::Kind::SomePair, user);
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}

bool is_alloc_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Pair:
    case Expr::Kind::Cons:
    case Expr::Kind::Some:
    case Expr::Kind::SomePair:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Statement factories

namespace {
std::shared_ptr<Stmt> make_stmt(Stmt::Kind k) {
  auto s = std::make_shared<Stmt>();
  s->kind = k;
  return s;
}
}  // namespace

StmtPtr let_s(std::string name, TyPtr ty, ExprPtr rhs, StmtPtr body) {
  auto s = make_stmt(Stmt::Kind::Let);
  s->name = std::move(name);
  s->ty = std::move(ty);
  s->e = std::move(rhs);
  s->s1 = std::move(body);
  return s;
}
StmtPtr cell_new(std::string name, TyPtr ty, ExprPtr init, StmtPtr body) {
  auto s = make_stmt(Stmt::Kind::CellNew);
  s->name = std::move(name);
  s->ty = std::move(ty);
  s->e = std::move(init);
  s->s1 = std::move(body);
  return s;
}
StmtPtr cell_set(std::string name, ExprPtr e) {
  auto s = make_stmt(Stmt::Kind::CellSet);
  s->name = std::move(name);
  s->e = std::move(e);
  return s;
}
StmtPtr for_s(std::string idx, ExprPtr upb, StmtPtr body) {
  auto s = make_stmt(Stmt::Kind::For);
  s->name = std::move(idx);
  s->e = std::move(upb);
  s->s1 = std::move(body);
  return s;
}
StmtPtr while_s(ExprPtr cond, StmtPtr body) {
  auto s = make_stmt(Stmt::Kind::While);
  s->e = std::move(cond);
  s->s1 = std::move(body);
  return s;
}
StmtPtr if_s(ExprPtr cond, StmtPtr then_s, StmtPtr else_s) {
  auto s = make_stmt(Stmt::Kind::If);
  s->e = std::move(cond);
  s->s1 = std::move(then_s);
  s->s2 = std::move(else_s);
  return s;
}
StmtPtr match_opt(ExprPtr scrutinee, std::string el, std::string st,
                  StmtPtr some_s, StmtPtr none_s) {
  auto s = make_stmt(Stmt::Kind::Match);
  s->e = std::move(scrutinee);
  s->name = std::move(el);
  s->name2 = std::move(st);
  s->s1 = std::move(some_s);
  s->s2 = std::move(none_s);
  return s;
}
StmtPtr proc_def(std::string name, StmtPtr body, StmtPtr scope) {
  auto s = make_stmt(Stmt::Kind::ProcDef);
  s->name = std::move(name);
  s->s1 = std::move(body);
  s->s2 = std::move(scope);
  return s;
}
StmtPtr proc_call(std::string name) {
  auto s = make_stmt(Stmt::Kind::ProcCall);
  s->name = std::move(name);
  return s;
}

StmtPtr skip() {
  static const StmtPtr s = make_stmt(Stmt::Kind::Skip);
  return s;
}

StmtPtr seq(std::vector<StmtPtr> stmts) {
  std::vector<StmtPtr> flat;
  for (auto& s : stmts) {
    if (!s || s->kind == Stmt::Kind::Skip) continue;
    if (s->kind == Stmt::Kind::Seq) {
      for (const auto& inner : s->stmts) flat.push_back(inner);
    } else {
      flat.push_back(std::move(s));
    }
  }
  if (flat.empty()) return skip();
  if (flat.size() == 1) return flat[0];
  auto s = make_stmt(Stmt::Kind::Seq);
  s->stmts = std::move(flat);
  return s;
}

StmtPtr seq2(StmtPtr a, StmtPtr b) {
  return seq({std::move(a), std::move(b)});
}

// ---------------------------------------------------------------------------
// Equality

bool expr_equal(const ExprPtr& a, const ExprPtr& b, bool compare_tags) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (compare_tags && a->user_tag != b->user_tag) return false;
  switch (a->kind) {
    case Expr::Kind::IntLit:
      if (a->ival != b->ival) return false;
      break;
    case Expr::Kind::BoolLit:
      if (a->bval != b->bval) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::CellGet:
      if (a->name != b->name) return false;
      break;
    case Expr::Kind::Binop:
      if (a->bop != b->bop) return false;
      break;
    case Expr::Kind::Cmp:
      if (a->cop != b->cop) return false;
      break;
    default:
      break;
  }
  return expr_equal(a->a, b->a, compare_tags) &&
         expr_equal(a->b, b->b, compare_tags);
}

bool stmt_equal(const StmtPtr& a, const StmtPtr& b, bool compare_tags) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->name != b->name || a->name2 != b->name2) return false;
  if ((a->ty != nullptr) != (b->ty != nullptr)) return false;
  if (a->ty && !ty_equal(a->ty, b->ty)) return false;
  if (!expr_equal(a->e, b->e, compare_tags)) return false;
  if (!stmt_equal(a->s1, b->s1, compare_tags)) return false;
  if (!stmt_equal(a->s2, b->s2, compare_tags)) return false;
  if (a->stmts.size() != b->stmts.size()) return false;
  for (size_t i = 0; i < a->stmts.size(); ++i) {
    if (!stmt_equal(a->stmts[i], b->stmts[i], compare_tags)) return false;
  }
  return true;
}

bool program_equal(const Program& a, const Program& b, bool compare_tags) {
  if (a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (a.params[i].first != b.params[i].first) return false;
    if (!ty_equal(a.params[i].second, b.params[i].second)) return false;
  }
  if (a.result_name != b.result_name) return false;
  if (!ty_equal(a.result_ty, b.result_ty)) return false;
  return stmt_equal(a.body, b.body, compare_tags);
}

// ---------------------------------------------------------------------------
// Alpha equivalence

namespace {

// Maps names of program a to names of program b.
using Renaming = std::unordered_map<std::string, std::string>;

bool alpha_name(const Renaming& ren, const std::string& na,
                const std::string& nb) {
  auto it = ren.find(na);
  if (it == ren.end()) return na == nb;  // free: must match exactly
  return it->second == nb;
}

bool alpha_expr(const Renaming& ren, const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::IntLit:
      if (a->ival != b->ival) return false;
      break;
    case Expr::Kind::BoolLit:
      if (a->bval != b->bval) return false;
      break;
    case Expr::Kind::Var:
    case Expr::Kind::CellGet:
      if (!alpha_name(ren, a->name, b->name)) return false;
      break;
    case Expr::Kind::Binop:
      if (a->bop != b->bop) return false;
      break;
    case Expr::Kind::Cmp:
      if (a->cop != b->cop) return false;
      break;
    default:
      break;
  }
  if ((a->a != nullptr) != (b->a != nullptr)) return false;
  if ((a->b != nullptr) != (b->b != nullptr)) return false;
  if (a->a && !alpha_expr(ren, a->a, b->a)) return false;
  if (a->b && !alpha_expr(ren, a->b, b->b)) return false;
  return true;
}

bool alpha_stmt(Renaming ren, const StmtPtr& a, const StmtPtr& b);

bool alpha_child(const Renaming& ren, const StmtPtr& a, const StmtPtr& b) {
  if ((a != nullptr) != (b != nullptr)) return false;
  if (!a) return true;
  return alpha_stmt(ren, a, b);
}

bool alpha_stmt(Renaming ren, const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Stmt::Kind::Let:
    case Stmt::Kind::CellNew: {
      if (!ty_equal(a->ty, b->ty)) return false;
      if (!alpha_expr(ren, a->e, b->e)) return false;
      ren[a->name] = b->name;
      return alpha_child(ren, a->s1, b->s1);
    }
    case Stmt::Kind::CellSet:
      return alpha_name(ren, a->name, b->name) && alpha_expr(ren, a->e, b->e);
    case Stmt::Kind::For: {
      if (!alpha_expr(ren, a->e, b->e)) return false;
      ren[a->name] = b->name;
      return alpha_child(ren, a->s1, b->s1);
    }
    case Stmt::Kind::While:
    case Stmt::Kind::If: {
      if (!alpha_expr(ren, a->e, b->e)) return false;
      return alpha_child(ren, a->s1, b->s1) && alpha_child(ren, a->s2, b->s2);
    }
    case Stmt::Kind::Match: {
      if (!alpha_expr(ren, a->e, b->e)) return false;
      if (a->name2.empty() != b->name2.empty()) return false;
      Renaming ren_some = ren;
      ren_some[a->name] = b->name;
      if (!a->name2.empty()) ren_some[a->name2] = b->name2;
      return alpha_stmt(ren_some, a->s1, b->s1) &&
             alpha_child(ren, a->s2, b->s2);
    }
    case Stmt::Kind::ProcDef: {
      ren[a->name] = b->name;
      return alpha_child(ren, a->s1, b->s1) && alpha_child(ren, a->s2, b->s2);
    }
    case Stmt::Kind::ProcCall:
      return alpha_name(ren, a->name, b->name);
    case Stmt::Kind::Seq: {
      if (a->stmts.size() != b->stmts.size()) return false;
      // Binders nested in a Seq keep their scope inside their own subtree,
      // so a plain element-wise walk is sound for generated programs.
      for (size_t i = 0; i < a->stmts.size(); ++i) {
        if (!alpha_stmt(ren, a->stmts[i], b->stmts[i])) return false;
      }
      return true;
    }
    case Stmt::Kind::Skip:
      return true;
  }
  return false;
}

}  // namespace

bool alpha_equal(const Program& a, const Program& b) {
  if (a.params.size() != b.params.size()) return false;
  Renaming ren;
  for (size_t i = 0; i < a.params.size(); ++i) {
    if (!ty_equal(a.params[i].second, b.params[i].second)) return false;
    ren[a.params[i].first] = b.params[i].first;
  }
  if (!ty_equal(a.result_ty, b.result_ty)) return false;
  if (!alpha_stmt(ren, a.body, b.body)) return false;
  // The result cell must correspond under the same renaming; recompute the
  // binding by walking the body spine.
  Renaming full = ren;
  // Collect every binder pair along the whole tree.
  std::function<void(const StmtPtr&, const StmtPtr&)> collect =
      [&](const StmtPtr& sa, const StmtPtr& sb) {
        if (!sa || !sb) return;
        if (sa->kind == Stmt::Kind::Let || sa->kind == Stmt::Kind::CellNew ||
            sa->kind == Stmt::Kind::For || sa->kind == Stmt::Kind::ProcDef) {
          full[sa->name] = sb->name;
        }
        if (sa->kind == Stmt::Kind::Match) {
          full[sa->name] = sb->name;
          if (!sa->name2.empty()) full[sa->name2] = sb->name2;
        }
        collect(sa->s1, sb->s1);
        collect(sa->s2, sb->s2);
        for (size_t i = 0; i < sa->stmts.size() && i < sb->stmts.size(); ++i) {
          collect(sa->stmts[i], sb->stmts[i]);
        }
      };
  collect(a.body, b.body);
  auto it = full.find(a.result_name);
  const std::string& mapped =
      it == full.end() ? a.result_name : it->second;
  return mapped == b.result_name;
}

// ---------------------------------------------------------------------------
// Shape helpers

namespace {
void count_rec(const StmtPtr& s, StmtCounts& c) {
  if (!s) return;
  switch (s->kind) {
    case Stmt::Kind::Let:
      c.lets++;
      break;
    case Stmt::Kind::CellNew:
      c.cells++;
      break;
    case Stmt::Kind::For:
      c.fors++;
      break;
    case Stmt::Kind::While:
      c.whiles++;
      break;
    case Stmt::Kind::If:
      c.ifs++;
      break;
    case Stmt::Kind::Match:
      c.matches++;
      break;
    case Stmt::Kind::ProcDef:
      c.procs++;
      break;
    default:
      break;
  }
  count_rec(s->s1, c);
  count_rec(s->s2, c);
  for (const auto& x : s->stmts) count_rec(x, c);
}
}  // namespace

StmtCounts count_stmts(const StmtPtr& s) {
  StmtCounts c;
  count_rec(s, c);
  return c;
}
StmtCounts count_stmts(const Program& p) { return count_stmts(p.body); }

int loop_depth(const StmtPtr& s) {
  if (!s) return 0;
  int self = (s->kind == Stmt::Kind::For || s->kind == Stmt::Kind::While) ? 1
                                                                          : 0;
  int best = 0;
  best = std::max(best, loop_depth(s->s1));
  best = std::max(best, loop_depth(s->s2));
  for (const auto& x : s->stmts) best = std::max(best, loop_depth(x));
  return self + best;
}
int loop_depth(const Program& p) { return loop_depth(p.body); }

std::vector<ExprPtr> conjuncts(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  std::function<void(const ExprPtr&)> go = [&](const ExprPtr& x) {
    if (x && x->kind == Expr::Kind::And) {
      go(x->a);
      go(x->b);
    } else if (x) {
      out.push_back(x);
    }
  };
  go(e);
  return out;
}

void for_each_stmt(const StmtPtr& s,
                   const std::function<void(const Stmt&)>& f) {
  if (!s) return;
  f(*s);
  for_each_stmt(s->s1, f);
  for_each_stmt(s->s2, f);
  for (const auto& x : s->stmts) for_each_stmt(x, f);
}

}  // namespace strym::ir
