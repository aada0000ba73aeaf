#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Target imperative IR: the codomain of pipeline staging. Values are
// immutable after construction and may be shared freely.
namespace strym::ir {

// ---------------------------------------------------------------------------
// Types

struct Ty;
using TyPtr = std::shared_ptr<const Ty>;

struct Ty {
  enum class Kind {
    Int,
    Bool,
    Unit,
    ArrInt,
    Pair,
    List,
    Option,
    Proc,     // nullary procedure, unit result
    Unknown,  // placeholder during construction (nil/none seeds); never
              // allowed in a checked Program
  };
  Kind kind = Kind::Int;
  TyPtr a;  // Pair first / List elem / Option elem
  TyPtr b;  // Pair second
};

TyPtr ty_int();
TyPtr ty_bool();
TyPtr ty_unit();
TyPtr ty_arr_int();
TyPtr ty_proc();
TyPtr ty_unknown();
TyPtr ty_pair(TyPtr a, TyPtr b);
TyPtr ty_list(TyPtr elem);
TyPtr ty_option(TyPtr elem);

bool ty_equal(const TyPtr& a, const TyPtr& b);
// Equality with Unknown acting as a wildcard.
bool ty_compatible(const TyPtr& a, const TyPtr& b);
// Merge two compatible types, preferring the more concrete one.
TyPtr ty_merge(const TyPtr& a, const TyPtr& b);
bool ty_contains_unknown(const TyPtr& t);
std::string ty_to_string(const TyPtr& t);

// ---------------------------------------------------------------------------
// Expressions

enum class BinOp { Add, Sub, Mul, Div, Mod, Min };
enum class CmpOp { Lt, Le, Eq, Gt, Ge };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    IntLit,
    BoolLit,
    UnitLit,
    Var,
    Binop,
    Cmp,
    And,
    Or,
    Not,
    ArrLen,
    ArrGet,
    CellGet,
    Pair,
    Cons,
    Nil,
    Some,
    None,
    SomePair,
  };
  Kind kind = Kind::IntLit;
  // True only for nodes created through the staged-expr layer, i.e. nodes
  // that came from user per-element functions. Allocation accounting
  // exempts them.
  bool user_tag = false;
  long long ival = 0;
  bool bval = false;
  std::string name;  // Var, CellGet
  BinOp bop = BinOp::Add;
  CmpOp cop = CmpOp::Eq;
  ExprPtr a, b;
};

ExprPtr int_lit(long long v, bool user = false);
ExprPtr bool_lit(bool v, bool user = false);
ExprPtr unit_lit(bool user = false);
ExprPtr var(std::string name, bool user = false);
ExprPtr binop(BinOp op, ExprPtr a, ExprPtr b, bool user = false);
ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b, bool user = false);
ExprPtr and_e(ExprPtr a, ExprPtr b, bool user = false);
ExprPtr or_e(ExprPtr a, ExprPtr b, bool user = false);
ExprPtr not_e(ExprPtr a, bool user = false);
ExprPtr arr_len(ExprPtr arr, bool user = false);
ExprPtr arr_get(ExprPtr arr, ExprPtr idx, bool user = false);
ExprPtr cell_get(std::string cell, bool user = false);
ExprPtr pair_e(ExprPtr a, ExprPtr b, bool user = false);
ExprPtr cons_e(ExprPtr head, ExprPtr tail, bool user = false);
ExprPtr nil_e(bool user = false);
ExprPtr some_e(ExprPtr a, bool user = false);
ExprPtr none_e(bool user = false);
ExprPtr some_pair_e(ExprPtr a, ExprPtr b, bool user = false);

// True for the node kinds counted as heap-allocation events: Pair, Cons,
// Some, SomePair (ProcDef is the statement-level fifth).
bool is_alloc_expr(const Expr& e);

// ---------------------------------------------------------------------------
// Statements

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind {
    Let,       // let name: ty = e; body
    CellNew,   // var name: ty := e; body
    CellSet,   // name := e
    For,       // for name = 0 to e { body }   (inclusive upper bound)
    While,     // while e { body }
    If,        // if e { s1 } else { s2 }      (s2 may be null)
    Match,     // match e { Some(name[, name2]) => s1, None => s2 }
    ProcDef,   // proc name() { s1 } scope s2
    ProcCall,  // name()
    Seq,
    Skip,
  };
  Kind kind = Kind::Skip;
  std::string name;
  std::string name2;  // Match: seed binder; empty when the option payload
                      // is not a pair
  TyPtr ty;           // Let / CellNew
  ExprPtr e;          // rhs / init / upb / cond / scrutinee
  StmtPtr s1, s2;
  std::vector<StmtPtr> stmts;  // Seq
};

StmtPtr let_s(std::string name, TyPtr ty, ExprPtr rhs, StmtPtr body);
StmtPtr cell_new(std::string name, TyPtr ty, ExprPtr init, StmtPtr body);
StmtPtr cell_set(std::string name, ExprPtr e);
StmtPtr for_s(std::string idx, ExprPtr upb, StmtPtr body);
StmtPtr while_s(ExprPtr cond, StmtPtr body);
StmtPtr if_s(ExprPtr cond, StmtPtr then_s, StmtPtr else_s = nullptr);
StmtPtr match_opt(ExprPtr scrutinee, std::string el, std::string st,
                  StmtPtr some_s, StmtPtr none_s);
StmtPtr proc_def(std::string name, StmtPtr body, StmtPtr scope);
StmtPtr proc_call(std::string name);
// Normalizing sequence constructor: flattens nested Seq, drops Skip.
StmtPtr seq(std::vector<StmtPtr> stmts);
StmtPtr seq2(StmtPtr a, StmtPtr b);
StmtPtr skip();

// ---------------------------------------------------------------------------
// Programs

struct Program {
  std::vector<std::pair<std::string, TyPtr>> params;
  StmtPtr body;
  // Cell whose final content is the answer.
  std::string result_name;
  TyPtr result_ty;
};

// ---------------------------------------------------------------------------
// Fresh names

// Mutable counter owned by one generation run; hint_k with strictly
// increasing k, so names never collide within a session.
class NameGen {
 public:
  std::string fresh(std::string_view hint) {
    return std::string(hint) + "_" + std::to_string(++counter_);
  }
  long long count() const { return counter_; }

 private:
  long long counter_ = 0;
};

// ---------------------------------------------------------------------------
// Structural equality and shape helpers

// Structural equality. user_tag is rendering-invisible metadata and is
// compared only when compare_tags is set.
bool expr_equal(const ExprPtr& a, const ExprPtr& b, bool compare_tags = false);
bool stmt_equal(const StmtPtr& a, const StmtPtr& b, bool compare_tags = false);
bool program_equal(const Program& a, const Program& b,
                   bool compare_tags = false);

// Equality up to consistent renaming of binder-introduced names.
bool alpha_equal(const Program& a, const Program& b);

struct StmtCounts {
  long long fors = 0;
  long long whiles = 0;
  long long ifs = 0;
  long long matches = 0;
  long long cells = 0;
  long long lets = 0;
  long long procs = 0;
};
StmtCounts count_stmts(const StmtPtr& s);
StmtCounts count_stmts(const Program& p);

// Maximum static nesting depth of For/While loops.
int loop_depth(const StmtPtr& s);
int loop_depth(const Program& p);

// Splits right-nested conjunctions into their conjuncts.
std::vector<ExprPtr> conjuncts(const ExprPtr& e);

// Walks every statement of a program (pre-order).
void for_each_stmt(const StmtPtr& s, const std::function<void(const Stmt&)>& f);

}  // namespace strym::ir
