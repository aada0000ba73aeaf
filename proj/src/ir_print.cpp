#include "strym/ir_print.hpp"

#include <sstream>

namespace strym::ir {

namespace {

// Precedence levels, higher binds tighter. || and && and :: are
// right-associative; + - * / % are left-associative; comparisons do not
// associate.
constexpr int kOr = 1;
constexpr int kAnd = 2;
constexpr int kCmp = 3;
constexpr int kCons = 4;
constexpr int kAdd = 5;
constexpr int kMul = 6;
constexpr int kUnary = 7;
constexpr int kPostfix = 8;
constexpr int kAtom = 9;

bool is_neq_sugar(const Expr& e) {
  return e.kind == Expr::Kind::Not && e.a &&
         e.a->kind == Expr::Kind::Cmp && e.a->cop == CmpOp::Eq;
}

int level_of(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Or:
      return kOr;
    case Expr::Kind::And:
      return kAnd;
    case Expr::Kind::Cmp:
      return kCmp;
    case Expr::Kind::Not:
      return is_neq_sugar(e) ? kCmp : kUnary;
    case Expr::Kind::Cons:
      return kCons;
    case Expr::Kind::Binop:
      switch (e.bop) {
        case BinOp::Add:
        case BinOp::Sub:
          return kAdd;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod:
          return kMul;
        case BinOp::Min:
          return kAtom;  // function syntax
      }
      return kAtom;
    case Expr::Kind::CellGet:
      return kUnary;
    case Expr::Kind::IntLit:
      return e.ival < 0 ? kUnary : kAtom;
    case Expr::Kind::ArrGet:
      return kPostfix;
    default:
      return kAtom;
  }
}

void pe(std::ostringstream& out, const ExprPtr& e, int min_level);

void pe_wrap(std::ostringstream& out, const ExprPtr& e, int min_level) {
  if (level_of(*e) < min_level) {
    out << "(";
    pe(out, e, 0);
    out << ")";
  } else {
    pe(out, e, 0);
  }
}

const char* cmp_str(CmpOp c) {
  switch (c) {
    case CmpOp::Lt:
      return "<";
    case CmpOp::Le:
      return "<=";
    case CmpOp::Eq:
      return "==";
    case CmpOp::Gt:
      return ">";
    case CmpOp::Ge:
      return ">=";
  }
  return "?";
}

void pe(std::ostringstream& out, const ExprPtr& e, int) {
  switch (e->kind) {
    case Expr::Kind::IntLit:
      out << e->ival;
      break;
    case Expr::Kind::BoolLit:
      out << (e->bval ? "true" : "false");
      break;
    case Expr::Kind::UnitLit:
      out << "()";
      break;
    case Expr::Kind::Var:
      out << e->name;
      break;
    case Expr::Kind::Binop: {
      if (e->bop == BinOp::Min) {
        out << "min(";
        pe(out, e->a, 0);
        out << ", ";
        pe(out, e->b, 0);
        out << ")";
        break;
      }
      const char* op = e->bop == BinOp::Add   ? "+"
                       : e->bop == BinOp::Sub ? "-"
                       : e->bop == BinOp::Mul ? "*"
                       : e->bop == BinOp::Div ? "/"
                                              : "%";
      int lv = level_of(*e);
      pe_wrap(out, e->a, lv);
      out << " " << op << " ";
      pe_wrap(out, e->b, lv + 1);  // left-assoc
      break;
    }
    case Expr::Kind::Cmp:
      pe_wrap(out, e->a, kCmp + 1);
      out << " " << cmp_str(e->cop) << " ";
      pe_wrap(out, e->b, kCmp + 1);
      break;
    case Expr::Kind::And:
      pe_wrap(out, e->a, kAnd + 1);
      out << " && ";
      pe_wrap(out, e->b, kAnd);  // right-assoc
      break;
    case Expr::Kind::Or:
      pe_wrap(out, e->a, kOr + 1);
      out << " || ";
      pe_wrap(out, e->b, kOr);
      break;
    case Expr::Kind::Not:
      if (is_neq_sugar(*e)) {
        pe_wrap(out, e->a->a, kCmp + 1);
        out << " != ";
        pe_wrap(out, e->a->b, kCmp + 1);
      } else {
        out << "not ";
        pe_wrap(out, e->a, kUnary);
      }
      break;
    case Expr::Kind::ArrLen:
      out << "len(";
      pe(out, e->a, 0);
      out << ")";
      break;
    case Expr::Kind::ArrGet:
      pe_wrap(out, e->a, kPostfix);
      out << "[";
      pe(out, e->b, 0);
      out << "]";
      break;
    case Expr::Kind::CellGet:
      out << "!" << e->name;
      break;
    case Expr::Kind::Pair:
      out << "(";
      pe(out, e->a, 0);
      out << ", ";
      pe(out, e->b, 0);
      out << ")";
      break;
    case Expr::Kind::Cons:
      pe_wrap(out, e->a, kCons + 1);
      out << " :: ";
      pe_wrap(out, e->b, kCons);
      break;
    case Expr::Kind::Nil:
      out << "[]";
      break;
    case Expr::Kind::Some:
      out << "Some(";
      pe(out, e->a, 0);
      out << ")";
      break;
    case Expr::Kind::None:
      out << "None";
      break;
    case Expr::Kind::SomePair:
      out << "Some(";
      pe(out, e->a, 0);
      out << ", ";
      pe(out, e->b, 0);
      out << ")";
      break;
  }
}

void ps(std::ostringstream& out, const StmtPtr& s, int indent);

std::string ind(int n) { return std::string(2 * static_cast<size_t>(n), ' '); }

void block(std::ostringstream& out, const StmtPtr& body, int indent) {
  out << "{\n";
  ps(out, body, indent + 1);
  out << ind(indent) << "}";
}

void ps(std::ostringstream& out, const StmtPtr& s, int indent) {
  if (!s || s->kind == Stmt::Kind::Skip) return;
  switch (s->kind) {
    case Stmt::Kind::Let:
      out << ind(indent) << "let " << s->name << ": " << ty_to_string(s->ty)
          << " = ";
      pe(out, s->e, 0);
      out << ";\n";
      ps(out, s->s1, indent);
      break;
    case Stmt::Kind::CellNew:
      out << ind(indent) << "var " << s->name << ": " << ty_to_string(s->ty)
          << " := ";
      pe(out, s->e, 0);
      out << ";\n";
      ps(out, s->s1, indent);
      break;
    case Stmt::Kind::CellSet:
      out << ind(indent) << s->name << " := ";
      pe(out, s->e, 0);
      out << ";\n";
      break;
    case Stmt::Kind::For:
      out << ind(indent) << "for " << s->name << " = 0 to ";
      pe(out, s->e, 0);
      out << " ";
      block(out, s->s1, indent);
      out << "\n";
      break;
    case Stmt::Kind::While:
      out << ind(indent) << "while ";
      pe(out, s->e, 0);
      out << " ";
      block(out, s->s1, indent);
      out << "\n";
      break;
    case Stmt::Kind::If:
      out << ind(indent) << "if ";
      pe(out, s->e, 0);
      out << " ";
      block(out, s->s1, indent);
      if (s->s2) {
        out << " else ";
        block(out, s->s2, indent);
      }
      out << "\n";
      break;
    case Stmt::Kind::Match:
      out << ind(indent) << "match ";
      pe(out, s->e, 0);
      out << " {\n";
      out << ind(indent + 1) << "Some(" << s->name;
      if (!s->name2.empty()) out << ", " << s->name2;
      out << ") => ";
      block(out, s->s1, indent + 1);
      out << "\n" << ind(indent + 1) << "None => ";
      block(out, s->s2, indent + 1);
      out << "\n" << ind(indent) << "}\n";
      break;
    case Stmt::Kind::ProcDef:
      out << ind(indent) << "proc " << s->name << "() ";
      block(out, s->s1, indent);
      out << "\n";
      ps(out, s->s2, indent);
      break;
    case Stmt::Kind::ProcCall:
      out << ind(indent) << s->name << "();\n";
      break;
    case Stmt::Kind::Seq:
      for (const auto& x : s->stmts) ps(out, x, indent);
      break;
    case Stmt::Kind::Skip:
      break;
  }
}

}  // namespace

std::string print(const ExprPtr& e) {
  std::ostringstream out;
  pe(out, e, 0);
  return out.str();
}

std::string print(const StmtPtr& s, int indent) {
  std::ostringstream out;
  ps(out, s, indent);
  return out.str();
}

std::string print(const Program& p) {
  std::ostringstream out;
  out << "program(";
  for (size_t i = 0; i < p.params.size(); ++i) {
    if (i) out << ", ";
    out << p.params[i].first << ": " << ty_to_string(p.params[i].second);
  }
  out << ") {\n";
  ps(out, p.body, 1);
  out << "  return " << p.result_name << ";\n}\n";
  return out.str();
}

}  // namespace strym::ir
