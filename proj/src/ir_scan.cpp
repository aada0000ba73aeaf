#include "strym/ir_scan.hpp"

namespace strym::ir {

namespace {

struct Scanner {
  AllocReport report;
  std::vector<std::string> path;

  std::string path_str() const {
    std::string out;
    for (const auto& p : path) {
      if (!out.empty()) out += ".";
      out += p;
    }
    return out;
  }

  void site(const char* node) {
    report.loop_allocs_nonuser++;
    report.locations.push_back({node, path_str()});
  }

  void scan_expr(const ExprPtr& e, bool in_loop) {
    if (!e) return;
    if (in_loop && !e->user_tag && is_alloc_expr(*e)) {
      switch (e->kind) {
        case Expr::Kind::Pair:
          site("Pair");
          break;
        case Expr::Kind::Cons:
          site("Cons");
          break;
        case Expr::Kind::Some:
          site("Some");
          break;
        case Expr::Kind::SomePair:
          site("SomePair");
          break;
        default:
          break;
      }
    }
    scan_expr(e->a, in_loop);
    scan_expr(e->b, in_loop);
  }

  void scan_stmt(const StmtPtr& s, bool in_loop) {
    if (!s) return;
    switch (s->kind) {
      case Stmt::Kind::Let:
        path.push_back("let " + s->name);
        scan_expr(s->e, in_loop);
        scan_stmt(s->s1, in_loop);
        path.pop_back();
        break;
      case Stmt::Kind::CellNew:
        path.push_back("var " + s->name);
        scan_expr(s->e, in_loop);
        scan_stmt(s->s1, in_loop);
        path.pop_back();
        break;
      case Stmt::Kind::CellSet:
        path.push_back("set " + s->name);
        scan_expr(s->e, in_loop);
        path.pop_back();
        break;
      case Stmt::Kind::For:
        path.push_back("for " + s->name);
        scan_expr(s->e, in_loop);  // bound is evaluated once, outside
        scan_stmt(s->s1, true);
        path.pop_back();
        break;
      case Stmt::Kind::While:
        path.push_back("while");
        scan_expr(s->e, true);  // condition re-evaluates per iteration
        scan_stmt(s->s1, true);
        path.pop_back();
        break;
      case Stmt::Kind::If:
        path.push_back("if");
        scan_expr(s->e, in_loop);
        scan_stmt(s->s1, in_loop);
        scan_stmt(s->s2, in_loop);
        path.pop_back();
        break;
      case Stmt::Kind::Match:
        path.push_back("match");
        scan_expr(s->e, in_loop);
        scan_stmt(s->s1, in_loop);
        scan_stmt(s->s2, in_loop);
        path.pop_back();
        break;
      case Stmt::Kind::ProcDef:
        if (in_loop) site("ProcDef");
        path.push_back("proc " + s->name);
        // A procedure body may run once per call site execution, so treat
        // it as loop context regardless of where the definition sits.
        scan_stmt(s->s1, true);
        path.pop_back();
        scan_stmt(s->s2, in_loop);
        break;
      case Stmt::Kind::ProcCall:
        break;
      case Stmt::Kind::Seq:
        for (size_t i = 0; i < s->stmts.size(); ++i) {
          path.push_back("[" + std::to_string(i) + "]");
          scan_stmt(s->stmts[i], in_loop);
          path.pop_back();
        }
        break;
      case Stmt::Kind::Skip:
        break;
    }
  }
};

}  // namespace

AllocReport alloc_scan(const Program& p) {
  Scanner sc;
  sc.path.push_back("body");
  sc.scan_stmt(p.body, false);
  return sc.report;
}

}  // namespace strym::ir
