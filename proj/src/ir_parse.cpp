#include "strym/ir_parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace strym::ir {

namespace {

struct Tok {
  enum class K { Ident, Int, Punct, End };
  K k = K::End;
  std::string text;
  long long ival = 0;
  int line = 0, col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Tok& peek() const { return tok_; }

  Tok next() {
    Tok t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("parse error at " + std::to_string(tok_.line) + ":" +
                     std::to_string(tok_.col) + ": " + msg + " (got '" +
                     tok_.text + "')");
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
    tok_ = Tok{};
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.k = Tok::K::End;
      tok_.text = "<eof>";
      return;
    }
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
              src_[pos_] == '_')) {
        ++pos_;
        ++col_;
      }
      tok_.k = Tok::K::Ident;
      tok_.text = src_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++col_;
      }
      tok_.k = Tok::K::Int;
      tok_.text = src_.substr(start, pos_ - start);
      tok_.ival = std::stoll(tok_.text);
      return;
    }
    // Longest-match punctuation.
    static const char* two[] = {":=", "::", "==", "!=", "<=", ">=",
                                "&&", "||", "=>"};
    for (const char* t : two) {
      if (src_.compare(pos_, 2, t) == 0) {
        tok_.k = Tok::K::Punct;
        tok_.text = t;
        pos_ += 2;
        col_ += 2;
        return;
      }
    }
    tok_.k = Tok::K::Punct;
    tok_.text = std::string(1, c);
    ++pos_;
    ++col_;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Tok tok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lx_(src) {}

  Program program() {
    expect_ident("program");
    expect("(");
    Program p;
    while (!at(")")) {
      std::string name = ident();
      expect(":");
      p.params.emplace_back(name, type());
      if (at(",")) eat();
    }
    expect(")");
    expect("{");
    p.body = stmts_until_return();
    expect_ident("return");
    p.result_name = ident();
    expect(";");
    expect("}");
    // Recover the result type from the cell's declaration.
    TyPtr rty;
    for_each_stmt(p.body, [&](const Stmt& s) {
      if (s.kind == Stmt::Kind::CellNew && s.name == p.result_name && !rty)
        rty = s.ty;
    });
    if (!rty) lx_.fail("result cell '" + p.result_name + "' not declared");
    p.result_ty = rty;
    return p;
  }

  ExprPtr expr() { return or_expr(); }

  void expect_end() {
    if (lx_.peek().k != Tok::K::End) lx_.fail("expected end of input");
  }

 private:
  bool at(const std::string& t) const {
    return lx_.peek().k == Tok::K::Punct && lx_.peek().text == t;
  }
  bool at_ident(const std::string& t) const {
    return lx_.peek().k == Tok::K::Ident && lx_.peek().text == t;
  }
  void eat() { lx_.next(); }
  void expect(const std::string& t) {
    if (!at(t)) lx_.fail("expected '" + t + "'");
    eat();
  }
  void expect_ident(const std::string& t) {
    if (!at_ident(t)) lx_.fail("expected '" + t + "'");
    eat();
  }
  std::string ident() {
    if (lx_.peek().k != Tok::K::Ident) lx_.fail("expected identifier");
    return lx_.next().text;
  }

  TyPtr type() {
    std::string t = ident();
    if (t == "int") return ty_int();
    if (t == "bool") return ty_bool();
    if (t == "unit") return ty_unit();
    if (t == "arr_int") return ty_arr_int();
    if (t == "proc") return ty_proc();
    if (t == "pair") {
      expect("<");
      TyPtr a = type();
      expect(",");
      TyPtr b = type();
      expect(">");
      return ty_pair(a, b);
    }
    if (t == "list") {
      expect("<");
      TyPtr a = type();
      expect(">");
      return ty_list(a);
    }
    if (t == "option") {
      expect("<");
      TyPtr a = type();
      expect(">");
      return ty_option(a);
    }
    lx_.fail("unknown type '" + t + "'");
  }

  // Statements of a block: binders take the rest of the block as body.
  StmtPtr stmts_until(const std::string& close) {
    if (at(close)) return skip();
    return stmt_then([&] { return stmts_until(close); });
  }

  StmtPtr stmts_until_return() {
    if (at_ident("return")) return skip();
    return stmt_then([&] { return stmts_until_return(); });
  }

  template <typename Rest>
  StmtPtr stmt_then(Rest rest) {
    if (at_ident("let")) {
      eat();
      std::string name = ident();
      expect(":");
      TyPtr ty = type();
      expect("=");
      ExprPtr rhs = expr();
      expect(";");
      return let_s(name, ty, rhs, rest());
    }
    if (at_ident("var")) {
      eat();
      std::string name = ident();
      expect(":");
      TyPtr ty = type();
      expect(":=");
      ExprPtr init = expr();
      expect(";");
      return cell_new(name, ty, init, rest());
    }
    if (at_ident("proc")) {
      eat();
      std::string name = ident();
      expect("(");
      expect(")");
      StmtPtr body = braced();
      return proc_def(name, body, rest());
    }
    StmtPtr s = simple_stmt();
    return seq2(s, rest());
  }

  StmtPtr braced() {
    expect("{");
    StmtPtr s = stmts_until("}");
    expect("}");
    return s;
  }

  StmtPtr simple_stmt() {
    if (at_ident("for")) {
      eat();
      std::string idx = ident();
      expect("=");
      if (lx_.peek().k != Tok::K::Int || lx_.peek().ival != 0)
        lx_.fail("for loops start at 0");
      eat();
      expect_ident("to");
      ExprPtr upb = expr();
      return for_s(idx, upb, braced());
    }
    if (at_ident("while")) {
      eat();
      ExprPtr cond = expr();
      return while_s(cond, braced());
    }
    if (at_ident("if")) {
      eat();
      ExprPtr cond = expr();
      StmtPtr then_s = braced();
      StmtPtr else_s;
      if (at_ident("else")) {
        eat();
        else_s = braced();
      }
      return if_s(cond, then_s, else_s);
    }
    if (at_ident("match")) {
      eat();
      ExprPtr scrut = expr();
      expect("{");
      expect_ident("Some");
      expect("(");
      std::string el = ident();
      std::string st;
      if (at(",")) {
        eat();
        st = ident();
      }
      expect(")");
      expect("=>");
      StmtPtr some_s = braced();
      if (at(",")) eat();
      expect_ident("None");
      expect("=>");
      StmtPtr none_s = braced();
      expect("}");
      return match_opt(scrut, el, st, some_s, none_s);
    }
    if (at_ident("skip")) {
      eat();
      expect(";");
      return skip();
    }
    // CellSet or ProcCall.
    std::string name = ident();
    if (at("(")) {
      eat();
      expect(")");
      expect(";");
      return proc_call(name);
    }
    expect(":=");
    ExprPtr e = expr();
    expect(";");
    return cell_set(name, e);
  }

  // ---- expressions ----

  ExprPtr or_expr() {
    ExprPtr a = and_expr();
    if (at("||")) {
      eat();
      return or_e(a, or_expr());
    }
    return a;
  }

  ExprPtr and_expr() {
    ExprPtr a = cmp_expr();
    if (at("&&")) {
      eat();
      return and_e(a, and_expr());
    }
    return a;
  }

  ExprPtr cmp_expr() {
    ExprPtr a = cons_expr();
    if (at("==")) {
      eat();
      return cmp(CmpOp::Eq, a, cons_expr());
    }
    if (at("!=")) {
      eat();
      return not_e(cmp(CmpOp::Eq, a, cons_expr()));
    }
    if (at("<=")) {
      eat();
      return cmp(CmpOp::Le, a, cons_expr());
    }
    if (at(">=")) {
      eat();
      return cmp(CmpOp::Ge, a, cons_expr());
    }
    if (at("<")) {
      eat();
      return cmp(CmpOp::Lt, a, cons_expr());
    }
    if (at(">")) {
      eat();
      return cmp(CmpOp::Gt, a, cons_expr());
    }
    return a;
  }

  ExprPtr cons_expr() {
    ExprPtr a = add_expr();
    if (at("::")) {
      eat();
      return cons_e(a, cons_expr());
    }
    return a;
  }

  ExprPtr add_expr() {
    ExprPtr a = mul_expr();
    while (at("+") || at("-")) {
      BinOp op = at("+") ? BinOp::Add : BinOp::Sub;
      eat();
      a = binop(op, a, mul_expr());
    }
    return a;
  }

  ExprPtr mul_expr() {
    ExprPtr a = unary_expr();
    while (at("*") || at("/") || at("%")) {
      BinOp op = at("*") ? BinOp::Mul : at("/") ? BinOp::Div : BinOp::Mod;
      eat();
      a = binop(op, a, unary_expr());
    }
    return a;
  }

  ExprPtr unary_expr() {
    if (at("!")) {
      eat();
      return cell_get(ident());
    }
    if (at_ident("not")) {
      eat();
      return not_e(unary_expr());
    }
    if (at("-")) {
      eat();
      if (lx_.peek().k != Tok::K::Int) lx_.fail("expected integer after '-'");
      return int_lit(-lx_.next().ival);
    }
    return postfix_expr();
  }

  ExprPtr postfix_expr() {
    ExprPtr a = atom();
    while (at("[")) {
      eat();
      ExprPtr idx = expr();
      expect("]");
      a = arr_get(a, idx);
    }
    return a;
  }

  ExprPtr atom() {
    const Tok& t = lx_.peek();
    if (t.k == Tok::K::Int) {
      return int_lit(lx_.next().ival);
    }
    if (t.k == Tok::K::Ident) {
      if (t.text == "true") {
        eat();
        return bool_lit(true);
      }
      if (t.text == "false") {
        eat();
        return bool_lit(false);
      }
      if (t.text == "None") {
        eat();
        return none_e();
      }
      if (t.text == "len") {
        eat();
        expect("(");
        ExprPtr a = expr();
        expect(")");
        return arr_len(a);
      }
      if (t.text == "min") {
        eat();
        expect("(");
        ExprPtr a = expr();
        expect(",");
        ExprPtr b = expr();
        expect(")");
        return binop(BinOp::Min, a, b);
      }
      if (t.text == "Some") {
        eat();
        expect("(");
        ExprPtr a = expr();
        if (at(",")) {
          eat();
          ExprPtr b = expr();
          expect(")");
          return some_pair_e(a, b);
        }
        expect(")");
        return some_e(a);
      }
      return var(ident());
    }
    if (at("[")) {
      eat();
      expect("]");
      return nil_e();
    }
    if (at("(")) {
      eat();
      if (at(")")) {
        eat();
        return unit_lit();
      }
      ExprPtr a = expr();
      if (at(",")) {
        eat();
        ExprPtr b = expr();
        expect(")");
        return pair_e(a, b);
      }
      expect(")");
      return a;
    }
    lx_.fail("expected expression");
  }

  Lexer lx_;
};

}  // namespace

Program parse_program(const std::string& text) {
  Parser p(text);
  Program prog = p.program();
  p.expect_end();
  return prog;
}

ExprPtr parse_expr_text(const std::string& text) {
  Parser p(text);
  ExprPtr e = p.expr();
  p.expect_end();
  return e;
}

}  // namespace strym::ir
