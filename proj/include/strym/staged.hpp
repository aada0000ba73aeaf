#pragma once

#include "strym/ir.hpp"

// User-facing combinators for per-element logic. Everything built here
// carries the user tag; no other layer sets it. No simplification or
// constant folding happens: user arithmetic is emitted verbatim, operands
// in the given order.
namespace strym::staged {

struct Code {
  ir::ExprPtr e;
  ir::TyPtr ty;
};

struct CodeInt {
  ir::ExprPtr e;
};
struct CodeBool {
  ir::ExprPtr e;
};
struct CodeArr {
  ir::ExprPtr e;
};

inline Code as_code(const CodeInt& x) { return {x.e, ir::ty_int()}; }
inline Code as_code(const CodeBool& x) { return {x.e, ir::ty_bool()}; }

inline CodeInt lit(long long n) { return {ir::int_lit(n, true)}; }
inline CodeBool tru() { return {ir::bool_lit(true, true)}; }
inline CodeBool fls() { return {ir::bool_lit(false, true)}; }

inline CodeInt add(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Add, x.e, y.e, true)};
}
inline CodeInt sub(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Sub, x.e, y.e, true)};
}
inline CodeInt mul(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Mul, x.e, y.e, true)};
}
inline CodeInt div_(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Div, x.e, y.e, true)};
}
inline CodeInt mod_(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Mod, x.e, y.e, true)};
}
inline CodeInt min_(const CodeInt& x, const CodeInt& y) {
  return {ir::binop(ir::BinOp::Min, x.e, y.e, true)};
}

inline CodeBool lt(const CodeInt& x, const CodeInt& y) {
  return {ir::cmp(ir::CmpOp::Lt, x.e, y.e, true)};
}
inline CodeBool le(const CodeInt& x, const CodeInt& y) {
  return {ir::cmp(ir::CmpOp::Le, x.e, y.e, true)};
}
inline CodeBool eq(const CodeInt& x, const CodeInt& y) {
  return {ir::cmp(ir::CmpOp::Eq, x.e, y.e, true)};
}
inline CodeBool gt(const CodeInt& x, const CodeInt& y) {
  return {ir::cmp(ir::CmpOp::Gt, x.e, y.e, true)};
}
inline CodeBool ge(const CodeInt& x, const CodeInt& y) {
  return {ir::cmp(ir::CmpOp::Ge, x.e, y.e, true)};
}

inline CodeBool and_(const CodeBool& x, const CodeBool& y) {
  return {ir::and_e(x.e, y.e, true)};
}
inline CodeBool or_(const CodeBool& x, const CodeBool& y) {
  return {ir::or_e(x.e, y.e, true)};
}
inline CodeBool not_(const CodeBool& x) { return {ir::not_e(x.e, true)}; }

// Allocating constructors. These are the Theorem-1-exempt nodes: they are
// what the user generators build per element.
inline Code pairE(const Code& x, const Code& y) {
  return {ir::pair_e(x.e, y.e, true), ir::ty_pair(x.ty, y.ty)};
}
inline Code consE(const Code& head, const Code& tail) {
  return {ir::cons_e(head.e, tail.e, true),
          ir::ty_merge(tail.ty, ir::ty_list(head.ty))};
}
inline Code nilE() { return {ir::nil_e(true), ir::ty_list(ir::ty_unknown())}; }
inline Code someE(const Code& x) {
  return {ir::some_e(x.e, true), ir::ty_option(x.ty)};
}
inline Code noneE() {
  return {ir::none_e(true), ir::ty_option(ir::ty_unknown())};
}
inline Code somePairE(const Code& x, const Code& y) {
  return {ir::some_pair_e(x.e, y.e, true),
          ir::ty_option(ir::ty_pair(x.ty, y.ty))};
}

}  // namespace strym::staged
