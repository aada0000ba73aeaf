#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "strym/ir.hpp"
#include "strym/ir_check.hpp"
#include "strym/ir_eval.hpp"
#include "strym/ir_parse.hpp"
#include "strym/ir_print.hpp"
#include "strym/ir_scan.hpp"

using namespace strym;
using ir::BinOp;
using ir::CmpOp;

namespace {

// The sum-of-squares loop from the overview, transcribed by hand.
ir::Program sum_of_squares_program() {
  auto body = ir::cell_new(
      "s_1", ir::ty_int(), ir::int_lit(0),
      ir::let_s(
          "arr_2", ir::ty_arr_int(), ir::var("arr"),
          ir::for_s(
              "i_3",
              ir::binop(BinOp::Sub, ir::arr_len(ir::var("arr_2")),
                        ir::int_lit(1)),
              ir::let_s(
                  "el_4", ir::ty_int(),
                  ir::arr_get(ir::var("arr_2"), ir::var("i_3")),
                  ir::let_s(
                      "t_5", ir::ty_int(),
                      ir::binop(BinOp::Mul, ir::var("el_4"), ir::var("el_4")),
                      ir::cell_set(
                          "s_1", ir::binop(BinOp::Add, ir::var("t_5"),
                                           ir::cell_get("s_1"))))))));
  ir::Program p;
  p.params = {{"arr", ir::ty_arr_int()}};
  p.body = body;
  p.result_name = "s_1";
  p.result_ty = ir::ty_int();
  return p;
}

ir::Program dot_product_program() {
  auto body = ir::cell_new(
      "s", ir::ty_int(), ir::int_lit(0),
      ir::for_s(
          "i",
          ir::binop(BinOp::Min,
                    ir::binop(BinOp::Sub, ir::arr_len(ir::var("a1")),
                              ir::int_lit(1)),
                    ir::binop(BinOp::Sub, ir::arr_len(ir::var("a2")),
                              ir::int_lit(1))),
          ir::cell_set(
              "s",
              ir::binop(BinOp::Add, ir::cell_get("s"),
                        ir::binop(BinOp::Mul,
                                  ir::arr_get(ir::var("a1"), ir::var("i")),
                                  ir::arr_get(ir::var("a2"), ir::var("i")))))));
  ir::Program p;
  p.params = {{"a1", ir::ty_arr_int()}, {"a2", ir::ty_arr_int()}};
  p.body = body;
  p.result_name = "s";
  p.result_ty = ir::ty_int();
  return p;
}

}  // namespace

TEST_CASE("gensym yields hint_k with a monotone counter") {
  ir::NameGen g;
  CHECK(g.fresh("i") == "i_1");
  CHECK(g.fresh("arr") == "arr_2");

  ir::NameGen g2;
  std::set<std::string> names;
  for (int i = 0; i < 1000; ++i) names.insert(g2.fresh("x"));
  CHECK(names.size() == 1000);
}

TEST_CASE("scope_check accepts bound names and reports unbound ones") {
  ir::Program ok;
  ok.params = {};
  ok.body = ir::cell_new("x", ir::ty_int(), ir::int_lit(1),
                         ir::cell_set("x", ir::cell_get("x")));
  ok.result_name = "x";
  ok.result_ty = ir::ty_int();
  CHECK(ir::scope_check(ok).ok());

  ir::Program bad = ok;
  bad.body = ir::cell_new("x", ir::ty_int(), ir::int_lit(1),
                          ir::cell_set("x", ir::var("y")));
  auto report = ir::scope_check(bad);
  REQUIRE(!report.ok());
  CHECK(report.violations[0].name == "y");
  CHECK(report.violations[0].reason == "unbound");
}

TEST_CASE("scope_check flags kind mismatches and duplicate binders") {
  // A let-bound value read as a cell.
  ir::Program p;
  p.body = ir::cell_new(
      "r", ir::ty_int(), ir::int_lit(0),
      ir::let_s("v", ir::ty_int(), ir::int_lit(1),
                ir::cell_set("r", ir::cell_get("v"))));
  p.result_name = "r";
  p.result_ty = ir::ty_int();
  auto report = ir::scope_check(p);
  REQUIRE(!report.ok());
  CHECK(report.violations[0].name == "v");

  ir::Program dup;
  dup.body = ir::cell_new(
      "r", ir::ty_int(), ir::int_lit(0),
      ir::let_s("v", ir::ty_int(), ir::int_lit(1),
                ir::let_s("v", ir::ty_int(), ir::int_lit(2),
                          ir::cell_set("r", ir::var("v")))));
  dup.result_name = "r";
  dup.result_ty = ir::ty_int();
  auto dup_report = ir::scope_check(dup);
  REQUIRE(!dup_report.ok());
  CHECK(dup_report.violations[0].reason == "duplicate-binder");
}

TEST_CASE("type_check rejects a bool write into an int cell") {
  ir::Program p;
  p.body = ir::cell_new("c", ir::ty_int(), ir::int_lit(0),
                        ir::cell_set("c", ir::bool_lit(true)));
  p.result_name = "c";
  p.result_ty = ir::ty_int();
  auto r = ir::type_check(p);
  REQUIRE(!r.ok);
  CHECK(r.message.find("expected int") != std::string::npos);
  CHECK(r.message.find("bool") != std::string::npos);
}

TEST_CASE("type_check accepts the transcribed sum-of-squares loop") {
  ir::Program p = sum_of_squares_program();
  REQUIRE(ir::scope_check(p).ok());
  auto r = ir::type_check(p);
  CHECK(r.ok);
}

TEST_CASE("eval: sum of squares over [0..4] is 30") {
  ir::Program p = sum_of_squares_program();
  auto res = ir::eval(p, {ir::v_arr({0, 1, 2, 3, 4})});
  CHECK(ir::value_equal(res.value, ir::v_int(30)));

  auto empty = ir::eval(p, {ir::v_arr({})});
  CHECK(ir::value_equal(empty.value, ir::v_int(0)));
}

TEST_CASE("eval: dot product of [1,2,3] and [4,5,6] is 32") {
  ir::Program p = dot_product_program();
  auto res = ir::eval(p, {ir::v_arr({1, 2, 3}), ir::v_arr({4, 5, 6})});
  CHECK(ir::value_equal(res.value, ir::v_int(32)));
}

TEST_CASE("eval is deterministic") {
  ir::Program p = sum_of_squares_program();
  auto a = ir::eval(p, {ir::v_arr({3, 1, 4, 1, 5})});
  auto b = ir::eval(p, {ir::v_arr({3, 1, 4, 1, 5})});
  CHECK(a.counters.steps == b.counters.steps);
  CHECK(a.counters.work == b.counters.work);
  CHECK(a.counters.allocs == b.counters.allocs);
  CHECK(ir::value_equal(a.value, b.value));
}

TEST_CASE("eval errors: division by zero, bounds, fuel") {
  ir::Program div;
  div.body = ir::cell_new(
      "c", ir::ty_int(), ir::int_lit(0),
      ir::cell_set("c", ir::binop(BinOp::Div, ir::int_lit(1),
                                  ir::int_lit(0))));
  div.result_name = "c";
  div.result_ty = ir::ty_int();
  CHECK_THROWS_WITH_AS(ir::eval(div, {}), "division by zero", ir::EvalError);

  ir::Program oob;
  oob.params = {{"a", ir::ty_arr_int()}};
  oob.body = ir::cell_new(
      "c", ir::ty_int(), ir::int_lit(0),
      ir::cell_set("c", ir::arr_get(ir::var("a"), ir::int_lit(5))));
  oob.result_name = "c";
  oob.result_ty = ir::ty_int();
  try {
    ir::eval(oob, {ir::v_arr({1, 2})});
    FAIL("expected out-of-bounds");
  } catch (const ir::EvalError& e) {
    CHECK(e.kind == ir::EvalErrorKind::OutOfBounds);
  }

  ir::Program spin;
  spin.body = ir::cell_new("c", ir::ty_int(), ir::int_lit(0),
                           ir::while_s(ir::bool_lit(true),
                                       ir::cell_set("c", ir::int_lit(1))));
  spin.result_name = "c";
  spin.result_ty = ir::ty_int();
  try {
    ir::eval(spin, {}, 10'000);
    FAIL("expected fuel exhaustion");
  } catch (const ir::EvalError& e) {
    CHECK(e.kind == ir::EvalErrorKind::FuelExhausted);
  }
}

TEST_CASE("alloc_scan counts non-user allocations inside loops only") {
  // var c := 0; while false { c := fst-of (1,2) }  -- pair inside the loop
  auto mk = [](bool user) {
    ir::Program p;
    p.body = ir::cell_new(
        "c", ir::ty_pair(ir::ty_int(), ir::ty_int()),
        ir::pair_e(ir::int_lit(0), ir::int_lit(0)),
        ir::while_s(ir::bool_lit(false),
                    ir::cell_set("c", ir::pair_e(ir::int_lit(1),
                                                 ir::int_lit(2), user))));
    p.result_name = "c";
    p.result_ty = ir::ty_pair(ir::ty_int(), ir::ty_int());
    return p;
  };
  auto report = ir::alloc_scan(mk(false));
  CHECK(report.loop_allocs_nonuser == 1);
  REQUIRE(report.locations.size() == 1);
  CHECK(report.locations[0].node == "Pair");
  CHECK(report.locations[0].path.find("while") != std::string::npos);

  // The same node built through the user layer is exempt; the init-time
  // pair outside the loop never counts.
  CHECK(ir::alloc_scan(mk(true)).loop_allocs_nonuser == 0);
}

TEST_CASE("print renders loop and cell statements in the documented forms") {
  auto loop = ir::for_s(
      "i_1",
      ir::binop(BinOp::Sub, ir::arr_len(ir::var("arr_2")), ir::int_lit(1)),
      ir::skip());
  CHECK(ir::print(loop) == "for i_1 = 0 to len(arr_2) - 1 {\n}\n");

  auto cell = ir::cell_new("s_1", ir::ty_int(), ir::int_lit(0), ir::skip());
  CHECK(ir::print(cell) == "var s_1: int := 0;\n");

  CHECK(ir::print(ir::int_lit(7)) == "7");
  auto opt = ir::not_e(ir::cmp(CmpOp::Eq, ir::cell_get("s"), ir::none_e()));
  CHECK(ir::print(opt) == "!s != None");
}

TEST_CASE("print respects operand order and associativity") {
  auto left = ir::binop(BinOp::Sub,
                        ir::binop(BinOp::Sub, ir::var("a"), ir::var("b")),
                        ir::var("c"));
  CHECK(ir::print(left) == "a - b - c");
  auto right = ir::binop(BinOp::Sub, ir::var("a"),
                         ir::binop(BinOp::Sub, ir::var("b"), ir::var("c")));
  CHECK(ir::print(right) == "a - (b - c)");
  auto ands = ir::and_e(ir::var("p"), ir::and_e(ir::var("q"), ir::var("r")));
  CHECK(ir::print(ands) == "p && q && r");
}

TEST_CASE("parse inverts print on hand-built programs") {
  for (const ir::Program& p :
       {sum_of_squares_program(), dot_product_program()}) {
    std::string text = ir::print(p);
    ir::Program back = ir::parse_program(text);
    CHECK(ir::program_equal(p, back));
    CHECK(ir::print(back) == text);
  }
}

TEST_CASE("structural counters see loops, cells, and conjunctions") {
  ir::Program p = dot_product_program();
  auto counts = ir::count_stmts(p);
  CHECK(counts.fors == 1);
  CHECK(counts.whiles == 0);
  CHECK(counts.cells == 1);
  CHECK(ir::loop_depth(p) == 1);

  auto conj = ir::conjuncts(
      ir::and_e(ir::var("a"), ir::and_e(ir::var("b"), ir::var("c"))));
  CHECK(conj.size() == 3);
}

TEST_CASE("alpha equivalence tolerates renamed binders and nothing else") {
  ir::Program a = sum_of_squares_program();
  std::string text = ir::print(a);
  // Rename every _N suffix by regenerating through parse on edited text.
  std::string renamed = text;
  auto replace_all = [&](const std::string& from, const std::string& to) {
    size_t pos = 0;
    while ((pos = renamed.find(from, pos)) != std::string::npos) {
      renamed.replace(pos, from.size(), to);
      pos += to.size();
    }
  };
  replace_all("s_1", "acc_9");
  replace_all("el_4", "item_7");
  ir::Program b = ir::parse_program(renamed);
  CHECK(ir::alpha_equal(a, b));

  // A structural difference is not alpha-equivalent.
  std::string tweaked = text;
  size_t star = tweaked.find("el_4 * el_4");
  REQUIRE(star != std::string::npos);
  tweaked.replace(star, 11, "el_4 + el_4");
  ir::Program c = ir::parse_program(tweaked);
  CHECK(!ir::alpha_equal(a, c));
}
