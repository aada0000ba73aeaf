#include "strym/bench.hpp"

#include "strym/ir_check.hpp"
#include "strym/ir_scan.hpp"
#include "strym/oracle.hpp"
#include "strym/pipeline_spec.hpp"

namespace strym::bench {

namespace {

using ir::BinOp;
using ir::CmpOp;
using ir::ExprPtr;
using ir::StmtPtr;

// ---------------------------------------------------------------------------
// Shorthand for the hand-written transcriptions

ExprPtr cg(const std::string& c) { return ir::cell_get(c); }
ExprPtr vr(const std::string& v) { return ir::var(v); }
ExprPtr il(long long v) { return ir::int_lit(v); }
ExprPtr add(ExprPtr a, ExprPtr b) { return ir::binop(BinOp::Add, a, b); }
ExprPtr sub(ExprPtr a, ExprPtr b) { return ir::binop(BinOp::Sub, a, b); }
ExprPtr mul(ExprPtr a, ExprPtr b) { return ir::binop(BinOp::Mul, a, b); }
ExprPtr gt(ExprPtr a, ExprPtr b) { return ir::cmp(CmpOp::Gt, a, b); }
ExprPtr le(ExprPtr a, ExprPtr b) { return ir::cmp(CmpOp::Le, a, b); }
ExprPtr lt(ExprPtr a, ExprPtr b) { return ir::cmp(CmpOp::Lt, a, b); }
ExprPtr eq(ExprPtr a, ExprPtr b) { return ir::cmp(CmpOp::Eq, a, b); }
ExprPtr len(const std::string& arr) { return ir::arr_len(vr(arr)); }
ExprPtr at(const std::string& arr, ExprPtr i) {
  return ir::arr_get(vr(arr), i);
}
ExprPtr last(const std::string& arr) { return sub(len(arr), il(1)); }
StmtPtr incr(const std::string& c) {
  return ir::cell_set(c, add(cg(c), il(1)));
}

ir::Program one_array_loop(const std::string& body_note, StmtPtr loop) {
  (void)body_note;
  ir::Program p;
  p.params = {{"arr1", ir::ty_arr_int()}};
  p.body = ir::cell_new("sum", ir::ty_int(), il(0), loop);
  p.result_name = "sum";
  p.result_ty = ir::ty_int();
  return p;
}

ir::Program two_array_loop(StmtPtr loop) {
  ir::Program p;
  p.params = {{"arr1", ir::ty_arr_int()}, {"arr2", ir::ty_arr_int()}};
  p.body = ir::cell_new("sum", ir::ty_int(), il(0), loop);
  p.result_name = "sum";
  p.result_ty = ir::ty_int();
  return p;
}

// sum := !sum + arr1[counter1]
ir::Program sum_hand(long long) {
  return one_array_loop(
      "sum",
      ir::for_s("counter1", last("arr1"),
                ir::cell_set("sum", add(cg("sum"), at("arr1", vr("counter1"))))));
}

ir::Program sum_of_squares_hand(long long) {
  return one_array_loop(
      "sumOfSquares",
      ir::for_s("counter1", last("arr1"),
                ir::let_s("item1", ir::ty_int(), at("arr1", vr("counter1")),
                          ir::cell_set("sum", add(cg("sum"),
                                                  mul(vr("item1"),
                                                      vr("item1")))))));
}

ir::Program maps_hand(long long) {
  ExprPtr v = vr("item1");
  for (long long k = 1; k <= 7; ++k) v = mul(v, il(k));
  return one_array_loop(
      "maps", ir::for_s("counter1", last("arr1"),
                        ir::let_s("item1", ir::ty_int(),
                                  at("arr1", vr("counter1")),
                                  ir::cell_set("sum", add(cg("sum"), v)))));
}

ir::Program filters_hand(long long) {
  ExprPtr cond = gt(vr("item1"), il(7));
  for (long long k = 6; k >= 1; --k)
    cond = ir::and_e(gt(vr("item1"), il(k)), cond);
  return one_array_loop(
      "filters",
      ir::for_s("counter1", last("arr1"),
                ir::let_s("item1", ir::ty_int(), at("arr1", vr("counter1")),
                          ir::if_s(cond, ir::cell_set("sum", add(cg("sum"),
                                                                 vr("item1")))))));
}

ir::Program sum_of_squares_even_hand(long long) {
  return one_array_loop(
      "sumOfSquaresEven",
      ir::for_s(
          "counter1", last("arr1"),
          ir::let_s("item1", ir::ty_int(), at("arr1", vr("counter1")),
                    ir::if_s(eq(ir::binop(BinOp::Mod, vr("item1"), il(2)),
                                il(0)),
                             ir::cell_set("sum",
                                          add(cg("sum"), mul(vr("item1"),
                                                             vr("item1"))))))));
}

ir::Program cart_hand(long long) {
  return two_array_loop(ir::for_s(
      "counter1", last("arr1"),
      ir::let_s("item1", ir::ty_int(), at("arr1", vr("counter1")),
                ir::for_s("counter2", last("arr2"),
                          ir::let_s("item2", ir::ty_int(),
                                    at("arr2", vr("counter2")),
                                    ir::cell_set("sum",
                                                 add(cg("sum"),
                                                     mul(vr("item1"),
                                                         vr("item2")))))))));
}

ir::Program dot_product_hand(long long) {
  return two_array_loop(ir::for_s(
      "counter",
      sub(ir::binop(BinOp::Min, len("arr1"), len("arr2")), il(1)),
      ir::let_s("item1", ir::ty_int(), at("arr1", vr("counter")),
                ir::let_s("item2", ir::ty_int(), at("arr2", vr("counter")),
                          ir::cell_set("sum", add(cg("sum"),
                                                  mul(vr("item1"),
                                                      vr("item2"))))))));
}

ir::Program flat_map_after_zip_with_hand(long long) {
  return two_array_loop(ir::for_s(
      "counter1", last("arr1"),
      ir::let_s(
          "x", ir::ty_int(),
          add(at("arr1", vr("counter1")), at("arr1", vr("counter1"))),
          ir::for_s("counter2", last("arr2"),
                    ir::let_s("item2", ir::ty_int(), at("arr2", vr("counter2")),
                              ir::cell_set("sum", add(cg("sum"),
                                                      add(vr("item2"),
                                                          vr("x")))))))));
}

// Zip of two identical rectangular nests: the second stream is kept as an
// explicit cursor (outer index i1, inner index j1, in-range flag), advanced
// once per element of the first stream.
ir::Program zip_with_after_flat_map_hand(long long) {
  StmtPtr inner_body = ir::let_s(
      "y2", ir::ty_int(), at("arr2", cg("j2")),
      ir::seq2(
          incr("j2"),
          ir::let_s(
              "e2", ir::ty_int(), add(vr("y2"), vr("x2")),
              ir::let_s(
                  "e1", ir::ty_int(),
                  add(at("arr2", cg("j1")), at("arr1", cg("i1"))),
                  ir::seq(
                      {incr("j1"),
                       ir::if_s(gt(cg("j1"), last("arr2")),
                                ir::seq2(ir::cell_set("j1", il(0)),
                                         incr("i1"))),
                       ir::cell_set("flag1", le(cg("i1"), last("arr1"))),
                       ir::cell_set("sum",
                                    add(cg("sum"),
                                        add(vr("e1"), vr("e2"))))})))));

  StmtPtr inner = ir::cell_new(
      "j2", ir::ty_int(), il(0),
      ir::while_s(ir::and_e(cg("flag1"), le(cg("j2"), last("arr2"))),
                  inner_body));

  StmtPtr outer = ir::while_s(
      ir::and_e(cg("flag1"), le(cg("i2"), last("arr1"))),
      ir::let_s("x2", ir::ty_int(), at("arr1", cg("i2")),
                ir::seq2(incr("i2"), inner)));

  StmtPtr body = ir::cell_new(
      "i1", ir::ty_int(), il(0),
      ir::cell_new(
          "j1", ir::ty_int(), il(0),
          ir::cell_new(
              "flag1", ir::ty_bool(),
              ir::and_e(gt(len("arr1"), il(0)), gt(len("arr2"), il(0))),
              ir::cell_new("i2", ir::ty_int(), il(0), outer))));

  ir::Program p;
  p.params = {{"arr1", ir::ty_arr_int()}, {"arr2", ir::ty_arr_int()}};
  p.body = ir::cell_new("sum", ir::ty_int(), il(0), body);
  p.result_name = "sum";
  p.result_ty = ir::ty_int();
  return p;
}

ir::Program flat_map_take_hand(long long scale) {
  long long take_n = scale / 5;
  StmtPtr inner_body = ir::let_s(
      "item2", ir::ty_int(), at("arr2", cg("counter2")),
      ir::seq({ir::cell_set("sum", add(cg("sum"), mul(vr("item1"),
                                                      vr("item2")))),
               incr("counter2"), incr("n"),
               ir::if_s(eq(cg("n"), il(take_n)),
                        ir::cell_set("flag", ir::bool_lit(false)))}));

  StmtPtr inner = ir::while_s(
      ir::and_e(lt(cg("counter2"), vr("size2")), cg("flag")), inner_body);

  StmtPtr outer_body = ir::let_s(
      "item1", ir::ty_int(), at("arr1", cg("counter1")),
      ir::seq({inner, ir::cell_set("counter2", il(0)), incr("counter1")}));

  StmtPtr loops = ir::let_s(
      "size1", ir::ty_int(), len("arr1"),
      ir::let_s("size2", ir::ty_int(), len("arr2"),
                ir::while_s(ir::and_e(lt(cg("counter1"), vr("size1")),
                                      cg("flag")),
                            outer_body)));

  StmtPtr body = ir::cell_new(
      "counter1", ir::ty_int(), il(0),
      ir::cell_new("counter2", ir::ty_int(), il(0),
                   ir::cell_new("n", ir::ty_int(), il(0),
                                ir::cell_new("flag", ir::ty_bool(),
                                             ir::bool_lit(true), loops))));

  ir::Program p;
  p.params = {{"arr1", ir::ty_arr_int()}, {"arr2", ir::ty_arr_int()}};
  p.body = ir::cell_new("sum", ir::ty_int(), il(0), body);
  p.result_name = "sum";
  p.result_ty = ir::ty_int();
  return p;
}

// ---------------------------------------------------------------------------
// Pipeline specs

std::string sq_expr() { return R"(["mul", ["var","x"], ["var","x"]])"; }

std::string fixed(const char* text) { return text; }

Inputs one_arr(long long n) { return {{"arr1", mod10_array(n)}}; }
Inputs two_arr(long long n1, long long n2) {
  return {{"arr1", mod10_array(n1)}, {"arr2", mod10_array(n2)}};
}

}  // namespace

std::vector<long long> mod10_array(long long n) {
  std::vector<long long> v(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) v[static_cast<size_t>(i)] = i % 10;
  return v;
}

const std::vector<BenchCase>& suite() {
  static const std::vector<BenchCase> cases = [] {
    std::vector<BenchCase> cs;

    cs.push_back({"sum",
                  [](long long) {
                    return fixed(R"({"source": {"of_arr": "arr1"}, "reduce": "sum"})");
                  },
                  [](long long n) { return one_arr(n); }, sum_hand, true});

    cs.push_back({"sumOfSquares",
                  [](long long) {
                    return std::string(R"({"source": {"of_arr": "arr1"}, "ops": [{"map": )") +
                           sq_expr() + R"(}], "reduce": "sum"})";
                  },
                  [](long long n) { return one_arr(n); },
                  sum_of_squares_hand, true});

    cs.push_back(
        {"sumOfSquaresEven",
         [](long long) {
           return std::string(
                      R"({"source": {"of_arr": "arr1"}, "ops": [{"filter": ["eq", ["mod", ["var","x"], 2], 0]}, {"map": )") +
                  sq_expr() + R"(}], "reduce": "sum"})";
         },
         [](long long n) { return one_arr(n); }, sum_of_squares_even_hand,
         true});

    cs.push_back(
        {"cart",
         [](long long) {
           return fixed(
               R"({"source": {"of_arr": "arr1"}, "ops": [{"flat_map": {"bind": "x0", "pipe": {"source": {"of_arr": "arr2"}, "ops": [{"map": ["mul", ["var","x0"], ["var","x"]]}]}}}], "reduce": "sum"})");
         },
         [](long long n) { return two_arr(n / 10, 10); }, cart_hand, true});

    cs.push_back({"maps",
                  [](long long) {
                    std::string ops;
                    for (int k = 1; k <= 7; ++k) {
                      if (k > 1) ops += ", ";
                      ops += R"({"map": ["mul", ["var","x"], )" +
                             std::to_string(k) + "]}";
                    }
                    return std::string(R"({"source": {"of_arr": "arr1"}, "ops": [)") +
                           ops + R"(], "reduce": "sum"})";
                  },
                  [](long long n) { return one_arr(n); }, maps_hand, true});

    cs.push_back({"filters",
                  [](long long) {
                    std::string ops;
                    for (int k = 1; k <= 7; ++k) {
                      if (k > 1) ops += ", ";
                      ops += R"({"filter": ["gt", ["var","x"], )" +
                             std::to_string(k) + "]}";
                    }
                    return std::string(R"({"source": {"of_arr": "arr1"}, "ops": [)") +
                           ops + R"(], "reduce": "sum"})";
                  },
                  [](long long n) { return one_arr(n); }, filters_hand, true});

    cs.push_back(
        {"dotProduct",
         [](long long) {
           return fixed(
               R"({"source": {"of_arr": "arr1"}, "ops": [{"zip_with": {"f": ["mul", ["var","e1"], ["var","e2"]], "with": {"source": {"of_arr": "arr2"}}}}], "reduce": "sum"})");
         },
         [](long long n) { return two_arr(n, n); }, dot_product_hand, true});

    cs.push_back(
        {"flatMap_after_zipWith",
         [](long long) {
           return fixed(
               R"({"source": {"of_arr": "arr1"}, "ops": [{"zip_with": {"f": ["add", ["var","e1"], ["var","e2"]], "with": {"source": {"of_arr": "arr1"}}}}, {"flat_map": {"bind": "x0", "pipe": {"source": {"of_arr": "arr2"}, "ops": [{"map": ["add", ["var","x"], ["var","x0"]]}]}}}], "reduce": "sum"})");
         },
         [](long long n) { return two_arr(n / 100, 100); },
         flat_map_after_zip_with_hand, false});

    cs.push_back(
        {"zipWith_after_flatMap",
         [](long long) {
           return fixed(
               R"({"source": {"of_arr": "arr1"}, "ops": [{"flat_map": {"bind": "x0", "pipe": {"source": {"of_arr": "arr2"}, "ops": [{"map": ["add", ["var","x"], ["var","x0"]]}]}}}, {"zip_with": {"f": ["add", ["var","e1"], ["var","e2"]], "with": {"source": {"of_arr": "arr1"}, "ops": [{"flat_map": {"bind": "x1", "pipe": {"source": {"of_arr": "arr2"}, "ops": [{"map": ["add", ["var","x"], ["var","x1"]]}]}}}]}}}], "reduce": "sum"})");
         },
         [](long long n) { return two_arr(n / 100, 100); },
         zip_with_after_flat_map_hand, false});

    cs.push_back(
        {"flat_map_take",
         [](long long n) {
           return std::string(
                      R"({"source": {"of_arr": "arr1"}, "ops": [{"flat_map": {"bind": "x0", "pipe": {"source": {"of_arr": "arr2"}, "ops": [{"map": ["mul", ["var","x0"], ["var","x"]]}]}}}, {"take": )") +
                  std::to_string(n / 5) + R"(}], "reduce": "sum"})";
         },
         [](long long n) { return two_arr(n / 10, 10); }, flat_map_take_hand,
         false});

    return cs;
  }();
  return cases;
}

BenchResult run_case(const BenchCase& c, long long scale) {
  BenchResult r;
  r.name = c.name;
  r.ratio_gated = c.ratio_gated;

  pspec::ParsedSpec parsed = pspec::parse_spec(c.spec_json(scale));
  ir::Program prog = pspec::compile_spec(parsed.spec);

  r.checks_ok =
      ir::scope_check(prog).ok() && ir::type_check(prog).ok;

  ir::AllocReport scan = ir::alloc_scan(prog);
  r.loop_allocs_nonuser = scan.loop_allocs_nonuser;

  ir::StmtCounts counts = ir::count_stmts(prog);
  r.fors = counts.fors;
  r.whiles = counts.whiles;
  r.ifs = counts.ifs;
  r.cells = counts.cells;

  Inputs inputs = c.inputs(scale);
  auto input_vector = [&inputs](const ir::Program& p) {
    std::vector<ir::Value> vals;
    for (const auto& [name, ty] : p.params) {
      (void)ty;
      vals.push_back(ir::v_arr(inputs.at(name)));
    }
    return vals;
  };

  ir::EvalResult gen = ir::eval(prog, input_vector(prog));
  r.value = ir::value_to_string(gen.value);
  r.steps_generated = gen.counters.work;
  r.nodes_generated = gen.counters.steps;
  r.steady_allocs_nonuser = gen.counters.steady_allocs_nonuser;
  r.allocs_user = gen.counters.allocs_user;

  ir::Value ov = oracle::oracle_eval(parsed.spec, inputs,
                                     /*budget=*/1'000'000'000);
  r.oracle_value = ir::value_to_string(ov);
  r.value_ok = ir::value_equal(gen.value, ov);

  ir::Program base = c.baseline(scale);
  ir::EvalResult hand = ir::eval(base, input_vector(base));
  r.steps_handwritten = hand.counters.work;
  r.nodes_handwritten = hand.counters.steps;
  r.ratio = r.steps_handwritten > 0
                ? static_cast<double>(r.steps_generated) /
                      static_cast<double>(r.steps_handwritten)
                : 0.0;
  return r;
}

std::vector<BenchResult> run_suite(long long scale) {
  std::vector<BenchResult> out;
  for (const auto& c : suite()) out.push_back(run_case(c, scale));
  return out;
}

}  // namespace strym::bench
