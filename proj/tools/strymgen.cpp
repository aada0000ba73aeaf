// Command-line front end: pipeline compilation (gen), differential checking
// against the reference semantics (check), and the benchmark harness
// (bench).
//
// Exit codes: 0 pass, 1 check mismatch / failed verification, 2 usage or
// parse errors.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "strym/bench.hpp"
#include "strym/ir_check.hpp"
#include "strym/ir_eval.hpp"
#include "strym/ir_print.hpp"
#include "strym/ir_scan.hpp"
#include "strym/oracle.hpp"
#include "strym/pipeline_spec.hpp"

namespace {

using namespace strym;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pspec::ParsedSpec load_spec(const std::string& path, bool strict) {
  pspec::ParseOptions opts;
  opts.strict = strict;
  return pspec::parse_spec(read_file(path), opts);
}

void print_warnings(const pspec::ParsedSpec& parsed) {
  for (const auto& w : parsed.warnings)
    std::cerr << "warning: " << w << "\n";
}

int report_checks(const ir::Program& prog) {
  int failures = 0;
  ir::ScopeReport scope = ir::scope_check(prog);
  if (scope.ok()) {
    std::cerr << "scope_check: ok\n";
  } else {
    failures++;
    std::cerr << "scope_check: " << scope.violations.size()
              << " violation(s)\n";
    for (const auto& v : scope.violations)
      std::cerr << "  " << v.name << ": " << v.reason << " at " << v.path
                << "\n";
  }
  ir::TypeCheckResult ty = ir::type_check(prog);
  if (ty.ok) {
    std::cerr << "type_check: ok\n";
  } else {
    failures++;
    std::cerr << "type_check: " << ty.message << " at " << ty.path << "\n";
  }
  ir::AllocReport scan = ir::alloc_scan(prog);
  std::cerr << "alloc_scan: " << scan.loop_allocs_nonuser
            << " non-user allocation(s) in loops\n";
  for (const auto& site : scan.locations)
    std::cerr << "  " << site.node << " at " << site.path << "\n";
  return failures;
}

int cmd_gen(const std::string& spec_path, const std::string& out_path,
            bool strict) {
  pspec::ParsedSpec parsed = load_spec(spec_path, strict);
  print_warnings(parsed);
  ir::Program prog = pspec::compile_spec(parsed.spec);
  std::string text = ir::print(prog);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
  return report_checks(prog) == 0 ? 0 : 1;
}

// Mutation hook for testing the checker itself: perturb the first integer
// literal, or failing that flip the first add to a sub.
ir::ExprPtr mutate_expr(const ir::ExprPtr& e, bool& done) {
  if (!e || done) return e;
  if (e->kind == ir::Expr::Kind::IntLit) {
    done = true;
    return ir::int_lit(e->ival + 1, e->user_tag);
  }
  if (e->kind == ir::Expr::Kind::Binop && e->bop == ir::BinOp::Add) {
    done = true;
    return ir::binop(ir::BinOp::Sub, e->a, e->b, e->user_tag);
  }
  auto a = mutate_expr(e->a, done);
  auto b = mutate_expr(e->b, done);
  if (a == e->a && b == e->b) return e;
  auto copy = std::make_shared<ir::Expr>(*e);
  copy->a = a;
  copy->b = b;
  return copy;
}

ir::StmtPtr mutate_stmt(const ir::StmtPtr& s, bool& done) {
  if (!s || done) return s;
  auto copy = std::make_shared<ir::Stmt>(*s);
  bool changed = false;
  if (s->kind == ir::Stmt::Kind::CellSet && s->e) {
    auto e = mutate_expr(s->e, done);
    if (e != s->e) {
      copy->e = e;
      changed = true;
    }
  }
  auto s1 = mutate_stmt(s->s1, done);
  auto s2 = mutate_stmt(s->s2, done);
  if (s1 != s->s1 || s2 != s->s2) {
    copy->s1 = s1;
    copy->s2 = s2;
    changed = true;
  }
  std::vector<ir::StmtPtr> seq = s->stmts;
  for (auto& x : seq) {
    auto nx = mutate_stmt(x, done);
    if (nx != x) {
      x = nx;
      changed = true;
    }
  }
  if (changed && !s->stmts.empty()) copy->stmts = seq;
  return changed ? ir::StmtPtr(copy) : s;
}

struct Outcome {
  bool ok = false;
  bool errored = false;
  std::string text;  // value or error label
};

Outcome run_ir(const ir::Program& prog, const std::vector<ir::Value>& inputs,
               long long fuel) {
  Outcome o;
  try {
    ir::EvalResult r = ir::eval(prog, inputs, fuel);
    o.ok = true;
    o.text = ir::value_to_string(r.value);
  } catch (const ir::EvalError& err) {
    o.errored = true;
    o.text = err.kind == ir::EvalErrorKind::DivByZero ? "div-by-zero"
             : err.kind == ir::EvalErrorKind::FuelExhausted
                 ? "fuel-exhausted"
                 : std::string("error: ") + err.what();
  }
  return o;
}

Outcome run_oracle(const pspec::PipelineSpec& spec,
                   const bench::Inputs& inputs, long long budget) {
  Outcome o;
  try {
    ir::Value v = oracle::oracle_eval(spec, inputs, budget);
    o.ok = true;
    o.text = ir::value_to_string(v);
  } catch (const oracle::OracleError& err) {
    o.errored = true;
    o.text = err.kind == oracle::OracleErrorKind::DivByZero ? "div-by-zero"
             : err.kind == oracle::OracleErrorKind::BudgetExhausted
                 ? "fuel-exhausted"
                 : std::string("error: ") + err.what();
  }
  return o;
}

int cmd_check(const std::string& spec_path, const std::string& inputs_path,
              long long trials, unsigned long long seed, bool strict,
              bool mutate, long long fuel) {
  pspec::ParsedSpec parsed = load_spec(spec_path, strict);
  print_warnings(parsed);
  ir::Program prog = pspec::compile_spec(parsed.spec);
  if (mutate) {
    bool done = false;
    ir::Program m = prog;
    m.body = mutate_stmt(prog.body, done);
    prog = m;
    std::cerr << (done ? "mutation applied\n" : "mutation found no target\n");
  }

  std::vector<std::string> params = pspec::spec_params(parsed.spec);
  std::vector<bench::Inputs> input_sets;
  if (!inputs_path.empty()) {
    nlohmann::json j = nlohmann::json::parse(read_file(inputs_path));
    bench::Inputs set;
    for (const auto& name : params) {
      if (!j.contains(name))
        throw std::runtime_error("inputs file is missing array " + name);
      set[name] = j[name].get<std::vector<long long>>();
    }
    input_sets.push_back(std::move(set));
  } else {
    for (long long t = 0; t < trials; ++t) {
      std::mt19937_64 rng(seed + static_cast<unsigned long long>(t));
      std::uniform_int_distribution<int> size_d(0, 32);
      std::uniform_int_distribution<long long> val_d(-8, 8);
      bench::Inputs set;
      for (const auto& name : params) {
        std::vector<long long> arr(static_cast<size_t>(size_d(rng)));
        for (auto& x : arr) x = val_d(rng);
        set[name] = std::move(arr);
      }
      input_sets.push_back(std::move(set));
    }
  }

  long long pass = 0;
  for (size_t i = 0; i < input_sets.size(); ++i) {
    const bench::Inputs& set = input_sets[i];
    std::vector<ir::Value> vals;
    for (const auto& [name, ty] : prog.params) {
      (void)ty;
      vals.push_back(ir::v_arr(set.at(name)));
    }
    Outcome gen = run_ir(prog, vals, fuel);
    Outcome orc = run_oracle(parsed.spec, set, fuel);
    bool match = (gen.ok && orc.ok && gen.text == orc.text) ||
                 (gen.errored && orc.errored && gen.text == orc.text);
    if (match) {
      ++pass;
    } else {
      std::cout << "MISMATCH on input set " << i << ": generated="
                << gen.text << " oracle=" << orc.text << "\n";
      for (const auto& [name, arr] : set) {
        std::cout << "  " << name << " = "
                  << ir::value_to_string(ir::v_arr(arr)) << "\n";
      }
      std::cout << "FAIL: " << pass << "/" << input_sets.size()
                << " input sets passed\n";
      return 1;
    }
  }
  ir::Counters last;
  if (!input_sets.empty()) {
    std::vector<ir::Value> vals;
    for (const auto& [name, ty] : prog.params) {
      (void)ty;
      vals.push_back(ir::v_arr(input_sets.back().at(name)));
    }
    try {
      last = ir::eval(prog, vals, fuel).counters;
    } catch (const ir::EvalError&) {
    }
  }
  std::cout << "PASS: " << pass << "/" << input_sets.size()
            << " input sets (last run: steps=" << last.steps
            << " work=" << last.work << " allocs=" << last.allocs
            << " allocs_user=" << last.allocs_user
            << " steady_nonuser=" << last.steady_allocs_nonuser << ")\n";
  return 0;
}

int cmd_bench(long long scale, unsigned long long seed, bool as_json) {
  (void)seed;  // inputs are deterministic formulas; kept for CLI stability
  std::vector<bench::BenchResult> results = bench::run_suite(scale);
  if (as_json) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : results) {
      out.push_back({{"name", r.name},
                     {"value", r.value},
                     {"oracle_value", r.oracle_value},
                     {"value_ok", r.value_ok},
                     {"steps_generated", r.steps_generated},
                     {"steps_handwritten", r.steps_handwritten},
                     {"ratio", r.ratio},
                     {"ratio_gated", r.ratio_gated},
                     {"nodes_generated", r.nodes_generated},
                     {"nodes_handwritten", r.nodes_handwritten},
                     {"loop_allocs_nonuser", r.loop_allocs_nonuser},
                     {"steady_allocs_nonuser", r.steady_allocs_nonuser},
                     {"allocs_user", r.allocs_user},
                     {"fors", r.fors},
                     {"whiles", r.whiles},
                     {"ifs", r.ifs},
                     {"cells", r.cells},
                     {"checks_ok", r.checks_ok}});
    }
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "name\tvalue\toracle_value\tok\tsteps_generated\t"
                 "steps_handwritten\tratio\tnodes_generated\t"
                 "nodes_handwritten\tloop_allocs_nonuser\t"
                 "steady_allocs_nonuser\tfors\twhiles\tifs\tcells\tchecks\n";
    for (const auto& r : results) {
      char ratio[32];
      std::snprintf(ratio, sizeof(ratio), "%.4f", r.ratio);
      std::cout << r.name << "\t" << r.value << "\t" << r.oracle_value << "\t"
                << (r.value_ok ? "ok" : "MISMATCH") << "\t"
                << r.steps_generated << "\t" << r.steps_handwritten << "\t"
                << ratio << "\t" << r.nodes_generated << "\t"
                << r.nodes_handwritten << "\t" << r.loop_allocs_nonuser
                << "\t" << r.steady_allocs_nonuser << "\t" << r.fors << "\t"
                << r.whiles << "\t" << r.ifs << "\t" << r.cells << "\t"
                << (r.checks_ok ? "ok" : "FAIL") << "\n";
    }
  }
  for (const auto& r : results) {
    if (!r.value_ok || !r.checks_ok) return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stream pipeline compiler and verifier"};
  app.require_subcommand(1);

  std::string spec_path, out_path, inputs_path;
  bool strict = false, mutate = false, as_json = false;
  long long trials = 10, scale = bench::kDefaultScale;
  long long fuel = ir::kDefaultFuel;
  unsigned long long seed = 42;

  CLI::App* gen = app.add_subcommand("gen", "compile a pipeline spec to IR");
  gen->add_option("spec", spec_path, "pipeline spec file")->required();
  gen->add_option("--out", out_path, "write the IR text here");
  gen->add_flag("--strict", strict, "treat validation warnings as errors");

  CLI::App* check =
      app.add_subcommand("check", "compare compiled IR with the oracle");
  check->add_option("spec", spec_path, "pipeline spec file")->required();
  check->add_option("--inputs", inputs_path, "JSON file of named arrays");
  check->add_option("--trials", trials, "number of random input sets");
  check->add_option("--seed", seed, "random input seed");
  check->add_option("--fuel", fuel, "evaluator fuel bound");
  check->add_flag("--strict", strict, "treat validation warnings as errors");
  check->add_flag("--mutate", mutate,
                  "perturb the compiled IR first (verifies the check fails)");

  CLI::App* bench_cmd = app.add_subcommand("bench", "run the benchmark suite");
  bench_cmd->add_option("--scale", scale, "input scale N");
  bench_cmd->add_option("--seed", seed, "reserved; table is deterministic");
  bench_cmd->add_flag("--json", as_json, "emit JSON instead of TSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (gen->parsed()) return cmd_gen(spec_path, out_path, strict);
    if (check->parsed())
      return cmd_check(spec_path, inputs_path, trials, seed, strict, mutate,
                       fuel);
    if (bench_cmd->parsed()) return cmd_bench(scale, seed, as_json);
  } catch (const pspec::SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
