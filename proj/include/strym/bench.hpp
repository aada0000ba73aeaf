#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "strym/ir.hpp"
#include "strym/ir_eval.hpp"

// The benchmark suite: pipeline specs, desk-scale inputs, and hand-written
// baseline programs run through the same evaluator, so the reported ratios
// measure loop structure rather than machine effects.
namespace strym::bench {

using Inputs = std::map<std::string, std::vector<long long>>;

struct BenchCase {
  std::string name;
  // Spec text; take limits depend on the scale.
  std::function<std::string(long long scale)> spec_json;
  std::function<Inputs(long long scale)> inputs;
  // Hand-written loop transcription over the same parameters.
  std::function<ir::Program(long long scale)> baseline;
  // Whether the generated/handwritten step ratio is gated at 1.10.
  bool ratio_gated = false;
};

const std::vector<BenchCase>& suite();

struct BenchResult {
  std::string name;
  std::string value;
  std::string oracle_value;
  bool value_ok = false;
  // Binding-free operation counts (the wall-clock proxy).
  long long steps_generated = 0;
  long long steps_handwritten = 0;
  double ratio = 0.0;
  bool ratio_gated = false;
  // Raw node-visit counts, for transparency.
  long long nodes_generated = 0;
  long long nodes_handwritten = 0;
  long long loop_allocs_nonuser = 0;
  long long steady_allocs_nonuser = 0;
  long long allocs_user = 0;
  long long fors = 0, whiles = 0, ifs = 0, cells = 0;
  bool checks_ok = false;  // scope + type
};

BenchResult run_case(const BenchCase& c, long long scale);
std::vector<BenchResult> run_suite(long long scale);

inline constexpr long long kDefaultScale = 100000;

// Standard input arrays: x_i = i mod 10.
std::vector<long long> mod10_array(long long n);

}  // namespace strym::bench
