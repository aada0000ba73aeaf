#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strym/ir.hpp"

// Serializable pipeline descriptions: the CLI's file format and the input
// of both compilation and the reference oracle.
//
// JSON shape: {"source": ..., "ops": [...], "reduce": ...}
//   source: {"of_arr": "arr1"} | {"iota": expr} |
//           {"unfold": {"step": expr-in-s, "seed": expr}}
//   ops:    {"map": expr-in-x} | {"filter": expr-in-x} | {"take": int} |
//           {"flat_map": {"bind": name, "pipe": spec-without-reduce}} |
//           {"zip_with": {"f": expr-in-e1-e2,
//                         "with": spec-without-reduce}}
//   reduce: "sum" | "fold_cons" | {"fold": {"op": expr-in-z-a, "seed": int}}
// Expressions are prefix arrays, e.g. ["mul", ["var","x"], ["var","x"]];
// plain numbers are literals.
namespace strym::pspec {

struct SpecError : std::runtime_error {
  std::string path;  // JSON-path-like location
  SpecError(const std::string& msg, std::string p)
      : std::runtime_error(msg + " (at " + p + ")"), path(std::move(p)) {}
};

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  std::string op;  // var | lit | add sub mul div mod min | lt le eq gt ge |
                   // and or not | pair cons nil some none some_pair
  long long lit = 0;
  std::string var;
  std::vector<ExprNodePtr> args;
};

struct PipelineSpec;
using SpecPtr = std::shared_ptr<const PipelineSpec>;

struct Source {
  enum class Kind { OfArr, Iota, Unfold };
  Kind kind = Kind::OfArr;
  std::string param;       // OfArr: program parameter name
  ExprNodePtr iota_start;  // Iota
  ExprNodePtr unfold_step; // Unfold: expr over "s", yields option of pair
  ExprNodePtr unfold_seed;
};

struct OpStep {
  enum class Kind { Map, Filter, Take, FlatMap, ZipWith };
  Kind kind = Kind::Map;
  ExprNodePtr expr;   // map/filter: over "x"; zip_with f: over "e1","e2"
  long long take_n = 0;
  std::string bind;   // flat_map: name of the outer element inside pipe
  SpecPtr pipe;       // flat_map / zip_with embedded pipeline (no reduce)
};

struct Reduce {
  enum class Kind { Sum, Fold, FoldCons };
  Kind kind = Kind::Sum;
  ExprNodePtr fold_op;  // over "z","a"
  long long fold_seed = 0;
};

struct PipelineSpec {
  Source source;
  std::vector<OpStep> ops;
  std::optional<Reduce> reduce;  // absent in embedded pipelines
};

struct ParseOptions {
  bool strict = false;  // infinite source without take: error instead of
                        // warning
};

struct ParsedSpec {
  PipelineSpec spec;
  std::vector<std::string> warnings;
};

ParsedSpec parse_spec(const std::string& json_text,
                      const ParseOptions& opts = {});
std::string serialize_spec(const PipelineSpec& spec);

// Program parameter names (of_arr references) in order of first appearance.
std::vector<std::string> spec_params(const PipelineSpec& spec);

// Interprets the spec into combinator calls within a fresh session and
// returns the folded program.
ir::Program compile_spec(const PipelineSpec& spec);

}  // namespace strym::pspec
