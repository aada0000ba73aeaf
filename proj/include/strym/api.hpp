#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "strym/ir.hpp"
#include "strym/staged.hpp"
#include "strym/stream.hpp"

// The user-facing combinators: producers of_arr/unfold (plus iota sugar),
// transformers map/filter/take/flat_map/zip_with, and the fold reducer that
// closes a pipeline into a Program.
namespace strym::api {

struct ApiError : std::logic_error {
  using std::logic_error::logic_error;
};

// One pipeline construction per session; owns the fresh-name counter and
// the program parameters.
class Session {
 public:
  stream::Gen gen;
  std::vector<std::pair<std::string, ir::TyPtr>> params;

  staged::CodeArr param_arr(const std::string& name) {
    params.emplace_back(name, ir::ty_arr_int());
    return {ir::var(name)};
  }
  staged::CodeInt param_int(const std::string& name) {
    params.emplace_back(name, ir::ty_int());
    return {ir::var(name)};
  }
};
using SessionPtr = std::shared_ptr<Session>;

inline SessionPtr make_session() { return std::make_shared<Session>(); }

// A pipeline is consumed exactly once: combinators and fold take ownership
// and reject reuse.
class Pipeline {
 public:
  SessionPtr session;
  stream::StreamPtr stream;
  std::shared_ptr<bool> used;

  bool is_nested() const { return stream && !stream->linear(); }
};

Pipeline of_arr(const SessionPtr& s, const staged::CodeArr& arr);

// General pull source: the state cell holds option<pair<elem, seed>>,
// initialized to the user step applied to the seed; each step re-invokes
// the user step on the new seed.
Pipeline unfold(const SessionPtr& s,
                const std::function<staged::Code(staged::CodeInt)>& f,
                const staged::CodeInt& seed);

// Naturals from n.
Pipeline iota(const SessionPtr& s, const staged::CodeInt& n);

Pipeline map(const std::function<staged::CodeInt(staged::CodeInt)>& f,
             Pipeline p);
Pipeline filter(const std::function<staged::CodeBool(staged::CodeInt)>& pred,
                Pipeline p);
Pipeline take(const staged::CodeInt& n, Pipeline p);
Pipeline flat_map(const std::function<Pipeline(staged::CodeInt)>& f,
                  Pipeline p);
Pipeline zip_with(
    const std::function<staged::Code(staged::Code, staged::Code)>& f,
    Pipeline p1, Pipeline p2);

// Left fold, seed-first: the accumulator lives in a mutable cell and is the
// program result.
ir::Program fold(
    const std::function<staged::Code(staged::Code, staged::Code)>& f,
    const staged::Code& z, Pipeline p);

// fold (fun z a -> a + z) 0
ir::Program sum(Pipeline p);

}  // namespace strym::api
