#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strym/ir.hpp"

// The stream representation and its raw machinery. A stream is an init
// function plus loop ingredients: either an indexed bound (For) or a
// guarded stepper (Unfold). The consumer picks the actual loop. Nested
// streams compose an always-linear producer with a generator-time binder.
//
// Producer state has no reified type here: init allocates the bindings and
// hands back its operations with the fresh names already captured, which
// plays the role of the existentially hidden state.
namespace strym::stream {

struct GenError : std::logic_error {
  using std::logic_error::logic_error;
};

// Generation context: one per pipeline compilation.
struct Gen {
  ir::NameGen names;
  // zip_raw records which dispatcher branch each zip took.
  std::vector<std::string> zip_trace;
};

// ---------------------------------------------------------------------------
// Generator-time element descriptor: an atom (one IR expression) or a pair
// of staged values. Pairs exist only at generation time; zipping pairs
// elements with zero runtime tupling.

class StagedValue {
 public:
  static StagedValue atom(ir::ExprPtr e, ir::TyPtr ty) {
    StagedValue v;
    v.n_ = std::make_shared<Node>(Node{std::move(e), std::move(ty), {}, {}});
    return v;
  }
  static StagedValue pair(StagedValue a, StagedValue b) {
    StagedValue v;
    auto ty = ir::ty_pair(a.ty(), b.ty());
    v.n_ = std::make_shared<Node>(
        Node{nullptr, std::move(ty), std::move(a.n_), std::move(b.n_)});
    return v;
  }

  bool is_atom() const { return n_->e != nullptr; }
  const ir::ExprPtr& expr() const {
    if (!is_atom()) throw GenError("staged value: pair used as atom");
    return n_->e;
  }
  const ir::TyPtr& ty() const { return n_->ty; }
  StagedValue fst() const {
    if (is_atom()) throw GenError("staged value: atom used as pair");
    StagedValue v;
    v.n_ = n_->a;
    return v;
  }
  StagedValue snd() const {
    if (is_atom()) throw GenError("staged value: atom used as pair");
    StagedValue v;
    v.n_ = n_->b;
    return v;
  }

 private:
  struct Node {
    ir::ExprPtr e;
    ir::TyPtr ty;
    std::shared_ptr<const Node> a, b;
  };
  std::shared_ptr<const Node> n_;
};

// ---------------------------------------------------------------------------
// Producers

using Cont = std::function<ir::StmtPtr(const StagedValue&)>;

enum class Card { AtMost1, Many };

struct ForOps {
  std::function<ir::ExprPtr()> upb;  // inclusive upper bound
  std::function<ir::StmtPtr(const ir::ExprPtr&, const Cont&)> index;
};

struct UnfoldOps {
  std::function<ir::ExprPtr()> term;
  std::function<ir::StmtPtr(const Cont&)> step;
};

struct BoundOps {
  std::optional<ForOps> f;
  std::optional<UnfoldOps> u;
};

using InitK = std::function<ir::StmtPtr(const BoundOps&)>;

struct Producer {
  enum class Kind { For, Unfold };
  Kind kind = Kind::Unfold;
  Card card = Card::Many;  // For producers are always Many
  // Allocates bindings/cells, then invokes the continuation with the
  // operations bound to the fresh state.
  std::function<ir::StmtPtr(const InitK&)> init;
};

// ---------------------------------------------------------------------------
// Streams

struct StStream;
using StreamPtr = std::shared_ptr<const StStream>;
using Binder = std::function<StreamPtr(const StagedValue&)>;

struct StStream {
  Producer producer;
  Binder nest;  // null: Linear; else Nested with this binder
  bool linear() const { return !nest; }
};

StreamPtr make_linear_stream(Producer p);
StreamPtr make_nested_stream(Producer p, Binder f);

// ---------------------------------------------------------------------------
// Raw operations

// For -> Unfold at the producer level: allocate an index cell, term is
// i <= upb, step reads index(!i) then increments.
Producer producer_to_unfold(const Producer& p, Gen& g);

// Same conversion applied to the head producer of a stream only.
StreamPtr for_unfold(const StreamPtr& s, Gen& g);

using MapFn = std::function<ir::StmtPtr(const StagedValue&, const Cont&)>;

// Composes tr after index/step; recurses through the binder of nested
// streams; preserves the producer shape and linearity. tr must invoke its
// continuation exactly once.
StreamPtr map_raw(const MapFn& tr, const StreamPtr& s);

// Linear p -> Nested(p, tr); nested streams recurse down the binder.
StreamPtr flat_map_raw(const Binder& tr, const StreamPtr& s);

// Generates the loops: For -> for, Unfold -> while, AtMost1 -> if, and
// nested loops for nested streams.
ir::StmtPtr fold_raw(const Cont& consumer, const StreamPtr& s, Gen& g);

// Conjoins cond to the termination test of the head producer and of every
// nested substream's producer. AtMost1 producers are left untouched: their
// single test is not a loop bound, the guard lives on enclosing loops.
StreamPtr more_termination(const ir::ExprPtr& cond, const StreamPtr& s,
                           Gen& g);

// Allocates a countdown cell nr := n, guards term with !nr > 0, and pairs
// every element with a reference to nr so downstream can decrement.
// p must already be an Unfold producer.
Producer add_nr(const ir::ExprPtr& n, const Producer& p, Gen& g);

// Zip of two linear producers. For x For shares the loop index with a min
// bound; any other combination pairs two unfold steppers.
Producer zip_producer(const Producer& p1, const Producer& p2, Gen& g);

// Zip of a linear producer with a nested stream, driven by the nested
// side: the linear stream is advanced only after the nested side has
// produced an element, and its termination is pushed into every nested
// producer through a term1r cell. Elements come out as (linear, nested).
StreamPtr push_linear(const Producer& lin, const Producer& nested_head,
                      const Binder& nestf, Gen& g);

// Reifies a nested stream into a guarded stepper: a current-element cell,
// one resume cell per nesting level, and an advance procedure that drives
// the nest until the next element is available.
Producer make_linear(const StreamPtr& s, Gen& g);

// Dispatcher over the four shape combinations.
StreamPtr zip_raw(const StreamPtr& s1, const StreamPtr& s2, Gen& g);

}  // namespace strym::stream
