#include "strym/api.hpp"

namespace strym::api {

using staged::Code;
using staged::CodeArr;
using staged::CodeBool;
using staged::CodeInt;
using stream::BoundOps;
using stream::Card;
using stream::Cont;
using stream::ForOps;
using stream::Gen;
using stream::InitK;
using stream::Producer;
using stream::StagedValue;
using stream::StreamPtr;
using stream::UnfoldOps;

namespace {

Pipeline wrap(const SessionPtr& s, StreamPtr stream) {
  Pipeline p;
  p.session = s;
  p.stream = std::move(stream);
  p.used = std::make_shared<bool>(false);
  return p;
}

void consume(const Pipeline& p, const char* who) {
  if (!p.session || !p.stream || !p.used)
    throw ApiError(std::string(who) + ": empty pipeline");
  if (*p.used)
    throw ApiError(std::string(who) + ": pipeline already consumed");
  *p.used = true;
}

StagedValue int_atom(const ir::ExprPtr& e) {
  return StagedValue::atom(e, ir::ty_int());
}

}  // namespace

// ---------------------------------------------------------------------------
// Producers

Pipeline of_arr(const SessionPtr& s, const CodeArr& arr) {
  Gen* gp = &s->gen;
  ir::ExprPtr arr_e = arr.e;
  Producer p;
  p.kind = Producer::Kind::For;
  p.card = Card::Many;
  p.init = [arr_e, gp](const InitK& k) {
    // Bind the array expression once, ahead of the loop.
    std::string arr_n = gp->names.fresh("arr");
    ForOps f;
    f.upb = [arr_n] {
      return ir::binop(ir::BinOp::Sub, ir::arr_len(ir::var(arr_n)),
                       ir::int_lit(1));
    };
    f.index = [arr_n, gp](const ir::ExprPtr& i, const Cont& k2) {
      std::string el = gp->names.fresh("el");
      return ir::let_s(el, ir::ty_int(), ir::arr_get(ir::var(arr_n), i),
                       k2(int_atom(ir::var(el))));
    };
    BoundOps b;
    b.f = f;
    return ir::let_s(arr_n, ir::ty_arr_int(), arr_e, k(b));
  };
  return wrap(s, stream::make_linear_stream(std::move(p)));
}

Pipeline unfold(const SessionPtr& s,
                const std::function<Code(CodeInt)>& f,
                const CodeInt& seed) {
  Gen* gp = &s->gen;
  ir::ExprPtr seed_e = seed.e;
  Producer p;
  p.kind = Producer::Kind::Unfold;
  p.card = Card::Many;
  p.init = [f, seed_e, gp](const InitK& k) {
    std::string cell = gp->names.fresh("s");
    ir::ExprPtr init_e = f(CodeInt{seed_e}).e;
    UnfoldOps u;
    u.term = [cell] {
      return ir::not_e(
          ir::cmp(ir::CmpOp::Eq, ir::cell_get(cell), ir::none_e()));
    };
    u.step = [cell, f, gp](const Cont& k2) {
      std::string el = gp->names.fresh("el");
      std::string st = gp->names.fresh("s");
      return ir::match_opt(
          ir::cell_get(cell), el, st,
          ir::seq2(ir::cell_set(cell, f(CodeInt{ir::var(st)}).e),
                   k2(int_atom(ir::var(el)))),
          ir::skip());
    };
    BoundOps b;
    b.u = u;
    return ir::cell_new(cell, ir::ty_option(ir::ty_pair(ir::ty_int(),
                                                        ir::ty_int())),
                        init_e, k(b));
  };
  return wrap(s, stream::make_linear_stream(std::move(p)));
}

Pipeline iota(const SessionPtr& s, const CodeInt& n) {
  return unfold(
      s,
      [](CodeInt x) {
        return staged::somePairE(staged::as_code(x),
                                 staged::as_code(staged::add(x, staged::lit(1))));
      },
      n);
}

// ---------------------------------------------------------------------------
// Transformers

Pipeline map(const std::function<CodeInt(CodeInt)>& f, Pipeline p) {
  consume(p, "map");
  Gen* gp = &p.session->gen;
  StreamPtr out = stream::map_raw(
      [f, gp](const StagedValue& a, const Cont& k) {
        // Let-insertion: compute the mapped value once.
        std::string t = gp->names.fresh("t");
        CodeInt r = f(CodeInt{a.expr()});
        return ir::let_s(t, ir::ty_int(), r.e, k(int_atom(ir::var(t))));
      },
      p.stream);
  return wrap(p.session, std::move(out));
}

Pipeline filter(const std::function<CodeBool(CodeInt)>& pred, Pipeline p) {
  consume(p, "filter");
  // A filter stage is flat-mapping into a producer of at most one element
  // whose termination test is the predicate itself.
  stream::Binder stage = [pred](const StagedValue& a) -> StreamPtr {
    Producer pr;
    pr.kind = Producer::Kind::Unfold;
    pr.card = Card::AtMost1;
    pr.init = [pred, a](const InitK& k) {
      UnfoldOps u;
      u.term = [pred, a] { return pred(CodeInt{a.expr()}).e; };
      u.step = [a](const Cont& k2) { return k2(a); };
      BoundOps b;
      b.u = u;
      return k(b);
    };
    return stream::make_linear_stream(std::move(pr));
  };
  return wrap(p.session, stream::flat_map_raw(stage, p.stream));
}

namespace {

// Elements of an add_nr producer are (reference to nr, element); emit the
// decrement at delivery and pass the element on.
ir::StmtPtr decrement_then(const StagedValue& sv, const Cont& k) {
  const ir::ExprPtr& nr_ref = sv.fst().expr();
  if (nr_ref->kind != ir::Expr::Kind::CellGet)
    throw stream::GenError("take: expected a counter reference");
  const std::string& nr = nr_ref->name;
  return ir::seq2(
      ir::cell_set(nr, ir::binop(ir::BinOp::Sub, ir::cell_get(nr),
                                 ir::int_lit(1))),
      k(sv.snd()));
}

ir::ExprPtr nr_guard(const std::string& nr) {
  return ir::cmp(ir::CmpOp::Gt, ir::cell_get(nr), ir::int_lit(0));
}

}  // namespace

Pipeline take(const CodeInt& n, Pipeline p) {
  consume(p, "take");
  Gen& g = p.session->gen;
  Gen* gp = &g;
  ir::ExprPtr n_e = n.e;
  const StreamPtr& s = p.stream;

  if (s->linear() && s->producer.kind == Producer::Kind::For) {
    // A for-loop producer only needs its bound adjusted.
    Producer q = s->producer;
    auto old_init = q.init;
    q.init = [old_init, n_e](const InitK& k) {
      return old_init([k, n_e](const BoundOps& ops) {
        ForOps f = *ops.f;
        auto old_upb = f.upb;
        f.upb = [n_e, old_upb] {
          return ir::binop(ir::BinOp::Min,
                           ir::binop(ir::BinOp::Sub, n_e, ir::int_lit(1)),
                           old_upb());
        };
        BoundOps b;
        b.f = f;
        return k(b);
      });
    };
    return wrap(p.session, stream::make_linear_stream(std::move(q)));
  }

  if (s->linear()) {
    Producer q = stream::add_nr(n_e, s->producer, g);
    StreamPtr counted = stream::make_linear_stream(std::move(q));
    return wrap(p.session, stream::map_raw(decrement_then, counted));
  }

  // Nested: count at the element delivery and push the guard into every
  // nested substream.
  Producer head =
      stream::add_nr(n_e, stream::producer_to_unfold(s->producer, g), g);
  stream::Binder nest = s->nest;
  stream::Binder binder = [nest, gp](const StagedValue& sv) -> StreamPtr {
    const ir::ExprPtr& nr_ref = sv.fst().expr();
    if (nr_ref->kind != ir::Expr::Kind::CellGet)
      throw stream::GenError("take: expected a counter reference");
    std::string nr = nr_ref->name;
    StreamPtr guarded =
        stream::more_termination(nr_guard(nr), nest(sv.snd()), *gp);
    return stream::map_raw(
        [nr](const StagedValue& a, const Cont& k) {
          return ir::seq2(
              ir::cell_set(nr, ir::binop(ir::BinOp::Sub, ir::cell_get(nr),
                                         ir::int_lit(1))),
              k(a));
        },
        guarded);
  };
  return wrap(p.session,
              stream::make_nested_stream(std::move(head), std::move(binder)));
}

Pipeline flat_map(const std::function<Pipeline(CodeInt)>& f, Pipeline p) {
  consume(p, "flat_map");
  SessionPtr session = p.session;
  stream::Binder binder = [f, session](const StagedValue& a) -> StreamPtr {
    Pipeline inner = f(CodeInt{a.expr()});
    if (inner.session != session)
      throw ApiError("flat_map: inner pipeline built in a different session");
    consume(inner, "flat_map inner");
    return inner.stream;
  };
  return wrap(session, stream::flat_map_raw(binder, p.stream));
}

Pipeline zip_with(const std::function<Code(Code, Code)>& f, Pipeline p1,
                  Pipeline p2) {
  if (p1.session != p2.session)
    throw ApiError("zip_with: pipelines must share one session");
  consume(p1, "zip_with");
  consume(p2, "zip_with");
  Gen& g = p1.session->gen;
  StreamPtr zipped = stream::zip_raw(p1.stream, p2.stream, g);
  // Combine the statically known pair: no tupling in the generated code
  // unless f itself constructs one.
  StreamPtr out = stream::map_raw(
      [f](const StagedValue& sv, const Cont& k) {
        Code a{sv.fst().expr(), sv.fst().ty()};
        Code b{sv.snd().expr(), sv.snd().ty()};
        Code r = f(a, b);
        return k(StagedValue::atom(r.e, r.ty));
      },
      zipped);
  return wrap(p1.session, std::move(out));
}

// ---------------------------------------------------------------------------
// Reducer

ir::Program fold(const std::function<Code(Code, Code)>& f, const Code& z,
                 Pipeline p) {
  consume(p, "fold");
  Gen& g = p.session->gen;
  std::string cell = g.names.fresh("s");

  ir::TyPtr acc_ty = z.ty;
  ir::TyPtr result_ty = z.ty;
  Cont consumer = [&](const StagedValue& a) -> ir::StmtPtr {
    Code acc{ir::cell_get(cell), acc_ty};
    Code elem{a.expr(), a.ty()};
    Code r = f(acc, elem);
    result_ty = ir::ty_merge(result_ty, r.ty);
    return ir::cell_set(cell, r.e);
  };
  ir::StmtPtr loops = stream::fold_raw(consumer, p.stream, g);

  if (ir::ty_contains_unknown(result_ty))
    throw ApiError("fold: cannot determine the accumulator type");

  ir::Program prog;
  prog.params = p.session->params;
  prog.body = ir::cell_new(cell, result_ty, z.e, loops);
  prog.result_name = cell;
  prog.result_ty = result_ty;
  return prog;
}

ir::Program sum(Pipeline p) {
  return fold(
      [](Code zc, Code ac) {
        return staged::as_code(
            staged::add(CodeInt{ac.e}, CodeInt{zc.e}));
      },
      staged::as_code(staged::lit(0)), std::move(p));
}

}  // namespace strym::api
