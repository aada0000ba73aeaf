#include "strym/stream.hpp"

namespace strym::stream {

using ir::ExprPtr;
using ir::StmtPtr;
using ir::TyPtr;

namespace {

ExprPtr is_none(const std::string& cell) {
  return ir::cmp(ir::CmpOp::Eq, ir::cell_get(cell), ir::none_e());
}
ExprPtr is_some(const std::string& cell) {
  return ir::not_e(is_none(cell));
}
ExprPtr incremented(const std::string& cell) {
  return ir::binop(ir::BinOp::Add, ir::cell_get(cell), ir::int_lit(1));
}

}  // namespace

StreamPtr make_linear_stream(Producer p) {
  auto s = std::make_shared<StStream>();
  s->producer = std::move(p);
  return s;
}

StreamPtr make_nested_stream(Producer p, Binder f) {
  auto s = std::make_shared<StStream>();
  s->producer = std::move(p);
  s->nest = std::move(f);
  return s;
}

// ---------------------------------------------------------------------------
// For -> Unfold

Producer producer_to_unfold(const Producer& p, Gen& g) {
  if (p.kind == Producer::Kind::Unfold) return p;
  Gen* gp = &g;
  auto old_init = p.init;
  Producer out;
  out.kind = Producer::Kind::Unfold;
  out.card = Card::Many;
  out.init = [old_init, gp](const InitK& k) {
    return old_init([k, gp](const BoundOps& ops) {
      ForOps f = *ops.f;
      std::string i = gp->names.fresh("i");
      UnfoldOps u;
      u.term = [i, f] {
        return ir::cmp(ir::CmpOp::Le, ir::cell_get(i), f.upb());
      };
      u.step = [i, f](const Cont& k2) {
        return f.index(ir::cell_get(i), [i, k2](const StagedValue& a) {
          return ir::seq2(ir::cell_set(i, incremented(i)), k2(a));
        });
      };
      BoundOps b;
      b.u = u;
      return ir::cell_new(i, ir::ty_int(), ir::int_lit(0), k(b));
    });
  };
  return out;
}

StreamPtr for_unfold(const StreamPtr& s, Gen& g) {
  if (s->producer.kind == Producer::Kind::Unfold) return s;
  Producer p = producer_to_unfold(s->producer, g);
  if (s->linear()) return make_linear_stream(std::move(p));
  return make_nested_stream(std::move(p), s->nest);
}

// ---------------------------------------------------------------------------
// Mapping

StreamPtr map_raw(const MapFn& tr, const StreamPtr& s) {
  if (!s->linear()) {
    Binder nest = s->nest;
    return make_nested_stream(s->producer, [tr, nest](const StagedValue& a) {
      return map_raw(tr, nest(a));
    });
  }
  Producer p = s->producer;
  auto old_init = p.init;
  p.init = [old_init, tr](const InitK& k) {
    return old_init([k, tr](const BoundOps& ops) {
      BoundOps out;
      if (ops.f) {
        ForOps f = *ops.f;
        auto old_index = f.index;
        f.index = [old_index, tr](const ExprPtr& i, const Cont& k2) {
          return old_index(
              i, [tr, k2](const StagedValue& e) { return tr(e, k2); });
        };
        out.f = f;
      } else {
        UnfoldOps u = *ops.u;
        auto old_step = u.step;
        u.step = [old_step, tr](const Cont& k2) {
          return old_step(
              [tr, k2](const StagedValue& e) { return tr(e, k2); });
        };
        out.u = u;
      }
      return k(out);
    });
  };
  return make_linear_stream(std::move(p));
}

// ---------------------------------------------------------------------------
// Nesting

StreamPtr flat_map_raw(const Binder& tr, const StreamPtr& s) {
  if (s->linear()) return make_nested_stream(s->producer, tr);
  Binder nest = s->nest;
  return make_nested_stream(s->producer, [tr, nest](const StagedValue& a) {
    return flat_map_raw(tr, nest(a));
  });
}

// ---------------------------------------------------------------------------
// Folding: the consumer chooses the loops

namespace {

ir::StmtPtr fold_producer(const Cont& consumer, const Producer& p, Gen& g) {
  if (p.kind == Producer::Kind::For) {
    Gen* gp = &g;
    return p.init([consumer, gp](const BoundOps& ops) {
      std::string i = gp->names.fresh("i");
      return ir::for_s(i, ops.f->upb(), ops.f->index(ir::var(i), consumer));
    });
  }
  if (p.card == Card::AtMost1) {
    // A one-shot stage compiles to a conditional, not a loop.
    return p.init([consumer](const BoundOps& ops) {
      return ir::if_s(ops.u->term(), ops.u->step(consumer));
    });
  }
  return p.init([consumer](const BoundOps& ops) {
    return ir::while_s(ops.u->term(), ops.u->step(consumer));
  });
}

}  // namespace

ir::StmtPtr fold_raw(const Cont& consumer, const StreamPtr& s, Gen& g) {
  if (s->linear()) return fold_producer(consumer, s->producer, g);
  Binder nest = s->nest;
  Gen* gp = &g;
  Cont drive_inner = [consumer, nest, gp](const StagedValue& a) {
    return fold_raw(consumer, nest(a), *gp);
  };
  return fold_producer(drive_inner, s->producer, g);
}

// ---------------------------------------------------------------------------
// Extra termination conditions

namespace {

Producer guard_producer(const ir::ExprPtr& cond, const Producer& p, Gen& g) {
  if (p.kind == Producer::Kind::Unfold && p.card == Card::AtMost1) return p;
  Producer q = producer_to_unfold(p, g);
  auto old_init = q.init;
  q.init = [old_init, cond](const InitK& k) {
    return old_init([k, cond](const BoundOps& ops) {
      UnfoldOps u = *ops.u;
      auto old_term = u.term;
      u.term = [cond, old_term] { return ir::and_e(cond, old_term()); };
      BoundOps b;
      b.u = u;
      return k(b);
    });
  };
  return q;
}

}  // namespace

StreamPtr more_termination(const ir::ExprPtr& cond, const StreamPtr& s,
                           Gen& g) {
  Producer head = guard_producer(cond, s->producer, g);
  if (s->linear()) return make_linear_stream(std::move(head));
  Binder nest = s->nest;
  Gen* gp = &g;
  return make_nested_stream(
      std::move(head), [cond, nest, gp](const StagedValue& a) {
        return more_termination(cond, nest(a), *gp);
      });
}

// ---------------------------------------------------------------------------
// Countdown cells for take

Producer add_nr(const ir::ExprPtr& n, const Producer& p, Gen& g) {
  if (p.kind != Producer::Kind::Unfold)
    throw GenError("add_nr expects an unfold producer (apply for_unfold)");
  Gen* gp = &g;
  auto old_init = p.init;
  Producer out;
  out.kind = Producer::Kind::Unfold;
  out.card = p.card;
  out.init = [old_init, n, gp](const InitK& k) {
    return old_init([k, n, gp](const BoundOps& ops) {
      std::string nr = gp->names.fresh("nr");
      UnfoldOps u;
      auto old_term = ops.u->term;
      auto old_step = ops.u->step;
      u.term = [nr, old_term] {
        return ir::and_e(
            ir::cmp(ir::CmpOp::Gt, ir::cell_get(nr), ir::int_lit(0)),
            old_term());
      };
      u.step = [nr, old_step](const Cont& k2) {
        return old_step([nr, k2](const StagedValue& a) {
          return k2(StagedValue::pair(
              StagedValue::atom(ir::cell_get(nr), ir::ty_int()), a));
        });
      };
      BoundOps b;
      b.u = u;
      return ir::cell_new(nr, ir::ty_int(), n, k(b));
    });
  };
  return out;
}

// ---------------------------------------------------------------------------
// Zipping two linear producers

Producer zip_producer(const Producer& p1, const Producer& p2, Gen& g) {
  if (p1.kind == Producer::Kind::For && p2.kind == Producer::Kind::For) {
    // Both driven by one index with the min of the two bounds.
    auto i1 = p1.init;
    auto i2 = p2.init;
    Producer out;
    out.kind = Producer::Kind::For;
    out.card = Card::Many;
    out.init = [i1, i2](const InitK& k) {
      return i1([i2, k](const BoundOps& o1) {
        ForOps f1 = *o1.f;
        return i2([f1, k](const BoundOps& o2) {
          ForOps f2 = *o2.f;
          ForOps f;
          f.upb = [f1, f2] {
            return ir::binop(ir::BinOp::Min, f1.upb(), f2.upb());
          };
          f.index = [f1, f2](const ExprPtr& i, const Cont& k2) {
            return f1.index(i, [f2, i, k2](const StagedValue& e1) {
              return f2.index(i, [e1, k2](const StagedValue& e2) {
                return k2(StagedValue::pair(e1, e2));
              });
            });
          };
          BoundOps b;
          b.f = f;
          return k(b);
        });
      });
    };
    return out;
  }
  Producer q1 = producer_to_unfold(p1, g);
  Producer q2 = producer_to_unfold(p2, g);
  auto i1 = q1.init;
  auto i2 = q2.init;
  Producer out;
  out.kind = Producer::Kind::Unfold;
  out.card = (q1.card == Card::AtMost1 || q2.card == Card::AtMost1)
                 ? Card::AtMost1
                 : Card::Many;
  out.init = [i1, i2](const InitK& k) {
    return i1([i2, k](const BoundOps& o1) {
      UnfoldOps u1 = *o1.u;
      return i2([u1, k](const BoundOps& o2) {
        UnfoldOps u2 = *o2.u;
        UnfoldOps u;
        u.term = [u1, u2] { return ir::and_e(u1.term(), u2.term()); };
        u.step = [u1, u2](const Cont& k2) {
          return u1.step([u2, k2](const StagedValue& e1) {
            return u2.step([e1, k2](const StagedValue& e2) {
              return k2(StagedValue::pair(e1, e2));
            });
          });
        };
        BoundOps b;
        b.u = u;
        return k(b);
      });
    });
  };
  return out;
}

// ---------------------------------------------------------------------------
// Zip of linear with nested

namespace {

struct PushState {
  std::optional<UnfoldOps> lin;
  std::string term1r;
};

}  // namespace

StreamPtr push_linear(const Producer& lin, const Producer& nested_head,
                      const Binder& nestf, Gen& g) {
  if (lin.kind != Producer::Kind::Unfold ||
      nested_head.kind != Producer::Kind::Unfold)
    throw GenError("push_linear expects unfold producers");
  Gen* gp = &g;
  auto st = std::make_shared<PushState>();
  auto lin_init = lin.init;
  auto n_init = nested_head.init;

  Producer outer;
  outer.kind = Producer::Kind::Unfold;
  outer.card = nested_head.card;
  outer.init = [lin_init, n_init, st, gp](const InitK& k) {
    return lin_init([n_init, st, gp, k](const BoundOps& lops) {
      UnfoldOps lu = *lops.u;
      return n_init([lu, st, gp, k](const BoundOps& nops) {
        UnfoldOps nu = *nops.u;
        st->lin = lu;
        st->term1r = gp->names.fresh("term1r");
        UnfoldOps u;
        std::string term1r = st->term1r;
        u.term = [term1r, nu] {
          return ir::and_e(ir::cell_get(term1r), nu.term());
        };
        u.step = nu.step;
        BoundOps b;
        b.u = u;
        return ir::cell_new(term1r, ir::ty_bool(), lu.term(), k(b));
      });
    });
  };

  Binder binder = [st, nestf, gp](const StagedValue& a) -> StreamPtr {
    StreamPtr inner =
        more_termination(ir::cell_get(st->term1r), nestf(a), *gp);
    return map_raw(
        [st](const StagedValue& e2, const Cont& k) {
          // Advance the linear side only once the nested element is in
          // hand, then refresh its termination flag.
          return st->lin->step([st, e2, k](const StagedValue& e1) {
            return ir::seq2(ir::cell_set(st->term1r, st->lin->term()),
                            k(StagedValue::pair(e1, e2)));
          });
        },
        inner);
  };

  return make_nested_stream(std::move(outer), std::move(binder));
}

// ---------------------------------------------------------------------------
// Reifying a nested stream

namespace {

struct ReifyCtx {
  Gen* g = nullptr;
  std::string curr;
  std::vector<std::string> nadv;  // one resume cell per nesting level
  TyPtr flat_ty;
  bool elem_is_pair = false;
  bool shape_known = false;
};

ir::StmtPtr reify_emit(const std::shared_ptr<ReifyCtx>& ctx,
                       const StagedValue& v) {
  ir::ExprPtr payload;
  TyPtr ty = v.ty();
  bool pair_shape;
  if (v.is_atom()) {
    payload = ir::some_e(v.expr());
    pair_shape = false;
  } else if (v.fst().is_atom() && v.snd().is_atom()) {
    payload = ir::some_pair_e(v.fst().expr(), v.snd().expr());
    pair_shape = true;
  } else {
    throw GenError("make_linear: unsupported element shape");
  }
  if (ctx->shape_known) {
    if (ctx->elem_is_pair != pair_shape)
      throw GenError("make_linear: inconsistent element shapes");
    ctx->flat_ty = ir::ty_merge(ctx->flat_ty, ty);
  } else {
    ctx->shape_known = true;
    ctx->elem_is_pair = pair_shape;
    ctx->flat_ty = ty;
  }
  return ir::cell_set(ctx->curr, payload);
}

const std::string& reify_nadv(const std::shared_ptr<ReifyCtx>& ctx,
                              size_t level) {
  while (ctx->nadv.size() < level) {
    ctx->nadv.push_back(ctx->g->names.fresh("nadv"));
  }
  return ctx->nadv[level - 1];
}

// Generates the code that advances the substream ss (at the given nesting
// level) towards the next element: AtMost1 stages inline as conditionals,
// Many producers install a resume procedure in their level's cell.
ir::StmtPtr reify_drive(const std::shared_ptr<ReifyCtx>& ctx,
                        const StreamPtr& ss, size_t level) {
  std::string nadv = reify_nadv(ctx, level);
  Gen& g = *ctx->g;

  Cont deliver = [ctx, ss, level](const StagedValue& a) -> ir::StmtPtr {
    if (ss->linear()) return reify_emit(ctx, a);
    return reify_drive(ctx, ss->nest(a), level + 1);
  };

  const Producer& p = ss->producer;
  if (p.kind == Producer::Kind::Unfold && p.card == Card::AtMost1) {
    return p.init([deliver](const BoundOps& ops) {
      return ir::if_s(ops.u->term(), ops.u->step(deliver));
    });
  }
  Producer q = producer_to_unfold(p, g);
  Gen* gp = &g;
  return q.init([deliver, nadv, gp](const BoundOps& ops) {
    UnfoldOps u = *ops.u;
    std::string padv = gp->names.fresh("adv");
    ir::StmtPtr body = ir::if_s(u.term(), u.step(deliver),
                                ir::cell_set(nadv, ir::none_e()));
    return ir::proc_def(padv, body,
                        ir::cell_set(nadv, ir::some_e(ir::var(padv))));
  });
}

}  // namespace

Producer make_linear(const StreamPtr& s, Gen& g) {
  if (s->linear())
    throw GenError("make_linear applied to a linear stream (caller bug)");
  auto ctx = std::make_shared<ReifyCtx>();
  ctx->g = &g;
  Gen* gp = &g;
  StreamPtr str = s;

  Producer out;
  out.kind = Producer::Kind::Unfold;
  out.card = Card::Many;
  out.init = [str, ctx, gp](const InitK& k) {
    Producer head = producer_to_unfold(str->producer, *gp);
    Binder nest = str->nest;
    return head.init([str, ctx, gp, k, nest](const BoundOps& hops) {
      UnfoldOps hu = *hops.u;
      ctx->curr = gp->names.fresh("curr");

      // Advancing the outer producer: one step, then drive the nest.
      ir::StmtPtr outer_step = hu.step([ctx, nest](const StagedValue& a) {
        return reify_drive(ctx, nest(a), 1);
      });

      // Resume cascade, innermost pending level first.
      ir::StmtPtr body = outer_step;
      ir::ExprPtr pending = hu.term();
      for (size_t j = 0; j < ctx->nadv.size(); ++j) {
        const std::string& cell = ctx->nadv[j];
        std::string p = gp->names.fresh("adv");
        body = ir::match_opt(ir::cell_get(cell), p, "", ir::proc_call(p),
                             body);
        pending = ir::or_e(is_some(cell), pending);
      }

      std::string adv = gp->names.fresh("adv");
      ir::StmtPtr adv_body = ir::seq2(
          ir::cell_set(ctx->curr, ir::none_e()),
          ir::while_s(ir::and_e(is_none(ctx->curr), pending), body));

      if (!ctx->shape_known)
        throw GenError("make_linear: nest produced no element site");

      std::string curr = ctx->curr;
      bool elem_is_pair = ctx->elem_is_pair;
      TyPtr flat_ty = ctx->flat_ty;

      UnfoldOps u;
      u.term = [curr] { return is_some(curr); };
      u.step = [curr, adv, elem_is_pair, flat_ty, gp](const Cont& k2) {
        if (elem_is_pair) {
          std::string e1 = gp->names.fresh("el");
          std::string e2 = gp->names.fresh("el");
          StagedValue v = StagedValue::pair(
              StagedValue::atom(ir::var(e1), flat_ty->a),
              StagedValue::atom(ir::var(e2), flat_ty->b));
          return ir::match_opt(ir::cell_get(curr), e1, e2,
                               ir::seq2(ir::proc_call(adv), k2(v)),
                               ir::skip());
        }
        std::string el = gp->names.fresh("el");
        StagedValue v = StagedValue::atom(ir::var(el), flat_ty);
        return ir::match_opt(ir::cell_get(curr), el, "",
                             ir::seq2(ir::proc_call(adv), k2(v)),
                             ir::skip());
      };
      BoundOps b;
      b.u = u;

      ir::StmtPtr rest = ir::seq2(ir::proc_call(adv), k(b));
      ir::StmtPtr with_proc = ir::proc_def(adv, adv_body, rest);
      for (size_t j = ctx->nadv.size(); j-- > 0;) {
        with_proc = ir::cell_new(ctx->nadv[j], ir::ty_option(ir::ty_proc()),
                                 ir::none_e(), with_proc);
      }
      return ir::cell_new(curr, ir::ty_option(flat_ty), ir::none_e(),
                          with_proc);
    });
  };
  return out;
}

// ---------------------------------------------------------------------------
// The zip dispatcher

StreamPtr zip_raw(const StreamPtr& s1, const StreamPtr& s2, Gen& g) {
  if (s1->linear() && s2->linear()) {
    g.zip_trace.push_back("linear*linear");
    return make_linear_stream(zip_producer(s1->producer, s2->producer, g));
  }
  if (s1->linear() && !s2->linear()) {
    g.zip_trace.push_back("linear*nested");
    return push_linear(producer_to_unfold(s1->producer, g),
                       producer_to_unfold(s2->producer, g), s2->nest, g);
  }
  if (!s1->linear() && s2->linear()) {
    g.zip_trace.push_back("nested*linear");
    StreamPtr swapped =
        push_linear(producer_to_unfold(s2->producer, g),
                    producer_to_unfold(s1->producer, g), s1->nest, g);
    // Restore pair order at generation time.
    return map_raw(
        [](const StagedValue& yx, const Cont& k) {
          return k(StagedValue::pair(yx.snd(), yx.fst()));
        },
        swapped);
  }
  g.zip_trace.push_back("nested*nested");
  return zip_raw(make_linear_stream(make_linear(s1, g)), s2, g);
}

}  // namespace strym::stream
