#include "strym/ir_eval.hpp"

#include <sstream>

#include "strym/arith.hpp"

namespace strym::ir {

// ---------------------------------------------------------------------------
// Value helpers

Value v_int(long long v) {
  Value x;
  x.k = Value::K::Int;
  x.i = v;
  return x;
}
Value v_bool(bool v) {
  Value x;
  x.k = Value::K::Bool;
  x.i = v ? 1 : 0;
  return x;
}
Value v_unit() {
  Value x;
  x.k = Value::K::Unit;
  return x;
}
Value v_arr(std::vector<long long> elems) {
  Value x;
  x.k = Value::K::Arr;
  x.arr = std::make_shared<const std::vector<long long>>(std::move(elems));
  return x;
}
Value v_pair(Value a, Value b) {
  Value x;
  x.k = Value::K::Pair;
  x.pair = std::make_shared<const ValuePair>(
      ValuePair{std::move(a), std::move(b)});
  return x;
}
Value v_nil() {
  Value x;
  x.k = Value::K::List;
  return x;
}
Value v_cons(Value head, const Value& tail) {
  Value x;
  x.k = Value::K::List;
  x.list = std::make_shared<const ListNode>(
      ListNode{std::move(head), tail.list});
  return x;
}
Value v_some(Value payload) {
  Value x;
  x.k = Value::K::Some;
  x.some = std::make_shared<const Value>(std::move(payload));
  return x;
}
Value v_none() {
  Value x;
  x.k = Value::K::None;
  return x;
}

bool value_equal(const Value& a, const Value& b) {
  if (a.k != b.k) return false;
  switch (a.k) {
    case Value::K::Int:
    case Value::K::Bool:
      return a.i == b.i;
    case Value::K::Unit:
      return true;
    case Value::K::Arr:
      return *a.arr == *b.arr;
    case Value::K::Pair:
      return value_equal(a.pair->a, b.pair->a) &&
             value_equal(a.pair->b, b.pair->b);
    case Value::K::List: {
      auto x = a.list.get();
      auto y = b.list.get();
      while (x && y) {
        if (!value_equal(x->head, y->head)) return false;
        x = x->tail.get();
        y = y->tail.get();
      }
      return !x && !y;
    }
    case Value::K::Some:
      return value_equal(*a.some, *b.some);
    case Value::K::None:
      return true;
    case Value::K::Proc:
      return a.proc == b.proc;
  }
  return false;
}

std::string value_to_string(const Value& v) {
  std::ostringstream out;
  switch (v.k) {
    case Value::K::Int:
      out << v.i;
      break;
    case Value::K::Bool:
      out << (v.i ? "true" : "false");
      break;
    case Value::K::Unit:
      out << "()";
      break;
    case Value::K::Arr: {
      out << "[";
      for (size_t i = 0; i < v.arr->size(); ++i) {
        if (i) out << ", ";
        out << (*v.arr)[i];
      }
      out << "]";
      break;
    }
    case Value::K::Pair:
      out << "(" << value_to_string(v.pair->a) << ", "
          << value_to_string(v.pair->b) << ")";
      break;
    case Value::K::List: {
      out << "[";
      bool first = true;
      for (auto n = v.list.get(); n; n = n->tail.get()) {
        if (!first) out << ", ";
        first = false;
        out << value_to_string(n->head);
      }
      out << "]";
      break;
    }
    case Value::K::Some:
      out << "Some(" << value_to_string(*v.some) << ")";
      break;
    case Value::K::None:
      out << "None";
      break;
    case Value::K::Proc:
      out << "<proc>";
      break;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Evaluator

struct Binding {
  const std::string* name;
  bool is_cell = false;
  size_t cell = 0;
  Value v;
};

struct ProcClosure {
  const Stmt* body;
  std::vector<Binding> env;
};

namespace {

class Evaluator {
 public:
  Evaluator(const Program& p, const std::vector<Value>& inputs,
            long long fuel)
      : prog_(p), fuel_(fuel) {
    if (inputs.size() != p.params.size()) {
      throw EvalError(EvalErrorKind::BadInput,
                      "expected " + std::to_string(p.params.size()) +
                          " inputs, got " + std::to_string(inputs.size()));
    }
    for (size_t i = 0; i < inputs.size(); ++i) {
      const auto& [name, ty] = p.params[i];
      bool want_arr = ty && ty->kind == Ty::Kind::ArrInt;
      bool got_arr = inputs[i].k == Value::K::Arr;
      bool want_int = ty && ty->kind == Ty::Kind::Int;
      bool got_int = inputs[i].k == Value::K::Int;
      if ((want_arr && !got_arr) || (want_int && !got_int)) {
        throw EvalError(EvalErrorKind::BadInput,
                        "input " + name + " has the wrong shape");
      }
      env_.push_back(Binding{&name, false, 0, inputs[i]});
    }
  }

  EvalResult run() {
    exec(prog_.body.get());
    if (!result_seen_) {
      throw EvalError(EvalErrorKind::Internal,
                      "result cell " + prog_.result_name + " never allocated");
    }
    return {cells_[result_cell_], c_};
  }

 private:
  void tick() {
    if (++c_.steps > fuel_) {
      throw EvalError(EvalErrorKind::FuelExhausted,
                      "fuel exhausted after " + std::to_string(fuel_) +
                          " steps");
    }
  }
  void op() { ++c_.work; }

  void alloc_event(bool user) {
    ++c_.allocs;
    if (user) {
      ++c_.allocs_user;
    } else if (steady_) {
      ++c_.steady_allocs_nonuser;
    }
  }

  const Binding& lookup(const std::string& name) {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->name == &name || *it->name == name) return *it;
    }
    throw EvalError(EvalErrorKind::Internal, "unbound name " + name);
  }

  long long as_int(const Value& v) {
    if (v.k != Value::K::Int)
      throw EvalError(EvalErrorKind::Internal, "expected int value");
    return v.i;
  }
  bool as_bool(const Value& v) {
    if (v.k != Value::K::Bool)
      throw EvalError(EvalErrorKind::Internal, "expected bool value");
    return v.i != 0;
  }

  Value ev(const Expr* e) {
    tick();
    switch (e->kind) {
      case Expr::Kind::IntLit:
        return v_int(e->ival);
      case Expr::Kind::BoolLit:
        return v_bool(e->bval);
      case Expr::Kind::UnitLit:
        return v_unit();
      case Expr::Kind::Var: {
        const Binding& b = lookup(e->name);
        if (b.is_cell)
          throw EvalError(EvalErrorKind::Internal,
                          "cell used as value: " + e->name);
        return b.v;
      }
      case Expr::Kind::Binop: {
        op();
        long long a = as_int(ev(e->a.get()));
        long long b = as_int(ev(e->b.get()));
        try {
          switch (e->bop) {
            case BinOp::Add:
              return v_int(arith::add(a, b));
            case BinOp::Sub:
              return v_int(arith::sub(a, b));
            case BinOp::Mul:
              return v_int(arith::mul(a, b));
            case BinOp::Div:
              return v_int(arith::div_trunc(a, b));
            case BinOp::Mod:
              return v_int(arith::mod_trunc(a, b));
            case BinOp::Min:
              return v_int(arith::min2(a, b));
          }
        } catch (const arith::DivByZero&) {
          throw EvalError(EvalErrorKind::DivByZero, "division by zero");
        }
        throw EvalError(EvalErrorKind::Internal, "bad binop");
      }
      case Expr::Kind::Cmp: {
        op();
        Value a = ev(e->a.get());
        Value b = ev(e->b.get());
        if (e->cop == CmpOp::Eq) {
          bool a_opt = a.k == Value::K::Some || a.k == Value::K::None;
          bool b_opt = b.k == Value::K::Some || b.k == Value::K::None;
          if (a_opt && b_opt) {
            return v_bool((a.k == Value::K::None) == (b.k == Value::K::None));
          }
          return v_bool(as_int(a) == as_int(b));
        }
        long long x = as_int(a), y = as_int(b);
        switch (e->cop) {
          case CmpOp::Lt:
            return v_bool(x < y);
          case CmpOp::Le:
            return v_bool(x <= y);
          case CmpOp::Gt:
            return v_bool(x > y);
          case CmpOp::Ge:
            return v_bool(x >= y);
          default:
            break;
        }
        throw EvalError(EvalErrorKind::Internal, "bad cmp");
      }
      case Expr::Kind::And: {
        op();
        if (!as_bool(ev(e->a.get()))) return v_bool(false);
        return v_bool(as_bool(ev(e->b.get())));
      }
      case Expr::Kind::Or: {
        op();
        if (as_bool(ev(e->a.get()))) return v_bool(true);
        return v_bool(as_bool(ev(e->b.get())));
      }
      case Expr::Kind::Not:
        op();
        return v_bool(!as_bool(ev(e->a.get())));
      case Expr::Kind::ArrLen: {
        op();
        Value a = ev(e->a.get());
        if (a.k != Value::K::Arr)
          throw EvalError(EvalErrorKind::Internal, "len of non-array");
        return v_int(static_cast<long long>(a.arr->size()));
      }
      case Expr::Kind::ArrGet: {
        op();
        Value a = ev(e->a.get());
        long long idx = as_int(ev(e->b.get()));
        if (a.k != Value::K::Arr)
          throw EvalError(EvalErrorKind::Internal, "index of non-array");
        if (idx < 0 || idx >= static_cast<long long>(a.arr->size())) {
          throw EvalError(EvalErrorKind::OutOfBounds,
                          "index " + std::to_string(idx) +
                              " out of bounds for length " +
                              std::to_string(a.arr->size()));
        }
        return v_int((*a.arr)[static_cast<size_t>(idx)]);
      }
      case Expr::Kind::CellGet: {
        op();
        const Binding& b = lookup(e->name);
        if (!b.is_cell)
          throw EvalError(EvalErrorKind::Internal,
                          "value read as cell: " + e->name);
        return cells_[b.cell];
      }
      case Expr::Kind::Pair: {
        op();
        alloc_event(e->user_tag);
        Value a = ev(e->a.get());
        Value b = ev(e->b.get());
        return v_pair(std::move(a), std::move(b));
      }
      case Expr::Kind::Cons: {
        op();
        alloc_event(e->user_tag);
        Value h = ev(e->a.get());
        Value t = ev(e->b.get());
        if (t.k != Value::K::List)
          throw EvalError(EvalErrorKind::Internal, "cons onto non-list");
        return v_cons(std::move(h), t);
      }
      case Expr::Kind::Nil:
        return v_nil();
      case Expr::Kind::Some: {
        op();
        alloc_event(e->user_tag);
        return v_some(ev(e->a.get()));
      }
      case Expr::Kind::None:
        return v_none();
      case Expr::Kind::SomePair: {
        op();
        alloc_event(e->user_tag);
        Value a = ev(e->a.get());
        Value b = ev(e->b.get());
        return v_some(v_pair(std::move(a), std::move(b)));
      }
    }
    throw EvalError(EvalErrorKind::Internal, "bad expression node");
  }

  void iteration_starts() {
    if (loop_depth_ == 0) steady_ = true;
  }

  void exec(const Stmt* s) {
    if (!s) return;
    tick();
    switch (s->kind) {
      case Stmt::Kind::Let: {
        Value v = ev(s->e.get());
        env_.push_back(Binding{&s->name, false, 0, std::move(v)});
        exec(s->s1.get());
        env_.pop_back();
        break;
      }
      case Stmt::Kind::CellNew: {
        op();
        Value v = ev(s->e.get());
        size_t idx = cells_.size();
        cells_.push_back(std::move(v));
        if (!result_seen_ && s->name == prog_.result_name) {
          result_seen_ = true;
          result_cell_ = idx;
        }
        env_.push_back(Binding{&s->name, true, idx, Value{}});
        exec(s->s1.get());
        env_.pop_back();
        break;
      }
      case Stmt::Kind::CellSet: {
        op();
        const Binding& b = lookup(s->name);
        if (!b.is_cell)
          throw EvalError(EvalErrorKind::Internal,
                          "assignment to non-cell " + s->name);
        size_t idx = b.cell;
        cells_[idx] = ev(s->e.get());
        if (s->name == prog_.result_name) ++c_.result_cell_sets;
        break;
      }
      case Stmt::Kind::For: {
        op();
        long long upb = as_int(ev(s->e.get()));
        Binding b{&s->name, false, 0, v_int(0)};
        for (long long i = 0; i <= upb; ++i) {
          iteration_starts();
          tick();
          op();
          b.v = v_int(i);
          env_.push_back(b);
          ++loop_depth_;
          exec(s->s1.get());
          --loop_depth_;
          env_.pop_back();
        }
        break;
      }
      case Stmt::Kind::While: {
        op();
        while (as_bool(ev(s->e.get()))) {
          iteration_starts();
          tick();
          op();
          ++loop_depth_;
          exec(s->s1.get());
          --loop_depth_;
        }
        break;
      }
      case Stmt::Kind::If: {
        op();
        if (as_bool(ev(s->e.get()))) {
          exec(s->s1.get());
        } else {
          exec(s->s2.get());
        }
        break;
      }
      case Stmt::Kind::Match: {
        op();
        Value v = ev(s->e.get());
        if (v.k == Value::K::Some) {
          size_t mark = env_.size();
          if (!s->name2.empty()) {
            if (v.some->k != Value::K::Pair)
              throw EvalError(EvalErrorKind::Internal,
                              "match Some(a, s) on non-pair payload");
            env_.push_back(Binding{&s->name, false, 0, v.some->pair->a});
            env_.push_back(Binding{&s->name2, false, 0, v.some->pair->b});
          } else {
            env_.push_back(Binding{&s->name, false, 0, *v.some});
          }
          exec(s->s1.get());
          env_.resize(mark);
        } else if (v.k == Value::K::None) {
          exec(s->s2.get());
        } else {
          throw EvalError(EvalErrorKind::Internal, "match on non-option");
        }
        break;
      }
      case Stmt::Kind::ProcDef: {
        op();
        alloc_event(false);
        auto clo = std::make_shared<ProcClosure>();
        clo->body = s->s1.get();
        clo->env = env_;  // capture by copy
        Value v;
        v.k = Value::K::Proc;
        v.proc = std::move(clo);
        env_.push_back(Binding{&s->name, false, 0, std::move(v)});
        exec(s->s2.get());
        env_.pop_back();
        break;
      }
      case Stmt::Kind::ProcCall: {
        op();
        const Binding& b = lookup(s->name);
        if (b.is_cell || b.v.k != Value::K::Proc)
          throw EvalError(EvalErrorKind::Internal,
                          "call of non-procedure " + s->name);
        auto proc = b.v.proc;
        std::vector<Binding> saved = std::move(env_);
        env_ = proc->env;
        exec(proc->body);
        env_ = std::move(saved);
        break;
      }
      case Stmt::Kind::Seq:
        for (const auto& x : s->stmts) exec(x.get());
        break;
      case Stmt::Kind::Skip:
        break;
    }
  }

  const Program& prog_;
  long long fuel_;
  Counters c_;
  std::vector<Binding> env_;
  std::vector<Value> cells_;
  bool steady_ = false;
  int loop_depth_ = 0;
  bool result_seen_ = false;
  size_t result_cell_ = 0;
};

}  // namespace

EvalResult eval(const Program& p, const std::vector<Value>& inputs,
                long long fuel) {
  Evaluator e(p, inputs, fuel);
  return e.run();
}

}  // namespace strym::ir
