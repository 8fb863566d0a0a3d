// Lowering from the typed tree to the deep statement embedding. Assignments
// become Basic updates (array cells are flattened, dynamic indices become
// conditional writes), dereferences become typed-heap operations, and every
// unsafe action is preceded by a Guard: non-null + alignment for pointer
// accesses, bounds for array indices, nonzero divisor for / and %.
//
// Calls in expression position are pulled out in evaluation order into
// compiler temporaries (f::#tN), so expressions handed to the logic are pure.
// `return` stops the current continuation; the subset checker has already
// rejected returns inside loops.

#include <cassert>
#include <functional>

#include "wpdrv/translate.hpp"
#include "wpdrv/typecheck.hpp"

namespace wpdrv {

namespace {

struct LoweringUnsupported {
  SourceLoc loc;
  std::string what;
};

WordType scalar_type_of(const CTypePtr &t) {
  if (t->is_pointer()) return pointer_word_type();
  if (t->is_word()) return t->word;
  throw LoweringUnsupported{{}, "non-scalar value of type " + type_to_string(t)};
}

struct FnLowering {
  const Ast &ast;
  const GlobalsRecord &globals;
  const SymbolTable &symbols;
  const FunctionDef &fn;
  LocalsRecord &locals_rec;
  std::set<std::string> &params_written;
  int temp_counter = 0;

  std::vector<DeepPtr> prelude;  // guards and extracted calls, in order

  FnLowering(const Ast &a, const GlobalsRecord &g, const SymbolTable &sy,
             const FunctionDef &f, LocalsRecord &lr, std::set<std::string> &pw)
      : ast(a), globals(g), symbols(sy), fn(f), locals_rec(lr), params_written(pw) {}

  LocId result_loc() const { return fn.name + "::#result"; }

  void emit(DeepPtr s) { prelude.push_back(std::move(s)); }

  void guard(Formula g, GuardKind k, SourceLoc loc) {
    emit(deep_guard(std::move(g), k, nullptr, loc));
  }

  DeepPtr take_prelude() {
    DeepPtr s = deep_skip();
    for (auto &p : prelude) s = deep_seq(s, p);
    prelude.clear();
    return s;
  }

  // --- access paths -----------------------------------------------------

  struct PathSeg {
    bool is_index = false;
    std::string field;    // !is_index
    Term index;           // is_index, dynamic (null when constant)
    uint64_t const_index = 0;
    uint64_t count = 0;   // array length
  };

  struct Path {
    std::string base;  // location prefix ("tasks", "f::x")
    std::vector<PathSeg> segs;
    WordType type;  // scalar type at the end
  };

  // Heap cell access (through a pointer).
  struct HeapCell {
    WordType tag;
    Term addr;
  };

  struct LValue {
    enum Kind { Record, Heap } kind = Record;
    Path path;
    HeapCell cell;
  };

  bool is_record_base(const ExprPtr &e) const {
    return e->kind == ExprKind::Ident &&
           (e->ref == RefKind::Global || e->ref == RefKind::Local || e->ref == RefKind::Param);
  }

  LValue lower_lvalue(const ExprPtr &e) {
    switch (e->kind) {
      case ExprKind::Ident: {
        if (!is_record_base(e))
          throw LoweringUnsupported{e->loc, "cannot assign to '" + e->name + "'"};
        if (e->ref == RefKind::Param) params_written.insert(e->resolved);
        LValue lv;
        lv.kind = LValue::Record;
        lv.path.base = e->resolved;
        // aggregates are path prefixes; the final segment sets the type
        if (e->type->is_word() || e->type->is_pointer())
          lv.path.type = scalar_type_of(e->type);
        return lv;
      }
      case ExprKind::Member: {
        if (e->is_arrow) throw LoweringUnsupported{e->loc, "-> is not lowered"};
        LValue lv = lower_lvalue(e->a);
        if (lv.kind != LValue::Record)
          throw LoweringUnsupported{e->loc, "field access through the heap"};
        PathSeg seg;
        seg.is_index = false;
        seg.field = e->name;
        lv.path.segs.push_back(std::move(seg));
        if (e->type->is_word() || e->type->is_pointer())
          lv.path.type = scalar_type_of(e->type);
        return lv;
      }
      case ExprKind::Index: {
        const CTypePtr &base_t = e->a->type;
        if (base_t->is_pointer()) {
          // p[i]: heap access at p + i*size
          Term base = lower_term(e->a);
          Term idx = mk_convert(lower_term(e->b), u64());
          WordType tag = scalar_type_of(base_t->pointee);
          Term addr = mk_binary(TermOp::Add, base,
                                mk_binary(TermOp::Mul, idx, mk_const(tag.bits / 8, u64())));
          addr = fold_constants(addr);
          emit_heap_guards(tag, addr, e->loc);
          LValue lv;
          lv.kind = LValue::Heap;
          lv.cell = HeapCell{tag, addr};
          return lv;
        }
        if (base_t->kind != TypeKind::Array)
          throw LoweringUnsupported{e->loc, "indexing a non-array"};
        LValue lv = lower_lvalue(e->a);
        if (lv.kind != LValue::Record)
          throw LoweringUnsupported{e->loc, "indexing through the heap"};
        PathSeg seg;
        seg.is_index = true;
        seg.count = base_t->array_len;
        Term idx = lower_term(e->b);
        idx = fold_constants(idx);
        if (idx->op == TermOp::Const) {
          seg.const_index = idx->value.raw;
          if (seg.const_index >= seg.count) {
            guard(mk_false(), GuardKind::Bounds, e->loc);
            seg.const_index = 0;
          }
        } else {
          // bounds guard on the runtime index (raw comparison also rejects
          // negative signed indices)
          guard(mk_cmp(CmpOp::Ult, idx, mk_const(seg.count, idx->type)), GuardKind::Bounds,
                e->loc);
          seg.index = idx;
        }
        lv.path.segs.push_back(std::move(seg));
        if (e->type->is_word() || e->type->is_pointer())
          lv.path.type = scalar_type_of(e->type);
        return lv;
      }
      case ExprKind::Unary: {
        if (e->un != UnOp::Deref) break;
        Term addr = lower_term(e->a);
        WordType tag = scalar_type_of(e->a->type->pointee);
        emit_heap_guards(tag, addr, e->loc);
        LValue lv;
        lv.kind = LValue::Heap;
        lv.cell = HeapCell{tag, addr};
        return lv;
      }
      default:
        break;
    }
    throw LoweringUnsupported{e->loc, "unsupported assignment target"};
  }

  void emit_heap_guards(WordType tag, const Term &addr, SourceLoc loc) {
    guard(mk_cmp(CmpOp::Ne, addr, mk_const(0, u64())), GuardKind::NullCheck, loc);
    uint64_t bytes = tag.bits / 8;
    if (bytes > 1) {
      guard(mk_cmp(CmpOp::Eq, mk_binary(TermOp::BAnd, addr, mk_const(bytes - 1, u64())),
                   mk_const(0, u64())),
            GuardKind::Alignment, loc);
    }
  }

  // enumerate the flattened cells of a record path
  Term read_path(const std::string &prefix, const std::vector<PathSeg> &segs, size_t i,
                 WordType type) {
    if (i == segs.size()) return mk_state_read(prefix, type);
    const PathSeg &s = segs[i];
    if (!s.is_index) return read_path(prefix + "." + s.field, segs, i + 1, type);
    if (!s.index)
      return read_path(prefix + "[" + std::to_string(s.const_index) + "]", segs, i + 1, type);
    Term out = read_path(prefix + "[" + std::to_string(s.count - 1) + "]", segs, i + 1, type);
    for (uint64_t k = s.count - 1; k-- > 0;) {
      Formula hit = mk_cmp(CmpOp::Eq, s.index, mk_const(k, s.index->type));
      out = mk_ite(hit, read_path(prefix + "[" + std::to_string(k) + "]", segs, i + 1, type),
                   out);
    }
    return out;
  }

  void write_path(const std::string &prefix, const std::vector<PathSeg> &segs, size_t i,
                  WordType type, const Term &value, Formula cond,
                  std::vector<LocWrite> &out) {
    if (i == segs.size()) {
      Term v = value;
      if (cond) v = mk_ite(cond, value, mk_state_read(prefix, type));
      out.push_back(LocWrite{prefix, v});
      return;
    }
    const PathSeg &s = segs[i];
    if (!s.is_index) {
      write_path(prefix + "." + s.field, segs, i + 1, type, value, cond, out);
      return;
    }
    if (!s.index) {
      write_path(prefix + "[" + std::to_string(s.const_index) + "]", segs, i + 1, type, value,
                 cond, out);
      return;
    }
    for (uint64_t k = 0; k < s.count; ++k) {
      Formula hit = mk_cmp(CmpOp::Eq, s.index, mk_const(k, s.index->type));
      Formula c = cond ? mk_and(cond, hit) : hit;
      write_path(prefix + "[" + std::to_string(k) + "]", segs, i + 1, type, value, c, out);
    }
  }

  Term read_lvalue(const LValue &lv) {
    if (lv.kind == LValue::Heap) return mk_heap_read(lv.cell.tag, lv.cell.addr);
    return read_path(lv.path.base, lv.path.segs, 0, lv.path.type);
  }

  DeepPtr assign_lvalue(const LValue &lv, Term value, SourceLoc loc) {
    if (lv.kind == LValue::Heap) {
      StateUpdate u;
      u.heap = HeapWriteOp{lv.cell.tag, lv.cell.addr, std::move(value)};
      return deep_basic(std::move(u), loc);
    }
    StateUpdate u;
    write_path(lv.path.base, lv.path.segs, 0, lv.path.type, value, nullptr, u.writes);
    return deep_basic(std::move(u), loc);
  }

  // --- terms ---------------------------------------------------------------

  LocId fresh_temp(WordType type, SourceLoc loc) {
    LocId t = fn.name + "::#t" + std::to_string(temp_counter++);
    locals_rec.fields.push_back(RecordField{t, type, false, 0, loc});
    return t;
  }

  Term lower_term(const ExprPtr &e) {
    switch (e->kind) {
      case ExprKind::IntLit:
        return mk_const(e->int_value, scalar_type_of(e->type));
      case ExprKind::Ident:
        switch (e->ref) {
          case RefKind::EnumConst:
            return mk_const(e->const_value, scalar_type_of(e->type));
          case RefKind::Function: {
            uint64_t addr = symbols.lookup(e->name);
            auto n = std::make_shared<TermNode>();
            n->op = TermOp::Const;
            n->type = u64();
            n->value = WordVal(addr, u64());
            n->name = e->name;  // printed as (sym name)
            return n;
          }
          case RefKind::Global:
          case RefKind::Local:
          case RefKind::Param: {
            if (e->type->kind == TypeKind::Array || e->type->kind == TypeKind::Struct) {
              // aggregate value use (only as a base of Member/Index, which
              // the callers handle); anything else is unsupported
              throw LoweringUnsupported{e->loc, "aggregate used as a value"};
            }
            return mk_state_read(e->resolved, scalar_type_of(e->type));
          }
          default:
            throw LoweringUnsupported{e->loc, "unresolved identifier '" + e->name + "'"};
        }
      case ExprKind::Member:
      case ExprKind::Index: {
        LValue lv = lower_lvalue_for_read(e);
        return read_lvalue(lv);
      }
      case ExprKind::Unary:
        return lower_unary(e);
      case ExprKind::Binary:
        return lower_binary(e);
      case ExprKind::Cond: {
        Formula c = lower_condition(e->a);
        Term t = lower_term(e->b);
        Term f = lower_term(e->c);
        return mk_ite(c, t, f);
      }
      case ExprKind::Call:
        return lower_call_expr(e);
      case ExprKind::Cast: {
        if (e->cast_type->is_void()) return lower_term(e->a);
        Term inner = lower_term(e->a);
        return mk_convert(inner, scalar_type_of(e->cast_type));
      }
      case ExprKind::OldExpr: {
        Term inner = lower_term(e->a);
        return rewrite_reads_to_old(inner);
      }
      case ExprKind::ResultExpr:
        return mk_var("\\result", scalar_type_of(e->type));
      case ExprKind::HeapExpr: {
        Term addr = mk_convert(lower_term(e->a), u64());
        return mk_heap_read(e->cast_type->word, addr);
      }
      case ExprKind::FloatLit:
        throw LoweringUnsupported{e->loc, "floating point survived the subset check"};
      case ExprKind::Assign:
        throw LoweringUnsupported{e->loc, "assignment in expression position"};
    }
    throw LoweringUnsupported{e->loc, "unsupported expression"};
  }

  // Member/Index in read position: same path machinery, but a heap access
  // yields a read
  LValue lower_lvalue_for_read(const ExprPtr &e) { return lower_lvalue(e); }

  Term lower_unary(const ExprPtr &e) {
    switch (e->un) {
      case UnOp::Neg:
        return mk_unary(TermOp::Neg, lower_term(e->a));
      case UnOp::BitNot:
        return mk_unary(TermOp::BNot, lower_term(e->a));
      case UnOp::LogNot: {
        Formula f = lower_condition(e->a);
        return mk_ite(f, mk_const(0, s32()), mk_const(1, s32()));
      }
      case UnOp::Deref: {
        Term addr = lower_term(e->a);
        WordType tag = scalar_type_of(e->a->type->pointee);
        emit_heap_guards(tag, addr, e->loc);
        return mk_heap_read(tag, addr);
      }
      case UnOp::AddrOf:
        if (e->a->kind == ExprKind::Ident && e->a->ref == RefKind::Function) {
          uint64_t addr = symbols.lookup(e->a->name);
          auto n = std::make_shared<TermNode>();
          n->op = TermOp::Const;
          n->type = u64();
          n->value = WordVal(addr, u64());
          n->name = e->a->name;
          return n;
        }
        throw LoweringUnsupported{e->loc, "address-of survived the subset check"};
      default:
        throw LoweringUnsupported{e->loc, "increment in expression position"};
    }
  }

  Term lower_binary(const ExprPtr &e) {
    switch (e->bin) {
      case BinOp::Lt:
      case BinOp::Gt:
      case BinOp::Le:
      case BinOp::Ge:
      case BinOp::Eq:
      case BinOp::Ne:
      case BinOp::LogAnd:
      case BinOp::LogOr: {
        Formula f = lower_condition(e);
        return mk_ite(f, mk_const(1, s32()), mk_const(0, s32()));
      }
      default:
        break;
    }
    // pointer arithmetic scales by the pointee size
    if (e->a->type->is_pointer() || e->b->type->is_pointer()) {
      const ExprPtr &pe = e->a->type->is_pointer() ? e->a : e->b;
      const ExprPtr &we = e->a->type->is_pointer() ? e->b : e->a;
      Term p = lower_term(pe);
      Term w = mk_convert(lower_term(we), u64());
      uint64_t size = scalar_type_of(pe->type->pointee).bits / 8;
      Term scaled = mk_binary(TermOp::Mul, w, mk_const(size, u64()));
      return fold_constants(
          mk_binary(e->bin == BinOp::Sub ? TermOp::Sub : TermOp::Add, p, scaled));
    }
    Term a = lower_term(e->a);
    Term b = lower_term(e->b);
    TermOp op;
    bool is_div = false;
    switch (e->bin) {
      case BinOp::Add: op = TermOp::Add; break;
      case BinOp::Sub: op = TermOp::Sub; break;
      case BinOp::Mul: op = TermOp::Mul; break;
      case BinOp::Div: op = TermOp::UDiv; is_div = true; break;
      case BinOp::Rem: op = TermOp::URem; is_div = true; break;
      case BinOp::BitAnd: op = TermOp::BAnd; break;
      case BinOp::BitOr: op = TermOp::BOr; break;
      case BinOp::BitXor: op = TermOp::BXor; break;
      case BinOp::Shl: op = TermOp::Shl; break;
      case BinOp::Shr:
        op = e->type->word.is_signed ? TermOp::AShr : TermOp::LShr;
        break;
      default:
        throw LoweringUnsupported{e->loc, "operator"};
    }
    if (op == TermOp::Shl || op == TermOp::LShr || op == TermOp::AShr) {
      // C validates shift operands separately; widths may differ
      b = mk_convert(b, a->type);
    }
    if (is_div) {
      Term bf = fold_constants(b);
      if (bf->op == TermOp::Const) {
        if (bf->value.raw == 0) guard(mk_false(), GuardKind::DivByZero, e->loc);
      } else {
        guard(mk_cmp(CmpOp::Ne, bf, mk_const(0, bf->type)), GuardKind::DivByZero, e->loc);
      }
    }
    return mk_binary(op, a, b);
  }

  Term lower_call_expr(const ExprPtr &e) {
    CTypePtr result_type = e->type;
    if (result_type->is_void())
      throw LoweringUnsupported{e->loc, "void call used as a value"};
    WordType rt = scalar_type_of(result_type);
    LocId tmp = fresh_temp(rt, e->loc);
    emit(lower_call_stmt(e, tmp));
    return mk_state_read(tmp, rt);
  }

  DeepPtr lower_call_stmt(const ExprPtr &e, std::optional<LocId> result) {
    std::vector<Term> args;
    for (const auto &a : e->args) args.push_back(lower_term(a));
    if (e->a->kind == ExprKind::Ident && e->a->ref == RefKind::Function)
      return deep_call(e->a->name, std::move(args), std::move(result), e->loc);
    // indirect call (only reachable in dont_translate functions)
    ExprPtr callee = e->a;
    if (callee->kind == ExprKind::Unary && callee->un == UnOp::Deref) callee = callee->a;
    Term addr = lower_term(callee);
    return deep_callptr(std::move(addr), std::move(args), std::move(result), e->loc);
  }

  // Condition in pure position (while headers, formula contexts). Guards may
  // be emitted for subterm evaluation (array bounds etc.).
  Formula lower_condition(const ExprPtr &e) {
    if (e->kind == ExprKind::Binary) {
      switch (e->bin) {
        case BinOp::LogAnd:
          return mk_and(lower_condition(e->a), lower_condition(e->b));
        case BinOp::LogOr:
          return mk_or(lower_condition(e->a), lower_condition(e->b));
        case BinOp::Lt:
        case BinOp::Gt:
        case BinOp::Le:
        case BinOp::Ge:
        case BinOp::Eq:
        case BinOp::Ne: {
          Term a = lower_term(e->a);
          Term b = lower_term(e->b);
          bool swapped = e->bin == BinOp::Gt || e->bin == BinOp::Ge;
          if (swapped) std::swap(a, b);
          bool sgn = e->a->type->is_word() ? e->a->type->word.is_signed : false;
          CmpOp op;
          switch (e->bin) {
            case BinOp::Eq: op = CmpOp::Eq; break;
            case BinOp::Ne: op = CmpOp::Ne; break;
            case BinOp::Lt:
            case BinOp::Gt: op = sgn ? CmpOp::Slt : CmpOp::Ult; break;
            default: op = sgn ? CmpOp::Sle : CmpOp::Ule; break;
          }
          return mk_cmp(op, a, b);
        }
        default:
          break;
      }
    }
    if (e->kind == ExprKind::Unary && e->un == UnOp::LogNot)
      return mk_not(lower_condition(e->a));
    Term t = lower_term(e);
    return mk_cmp(CmpOp::Ne, t, mk_const(0, t->type));
  }

  Term rewrite_reads_to_old(const Term &t) {
    // \old(e): state reads become pre-state reads
    switch (t->op) {
      case TermOp::StateRead: {
        const RecordField *g = globals.find(t->name);
        if (!g) throw LoweringUnsupported{{}, "\\old over a non-global"};
        return mk_old_read(t->name, t->type);
      }
      case TermOp::Const:
      case TermOp::Var:
      case TermOp::OldRead:
        return t;
      case TermOp::HeapRead:
        // pre-state heaps are not modeled; the corpus never needs them
        throw LoweringUnsupported{{}, "\\old over a heap read"};
      case TermOp::Ite:
        return mk_ite(rewrite_formula_to_old(t->cond), rewrite_reads_to_old(t->a),
                      rewrite_reads_to_old(t->b));
      case TermOp::ZExt:
      case TermOp::SExt:
      case TermOp::Trunc:
        return mk_extend(t->op, rewrite_reads_to_old(t->a), t->type);
      case TermOp::Neg:
      case TermOp::BNot:
        return mk_unary(t->op, rewrite_reads_to_old(t->a));
      default:
        return mk_binary(t->op, rewrite_reads_to_old(t->a), rewrite_reads_to_old(t->b));
    }
  }

  Formula rewrite_formula_to_old(const Formula &f) {
    switch (f->op) {
      case FormulaOp::True:
      case FormulaOp::False:
        return f;
      case FormulaOp::Cmp:
        return mk_cmp(f->cmp, rewrite_reads_to_old(f->lhs), rewrite_reads_to_old(f->rhs));
      case FormulaOp::Not:
        return mk_not(rewrite_formula_to_old(f->args[0]));
      case FormulaOp::And:
      case FormulaOp::Or: {
        std::vector<Formula> args;
        for (const auto &g : f->args) args.push_back(rewrite_formula_to_old(g));
        return f->op == FormulaOp::And ? mk_and(std::move(args)) : mk_or(std::move(args));
      }
      case FormulaOp::Implies:
        return mk_implies(rewrite_formula_to_old(f->args[0]),
                          rewrite_formula_to_old(f->args[1]));
    }
    return f;
  }

  // --- statements ------------------------------------------------------------

  // true when a return statement occurs anywhere under s
  static bool has_return(const StmtPtr &s) {
    if (!s) return false;
    if (s->kind == StmtKind::Return) return true;
    for (const auto &inner : s->body)
      if (has_return(inner)) return true;
    if (has_return(s->s1) || has_return(s->s2) || has_return(s->for_init)) return true;
    for (const auto &c : s->cases)
      for (const auto &inner : c.body)
        if (has_return(inner)) return true;
    return false;
  }

  DeepPtr lower_body() {
    DeepPtr body = lower_stmts(fn.body, 0, deep_skip());
    return body;
  }

  DeepPtr lower_stmts(const std::vector<StmtPtr> &stmts, size_t i, DeepPtr rest) {
    if (i == stmts.size()) return rest;
    DeepPtr tail = lower_stmts(stmts, i + 1, rest);
    return lower_stmt(stmts[i], tail);
  }

  // Lower statement s with continuation `rest`.
  DeepPtr lower_stmt(const StmtPtr &s, DeepPtr rest) {
    if (!s) return rest;
    switch (s->kind) {
      case StmtKind::Empty:
        return rest;
      case StmtKind::Compound:
        return lower_stmts(s->body, 0, rest);
      case StmtKind::Decl: {
        if (!s->decl_init) return rest;
        Term v = lower_term(s->decl_init);
        StateUpdate u;
        u.writes.push_back(LocWrite{s->resolved_name, v});
        DeepPtr assign = deep_basic(std::move(u), s->loc);
        return deep_seq(take_prelude(), deep_seq(assign, rest));
      }
      case StmtKind::ExprStmt:
        return deep_seq(lower_expr_stmt(s->expr), rest);
      case StmtKind::Return: {
        DeepPtr out = deep_skip(s->loc);
        if (s->expr) {
          Term v = lower_term(s->expr);
          StateUpdate u;
          u.writes.push_back(LocWrite{result_loc(), v});
          out = deep_basic(std::move(u), s->loc);
        }
        return deep_seq(take_prelude(), out);  // continuation dropped
      }
      case StmtKind::If: {
        Formula c = lower_condition(s->expr);
        DeepPtr pre = take_prelude();
        if (has_return(s->s1) || has_return(s->s2)) {
          DeepPtr t = lower_stmt_opt(s->s1, rest);
          DeepPtr e = lower_stmt_opt(s->s2, rest);
          return deep_seq(pre, deep_cond(c, t, e, s->loc));
        }
        DeepPtr t = lower_stmt_opt(s->s1, deep_skip());
        DeepPtr e = lower_stmt_opt(s->s2, deep_skip());
        return deep_seq(pre, deep_seq(deep_cond(c, t, e, s->loc), rest));
      }
      case StmtKind::While: {
        DeepPtr loop = lower_loop(s->expr, s->s1, nullptr, s);
        return deep_seq(loop, rest);
      }
      case StmtKind::For: {
        DeepPtr init = s->for_init ? lower_stmt(s->for_init, deep_skip()) : deep_skip();
        ExprPtr cond = s->for_cond;
        DeepPtr loop = lower_loop(cond, s->s1, s->for_step, s);
        return deep_seq(init, deep_seq(loop, rest));
      }
      case StmtKind::DoWhile: {
        DeepPtr once = lower_stmt_opt(s->s1, deep_skip());
        DeepPtr loop = lower_loop(s->expr, s->s1, nullptr, s);
        return deep_seq(once, deep_seq(loop, rest));
      }
      default:
        throw LoweringUnsupported{s->loc, "construct outside the lowered subset"};
    }
  }

  DeepPtr lower_stmt_opt(const StmtPtr &s, DeepPtr rest) {
    if (!s) return rest;
    return lower_stmt(s, rest);
  }

  DeepPtr lower_loop(const ExprPtr &cond_e, const StmtPtr &body_s, const ExprPtr &step_e,
                     const StmtPtr &loop_stmt) {
    Formula cond = cond_e ? lower_condition(cond_e) : mk_true();
    if (!prelude.empty())
      throw LoweringUnsupported{loop_stmt->loc,
                                "loop condition needs guards or calls; hoist it"};
    DeepPtr body = lower_stmt_opt(body_s, deep_skip());
    if (step_e) {
      type_expr_effect_guard(step_e);
      body = deep_seq(body, lower_expr_stmt(step_e));
    }
    Formula inv;
    Term meas;
    if (loop_stmt->loop_spec.present) {
      if (loop_stmt->loop_spec.invariant) inv = lower_condition(loop_stmt->loop_spec.invariant);
      if (loop_stmt->loop_spec.measure) meas = lower_term(loop_stmt->loop_spec.measure);
      if (!prelude.empty())
        throw LoweringUnsupported{loop_stmt->loc, "loop annotation needs guards"};
    }
    return deep_while(cond, body, inv, meas, loop_stmt->loc);
  }

  void type_expr_effect_guard(const ExprPtr &) {}

  DeepPtr lower_expr_stmt(const ExprPtr &e) {
    if (!e) return deep_skip();
    switch (e->kind) {
      case ExprKind::Assign: {
        // lvalue guards first (source order), then the value
        LValue lv = lower_lvalue(e->a);
        Term rhs;
        if (e->is_compound) {
          Term cur = read_lvalue(lv);
          rhs = lower_compound_value(e, cur);
        } else {
          rhs = lower_term(e->b);
        }
        DeepPtr pre = take_prelude();
        return deep_seq(pre, assign_lvalue(lv, rhs, e->loc));
      }
      case ExprKind::Call: {
        DeepPtr call = lower_call_stmt(e, std::nullopt);
        return deep_seq(take_prelude(), call);
      }
      case ExprKind::Unary: {
        // ++/-- as a statement
        bool inc = e->un == UnOp::PreInc || e->un == UnOp::PostInc;
        bool dec = e->un == UnOp::PreDec || e->un == UnOp::PostDec;
        if (!inc && !dec) break;
        LValue lv = lower_lvalue(e->a);
        Term cur = read_lvalue(lv);
        Term one = mk_const(1, cur->type);
        Term next = mk_binary(inc ? TermOp::Add : TermOp::Sub, cur, one);
        DeepPtr pre = take_prelude();
        return deep_seq(pre, assign_lvalue(lv, next, e->loc));
      }
      default:
        break;
    }
    throw LoweringUnsupported{e->loc, "expression statement"};
  }

  Term lower_compound_value(const ExprPtr &assign, Term current) {
    // a op= b  ==>  a = a op b, with the left operand already lowered
    const ExprPtr &b = assign->b;
    BinOp op = assign->compound_op;
    CTypePtr target = assign->a->type;
    Term rhs = lower_term(b);
    // apply the usual conversions against the target type
    WordType tt = scalar_type_of(target);
    if (op == BinOp::Shl || op == BinOp::Shr) {
      rhs = mk_convert(rhs, tt);
    } else {
      rhs = mk_convert(rhs, tt);
    }
    TermOp top;
    switch (op) {
      case BinOp::Add: top = TermOp::Add; break;
      case BinOp::Sub: top = TermOp::Sub; break;
      case BinOp::Mul: top = TermOp::Mul; break;
      case BinOp::Div: top = TermOp::UDiv; break;
      case BinOp::Rem: top = TermOp::URem; break;
      case BinOp::BitAnd: top = TermOp::BAnd; break;
      case BinOp::BitOr: top = TermOp::BOr; break;
      case BinOp::BitXor: top = TermOp::BXor; break;
      case BinOp::Shl: top = TermOp::Shl; break;
      case BinOp::Shr: top = tt.is_signed ? TermOp::AShr : TermOp::LShr; break;
      default:
        throw LoweringUnsupported{assign->loc, "compound operator"};
    }
    if (top == TermOp::UDiv || top == TermOp::URem) {
      Term bf = fold_constants(rhs);
      if (bf->op == TermOp::Const) {
        if (bf->value.raw == 0) guard(mk_false(), GuardKind::DivByZero, assign->loc);
      } else {
        guard(mk_cmp(CmpOp::Ne, bf, mk_const(0, bf->type)), GuardKind::DivByZero, assign->loc);
      }
      if (tt.is_signed)
        throw LoweringUnsupported{assign->loc, "signed division survived typecheck"};
    }
    return mk_binary(top, current, rhs);
  }
};

}  // namespace

// Entry point used by translate_unit (defined in monadic.cpp's TU driver).
DeepPtr lower_function_body(const Ast &ast, const GlobalsRecord &globals,
                            const SymbolTable &symbols, const FunctionDef &fn,
                            LocalsRecord &locals_rec, std::set<std::string> &params_written,
                            std::vector<Diagnostic> &diags, bool &ok) {
  FnLowering lw(ast, globals, symbols, fn, locals_rec, params_written);
  try {
    DeepPtr body = lw.lower_body();
    ok = true;
    return body;
  } catch (const LoweringUnsupported &u) {
    if (!fn.spec.dont_translate) {
      diags.push_back(make_error("lower", u.loc.valid() ? u.loc : fn.loc,
                                 "cannot lower '" + fn.name + "': " + u.what));
    }
    ok = false;
    return nullptr;
  }
}

}  // namespace wpdrv
