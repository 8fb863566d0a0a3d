#include "wpdrv/formula.hpp"
#include "wpdrv/word.hpp"

namespace wpdrv {

namespace {

bool is_const(const Term &t, uint64_t v) { return t->op == TermOp::Const && t->value.raw == v; }

WordVal eval_const_unary(TermOp op, const WordVal &a) {
  switch (op) {
    case TermOp::Neg: return word_neg(a);
    case TermOp::BNot: return word_not(a);
    default: return a;
  }
}

WordVal eval_const_binary(TermOp op, const WordVal &a, const WordVal &b) {
  switch (op) {
    case TermOp::Add: return word_add(a, b);
    case TermOp::Sub: return word_sub(a, b);
    case TermOp::Mul: return word_mul(a, b);
    case TermOp::UDiv: return word_udiv(a, b);
    case TermOp::URem: return word_urem(a, b);
    case TermOp::BAnd: return word_and(a, b);
    case TermOp::BOr: return word_or(a, b);
    case TermOp::BXor: return word_xor(a, b);
    case TermOp::Shl: return word_shl(a, b);
    case TermOp::LShr: return word_lshr(a, b);
    case TermOp::AShr: return word_ashr(a, b);
    default: return a;
  }
}

bool assoc_comm(TermOp op) {
  return op == TermOp::Add || op == TermOp::BAnd || op == TermOp::BOr || op == TermOp::BXor;
}

}  // namespace

Term fold_constants(const Term &t) {
  if (!t) return t;
  switch (t->op) {
    case TermOp::Const:
    case TermOp::Var:
    case TermOp::StateRead:
    case TermOp::OldRead:
      return t;
    case TermOp::HeapRead: {
      Term a = fold_constants(t->a);
      return a.get() == t->a.get() ? t : mk_heap_read(t->heap_tag, a);
    }
    case TermOp::Neg:
    case TermOp::BNot: {
      Term a = fold_constants(t->a);
      if (a->op == TermOp::Const) return mk_const(eval_const_unary(t->op, a->value));
      return a.get() == t->a.get() ? t : mk_unary(t->op, a);
    }
    case TermOp::Ite: {
      Formula c = fold_constants(t->cond);
      Term a = fold_constants(t->a), b = fold_constants(t->b);
      if (c->op == FormulaOp::True) return a;
      if (c->op == FormulaOp::False) return b;
      if (c.get() == t->cond.get() && a.get() == t->a.get() && b.get() == t->b.get()) return t;
      return mk_ite(c, a, b);
    }
    case TermOp::ZExt:
    case TermOp::SExt:
    case TermOp::Trunc: {
      Term a = fold_constants(t->a);
      if (a->op == TermOp::Const && a->name.empty()) {
        if (t->op == TermOp::ZExt)
          return mk_const(word_zext(a->value, t->type.bits, t->type.is_signed));
        if (t->op == TermOp::SExt)
          return mk_const(word_sext(a->value, t->type.bits, t->type.is_signed));
        return mk_const(word_trunc(a->value, t->type.bits, t->type.is_signed));
      }
      if (a->type == t->type) return a;  // no-op conversion
      return a.get() == t->a.get() ? t : mk_extend(t->op, a, t->type);
    }
    default: {
      Term a = fold_constants(t->a);
      Term b = fold_constants(t->b);
      // constant/constant
      if (a->op == TermOp::Const && b->op == TermOp::Const && a->name.empty() &&
          b->name.empty())
        return mk_const(eval_const_binary(t->op, a->value, b->value));
      // identities
      switch (t->op) {
        case TermOp::Add:
          if (is_const(a, 0)) return b;
          if (is_const(b, 0)) return a;
          break;
        case TermOp::Sub:
          if (is_const(b, 0)) return a;
          break;
        case TermOp::Mul:
          if (is_const(a, 1)) return b;
          if (is_const(b, 1)) return a;
          if (is_const(a, 0) || is_const(b, 0)) return mk_const(0, t->type);
          break;
        case TermOp::BOr:
          if (is_const(a, 0)) return b;
          if (is_const(b, 0)) return a;
          break;
        case TermOp::BXor:
          if (is_const(a, 0)) return b;
          if (is_const(b, 0)) return a;
          break;
        case TermOp::BAnd:
          if (is_const(a, word_mask(t->type.bits))) return b;
          if (is_const(b, word_mask(t->type.bits))) return a;
          if (is_const(a, 0) || is_const(b, 0)) return mk_const(0, t->type);
          break;
        case TermOp::Shl:
        case TermOp::LShr:
        case TermOp::AShr:
          if (is_const(b, 0)) return a;
          break;
        default:
          break;
      }
      // merge constants across an associative chain: (x op c1) op c2
      if (assoc_comm(t->op)) {
        if (b->op == TermOp::Const && a->op == t->op) {
          if (a->b->op == TermOp::Const && a->b->name.empty() && b->name.empty()) {
            Term inner = a->a;
            WordVal c = eval_const_binary(t->op, a->b->value, b->value);
            return fold_constants(mk_binary(t->op, inner, mk_const(c)));
          }
        }
        // move lone constants right
        if (a->op == TermOp::Const && b->op != TermOp::Const)
          return fold_constants(mk_binary(t->op, b, a));
      }
      if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
      return mk_binary(t->op, a, b);
    }
  }
}

Formula fold_constants(const Formula &f) {
  if (!f) return f;
  switch (f->op) {
    case FormulaOp::True:
    case FormulaOp::False:
      return f;
    case FormulaOp::Cmp: {
      Term a = fold_constants(f->lhs), b = fold_constants(f->rhs);
      if (a->op == TermOp::Const && b->op == TermOp::Const) {
        bool r = false;
        switch (f->cmp) {
          case CmpOp::Eq: r = a->value.raw == b->value.raw; break;
          case CmpOp::Ne: r = a->value.raw != b->value.raw; break;
          case CmpOp::Ult: r = word_ult(a->value, b->value); break;
          case CmpOp::Ule: r = word_ule(a->value, b->value); break;
          case CmpOp::Slt: r = word_slt(a->value, b->value); break;
          case CmpOp::Sle: r = word_sle(a->value, b->value); break;
        }
        return mk_bool(r);
      }
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return mk_cmp(f->cmp, a, b);
    }
    case FormulaOp::Not: {
      Formula g = fold_constants(f->args[0]);
      if (g->op == FormulaOp::True) return mk_false();
      if (g->op == FormulaOp::False) return mk_true();
      if (g->op == FormulaOp::Not) return g->args[0];
      return g.get() == f->args[0].get() ? f : mk_not(g);
    }
    case FormulaOp::And:
    case FormulaOp::Or: {
      bool is_and = f->op == FormulaOp::And;
      std::vector<Formula> out;
      for (const auto &g0 : f->args) {
        Formula g = fold_constants(g0);
        if (g->op == (is_and ? FormulaOp::True : FormulaOp::False)) continue;
        if (g->op == (is_and ? FormulaOp::False : FormulaOp::True))
          return is_and ? mk_false() : mk_true();
        out.push_back(g);
      }
      return is_and ? mk_and(std::move(out)) : mk_or(std::move(out));
    }
    case FormulaOp::Implies: {
      Formula a = fold_constants(f->args[0]);
      Formula b = fold_constants(f->args[1]);
      if (a->op == FormulaOp::False) return mk_true();
      if (a->op == FormulaOp::True) return b;
      if (b->op == FormulaOp::True) return mk_true();
      if (a.get() == f->args[0].get() && b.get() == f->args[1].get()) return f;
      return mk_implies(a, b);
    }
  }
  return f;
}

}  // namespace wpdrv
