#include "wpdrv/formula_eval.hpp"

#include <sstream>

namespace wpdrv {

std::string AssignmentValuation::heap_key(WordType tag, uint64_t addr) {
  std::ostringstream os;
  os << "heap_" << (tag.is_signed ? "s" : "u") << int(tag.bits) << "[0x" << std::hex << addr
     << "]";
  return os.str();
}

WordVal AssignmentValuation::heap(WordType tag, uint64_t addr) const {
  return lookup(heap_key(tag, addr), tag);
}

WordVal eval_term(const Term &t, const Valuation &v) {
  switch (t->op) {
    case TermOp::Const: return t->value;
    case TermOp::Var: return v.var(t->name, t->type);
    case TermOp::StateRead: return v.state(t->name, t->type);
    case TermOp::OldRead: return v.old_state(t->name, t->type);
    case TermOp::HeapRead: return v.heap(t->heap_tag, eval_term(t->a, v).raw);
    case TermOp::Neg: return word_neg(eval_term(t->a, v));
    case TermOp::BNot: return word_not(eval_term(t->a, v));
    case TermOp::Ite:
      return eval_formula(t->cond, v) ? eval_term(t->a, v) : eval_term(t->b, v);
    case TermOp::ZExt: return word_zext(eval_term(t->a, v), t->type.bits, t->type.is_signed);
    case TermOp::SExt: return word_sext(eval_term(t->a, v), t->type.bits, t->type.is_signed);
    case TermOp::Trunc: return word_trunc(eval_term(t->a, v), t->type.bits, t->type.is_signed);
    default: break;
  }
  WordVal a = eval_term(t->a, v);
  WordVal b = eval_term(t->b, v);
  switch (t->op) {
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
    default: throw EvalError("eval_term: bad op");
  }
}

bool eval_formula(const Formula &f, const Valuation &v) {
  switch (f->op) {
    case FormulaOp::True: return true;
    case FormulaOp::False: return false;
    case FormulaOp::Cmp: {
      WordVal a = eval_term(f->lhs, v);
      WordVal b = eval_term(f->rhs, v);
      switch (f->cmp) {
        case CmpOp::Eq: return a.raw == b.raw;
        case CmpOp::Ne: return a.raw != b.raw;
        case CmpOp::Ult: return word_ult(a, b);
        case CmpOp::Ule: return word_ule(a, b);
        case CmpOp::Slt: return word_slt(a, b);
        case CmpOp::Sle: return word_sle(a, b);
      }
      return false;
    }
    case FormulaOp::Not: return !eval_formula(f->args[0], v);
    case FormulaOp::And:
      for (const auto &g : f->args)
        if (!eval_formula(g, v)) return false;
      return true;
    case FormulaOp::Or:
      for (const auto &g : f->args)
        if (eval_formula(g, v)) return true;
      return false;
    case FormulaOp::Implies:
      return !eval_formula(f->args[0], v) || eval_formula(f->args[1], v);
  }
  return false;
}

}  // namespace wpdrv
