// Word abstraction: +, - and * on words narrower than 64 bits are recomputed
// at double width so their exact integer value is visible, with a guard per
// operation obligating that the result fits the original width (no-underflow
// for subtraction). Results are truncated back, so the pass preserves the
// wrap-around semantics unconditionally; the guards are the verification
// obligations that let later reasoning treat the values as unbounded.
// Bitwise operators, shifts and divisions stay at word level.

#include "wpdrv/translate.hpp"

namespace wpdrv {

namespace {

using Obligations = std::vector<std::pair<Formula, GuardKind>>;

WordType doubled(WordType t) { return WordType{uint8_t(t.bits * 2), false}; }

Term rewrite(const Term &t, Obligations &obs);

Formula rewrite_formula(const Formula &f, Obligations &obs) {
  if (!f) return f;
  switch (f->op) {
    case FormulaOp::True:
    case FormulaOp::False:
      return f;
    case FormulaOp::Cmp: {
      Term a = rewrite(f->lhs, obs), b = rewrite(f->rhs, obs);
      if (a.get() == f->lhs.get() && b.get() == f->rhs.get()) return f;
      return mk_cmp(f->cmp, a, b);
    }
    case FormulaOp::Not:
      return mk_not(rewrite_formula(f->args[0], obs));
    case FormulaOp::And:
    case FormulaOp::Or: {
      std::vector<Formula> args;
      for (const auto &g : f->args) args.push_back(rewrite_formula(g, obs));
      return f->op == FormulaOp::And ? mk_and(std::move(args)) : mk_or(std::move(args));
    }
    case FormulaOp::Implies:
      return mk_implies(rewrite_formula(f->args[0], obs), rewrite_formula(f->args[1], obs));
  }
  return f;
}

Term rewrite(const Term &t, Obligations &obs) {
  if (!t) return t;
  switch (t->op) {
    case TermOp::Const:
    case TermOp::Var:
    case TermOp::StateRead:
    case TermOp::OldRead:
      return t;
    case TermOp::HeapRead: {
      Term a = rewrite(t->a, obs);
      return a.get() == t->a.get() ? t : mk_heap_read(t->heap_tag, a);
    }
    case TermOp::Ite:
      return mk_ite(rewrite_formula(t->cond, obs), rewrite(t->a, obs), rewrite(t->b, obs));
    case TermOp::ZExt:
    case TermOp::SExt:
    case TermOp::Trunc:
      return mk_extend(t->op, rewrite(t->a, obs), t->type);
    case TermOp::Neg:
    case TermOp::BNot:
      return mk_unary(t->op, rewrite(t->a, obs));
    case TermOp::Add:
    case TermOp::Sub:
    case TermOp::Mul: {
      Term a = rewrite(t->a, obs);
      Term b = rewrite(t->b, obs);
      WordType w = t->type;
      if (w.bits >= 64) return mk_binary(t->op, a, b);
      if (t->op == TermOp::Sub) {
        // natural subtraction: obligate no underflow, stay word-level
        obs.emplace_back(mk_cmp(CmpOp::Ule, b, a), GuardKind::Overflow);
        return mk_binary(TermOp::Sub, a, b);
      }
      WordType wide = doubled(w);
      Term wa = mk_extend(TermOp::ZExt, a, wide);
      Term wb = mk_extend(TermOp::ZExt, b, wide);
      Term op = mk_binary(t->op, wa, wb);
      obs.emplace_back(
          mk_cmp(CmpOp::Ult, op, mk_const(uint64_t{1} << w.bits, wide)),
          GuardKind::Overflow);
      return fold_constants(mk_extend(TermOp::Trunc, op, w));
    }
    default: {
      Term a = rewrite(t->a, obs);
      Term b = rewrite(t->b, obs);
      if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
      return mk_binary(t->op, a, b);
    }
  }
}

MonPtr with_obligations(Obligations &obs, MonPtr node, SourceLoc loc) {
  MonPtr out = std::move(node);
  for (auto it = obs.rbegin(); it != obs.rend(); ++it)
    out = mon_seq(mon_guard(fold_constants(it->first), it->second, loc), out);
  obs.clear();
  return out;
}

MonPtr walk(const MonPtr &m) {
  if (!m) return m;
  Obligations obs;
  switch (m->kind) {
    case MonKind::Return: {
      if (!m->expr) return m;
      Term e = rewrite(m->expr, obs);
      return with_obligations(obs, mon_return(e, m->loc), m->loc);
    }
    case MonKind::Gets: {
      Term e = rewrite(m->expr, obs);
      return with_obligations(obs, mon_gets(e, m->loc), m->loc);
    }
    case MonKind::Modify: {
      StateUpdate u;
      for (const auto &w : m->update.writes)
        u.writes.push_back(LocWrite{w.loc, rewrite(w.value, obs)});
      if (m->update.heap)
        u.heap = HeapWriteOp{m->update.heap->tag, rewrite(m->update.heap->addr, obs),
                             rewrite(m->update.heap->value, obs)};
      return with_obligations(obs, mon_modify(std::move(u), m->loc), m->loc);
    }
    case MonKind::Bind:
      return mon_bind(walk(m->m1), m->bound, walk(m->m2));
    case MonKind::Guard: {
      Formula c = rewrite_formula(m->cond, obs);
      return with_obligations(obs, mon_guard(c, m->gkind, m->loc), m->loc);
    }
    case MonKind::Condition: {
      Formula c = rewrite_formula(m->cond, obs);
      MonPtr node = mon_condition(c, walk(m->m1), walk(m->m2), m->loc);
      return with_obligations(obs, std::move(node), m->loc);
    }
    case MonKind::While: {
      Obligations cond_obs;
      Formula c = rewrite_formula(m->cond, cond_obs);
      MonPtr body = walk(m->m1);
      // the condition is evaluated at entry and after every iteration
      for (auto it = cond_obs.rbegin(); it != cond_obs.rend(); ++it)
        body = mon_seq(body, mon_guard(it->first, it->second, m->loc));
      MonPtr node = mon_while(c, body, m->invariant, m->measure, m->loc);
      for (auto it = cond_obs.rbegin(); it != cond_obs.rend(); ++it)
        node = mon_seq(mon_guard(it->first, it->second, m->loc), node);
      return node;
    }
    case MonKind::Call:
    case MonKind::CallPtr: {
      std::vector<Term> args;
      for (const auto &a : m->args) args.push_back(rewrite(a, obs));
      MonPtr node = m->kind == MonKind::Call
                        ? mon_call(m->callee, std::move(args), m->loc)
                        : mon_callptr(rewrite(m->callee_addr, obs), std::move(args), m->loc);
      return with_obligations(obs, std::move(node), m->loc);
    }
    case MonKind::Fail:
      return m;
  }
  return m;
}

}  // namespace

Term abstract_words_term(const Term &t, std::vector<std::pair<Formula, GuardKind>> &obligations) {
  return rewrite(t, obligations);
}

MonPtr abstract_words(const MonPtr &m) { return walk(m); }

}  // namespace wpdrv
