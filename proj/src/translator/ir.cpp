#include "wpdrv/ir.hpp"

#include <sstream>

namespace wpdrv {

const char *guard_kind_name(GuardKind k) {
  switch (k) {
    case GuardKind::NullCheck: return "non-null";
    case GuardKind::Alignment: return "alignment";
    case GuardKind::Bounds: return "bounds";
    case GuardKind::DivByZero: return "div-by-zero";
    case GuardKind::Overflow: return "overflow";
  }
  return "?";
}

DeepPtr deep_skip(SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Skip;
  s->loc = loc;
  return s;
}

DeepPtr deep_basic(StateUpdate u, SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Basic;
  s->update = std::move(u);
  s->loc = loc;
  return s;
}

DeepPtr deep_seq(DeepPtr a, DeepPtr b) {
  if (!a || a->kind == DeepKind::Skip) return b;
  if (!b || b->kind == DeepKind::Skip) return a;
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Seq;
  s->loc = a->loc;
  s->s1 = std::move(a);
  s->s2 = std::move(b);
  return s;
}

DeepPtr deep_cond(Formula c, DeepPtr t, DeepPtr e, SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Cond;
  s->cond = std::move(c);
  s->s1 = t ? std::move(t) : deep_skip(loc);
  s->s2 = e ? std::move(e) : deep_skip(loc);
  s->loc = loc;
  return s;
}

DeepPtr deep_guard(Formula c, GuardKind k, DeepPtr body, SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Guard;
  s->cond = std::move(c);
  s->gkind = k;
  s->s1 = body ? std::move(body) : deep_skip(loc);
  s->loc = loc;
  return s;
}

DeepPtr deep_while(Formula c, DeepPtr body, Formula inv, Term measure, SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::While;
  s->cond = std::move(c);
  s->s1 = std::move(body);
  s->invariant = std::move(inv);
  s->measure = std::move(measure);
  s->loc = loc;
  return s;
}

DeepPtr deep_call(std::string callee, std::vector<Term> args, std::optional<LocId> result,
                  SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Call;
  s->callee = std::move(callee);
  s->args = std::move(args);
  s->result = std::move(result);
  s->loc = loc;
  return s;
}

DeepPtr deep_callptr(Term addr, std::vector<Term> args, std::optional<LocId> result,
                     SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::CallPtr;
  s->callee_addr = std::move(addr);
  s->args = std::move(args);
  s->result = std::move(result);
  s->loc = loc;
  return s;
}

DeepPtr deep_fail(SourceLoc loc) {
  auto s = std::make_shared<DeepStmt>();
  s->kind = DeepKind::Fail;
  s->loc = loc;
  return s;
}

MonPtr mon_return(Term e, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Return;
  m->expr = std::move(e);
  m->loc = loc;
  return m;
}

MonPtr mon_return_unit(SourceLoc loc) { return mon_return(nullptr, loc); }

MonPtr mon_gets(Term projection, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Gets;
  m->expr = std::move(projection);
  m->loc = loc;
  return m;
}

MonPtr mon_modify(StateUpdate u, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Modify;
  m->update = std::move(u);
  m->loc = loc;
  return m;
}

MonPtr mon_bind(MonPtr a, std::string bound, MonPtr b) {
  if (!a) return b;
  if (!b) return a;
  // (bind (return unit) _ m) = m
  if (a->kind == MonKind::Return && !a->expr && bound.empty()) return b;
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Bind;
  m->loc = a->loc;
  m->m1 = std::move(a);
  m->bound = std::move(bound);
  m->m2 = std::move(b);
  return m;
}

MonPtr mon_seq(MonPtr a, MonPtr b) { return mon_bind(std::move(a), "", std::move(b)); }

MonPtr mon_guard(Formula c, GuardKind k, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Guard;
  m->cond = std::move(c);
  m->gkind = k;
  m->loc = loc;
  return m;
}

MonPtr mon_condition(Formula c, MonPtr t, MonPtr e, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Condition;
  m->cond = std::move(c);
  m->m1 = t ? std::move(t) : mon_return_unit(loc);
  m->m2 = e ? std::move(e) : mon_return_unit(loc);
  m->loc = loc;
  return m;
}

MonPtr mon_while(Formula c, MonPtr body, Formula inv, Term measure, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::While;
  m->cond = std::move(c);
  m->m1 = std::move(body);
  m->invariant = std::move(inv);
  m->measure = std::move(measure);
  m->loc = loc;
  return m;
}

MonPtr mon_call(std::string callee, std::vector<Term> args, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Call;
  m->callee = std::move(callee);
  m->args = std::move(args);
  m->loc = loc;
  return m;
}

MonPtr mon_callptr(Term addr, std::vector<Term> args, SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::CallPtr;
  m->callee_addr = std::move(addr);
  m->args = std::move(args);
  m->loc = loc;
  return m;
}

MonPtr mon_fail(SourceLoc loc) {
  auto m = std::make_shared<MonadicTerm>();
  m->kind = MonKind::Fail;
  m->loc = loc;
  return m;
}

// --- dumps ------------------------------------------------------------------

namespace {

std::string pad(int n) { return std::string(size_t(n) * 2, ' '); }

void dump_update(const StateUpdate &u, std::ostream &os) {
  for (const auto &w : u.writes) os << " (" << w.loc << " := " << term_to_string(w.value) << ")";
  if (u.heap) {
    os << " (heap_" << (u.heap->tag.is_signed ? "s" : "u") << int(u.heap->tag.bits) << "["
       << term_to_string(u.heap->addr) << "] := " << term_to_string(u.heap->value) << ")";
  }
}

void dump_deep(const DeepPtr &s, int ind, std::ostream &os) {
  os << pad(ind);
  if (!s) {
    os << "(skip)";
    return;
  }
  switch (s->kind) {
    case DeepKind::Skip: os << "(skip)"; return;
    case DeepKind::Basic:
      os << "(basic";
      dump_update(s->update, os);
      os << ")";
      return;
    case DeepKind::Seq:
      os << "(seq\n";
      dump_deep(s->s1, ind + 1, os);
      os << "\n";
      dump_deep(s->s2, ind + 1, os);
      os << ")";
      return;
    case DeepKind::Cond:
      os << "(cond " << formula_to_string(s->cond) << "\n";
      dump_deep(s->s1, ind + 1, os);
      os << "\n";
      dump_deep(s->s2, ind + 1, os);
      os << ")";
      return;
    case DeepKind::Guard:
      os << "(guard " << guard_kind_name(s->gkind) << " " << formula_to_string(s->cond);
      if (s->s1 && s->s1->kind != DeepKind::Skip) {
        os << "\n";
        dump_deep(s->s1, ind + 1, os);
      }
      os << ")";
      return;
    case DeepKind::While:
      os << "(while " << formula_to_string(s->cond);
      if (s->invariant) os << "\n" << pad(ind + 1) << "(invariant " << formula_to_string(s->invariant) << ")";
      if (s->measure) os << "\n" << pad(ind + 1) << "(measure " << term_to_string(s->measure) << ")";
      os << "\n";
      dump_deep(s->s1, ind + 1, os);
      os << ")";
      return;
    case DeepKind::Call:
    case DeepKind::CallPtr:
      os << (s->kind == DeepKind::Call ? "(call " : "(call-ptr ");
      if (s->kind == DeepKind::Call) os << s->callee;
      else os << term_to_string(s->callee_addr);
      for (const auto &a : s->args) os << " " << term_to_string(a);
      if (s->result) os << " -> " << *s->result;
      os << ")";
      return;
    case DeepKind::Fail: os << "(fail)"; return;
  }
}

void dump_mon(const MonPtr &m, int ind, std::ostream &os) {
  os << pad(ind);
  if (!m) {
    os << "(return unit)";
    return;
  }
  switch (m->kind) {
    case MonKind::Return:
      if (m->expr) os << "(return " << term_to_string(m->expr) << ")";
      else os << "(return unit)";
      return;
    case MonKind::Gets:
      os << "(gets " << term_to_string(m->expr) << ")";
      return;
    case MonKind::Modify:
      os << "(modify";
      dump_update(m->update, os);
      os << ")";
      return;
    case MonKind::Bind:
      if (m->bound.empty()) {
        os << "(seq\n";
      } else {
        os << "(bind " << m->bound << "\n";
      }
      dump_mon(m->m1, ind + 1, os);
      os << "\n";
      dump_mon(m->m2, ind + 1, os);
      os << ")";
      return;
    case MonKind::Guard:
      os << "(guard " << guard_kind_name(m->gkind) << " " << formula_to_string(m->cond) << ")";
      return;
    case MonKind::Condition:
      os << "(condition " << formula_to_string(m->cond) << "\n";
      dump_mon(m->m1, ind + 1, os);
      os << "\n";
      dump_mon(m->m2, ind + 1, os);
      os << ")";
      return;
    case MonKind::While:
      os << "(whileLoop " << formula_to_string(m->cond);
      if (m->invariant)
        os << "\n" << pad(ind + 1) << "(invariant " << formula_to_string(m->invariant) << ")";
      if (m->measure) os << "\n" << pad(ind + 1) << "(measure " << term_to_string(m->measure) << ")";
      os << "\n";
      dump_mon(m->m1, ind + 1, os);
      os << ")";
      return;
    case MonKind::Call:
    case MonKind::CallPtr:
      os << (m->kind == MonKind::Call ? "(call " : "(call-ptr ");
      if (m->kind == MonKind::Call) os << m->callee;
      else os << term_to_string(m->callee_addr);
      for (const auto &a : m->args) os << " " << term_to_string(a);
      os << ")";
      return;
    case MonKind::Fail: os << "(fail)"; return;
  }
}

}  // namespace

std::string deep_to_string(const DeepPtr &s, int indent) {
  std::ostringstream os;
  dump_deep(s, indent, os);
  return os.str();
}

std::string monadic_to_string(const MonPtr &m, int indent) {
  std::ostringstream os;
  dump_mon(m, indent, os);
  return os.str();
}

}  // namespace wpdrv
