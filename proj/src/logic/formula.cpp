#include "wpdrv/formula.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace wpdrv {

Term mk_const(WordVal v) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::Const;
  n->type = v.type;
  n->value = v;
  return n;
}

Term mk_const(uint64_t v, WordType t) { return mk_const(WordVal(v, t)); }

Term mk_var(std::string name, WordType t) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::Var;
  n->type = t;
  n->name = std::move(name);
  return n;
}

Term mk_state_read(std::string loc, WordType t) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::StateRead;
  n->type = t;
  n->name = std::move(loc);
  return n;
}

Term mk_old_read(std::string loc, WordType t) {
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::OldRead;
  n->type = t;
  n->name = std::move(loc);
  return n;
}

Term mk_heap_read(WordType tag, Term addr) {
  assert(addr && addr->type.bits == 64);
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::HeapRead;
  n->type = tag;
  n->heap_tag = tag;
  n->a = std::move(addr);
  return n;
}

Term mk_unary(TermOp op, Term a) {
  assert(op == TermOp::Neg || op == TermOp::BNot);
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->type = a->type;
  n->a = std::move(a);
  return n;
}

Term mk_binary(TermOp op, Term a, Term b) {
  assert(a && b);
  if (a->type.bits != b->type.bits)
    throw std::logic_error("mk_binary: width mismatch " + term_to_string(a) + " vs " +
                           term_to_string(b));
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->type = a->type;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Term mk_ite(Formula c, Term a, Term b) {
  assert(a->type.bits == b->type.bits);
  auto n = std::make_shared<TermNode>();
  n->op = TermOp::Ite;
  n->type = a->type;
  n->cond = std::move(c);
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Term mk_extend(TermOp op, Term a, WordType target) {
  assert(op == TermOp::ZExt || op == TermOp::SExt || op == TermOp::Trunc);
  if (op == TermOp::Trunc)
    assert(target.bits <= a->type.bits);
  else
    assert(target.bits >= a->type.bits);
  auto n = std::make_shared<TermNode>();
  n->op = op;
  n->type = target;
  n->a = std::move(a);
  return n;
}

Term mk_convert(Term a, WordType target) {
  if (a->type == target) return a;
  if (a->type.bits >= target.bits) {
    // truncation, or same-width reinterpretation
    return mk_extend(TermOp::Trunc, std::move(a), target);
  }
  TermOp op = a->type.is_signed ? TermOp::SExt : TermOp::ZExt;
  return mk_extend(op, std::move(a), target);
}

Formula mk_true() {
  static Formula t = std::make_shared<FormulaNode>(FormulaNode{FormulaOp::True});
  return t;
}

Formula mk_false() {
  static Formula f = std::make_shared<FormulaNode>(FormulaNode{FormulaOp::False});
  return f;
}

Formula mk_bool(bool b) { return b ? mk_true() : mk_false(); }

Formula mk_cmp(CmpOp op, Term a, Term b) {
  assert(a && b);
  if (a->type.bits != b->type.bits)
    throw std::logic_error("mk_cmp: width mismatch " + term_to_string(a) + " vs " +
                           term_to_string(b));
  auto n = std::make_shared<FormulaNode>();
  n->op = FormulaOp::Cmp;
  n->cmp = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

Formula mk_not(Formula f) {
  auto n = std::make_shared<FormulaNode>();
  n->op = FormulaOp::Not;
  n->args.push_back(std::move(f));
  return n;
}

static void flatten_into(FormulaOp op, const Formula &f, std::vector<Formula> &out) {
  if (f->op == op) {
    for (const auto &g : f->args) flatten_into(op, g, out);
  } else {
    out.push_back(f);
  }
}

Formula mk_and(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (const auto &f : fs) flatten_into(FormulaOp::And, f, flat);
  if (flat.empty()) return mk_true();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<FormulaNode>();
  n->op = FormulaOp::And;
  n->args = std::move(flat);
  return n;
}

Formula mk_or(std::vector<Formula> fs) {
  std::vector<Formula> flat;
  for (const auto &f : fs) flatten_into(FormulaOp::Or, f, flat);
  if (flat.empty()) return mk_false();
  if (flat.size() == 1) return flat[0];
  auto n = std::make_shared<FormulaNode>();
  n->op = FormulaOp::Or;
  n->args = std::move(flat);
  return n;
}

Formula mk_and(Formula a, Formula b) { return mk_and(std::vector<Formula>{a, b}); }
Formula mk_or(Formula a, Formula b) { return mk_or(std::vector<Formula>{a, b}); }

Formula mk_implies(Formula a, Formula b) {
  auto n = std::make_shared<FormulaNode>();
  n->op = FormulaOp::Implies;
  n->args.push_back(std::move(a));
  n->args.push_back(std::move(b));
  return n;
}

// --- printing -----------------------------------------------------------

static const char *term_op_name(TermOp op) {
  switch (op) {
    case TermOp::Neg: return "neg";
    case TermOp::BNot: return "bnot";
    case TermOp::Add: return "add";
    case TermOp::Sub: return "sub";
    case TermOp::Mul: return "mul";
    case TermOp::UDiv: return "udiv";
    case TermOp::URem: return "urem";
    case TermOp::BAnd: return "band";
    case TermOp::BOr: return "bor";
    case TermOp::BXor: return "bxor";
    case TermOp::Shl: return "shl";
    case TermOp::LShr: return "lshr";
    case TermOp::AShr: return "ashr";
    default: return "?";
  }
}

static std::string type_suffix(WordType t) {
  return std::string(t.is_signed ? "s" : "u") + std::to_string(int(t.bits));
}

static void print_term(const Term &t, std::ostream &os);

static void print_formula(const Formula &f, std::ostream &os) {
  switch (f->op) {
    case FormulaOp::True: os << "true"; return;
    case FormulaOp::False: os << "false"; return;
    case FormulaOp::Cmp: {
      const char *c = nullptr;
      switch (f->cmp) {
        case CmpOp::Eq: c = "eq"; break;
        case CmpOp::Ne: c = "ne"; break;
        case CmpOp::Ult: c = "ult"; break;
        case CmpOp::Ule: c = "ule"; break;
        case CmpOp::Slt: c = "slt"; break;
        case CmpOp::Sle: c = "sle"; break;
      }
      os << "(" << c << " ";
      print_term(f->lhs, os);
      os << " ";
      print_term(f->rhs, os);
      os << ")";
      return;
    }
    case FormulaOp::Not:
      os << "(not ";
      print_formula(f->args[0], os);
      os << ")";
      return;
    case FormulaOp::And:
    case FormulaOp::Or: {
      os << (f->op == FormulaOp::And ? "(and" : "(or");
      for (const auto &g : f->args) {
        os << " ";
        print_formula(g, os);
      }
      os << ")";
      return;
    }
    case FormulaOp::Implies:
      os << "(implies ";
      print_formula(f->args[0], os);
      os << " ";
      print_formula(f->args[1], os);
      os << ")";
      return;
  }
}

static void print_term(const Term &t, std::ostream &os) {
  switch (t->op) {
    case TermOp::Const:
      if (!t->name.empty())
        os << "(sym " << t->name << ")";
      else if (!t->type.is_signed && t->value.raw >= 65536)
        os << "(const " << type_suffix(t->type) << " " << word_to_hex(t->value) << ")";
      else
        os << "(const " << type_suffix(t->type) << " " << word_to_string(t->value) << ")";
      return;
    case TermOp::Var:
      os << "(var " << t->name << " " << type_suffix(t->type) << ")";
      return;
    case TermOp::StateRead:
      os << "(read " << t->name << " " << type_suffix(t->type) << ")";
      return;
    case TermOp::OldRead:
      os << "(old " << t->name << " " << type_suffix(t->type) << ")";
      return;
    case TermOp::HeapRead:
      os << "(heap " << type_suffix(t->heap_tag) << " ";
      print_term(t->a, os);
      os << ")";
      return;
    case TermOp::Neg:
    case TermOp::BNot:
      os << "(" << term_op_name(t->op) << " ";
      print_term(t->a, os);
      os << ")";
      return;
    case TermOp::Ite:
      os << "(ite ";
      print_formula(t->cond, os);
      os << " ";
      print_term(t->a, os);
      os << " ";
      print_term(t->b, os);
      os << ")";
      return;
    case TermOp::ZExt:
    case TermOp::SExt:
    case TermOp::Trunc: {
      const char *n = t->op == TermOp::ZExt ? "zext" : t->op == TermOp::SExt ? "sext" : "trunc";
      os << "(" << n << " " << type_suffix(t->type) << " ";
      print_term(t->a, os);
      os << ")";
      return;
    }
    default:
      os << "(" << term_op_name(t->op) << " ";
      print_term(t->a, os);
      os << " ";
      print_term(t->b, os);
      os << ")";
      return;
  }
}

std::string term_to_string(const Term &t) {
  std::ostringstream os;
  print_term(t, os);
  return os.str();
}

std::string formula_to_string(const Formula &f) {
  std::ostringstream os;
  print_formula(f, os);
  return os.str();
}

// --- free variables -----------------------------------------------------

namespace {

struct Collector {
  FreeVars &out;
  std::set<const void *> seen;

  void term(const Term &t) {
    if (!t || !seen.insert(t.get()).second) return;
    switch (t->op) {
      case TermOp::Var: out.vars.emplace(t->name, t->type); break;
      case TermOp::StateRead: out.state.emplace(t->name, t->type); break;
      case TermOp::OldRead: out.old_state.emplace(t->name, t->type); break;
      case TermOp::HeapRead: out.heap_reads.push_back(t); break;
      default: break;
    }
    if (t->a) term(t->a);
    if (t->b) term(t->b);
    if (t->cond) formula(t->cond);
  }

  void formula(const Formula &f) {
    if (!f || !seen.insert(f.get()).second) return;
    if (f->lhs) term(f->lhs);
    if (f->rhs) term(f->rhs);
    for (const auto &g : f->args) formula(g);
  }
};

}  // namespace

void collect_free(const Term &t, FreeVars &out) {
  Collector c{out};
  c.term(t);
}

void collect_free(const Formula &f, FreeVars &out) {
  Collector c{out};
  c.formula(f);
}

// --- structural equality --------------------------------------------------

bool term_equal(const Term &a, const Term &b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op || !(a->type == b->type)) return false;
  switch (a->op) {
    case TermOp::Const:
      if (a->value != b->value) return false;
      break;
    case TermOp::Var:
    case TermOp::StateRead:
    case TermOp::OldRead:
      if (a->name != b->name) return false;
      break;
    case TermOp::HeapRead:
      if (!(a->heap_tag == b->heap_tag)) return false;
      break;
    default:
      break;
  }
  if (!term_equal(a->a, b->a) || !term_equal(a->b, b->b)) return false;
  if (!!a->cond != !!b->cond) return false;
  if (a->cond && !formula_equal(a->cond, b->cond)) return false;
  return true;
}

bool formula_equal(const Formula &a, const Formula &b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == FormulaOp::Cmp) {
    return a->cmp == b->cmp && term_equal(a->lhs, b->lhs) && term_equal(a->rhs, b->rhs);
  }
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!formula_equal(a->args[i], b->args[i])) return false;
  return true;
}

// --- substitution -------------------------------------------------------

namespace {

struct SubstCtx {
  const Subst &s;
  std::unordered_map<const void *, Term> term_memo;
  std::unordered_map<const void *, Formula> formula_memo;

  Term term(const Term &t) {
    if (!t) return t;
    auto it = term_memo.find(t.get());
    if (it != term_memo.end()) return it->second;
    Term r = rewrite(t);
    term_memo.emplace(t.get(), r);
    return r;
  }

  Term rewrite(const Term &t) {
    switch (t->op) {
      case TermOp::Const:
        return t;
      case TermOp::Var: {
        auto it = s.vars.find(t->name);
        if (it != s.vars.end()) {
          assert(it->second->type.bits == t->type.bits);
          return it->second;
        }
        return t;
      }
      case TermOp::StateRead: {
        auto it = s.state.find(t->name);
        if (it != s.state.end()) return it->second;
        return t;
      }
      case TermOp::OldRead: {
        auto it = s.old_state.find(t->name);
        if (it != s.old_state.end()) return it->second;
        return t;
      }
      case TermOp::HeapRead: {
        Term addr = term(t->a);
        if (s.has_heap_write && s.heap_tag == t->heap_tag) {
          // read over write on the same typed heap
          return mk_ite(mk_cmp(CmpOp::Eq, addr, s.heap_addr), s.heap_value,
                        mk_heap_read(t->heap_tag, addr));
        }
        if (addr.get() == t->a.get()) return t;
        return mk_heap_read(t->heap_tag, addr);
      }
      case TermOp::Ite: {
        Formula c = formula(t->cond);
        Term a = term(t->a), b = term(t->b);
        if (c.get() == t->cond.get() && a.get() == t->a.get() && b.get() == t->b.get()) return t;
        return mk_ite(c, a, b);
      }
      case TermOp::ZExt:
      case TermOp::SExt:
      case TermOp::Trunc: {
        Term a = term(t->a);
        if (a.get() == t->a.get()) return t;
        return mk_extend(t->op, a, t->type);
      }
      case TermOp::Neg:
      case TermOp::BNot: {
        Term a = term(t->a);
        if (a.get() == t->a.get()) return t;
        return mk_unary(t->op, a);
      }
      default: {
        Term a = term(t->a), b = term(t->b);
        if (a.get() == t->a.get() && b.get() == t->b.get()) return t;
        return mk_binary(t->op, a, b);
      }
    }
  }

  Formula formula(const Formula &f) {
    if (!f) return f;
    auto it = formula_memo.find(f.get());
    if (it != formula_memo.end()) return it->second;
    Formula r;
    switch (f->op) {
      case FormulaOp::True:
      case FormulaOp::False:
        r = f;
        break;
      case FormulaOp::Cmp: {
        Term l = term(f->lhs), rr = term(f->rhs);
        r = (l.get() == f->lhs.get() && rr.get() == f->rhs.get()) ? f : mk_cmp(f->cmp, l, rr);
        break;
      }
      default: {
        bool changed = false;
        std::vector<Formula> args;
        args.reserve(f->args.size());
        for (const auto &g : f->args) {
          Formula h = formula(g);
          changed |= h.get() != g.get();
          args.push_back(h);
        }
        if (!changed) {
          r = f;
        } else if (f->op == FormulaOp::Not) {
          r = mk_not(args[0]);
        } else if (f->op == FormulaOp::Implies) {
          r = mk_implies(args[0], args[1]);
        } else if (f->op == FormulaOp::And) {
          r = mk_and(std::move(args));
        } else {
          r = mk_or(std::move(args));
        }
        break;
      }
    }
    formula_memo.emplace(f.get(), r);
    return r;
  }
};

}  // namespace

Term subst_term(const Term &t, const Subst &s) {
  SubstCtx ctx{s};
  return ctx.term(t);
}

Formula subst_formula(const Formula &f, const Subst &s) {
  SubstCtx ctx{s};
  return ctx.formula(f);
}

std::vector<Formula> split_conjuncts(const Formula &f) {
  if (f->op == FormulaOp::And) return f->args;
  return {f};
}

}  // namespace wpdrv
