#include "wpdrv/typecheck.hpp"

#include <cassert>
#include <map>
#include <set>

namespace wpdrv {

CTypePtr promoted_word_type(const CTypePtr &t) {
  if (!t || t->kind != TypeKind::Word) return t;
  if (t->word.bits < 32) return make_word_type(s32());  // all narrow types fit in s32
  return t;
}

CTypePtr common_word_type(const CTypePtr &a0, const CTypePtr &b0) {
  CTypePtr a = promoted_word_type(a0);
  CTypePtr b = promoted_word_type(b0);
  if (type_equal(a, b)) return a;
  const WordType &wa = a->word, &wb = b->word;
  if (wa.bits == wb.bits) return make_word_type(WordType{wa.bits, false});
  const CTypePtr &wide = wa.bits > wb.bits ? a : b;
  return wide;
}

namespace {

struct Checker {
  Ast &ast;
  std::vector<Diagnostic> diags;

  std::map<std::string, CTypePtr> struct_types;
  std::map<std::string, const GlobalDecl *> globals;
  std::map<std::string, const EnumConstDecl *> enums;
  std::map<std::string, FunctionDef *> functions;

  // current function state
  FunctionDef *fn = nullptr;
  std::vector<std::map<std::string, std::pair<std::string, CTypePtr>>> scopes;
  std::map<std::string, int> rename_counts;

  explicit Checker(Ast &a) : ast(a) {}

  void error(SourceLoc l, const std::string &code, const std::string &msg) {
    diags.push_back(make_error(code, l, msg));
  }

  // --- unit-level setup ----------------------------------------------------

  void run() {
    for (const auto &s : ast.structs) {
      if (struct_types.count(s.name))
        error(s.loc, "type", "duplicate struct '" + s.name + "'");
      struct_types[s.name] = s.type;
    }
    for (const auto &e : ast.enum_consts) {
      if (enums.count(e.name)) error(e.loc, "type", "duplicate enum constant '" + e.name + "'");
      enums[e.name] = &e;
    }
    for (const auto &g : ast.globals) {
      if (globals.count(g.name)) error(g.loc, "type", "duplicate global '" + g.name + "'");
      if (enums.count(g.name)) error(g.loc, "type", "'" + g.name + "' is already an enum constant");
      globals[g.name] = &g;
    }
    for (auto &f : ast.functions) {
      if (functions.count(f.name)) error(f.loc, "type", "duplicate function '" + f.name + "'");
      if (globals.count(f.name))
        error(f.loc, "type", "'" + f.name + "' is both a global and a function");
      functions[f.name] = &f;
    }
    for (auto &g : ast.globals) {
      resolve_struct_refs(g.type);
      if (g.init) check_global_init(g);
    }
    for (auto &f : ast.functions) check_function(f);
  }

  // Replace empty forward struct references with the full declaration.
  void resolve_struct_refs(const CTypePtr &t) {
    if (!t) return;
    if (t->kind == TypeKind::Struct && t->fields.empty()) {
      auto it = struct_types.find(t->struct_name);
      if (it != struct_types.end() && !it->second->fields.empty()) {
        // fields are filled in lazily at lookup; nothing to mutate on shared ptr
      }
    }
    resolve_struct_refs(t->pointee);
    resolve_struct_refs(t->element);
  }

  CTypePtr struct_with_fields(const CTypePtr &t) {
    if (t->kind == TypeKind::Struct && t->fields.empty()) {
      auto it = struct_types.find(t->struct_name);
      if (it != struct_types.end()) return it->second;
    }
    return t;
  }

  void check_global_init(GlobalDecl &g) {
    type_expr(g.init, /*annotation=*/nullptr);
    if (!g.init) return;
    if (g.init->kind != ExprKind::IntLit && g.init->ref != RefKind::EnumConst)
      error(g.loc, "type", "global initializer must be a constant");
    if (g.type->is_word() && g.init->type && g.init->type->is_word())
      coerce(g.init, g.type);
  }

  // --- scope management ------------------------------------------------------

  std::string declare_local(const std::string &name, CTypePtr type, SourceLoc l) {
    assert(fn);
    auto &top = scopes.back();
    if (top.count(name)) {
      error(l, "type", "redeclaration of '" + name + "'");
    }
    int n = ++rename_counts[name];
    std::string resolved = fn->name + "::" + name;
    if (n > 1) resolved += "#" + std::to_string(n);
    top[name] = {resolved, type};
    fn->locals.push_back(ParamDecl{name, type, l, resolved});
    return resolved;
  }

  bool lookup_local(const std::string &name, std::string &resolved, CTypePtr &type) {
    for (auto it = scopes.rbegin(); it != scopes.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) {
        resolved = f->second.first;
        type = f->second.second;
        return true;
      }
    }
    return false;
  }

  // --- functions -------------------------------------------------------------

  void check_function(FunctionDef &f) {
    fn = &f;
    scopes.clear();
    rename_counts.clear();
    scopes.emplace_back();
    for (auto &p : f.params) {
      if (p.name.empty()) {
        if (f.defined) error(p.loc, "type", "parameter name missing in definition");
        continue;
      }
      p.resolved = f.name + "::" + p.name;
      if (scopes.back().count(p.name))
        error(p.loc, "type", "duplicate parameter '" + p.name + "'");
      scopes.back()[p.name] = {p.resolved, p.type};
    }
    for (auto &s : f.body) check_stmt(s);
    fn = nullptr;
  }

  void check_stmt(StmtPtr &s) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Empty:
        return;
      case StmtKind::ExprStmt:
        if (s->expr) {
          type_expr(s->expr, nullptr);
          check_statement_expr(s->expr);
        }
        return;
      case StmtKind::Decl: {
        if (s->decl_type && s->decl_type->is_void()) {
          error(s->loc, "type", "cannot declare a void variable");
        }
        s->resolved_name = declare_local(s->decl_name, s->decl_type, s->loc);
        if (s->decl_init) {
          type_expr(s->decl_init, nullptr);
          if (s->decl_init && s->decl_init->type) init_coerce(s);
        }
        return;
      }
      case StmtKind::Compound: {
        scopes.emplace_back();
        for (auto &inner : s->body) check_stmt(inner);
        scopes.pop_back();
        return;
      }
      case StmtKind::If:
      case StmtKind::While:
      case StmtKind::DoWhile: {
        check_condition(s->expr);
        scopes.emplace_back();
        check_stmt(s->s1);
        scopes.pop_back();
        if (s->s2) {
          scopes.emplace_back();
          check_stmt(s->s2);
          scopes.pop_back();
        }
        return;
      }
      case StmtKind::For: {
        scopes.emplace_back();
        check_stmt(s->for_init);
        if (s->for_cond) check_condition(s->for_cond);
        if (s->for_step) {
          type_expr(s->for_step, nullptr);
          check_statement_expr(s->for_step);
        }
        check_stmt(s->s1);
        scopes.pop_back();
        return;
      }
      case StmtKind::Return: {
        CTypePtr rt = fn->type->result;
        if (s->expr) {
          type_expr(s->expr, nullptr);
          if (rt->is_void()) {
            error(s->loc, "type", "returning a value from a void function");
          } else if (s->expr && s->expr->type) {
            coerce(s->expr, rt);
          }
        } else if (!rt->is_void()) {
          error(s->loc, "type", "missing return value");
        }
        return;
      }
      case StmtKind::Break:
      case StmtKind::Continue:
      case StmtKind::Goto:
      case StmtKind::LabelStmt:
        if (s->s1) check_stmt(s->s1);
        return;
      case StmtKind::Switch: {
        if (s->expr) type_expr(s->expr, nullptr);
        for (auto &c : s->cases) {
          scopes.emplace_back();
          for (auto &inner : c.body) check_stmt(inner);
          scopes.pop_back();
        }
        return;
      }
    }
  }

  void check_condition(ExprPtr &e) {
    if (!e) return;
    type_expr(e, nullptr);
    require_pure(e, "condition");
    if (e->type && !e->type->is_word() && !e->type->is_pointer() &&
        e->type->kind != TypeKind::Float)
      error(e->loc, "type", "condition must be a scalar");
  }

  // statement-position expression: assignment/inc/dec allowed at the root only
  void check_statement_expr(const ExprPtr &e) {
    if (!e) return;
    if (e->kind == ExprKind::Assign) {
      require_no_side_effects_below(e->a);
      require_calls_only(e->b);
      return;
    }
    if (e->kind == ExprKind::Unary &&
        (e->un == UnOp::PreInc || e->un == UnOp::PreDec || e->un == UnOp::PostInc ||
         e->un == UnOp::PostDec)) {
      require_no_side_effects_below(e->a);
      return;
    }
    if (e->kind == ExprKind::Call) {
      for (const auto &a : e->args) require_calls_only(a);
      return;
    }
    error(e->loc, "side-effect", "expression statement has no effect");
  }

  // below this point, no assignment/inc/dec at all (calls still allowed)
  void require_calls_only(const ExprPtr &e) {
    if (!e) return;
    if (e->kind == ExprKind::Assign) {
      error(e->loc, "side-effect", "assignment nested inside an expression");
      return;
    }
    if (e->kind == ExprKind::Unary &&
        (e->un == UnOp::PreInc || e->un == UnOp::PreDec || e->un == UnOp::PostInc ||
         e->un == UnOp::PostDec)) {
      error(e->loc, "side-effect", "increment/decrement nested inside an expression");
      return;
    }
    for (const auto &c : {e->a, e->b, e->c}) require_calls_only(c);
    for (const auto &c : e->args) require_calls_only(c);
  }

  void require_no_side_effects_below(const ExprPtr &e) { require_calls_only(e); }

  // fully pure: additionally no calls
  void require_pure(const ExprPtr &e, const char *where) {
    if (!e) return;
    if (e->kind == ExprKind::Call) {
      error(e->loc, "side-effect", std::string("function call inside a ") + where);
      return;
    }
    if (e->kind == ExprKind::Assign ||
        (e->kind == ExprKind::Unary &&
         (e->un == UnOp::PreInc || e->un == UnOp::PreDec || e->un == UnOp::PostInc ||
          e->un == UnOp::PostDec))) {
      error(e->loc, "side-effect", std::string("side effect inside a ") + where);
      return;
    }
    for (const auto &c : {e->a, e->b, e->c}) require_pure(c, where);
    for (const auto &c : e->args) require_pure(c, where);
  }

  void init_coerce(StmtPtr &s) {
    if (s->decl_type->is_word() || s->decl_type->is_pointer()) {
      coerce(s->decl_init, s->decl_type);
    } else if (s->decl_type->kind == TypeKind::Float ||
               (s->decl_init->type && s->decl_init->type->kind == TypeKind::Float)) {
      // floats pass through; the subset checker rejects them with a location
    } else {
      error(s->loc, "type", "cannot initialize " + type_to_string(s->decl_type));
    }
  }

  // --- expressions -----------------------------------------------------------

  struct AnnotationCtx {
    AnnotationScope *scope = nullptr;
  };

  // `ann` non-null when typing an annotation formula
  void type_expr(ExprPtr &e, AnnotationScope *ann) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::IntLit: {
        bool big = e->int_value > 0xffffffffull || e->suffix_long;
        e->type = make_word_type(big ? u64() : u32());
        e->type_pending = !big && !e->suffix_unsigned;
        return;
      }
      case ExprKind::FloatLit:
        e->type = make_float_type();
        return;
      case ExprKind::Ident:
        resolve_ident(e, ann);
        return;
      case ExprKind::Unary:
        type_unary(e, ann);
        return;
      case ExprKind::Binary:
        type_binary(e, ann);
        return;
      case ExprKind::Assign: {
        if (ann) {
          error(e->loc, "annotation", "assignment not allowed in a formula");
          e->type = make_word_type(u32());
          return;
        }
        type_expr(e->a, ann);
        type_expr(e->b, ann);
        type_assign(e);
        return;
      }
      case ExprKind::Cond: {
        type_expr(e->a, ann);
        type_expr(e->b, ann);
        type_expr(e->c, ann);
        if (!e->b || !e->c || !e->b->type || !e->c->type) {
          e->type = make_word_type(u32());
          return;
        }
        if (e->b->type->is_word() && e->c->type->is_word()) {
          CTypePtr t = common_word_type(e->b->type, e->c->type);
          coerce(e->b, t);
          coerce(e->c, t);
          e->type = t;
        } else if (type_equal(e->b->type, e->c->type)) {
          e->type = e->b->type;
        } else {
          error(e->loc, "type", "branches of ?: have different types");
          e->type = e->b->type;
        }
        return;
      }
      case ExprKind::Call:
        type_call(e, ann);
        return;
      case ExprKind::Index: {
        type_expr(e->a, ann);
        type_expr(e->b, ann);
        if (e->b && e->b->type && e->b->type->is_word()) {
          // index is converted to u64 during lowering
        } else if (e->b) {
          error(e->loc, "type", "array index must be a word");
        }
        if (e->a && e->a->type) {
          CTypePtr at = e->a->type;
          if (at->kind == TypeKind::Array) {
            e->type = at->element;
          } else if (at->is_pointer()) {
            e->type = at->pointee;
          } else {
            error(e->loc, "type", "indexing a non-array value");
            e->type = make_word_type(u32());
          }
        }
        return;
      }
      case ExprKind::Member: {
        type_expr(e->a, ann);
        if (!e->a || !e->a->type) {
          e->type = make_word_type(u32());
          return;
        }
        CTypePtr base = e->a->type;
        if (e->is_arrow) {
          if (!base->is_pointer()) {
            error(e->loc, "type", "-> applied to a non-pointer");
            e->type = make_word_type(u32());
            return;
          }
          base = base->pointee;
        }
        base = struct_with_fields(base);
        if (base->kind != TypeKind::Struct) {
          error(e->loc, "type", "member access on non-structure type " + type_to_string(base));
          e->type = make_word_type(u32());
          return;
        }
        for (const auto &f : base->fields) {
          if (f.name == e->name) {
            e->type = f.type;
            return;
          }
        }
        error(e->loc, "type",
              "no field '" + e->name + "' in " + type_to_string(base));
        e->type = make_word_type(u32());
        return;
      }
      case ExprKind::Cast: {
        type_expr(e->a, ann);
        e->type = e->cast_type;
        if (e->a && e->a->type) {
          bool src_ok = e->a->type->is_word() || e->a->type->is_pointer() ||
                        e->a->type->kind == TypeKind::Float;
          bool dst_ok = e->type->is_word() || e->type->is_pointer() ||
                        e->type->is_void() || e->type->kind == TypeKind::Float;
          if (!src_ok || !dst_ok)
            error(e->loc, "type", "unsupported cast to " + type_to_string(e->type));
        }
        return;
      }
      case ExprKind::OldExpr: {
        if (!ann || !ann->in_ensures) {
          error(e->loc, "annotation", "\\old is only available in ensures clauses");
        }
        type_expr(e->a, ann);
        e->type = e->a && e->a->type ? e->a->type : make_word_type(u32());
        return;
      }
      case ExprKind::ResultExpr: {
        if (!ann || !ann->in_ensures) {
          error(e->loc, "annotation", "\\result is only available in ensures clauses");
          e->type = make_word_type(u32());
          return;
        }
        CTypePtr rt = ann->fn.type->result;
        if (rt->is_void()) {
          error(e->loc, "annotation", "\\result in a void function");
          e->type = make_word_type(u32());
        } else {
          e->type = rt;
        }
        return;
      }
      case ExprKind::HeapExpr: {
        if (!ann) {
          error(e->loc, "annotation", "heap reads are only available in formulas");
        }
        type_expr(e->a, ann);
        if (e->a && e->a->type && !(e->a->type->is_pointer() || e->a->type->is_word()))
          error(e->loc, "type", "heap read address must be a pointer or word");
        e->type = e->cast_type;
        return;
      }
    }
  }

  void resolve_ident(ExprPtr &e, AnnotationScope *ann) {
    // local / parameter scope
    std::string resolved;
    CTypePtr t;
    if (!ann && lookup_local(e->name, resolved, t)) {
      e->ref = RefKind::Local;
      e->resolved = resolved;
      e->type = t;
      return;
    }
    if (ann) {
      // parameters always; locals only where allowed
      for (const auto &p : ann->fn.params) {
        if (p.name == e->name) {
          e->ref = RefKind::Param;
          e->resolved = p.resolved;
          e->type = p.type;
          return;
        }
      }
      if (ann->allow_locals) {
        for (const auto &lv : ann->fn.locals) {
          if (lv.name == e->name) {
            e->ref = RefKind::Local;
            e->resolved = lv.resolved;
            e->type = lv.type;
            return;
          }
        }
      }
    }
    auto eg = enums.find(e->name);
    if (eg != enums.end()) {
      e->ref = RefKind::EnumConst;
      e->const_value = eg->second->value;
      e->type = make_word_type(eg->second->type);
      e->type_pending = !eg->second->type.is_signed && eg->second->type.bits == 32;
      return;
    }
    auto g = globals.find(e->name);
    if (g != globals.end()) {
      e->ref = RefKind::Global;
      e->resolved = e->name;
      e->type = g->second->type;
      return;
    }
    auto f = functions.find(e->name);
    if (f != functions.end()) {
      e->ref = RefKind::Function;
      e->resolved = e->name;
      e->type = make_pointer_type(f->second->type);
      return;
    }
    if (ann) {
      // boolean literals of the formula language
      if (e->name == "true" || e->name == "false") {
        e->ref = RefKind::EnumConst;
        e->const_value = e->name == "true" ? 1 : 0;
        e->type = make_word_type(s32());
        return;
      }
      // unknown identifiers in formulas become logical labels
      for (size_t i = 0; i < ann->spec.labels.size(); ++i) {
        if (ann->spec.labels[i] == e->name) {
          e->ref = RefKind::Label;
          e->resolved = e->name;
          e->type = make_word_type(ann->spec.label_types[i]);
          return;
        }
      }
      e->ref = RefKind::Label;
      e->resolved = e->name;
      e->type = make_word_type(u32());
      e->type_pending = true;
      ann->spec.labels.push_back(e->name);
      ann->spec.label_types.push_back(u32());
      return;
    }
    error(e->loc, "type", "use of undeclared identifier '" + e->name + "'");
    e->type = make_word_type(u32());
  }

  void type_unary(ExprPtr &e, AnnotationScope *ann) {
    type_expr(e->a, ann);
    if (!e->a || !e->a->type) {
      e->type = make_word_type(u32());
      return;
    }
    CTypePtr at = e->a->type;
    switch (e->un) {
      case UnOp::Neg:
      case UnOp::BitNot: {
        if (at->kind == TypeKind::Float) {
          e->type = at;
          return;
        }
        if (!at->is_word()) {
          error(e->loc, "type", "arithmetic on non-word type " + type_to_string(at));
          e->type = make_word_type(u32());
          return;
        }
        CTypePtr t = promoted_word_type(at);
        // negating an unsigned pending literal keeps it polymorphic
        if (e->a->type_pending) {
          e->type = e->a->type;
          e->type_pending = true;
          return;
        }
        coerce(e->a, t);
        e->type = t;
        return;
      }
      case UnOp::LogNot:
        e->type = make_word_type(s32());
        return;
      case UnOp::Deref: {
        if (!at->is_pointer()) {
          error(e->loc, "type", "dereference of non-pointer");
          e->type = make_word_type(u32());
          return;
        }
        e->type = at->pointee;
        return;
      }
      case UnOp::AddrOf: {
        e->type = make_pointer_type(at);
        return;
      }
      case UnOp::PreInc:
      case UnOp::PreDec:
      case UnOp::PostInc:
      case UnOp::PostDec: {
        if (!at->is_word()) {
          error(e->loc, "type", "increment/decrement on non-word type");
          e->type = make_word_type(u32());
          return;
        }
        require_lvalue(e->a);
        e->type = at;
        return;
      }
    }
  }

  void type_binary(ExprPtr &e, AnnotationScope *ann) {
    type_expr(e->a, ann);
    type_expr(e->b, ann);
    if (!e->a || !e->b || !e->a->type || !e->b->type) {
      e->type = make_word_type(u32());
      return;
    }
    CTypePtr at = e->a->type, bt = e->b->type;
    if (at->kind == TypeKind::Float || bt->kind == TypeKind::Float) {
      e->type = make_float_type();
      return;
    }
    bool cmp = false, logical = false;
    switch (e->bin) {
      case BinOp::Lt:
      case BinOp::Gt:
      case BinOp::Le:
      case BinOp::Ge:
      case BinOp::Eq:
      case BinOp::Ne:
        cmp = true;
        break;
      case BinOp::LogAnd:
      case BinOp::LogOr:
        logical = true;
        break;
      default:
        break;
    }
    if (logical) {
      check_scalar(e->a);
      check_scalar(e->b);
      e->type = make_word_type(s32());
      return;
    }
    // pointer cases
    if (at->is_pointer() || bt->is_pointer()) {
      if (cmp) {
        if (at->is_pointer() && bt->is_pointer()) {
          if (!type_equal(at, bt))
            error(e->loc, "type", "comparing incompatible pointer types");
        } else {
          // pointer vs integer constant 0 (null)
          ExprPtr &other = at->is_pointer() ? e->b : e->a;
          CTypePtr ptr = at->is_pointer() ? at : bt;
          if (other->kind == ExprKind::IntLit && other->int_value == 0) {
            other->type = ptr;
            other->type_pending = false;
          } else if (other->type->is_word() && ann) {
            // in formulas pointers are plain 64-bit words
            coerce_annotation_pointer(e, ann);
          } else {
            error(e->loc, "type", "comparing pointer with non-null integer");
          }
        }
        e->type = make_word_type(s32());
        return;
      }
      // pointer arithmetic: ptr +/- word
      if ((e->bin == BinOp::Add || e->bin == BinOp::Sub) && at->is_pointer() &&
          bt->is_word()) {
        e->type = at;
        return;
      }
      if (e->bin == BinOp::Add && bt->is_pointer() && at->is_word()) {
        e->type = bt;
        return;
      }
      if (ann && (at->is_pointer() || bt->is_pointer())) {
        // word arithmetic over pointer values inside formulas
        e->type = make_word_type(u64());
        return;
      }
      error(e->loc, "type", "invalid pointer arithmetic");
      e->type = at->is_pointer() ? at : bt;
      return;
    }
    if (!at->is_word() || !bt->is_word()) {
      error(e->loc, "type", "arithmetic on non-word operands");
      e->type = make_word_type(u32());
      return;
    }
    if (e->bin == BinOp::Shl || e->bin == BinOp::Shr) {
      // shift result takes the (promoted) left operand's type
      CTypePtr t = resolve_pending_pair(e->a, e->b, /*shift=*/true);
      e->type = t;
      return;
    }
    CTypePtr t = resolve_pending_pair(e->a, e->b, false);
    if (cmp) {
      e->type = make_word_type(s32());
    } else {
      e->type = t;
      // signed division and modulo are outside the subset (documented)
      if ((e->bin == BinOp::Div || e->bin == BinOp::Rem) && t->word.is_signed)
        error(e->loc, "signed-div", "signed division/modulo is not part of the subset");
    }
  }

  // Settle pending literal widths between two word operands and insert the
  // usual conversions; returns the common type.
  CTypePtr resolve_pending_pair(ExprPtr &a, ExprPtr &b, bool shift) {
    if (a->type_pending && b->type_pending) {
      settle(a, a->type);
      settle(b, shift ? b->type : a->type);
    } else if (a->type_pending) {
      settle(a, shift ? a->type : widest_of(a, b->type));
    } else if (b->type_pending) {
      settle(b, shift ? b->type : widest_of(b, a->type));
    }
    if (shift) {
      CTypePtr t = promoted_word_type(a->type);
      coerce(a, t);
      coerce(b, promoted_word_type(b->type));
      return t;
    }
    CTypePtr t = common_word_type(a->type, b->type);
    coerce(a, t);
    coerce(b, t);
    return t;
  }

  // pending literal adopting type `t`, but never narrowing below its value
  CTypePtr widest_of(const ExprPtr &lit, const CTypePtr &t) {
    if (lit->kind == ExprKind::IntLit || lit->ref == RefKind::EnumConst) {
      uint64_t v = lit->kind == ExprKind::IntLit ? lit->int_value : lit->const_value;
      if (t->word.bits < 64 && v > word_mask(t->word.bits)) return lit->type;
    }
    return t;
  }

  void settle(ExprPtr &e, CTypePtr t) {
    e->type = t;
    e->type_pending = false;
  }

  void check_scalar(const ExprPtr &e) {
    if (e->type && !e->type->is_word() && !e->type->is_pointer())
      error(e->loc, "type", "expected a scalar operand");
  }

  void coerce_annotation_pointer(ExprPtr &e, AnnotationScope *) {
    // pointer values in formulas are 64-bit addresses; nothing to rewrite here,
    // the lowering treats them uniformly
    (void)e;
  }

  void type_assign(ExprPtr &e) {
    if (!e->a || !e->b || !e->a->type || !e->b->type) {
      e->type = e->a && e->a->type ? e->a->type : make_word_type(u32());
      return;
    }
    require_lvalue(e->a);
    CTypePtr target = e->a->type;
    if (target->kind == TypeKind::Struct || target->kind == TypeKind::Array) {
      error(e->loc, "type", "aggregate assignment is not part of the subset");
      e->type = target;
      return;
    }
    if (target->kind == TypeKind::Float || e->b->type->kind == TypeKind::Float) {
      e->type = target;
      return;
    }
    if (target->is_pointer()) {
      if (e->b->kind == ExprKind::IntLit && e->b->int_value == 0) {
        e->b->type = target;
        e->b->type_pending = false;
      } else if (!type_equal(target, e->b->type)) {
        error(e->loc, "type", "incompatible pointer assignment");
      }
      e->type = target;
      return;
    }
    if (!target->is_word()) {
      error(e->loc, "type", "cannot assign to " + type_to_string(target));
      e->type = target;
      return;
    }
    if (e->b->type->is_pointer()) {
      error(e->loc, "type", "assigning a pointer to a word without a cast");
      e->type = target;
      return;
    }
    if (!e->b->type->is_word()) {
      error(e->loc, "type", "assigning " + type_to_string(e->b->type) + " to a word");
      e->type = target;
      return;
    }
    if (e->b->type_pending) settle(e->b, widest_of(e->b, target));
    coerce(e->b, target);
    e->type = target;
  }

  void require_lvalue(const ExprPtr &e) {
    switch (e->kind) {
      case ExprKind::Ident:
        if (e->ref == RefKind::Global || e->ref == RefKind::Local || e->ref == RefKind::Param)
          return;
        error(e->loc, "type", "'" + e->name + "' is not assignable");
        return;
      case ExprKind::Index:
      case ExprKind::Member:
        require_lvalue_base(e);
        return;
      case ExprKind::Unary:
        if (e->un == UnOp::Deref) return;
        break;
      default:
        break;
    }
    error(e->loc, "type", "expression is not assignable");
  }

  void require_lvalue_base(const ExprPtr &e) {
    const Expr *cur = e.get();
    while (cur) {
      if (cur->kind == ExprKind::Index || cur->kind == ExprKind::Member) {
        if (cur->kind == ExprKind::Member && cur->is_arrow) return;  // heap access
        cur = cur->a.get();
        continue;
      }
      if (cur->kind == ExprKind::Ident) {
        if (cur->ref == RefKind::Global || cur->ref == RefKind::Local ||
            cur->ref == RefKind::Param)
          return;
        error(cur->loc, "type", "cannot assign through '" + cur->name + "'");
        return;
      }
      if (cur->kind == ExprKind::Unary && cur->un == UnOp::Deref) return;
      error(cur->loc, "type", "expression is not assignable");
      return;
    }
  }

  void type_call(ExprPtr &e, AnnotationScope *ann) {
    if (ann) {
      error(e->loc, "annotation", "function calls are not allowed in formulas");
      e->type = make_word_type(u32());
      return;
    }
    type_expr(e->a, ann);
    for (auto &a : e->args) type_expr(a, ann);
    if (!e->a || !e->a->type) {
      e->type = make_word_type(u32());
      return;
    }
    CTypePtr ft;
    if (e->a->kind == ExprKind::Ident && e->a->ref == RefKind::Function) {
      ft = e->a->type->pointee;
    } else if (e->a->type->is_function_pointer()) {
      ft = e->a->type->pointee;  // indirect call; the subset checker rejects it
    } else if (e->a->type->kind == TypeKind::Function) {
      ft = e->a->type;
    } else {
      error(e->loc, "type", "called object is not a function");
      e->type = make_word_type(u32());
      return;
    }
    if (e->args.size() != ft->params.size()) {
      error(e->loc, "type",
            "call has " + std::to_string(e->args.size()) + " arguments, expected " +
                std::to_string(ft->params.size()));
    }
    for (size_t i = 0; i < e->args.size() && i < ft->params.size(); ++i) {
      CTypePtr pt = ft->params[i];
      ExprPtr &arg = e->args[i];
      if (!arg->type) continue;
      if (pt->is_word() && arg->type->is_word()) {
        if (arg->type_pending) settle(arg, widest_of(arg, pt));
        coerce(arg, pt);
      } else if (pt->is_pointer()) {
        if (arg->kind == ExprKind::IntLit && arg->int_value == 0) {
          arg->type = pt;
          arg->type_pending = false;
        } else if (!type_equal(pt, arg->type)) {
          error(arg->loc, "type", "argument " + std::to_string(i + 1) + " has wrong type");
        }
      } else if (!type_equal(pt, arg->type)) {
        error(arg->loc, "type", "argument " + std::to_string(i + 1) + " has wrong type");
      }
    }
    e->type = ft->result;
  }

  // wrap in an implicit conversion node when types differ
  void coerce(ExprPtr &e, const CTypePtr &target) {
    if (!e || !e->type) return;
    if (e->type_pending && target->is_word()) {
      settle(e, widest_of(e, target));
    }
    if (type_equal(e->type, target)) return;
    if (!(e->type->is_word() && target->is_word())) return;  // callers diagnosed
    if (e->kind == ExprKind::IntLit) {
      // literals just adopt the type (value masked at lowering)
      e->type = target;
      return;
    }
    auto cast = std::make_shared<Expr>();
    cast->kind = ExprKind::Cast;
    cast->loc = e->loc;
    cast->cast_type = target;
    cast->type = target;
    cast->a = e;
    cast->resolved = "<implicit>";
    e = cast;
  }
};

}  // namespace

TypecheckResult typecheck_unit(Ast &ast) {
  Checker c(ast);
  c.run();
  return TypecheckResult{std::move(c.diags)};
}

// Record the settled width of each logical label back into the spec block,
// diagnosing inconsistent uses across the formula.
static void harvest_label_types(const ExprPtr &e, SpecBlock &spec,
                                std::vector<Diagnostic> &diags,
                                std::map<std::string, WordType> &seen) {
  if (!e) return;
  if (e->kind == ExprKind::Ident && e->ref == RefKind::Label && e->type &&
      e->type->is_word()) {
    auto it = seen.find(e->name);
    if (it == seen.end()) {
      seen.emplace(e->name, e->type->word);
    } else if (!(it->second == e->type->word)) {
      diags.push_back(make_error("annotation", e->loc,
                                 "label '" + e->name + "' used at two different widths"));
    }
  }
  harvest_label_types(e->a, spec, diags, seen);
  harvest_label_types(e->b, spec, diags, seen);
  harvest_label_types(e->c, spec, diags, seen);
  for (const auto &arg : e->args) harvest_label_types(arg, spec, diags, seen);
}

bool typecheck_annotation(ExprPtr &e, AnnotationScope scope, std::vector<Diagnostic> &diags) {
  Checker c(scope.ast);
  // reuse unit-level tables
  for (const auto &s : scope.ast.structs) c.struct_types[s.name] = s.type;
  for (const auto &en : scope.ast.enum_consts) c.enums[en.name] = &en;
  for (const auto &g : scope.ast.globals) c.globals[g.name] = &g;
  for (auto &f : scope.ast.functions) c.functions[f.name] = &f;
  c.fn = &scope.fn;
  c.type_expr(e, &scope);
  c.require_pure(e, "formula");
  std::map<std::string, WordType> seen;
  harvest_label_types(e, scope.spec, c.diags, seen);
  for (size_t i = 0; i < scope.spec.labels.size(); ++i) {
    auto it = seen.find(scope.spec.labels[i]);
    if (it != seen.end()) scope.spec.label_types[i] = it->second;
  }
  bool ok = !has_errors(c.diags);
  for (auto &d : c.diags) diags.push_back(std::move(d));
  return ok;
}

}  // namespace wpdrv
