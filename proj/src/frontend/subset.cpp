#include "wpdrv/subset.hpp"

namespace wpdrv {

namespace {

struct SubsetChecker {
  const Ast &ast;
  std::vector<Diagnostic> diags;

  explicit SubsetChecker(const Ast &a) : ast(a) {}

  void reject(SourceLoc l, const char *code, const std::string &msg) {
    diags.push_back(make_error(code, l, msg));
  }

  void run() {
    for (const auto &s : ast.structs) check_type(s.type, s.loc);
    for (const auto &g : ast.globals) check_type(g.type, g.loc);
    for (const auto &fn : ast.functions) {
      if (fn.spec.dont_translate) continue;  // explicitly skipped
      for (const auto &p : fn.params) check_type(p.type, p.loc);
      check_type(fn.type->result, fn.loc);
      for (const auto &s : fn.body) check_stmt(s, /*in_loop=*/false);
    }
  }

  void check_type(const CTypePtr &t, SourceLoc l) {
    if (!t) return;
    switch (t->kind) {
      case TypeKind::Float:
        reject(l, "float", "floating-point types are not supported");
        return;
      case TypeKind::Struct:
        if (t->struct_name.rfind("union ", 0) == 0) {
          reject(l, "union", "unions are not supported");
          return;
        }
        for (const auto &f : t->fields) check_type(f.type, l);
        return;
      case TypeKind::Pointer:
        check_type(t->pointee, l);
        return;
      case TypeKind::Array:
        check_type(t->element, l);
        return;
      case TypeKind::Function:
        for (const auto &p : t->params) check_type(p, l);
        check_type(t->result, l);
        return;
      default:
        return;
    }
  }

  void check_stmt(const StmtPtr &s, bool in_loop) {
    if (!s) return;
    switch (s->kind) {
      case StmtKind::Goto:
        reject(s->loc, "goto", "goto is not supported");
        return;
      case StmtKind::LabelStmt:
        reject(s->loc, "goto", "labels are not supported");
        check_stmt(s->s1, in_loop);
        return;
      case StmtKind::Switch:
        reject(s->loc, "switch", "switch is not supported");
        if (s->expr) check_expr(s->expr);
        for (const auto &c : s->cases)
          for (const auto &inner : c.body) check_stmt(inner, in_loop);
        return;
      case StmtKind::Break:
        reject(s->loc, "break", "break is not supported");
        return;
      case StmtKind::Continue:
        reject(s->loc, "continue", "continue is not supported");
        return;
      case StmtKind::Return:
        if (in_loop) reject(s->loc, "return-in-loop", "return inside a loop is not supported");
        if (s->expr) check_expr(s->expr);
        return;
      case StmtKind::Decl:
        check_type(s->decl_type, s->loc);
        if (s->decl_init) check_expr(s->decl_init);
        return;
      case StmtKind::ExprStmt:
        if (s->expr) check_expr(s->expr);
        return;
      case StmtKind::Compound:
        for (const auto &inner : s->body) check_stmt(inner, in_loop);
        return;
      case StmtKind::If:
        check_expr(s->expr);
        check_stmt(s->s1, in_loop);
        check_stmt(s->s2, in_loop);
        return;
      case StmtKind::While:
      case StmtKind::DoWhile:
        check_expr(s->expr);
        check_stmt(s->s1, /*in_loop=*/true);
        return;
      case StmtKind::For:
        check_stmt(s->for_init, in_loop);
        if (s->for_cond) check_expr(s->for_cond);
        if (s->for_step) check_expr(s->for_step);
        check_stmt(s->s1, /*in_loop=*/true);
        return;
      case StmtKind::Empty:
        return;
    }
  }

  void check_expr(const ExprPtr &e) {
    if (!e) return;
    switch (e->kind) {
      case ExprKind::FloatLit:
        reject(e->loc, "float", "floating-point literals are not supported");
        return;
      case ExprKind::Call: {
        bool direct = e->a && e->a->kind == ExprKind::Ident && e->a->ref == RefKind::Function;
        if (!direct)
          reject(e->loc, "indirect-call",
                 "calling through a function pointer is not supported");
        for (const auto &a : e->args) check_expr(a);
        return;
      }
      case ExprKind::Unary:
        if (e->un == UnOp::AddrOf) {
          const ExprPtr &t = e->a;
          if (t && t->kind == ExprKind::Ident) {
            if (t->ref == RefKind::Local || t->ref == RefKind::Param) {
              reject(e->loc, "address-of-local",
                     "taking the address of a local variable is not supported");
              return;
            }
            if (t->ref == RefKind::Global) {
              reject(e->loc, "address-of-global",
                     "taking the address of a global is not supported");
              return;
            }
            if (t->ref == RefKind::Function) return;  // function values are fine
          } else {
            reject(e->loc, "address-of-global",
                   "taking the address of an object is not supported");
            return;
          }
        }
        if (e->un == UnOp::Deref) check_deref(e);
        check_expr(e->a);
        return;
      case ExprKind::Member:
        if (e->is_arrow) {
          reject(e->loc, "unsupported-deref",
                 "dereferencing a pointer to a structure is not supported");
        }
        check_expr(e->a);
        return;
      case ExprKind::Index:
        // indexing a pointer is a heap access; element must be a word
        if (e->a && e->a->type && e->a->type->is_pointer()) check_pointee(e, e->a->type);
        check_expr(e->a);
        check_expr(e->b);
        return;
      default:
        check_expr(e->a);
        check_expr(e->b);
        check_expr(e->c);
        for (const auto &a : e->args) check_expr(a);
        return;
    }
  }

  void check_deref(const ExprPtr &e) {
    if (e->a && e->a->type && e->a->type->is_pointer()) check_pointee(e, e->a->type);
  }

  void check_pointee(const ExprPtr &e, const CTypePtr &ptr) {
    const CTypePtr &pointee = ptr->pointee;
    if (!pointee) return;
    if (pointee->kind == TypeKind::Function) {
      // dereferencing a function pointer is only an error when called;
      // the Call case reports that
      return;
    }
    if (!pointee->is_word())
      reject(e->loc, "unsupported-deref",
             "only word-typed heap accesses are supported (pointee is " +
                 type_to_string(pointee) + ")");
  }
};

}  // namespace

std::vector<Diagnostic> check_subset(const Ast &ast) {
  SubsetChecker c(ast);
  c.run();
  return std::move(c.diags);
}

}  // namespace wpdrv
