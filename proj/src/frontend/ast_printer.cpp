#include "wpdrv/ast_printer.hpp"

#include <sstream>

namespace wpdrv {

namespace {

// C declarator syntax: base type, then pointer/array/function wrappers
// applied around the name.
std::string declare(const CTypePtr &t, const std::string &name);

std::string base_type_name(const CTypePtr &t) {
  switch (t->kind) {
    case TypeKind::Void: return "void";
    case TypeKind::Float: return "double";
    case TypeKind::Struct: return "struct " + t->struct_name;
    case TypeKind::Word: {
      const WordType &w = t->word;
      if (w.is_signed) {
        switch (w.bits) {
          case 8: return "char";
          case 16: return "short";
          case 32: return "int";
          default: return "long";
        }
      }
      switch (w.bits) {
        case 8: return "unsigned char";
        case 16: return "unsigned short";
        case 32: return "unsigned int";
        default: return "unsigned long";
      }
    }
    default: return "?";
  }
}

std::string declare(const CTypePtr &t, const std::string &name) {
  switch (t->kind) {
    case TypeKind::Pointer: {
      if (t->pointee && t->pointee->kind == TypeKind::Function) {
        const CTypePtr &f = t->pointee;
        std::string params;
        if (f->params.empty()) {
          params = "void";
        } else {
          for (size_t i = 0; i < f->params.size(); ++i) {
            if (i) params += ", ";
            params += declare(f->params[i], "");
          }
        }
        return declare(f->result, "(*" + name + ")(" + params + ")");
      }
      return declare(t->pointee, "*" + name);
    }
    case TypeKind::Array:
      return declare(t->element, name + "[" + std::to_string(t->array_len) + "]");
    default: {
      std::string b = base_type_name(t);
      return name.empty() ? b : b + " " + name;
    }
  }
}

const char *binop_str(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Rem: return "%";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::Lt: return "<";
    case BinOp::Gt: return ">";
    case BinOp::Le: return "<=";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::LogAnd: return "&&";
    case BinOp::LogOr: return "||";
  }
  return "?";
}

struct Printer {
  std::ostringstream out;
  int indent = 0;

  void nl() {
    out << "\n";
    for (int i = 0; i < indent; ++i) out << "    ";
  }

  void expr(const ExprPtr &e, bool parens = true) {
    if (!e) {
      out << "0";
      return;
    }
    switch (e->kind) {
      case ExprKind::IntLit:
        if (e->int_value >= 65536) {
          out << "0x" << std::hex << e->int_value << std::dec;
        } else {
          out << e->int_value;
        }
        if (e->suffix_unsigned) out << "u";
        if (e->suffix_long) out << "l";
        return;
      case ExprKind::FloatLit:
        out << e->float_text;
        return;
      case ExprKind::Ident:
        out << e->name;
        return;
      case ExprKind::Unary: {
        // implicit conversions have no surface form
        const char *pre = nullptr, *post = nullptr;
        switch (e->un) {
          case UnOp::Neg: pre = "-"; break;
          case UnOp::BitNot: pre = "~"; break;
          case UnOp::LogNot: pre = "!"; break;
          case UnOp::Deref: pre = "*"; break;
          case UnOp::AddrOf: pre = "&"; break;
          case UnOp::PreInc: pre = "++"; break;
          case UnOp::PreDec: pre = "--"; break;
          case UnOp::PostInc: post = "++"; break;
          case UnOp::PostDec: post = "--"; break;
        }
        if (parens) out << "(";
        if (pre) out << pre;
        expr(e->a);
        if (post) out << post;
        if (parens) out << ")";
        return;
      }
      case ExprKind::Binary:
        if (parens) out << "(";
        expr(e->a);
        out << " " << binop_str(e->bin) << " ";
        expr(e->b);
        if (parens) out << ")";
        return;
      case ExprKind::Assign:
        if (parens) out << "(";
        expr(e->a);
        out << " " << (e->is_compound ? std::string(binop_str(e->compound_op)) + "=" : "=")
            << " ";
        expr(e->b);
        if (parens) out << ")";
        return;
      case ExprKind::Cond:
        if (parens) out << "(";
        expr(e->a);
        out << " ? ";
        expr(e->b);
        out << " : ";
        expr(e->c);
        if (parens) out << ")";
        return;
      case ExprKind::Call:
        if (e->resolved == "<implicit>") {  // shouldn't occur pre-typecheck
          expr(e->a, false);
          return;
        }
        expr(e->a, e->a && e->a->kind != ExprKind::Ident);
        out << "(";
        for (size_t i = 0; i < e->args.size(); ++i) {
          if (i) out << ", ";
          expr(e->args[i], false);
        }
        out << ")";
        return;
      case ExprKind::Index:
        expr(e->a, e->a && e->a->kind != ExprKind::Ident);
        out << "[";
        expr(e->b, false);
        out << "]";
        return;
      case ExprKind::Member:
        expr(e->a, e->a && e->a->kind != ExprKind::Ident && e->a->kind != ExprKind::Index &&
                       e->a->kind != ExprKind::Member);
        out << (e->is_arrow ? "->" : ".") << e->name;
        return;
      case ExprKind::Cast:
        if (e->resolved == "<implicit>") {
          expr(e->a, parens);
          return;
        }
        if (parens) out << "(";
        out << "(" << declare(e->cast_type, "") << ")";
        expr(e->a);
        if (parens) out << ")";
        return;
      case ExprKind::OldExpr:
        out << "\\old(";
        expr(e->a, false);
        out << ")";
        return;
      case ExprKind::ResultExpr:
        out << "\\result";
        return;
      case ExprKind::HeapExpr:
        out << "heap_" << (e->cast_type->word.is_signed ? "s" : "u")
            << int(e->cast_type->word.bits) << "(";
        expr(e->a, false);
        out << ")";
        return;
    }
  }

  void stmt(const StmtPtr &s) {
    if (!s) {
      out << ";";
      return;
    }
    switch (s->kind) {
      case StmtKind::Empty:
        out << ";";
        return;
      case StmtKind::ExprStmt:
        expr(s->expr, false);
        out << ";";
        return;
      case StmtKind::Decl:
        out << declare(s->decl_type, s->decl_name);
        if (s->decl_init) {
          out << " = ";
          expr(s->decl_init, false);
        }
        out << ";";
        return;
      case StmtKind::Compound: {
        out << "{";
        ++indent;
        for (const auto &inner : s->body) {
          nl();
          stmt(inner);
        }
        --indent;
        nl();
        out << "}";
        return;
      }
      case StmtKind::If:
        out << "if (";
        expr(s->expr, false);
        out << ") ";
        block_or_stmt(s->s1);
        if (s->s2) {
          out << " else ";
          block_or_stmt(s->s2);
        }
        return;
      case StmtKind::While:
        out << "while (";
        expr(s->expr, false);
        out << ") ";
        block_or_stmt(s->s1);
        return;
      case StmtKind::DoWhile:
        out << "do ";
        block_or_stmt(s->s1);
        out << " while (";
        expr(s->expr, false);
        out << ");";
        return;
      case StmtKind::For:
        out << "for (";
        if (s->for_init && s->for_init->kind != StmtKind::Empty) {
          stmt(s->for_init);  // prints its own ';'
        } else {
          out << ";";
        }
        out << " ";
        if (s->for_cond) expr(s->for_cond, false);
        out << "; ";
        if (s->for_step) expr(s->for_step, false);
        out << ") ";
        block_or_stmt(s->s1);
        return;
      case StmtKind::Return:
        out << "return";
        if (s->expr) {
          out << " ";
          expr(s->expr, false);
        }
        out << ";";
        return;
      case StmtKind::Break:
        out << "break;";
        return;
      case StmtKind::Continue:
        out << "continue;";
        return;
      case StmtKind::Goto:
        out << "goto " << s->label << ";";
        return;
      case StmtKind::LabelStmt:
        out << s->label << ": ";
        stmt(s->s1);
        return;
      case StmtKind::Switch:
        out << "switch (";
        expr(s->expr, false);
        out << ") {";
        ++indent;
        for (const auto &c : s->cases) {
          nl();
          if (c.value) out << "case " << *c.value << ":";
          else out << "default:";
          ++indent;
          for (const auto &inner : c.body) {
            nl();
            stmt(inner);
          }
          --indent;
        }
        --indent;
        nl();
        out << "}";
        return;
    }
  }

  // Braces only where the tree has a Compound; synthesizing them would
  // change the reparsed structure.
  void block_or_stmt(const StmtPtr &s) {
    if (s && s->kind == StmtKind::Compound) {
      stmt(s);
    } else {
      ++indent;
      nl();
      stmt(s);
      --indent;
    }
  }

  void unit(const Ast &ast) {
    for (const auto &s : ast.structs) {
      out << "struct " << s.name << " {";
      ++indent;
      for (const auto &f : s.type->fields) {
        nl();
        out << declare(f.type, f.name) << ";";
      }
      --indent;
      nl();
      out << "};";
      nl();
    }
    for (const auto &e : ast.enum_consts) {
      out << "enum { " << e.name << " = ";
      if (e.value >= 65536) out << "0x" << std::hex << e.value << std::dec;
      else out << e.value;
      out << " };";
      nl();
    }
    for (const auto &g : ast.globals) {
      out << declare(g.type, g.name);
      if (g.init) {
        out << " = ";
        expr(g.init, false);
      }
      out << ";";
      nl();
    }
    for (const auto &fn : ast.functions) {
      std::string params;
      if (fn.params.empty()) {
        params = "void";
      } else {
        for (size_t i = 0; i < fn.params.size(); ++i) {
          if (i) params += ", ";
          params += declare(fn.params[i].type, fn.params[i].name);
        }
      }
      out << declare(fn.type->result, fn.name + "(" + params + ")");
      if (!fn.defined) {
        out << ";";
        nl();
        continue;
      }
      out << " {";
      ++indent;
      for (const auto &s : fn.body) {
        nl();
        stmt(s);
      }
      --indent;
      nl();
      out << "}";
      nl();
    }
  }
};

struct Dumper {
  std::ostringstream out;

  void expr(const ExprPtr &e) {
    if (!e) {
      out << "()";
      return;
    }
    switch (e->kind) {
      case ExprKind::IntLit:
        out << "(int " << e->int_value << (e->suffix_unsigned ? " u" : "")
            << (e->suffix_long ? " l" : "") << ")";
        return;
      case ExprKind::FloatLit:
        out << "(float " << e->float_text << ")";
        return;
      case ExprKind::Ident:
        out << "(id " << e->name << ")";
        return;
      case ExprKind::Unary:
        out << "(un " << int(e->un) << " ";
        expr(e->a);
        out << ")";
        return;
      case ExprKind::Binary:
        out << "(bin " << binop_str(e->bin) << " ";
        expr(e->a);
        out << " ";
        expr(e->b);
        out << ")";
        return;
      case ExprKind::Assign:
        out << "(assign" << (e->is_compound ? std::string(" ") + binop_str(e->compound_op) : "")
            << " ";
        expr(e->a);
        out << " ";
        expr(e->b);
        out << ")";
        return;
      case ExprKind::Cond:
        out << "(cond ";
        expr(e->a);
        expr(e->b);
        expr(e->c);
        out << ")";
        return;
      case ExprKind::Call:
        out << "(call ";
        expr(e->a);
        for (const auto &a : e->args) {
          out << " ";
          expr(a);
        }
        out << ")";
        return;
      case ExprKind::Index:
        out << "(index ";
        expr(e->a);
        out << " ";
        expr(e->b);
        out << ")";
        return;
      case ExprKind::Member:
        out << "(member" << (e->is_arrow ? "-> " : " ") << e->name << " ";
        expr(e->a);
        out << ")";
        return;
      case ExprKind::Cast:
        out << "(cast " << type_to_string(e->cast_type) << " ";
        expr(e->a);
        out << ")";
        return;
      case ExprKind::OldExpr:
        out << "(\\old ";
        expr(e->a);
        out << ")";
        return;
      case ExprKind::ResultExpr:
        out << "(\\result)";
        return;
      case ExprKind::HeapExpr:
        out << "(heapread " << type_to_string(e->cast_type) << " ";
        expr(e->a);
        out << ")";
        return;
    }
  }

  void stmt(const StmtPtr &s) {
    if (!s) {
      out << "(empty)";
      return;
    }
    switch (s->kind) {
      case StmtKind::Empty: out << "(empty)"; return;
      case StmtKind::ExprStmt:
        out << "(expr ";
        expr(s->expr);
        out << ")";
        return;
      case StmtKind::Decl:
        out << "(decl " << s->decl_name << " " << type_to_string(s->decl_type);
        if (s->decl_init) {
          out << " ";
          expr(s->decl_init);
        }
        out << ")";
        return;
      case StmtKind::Compound:
        out << "(block";
        for (const auto &inner : s->body) {
          out << " ";
          stmt(inner);
        }
        out << ")";
        return;
      case StmtKind::If:
        out << "(if ";
        expr(s->expr);
        out << " ";
        stmt(s->s1);
        if (s->s2) {
          out << " ";
          stmt(s->s2);
        }
        out << ")";
        return;
      case StmtKind::While:
        out << "(while ";
        expr(s->expr);
        out << " ";
        stmt(s->s1);
        out << ")";
        return;
      case StmtKind::DoWhile:
        out << "(dowhile ";
        expr(s->expr);
        out << " ";
        stmt(s->s1);
        out << ")";
        return;
      case StmtKind::For:
        out << "(for ";
        stmt(s->for_init);
        out << " ";
        expr(s->for_cond);
        out << " ";
        expr(s->for_step);
        out << " ";
        stmt(s->s1);
        out << ")";
        return;
      case StmtKind::Return:
        out << "(return";
        if (s->expr) {
          out << " ";
          expr(s->expr);
        }
        out << ")";
        return;
      case StmtKind::Break: out << "(break)"; return;
      case StmtKind::Continue: out << "(continue)"; return;
      case StmtKind::Goto: out << "(goto " << s->label << ")"; return;
      case StmtKind::LabelStmt:
        out << "(label " << s->label << " ";
        stmt(s->s1);
        out << ")";
        return;
      case StmtKind::Switch:
        out << "(switch ";
        expr(s->expr);
        for (const auto &c : s->cases) {
          out << " (case ";
          if (c.value) out << *c.value;
          else out << "default";
          for (const auto &inner : c.body) {
            out << " ";
            stmt(inner);
          }
          out << ")";
        }
        out << ")";
        return;
    }
  }

  void unit(const Ast &ast) {
    for (const auto &s : ast.structs) {
      out << "(struct " << s.name;
      for (const auto &f : s.type->fields)
        out << " (" << f.name << " " << type_to_string(f.type) << ")";
      out << ")\n";
    }
    for (const auto &e : ast.enum_consts)
      out << "(enum " << e.name << " " << e.value << ")\n";
    for (const auto &g : ast.globals) {
      out << "(global " << g.name << " " << type_to_string(g.type);
      if (g.init) {
        out << " ";
        expr(g.init);
      }
      out << ")\n";
    }
    for (const auto &fn : ast.functions) {
      out << "(function " << fn.name << " " << type_to_string(fn.type);
      out << (fn.defined ? " defined" : " declared");
      for (const auto &p : fn.params) out << " (param " << p.name << ")";
      for (const auto &s : fn.body) {
        out << "\n  ";
        stmt(s);
      }
      out << ")\n";
    }
  }
};

}  // namespace

std::string print_unit(const Ast &ast) {
  Printer p;
  p.unit(ast);
  std::string s = p.out.str();
  if (!s.empty() && s.back() != '\n') s += "\n";
  return s;
}

std::string dump_ast(const Ast &ast) {
  Dumper d;
  d.unit(ast);
  return d.out.str();
}

}  // namespace wpdrv
