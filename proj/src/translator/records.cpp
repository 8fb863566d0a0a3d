#include <set>

#include "wpdrv/translate.hpp"

namespace wpdrv {

namespace {

// Evaluate a constant initializer (literals and enum constants, folded by
// the parser where possible).
bool const_value_of(const ExprPtr &e, uint64_t &out) {
  if (!e) return false;
  switch (e->kind) {
    case ExprKind::IntLit:
      out = e->int_value;
      return true;
    case ExprKind::Ident:
      if (e->ref == RefKind::EnumConst) {
        out = e->const_value;
        return true;
      }
      return false;
    case ExprKind::Unary: {
      uint64_t a;
      if (!const_value_of(e->a, a)) return false;
      if (e->un == UnOp::Neg) out = ~a + 1;
      else if (e->un == UnOp::BitNot) out = ~a;
      else return false;
      return true;
    }
    case ExprKind::Cast:
      return const_value_of(e->a, out);
    default:
      return false;
  }
}

WordType scalar_storage(const CTypePtr &t) {
  if (t->is_pointer()) return pointer_word_type();
  return t->word;
}

void flatten(const std::string &prefix, const CTypePtr &type, uint64_t init,
             std::vector<RecordField> &out, SourceLoc loc,
             const std::map<std::string, CTypePtr> &struct_reg,
             std::vector<Diagnostic> &diags) {
  switch (type->kind) {
    case TypeKind::Word:
    case TypeKind::Pointer: {
      RecordField f;
      f.loc = prefix;
      f.type = scalar_storage(type);
      f.is_pointer = type->is_pointer();
      f.init_value = WordVal(init, f.type).raw;
      f.decl_loc = loc;
      out.push_back(std::move(f));
      return;
    }
    case TypeKind::Struct: {
      CTypePtr st = type;
      if (st->fields.empty()) {
        auto it = struct_reg.find(st->struct_name);
        if (it != struct_reg.end()) st = it->second;
      }
      if (st->fields.empty()) {
        diags.push_back(make_error("type", loc,
                                   "cannot lay out incomplete structure '" +
                                       st->struct_name + "' for '" + prefix + "'"));
        return;
      }
      for (const auto &fld : st->fields)
        flatten(prefix + "." + fld.name, fld.type, 0, out, loc, struct_reg, diags);
      return;
    }
    case TypeKind::Array: {
      for (uint64_t i = 0; i < type->array_len; ++i)
        flatten(prefix + "[" + std::to_string(i) + "]", type->element, 0, out, loc, struct_reg,
                diags);
      return;
    }
    default:
      diags.push_back(
          make_error("type", loc, "cannot lay out '" + prefix + "' of type " +
                                      type_to_string(type)));
      return;
  }
}

}  // namespace

void build_records(const Ast &ast, GlobalsRecord &globals,
                   std::map<std::string, LocalsRecord> &locals,
                   std::vector<Diagnostic> &diags) {
  std::map<std::string, CTypePtr> struct_reg;
  for (const auto &s : ast.structs) struct_reg[s.name] = s.type;

  std::set<std::string> seen;
  for (const auto &g : ast.globals) {
    if (!seen.insert(g.name).second) continue;  // typecheck already diagnosed
    uint64_t init = 0;
    if (g.init && !const_value_of(g.init, init))
      diags.push_back(make_error("type", g.loc, "non-constant initializer for " + g.name));
    flatten(g.name, g.type, init, globals.fields, g.loc, struct_reg, diags);
  }

  for (const auto &fn : ast.functions) {
    if (!fn.defined) continue;
    LocalsRecord rec;
    rec.function = fn.name;
    for (const auto &p : fn.params)
      flatten(p.resolved, p.type, 0, rec.fields, p.loc, struct_reg, diags);
    for (const auto &l : fn.locals)
      flatten(l.resolved, l.type, 0, rec.fields, l.loc, struct_reg, diags);
    locals[fn.name] = std::move(rec);
  }
}

SymbolTable build_symbol_table(const Ast &ast) {
  SymbolTable t;
  uint64_t addr = 0x1000;
  for (const auto &fn : ast.functions) {
    t.addr_of[fn.name] = addr;
    t.name_of[addr] = fn.name;
    addr += 0x10;
  }
  return t;
}

}  // namespace wpdrv
