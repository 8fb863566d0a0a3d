// typecheck.hpp
// Type checking and name resolution over the parsed tree. Annotates every
// expression with its type, resolves identifiers (alpha-renaming locals),
// inserts implicit word conversions, and enforces the statement-only
// side-effect discipline. Floats and other out-of-subset constructs pass
// through so the subset checker can reject them by name.

#pragma once

#include "wpdrv/ast.hpp"

namespace wpdrv {

struct TypecheckResult {
  std::vector<Diagnostic> diags;
  bool ok() const { return !has_errors(diags); }
};

TypecheckResult typecheck_unit(Ast &ast);

// Typecheck one annotation expression in the scope of `fn` (globals, enum
// constants, parameters, and — when `allow_locals` — the function's locals).
// Unknown identifiers become logical labels registered in `spec`.
// `in_ensures` permits \old and \result.
struct AnnotationScope {
  Ast &ast;
  FunctionDef &fn;
  SpecBlock &spec;
  bool allow_locals = false;
  bool in_ensures = false;
};

bool typecheck_annotation(ExprPtr &e, AnnotationScope scope, std::vector<Diagnostic> &diags);

// Shared helpers (also used by the translator).
CTypePtr promoted_word_type(const CTypePtr &t);           // integer promotion (min 32 bits)
CTypePtr common_word_type(const CTypePtr &a, const CTypePtr &b);  // usual arithmetic conversions

}  // namespace wpdrv
