// annotations.hpp
// Parses `/*@ ... @*/` specification comments into SpecBlocks attached to
// functions and loop annotations attached to while/for statements.
//
// Clauses, separated by ';':
//   requires <formula>     precondition (several clauses are conjoined)
//   ensures  <formula>     postcondition; may use \old(e) and \result
//   total                  demand termination and absence of faults
//   dont_translate         skip this function in translation/verification
//   invariant <formula>    loop annotation
//   measure  <term>        loop annotation (word-valued, decreasing)
//
// Free identifiers in formulas become logical labels bound across the spec.

#pragma once

#include "wpdrv/ast.hpp"
#include "wpdrv/token.hpp"

namespace wpdrv {

struct AnnotateResult {
  std::vector<Diagnostic> diags;
  bool ok() const { return !has_errors(diags); }
};

AnnotateResult parse_annotations(Ast &ast, const TokenStream &tokens);

}  // namespace wpdrv
