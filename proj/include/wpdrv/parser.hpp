// parser.hpp
// Recursive-descent parser for the C subset, plus the expression-grammar
// entry point reused by annotation formulas.

#pragma once

#include <string_view>

#include "wpdrv/ast.hpp"
#include "wpdrv/token.hpp"

namespace wpdrv {

struct ParseResult {
  Ast ast;
  std::vector<Diagnostic> diags;
  std::vector<CommentTrivia> comments;  // forwarded for annotation parsing

  bool ok() const { return !has_errors(diags); }
};

ParseResult parse_unit(const TokenStream &tokens);

// Convenience: tokenize + parse.
ParseResult parse_source(std::string_view source);

// Parse a single expression (annotation formulas). Diagnostics are appended;
// returns null on failure. `known_structs` lets member access typecheck later.
ExprPtr parse_expression_text(std::string_view text, SourceLoc origin,
                              std::vector<Diagnostic> &diags);

}  // namespace wpdrv
