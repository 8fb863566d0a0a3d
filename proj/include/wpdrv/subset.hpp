// subset.hpp
// Enforces the translatable C subset on a typed tree. Every rejection
// carries a machine-readable code naming the offending construct:
//   indirect-call, goto, switch, union, float, address-of-local,
//   address-of-global, unsupported-deref, break, continue, return-in-loop.
// Functions annotated dont_translate are skipped (no diagnostics).

#pragma once

#include "wpdrv/ast.hpp"

namespace wpdrv {

std::vector<Diagnostic> check_subset(const Ast &ast);

}  // namespace wpdrv
