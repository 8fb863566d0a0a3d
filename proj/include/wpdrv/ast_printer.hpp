// ast_printer.hpp
// C source emission and a structural dump of the parse tree. The dump
// ignores source locations and typechecking results, so
// dump(parse(print(parse(x)))) == dump(parse(x)) is the round-trip check.

#pragma once

#include <string>

#include "wpdrv/ast.hpp"

namespace wpdrv {

std::string print_unit(const Ast &ast);
std::string dump_ast(const Ast &ast);

}  // namespace wpdrv
