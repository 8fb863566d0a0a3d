// ast.hpp
// Typed syntax tree of the accepted C subset. Constructs outside the subset
// (goto, switch, unions, floats, indirect calls) still parse into the tree;
// the subset checker names and rejects them afterwards so diagnostics can
// point at concrete constructs.

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wpdrv/ctype.hpp"
#include "wpdrv/diagnostics.hpp"
#include "wpdrv/formula.hpp"

namespace wpdrv {

struct Expr;
struct Stmt;
using ExprPtr = std::shared_ptr<Expr>;
using StmtPtr = std::shared_ptr<Stmt>;

enum class ExprKind {
  IntLit,
  FloatLit,
  Ident,
  Unary,
  Binary,
  Assign,   // plain or compound assignment
  Cond,     // a ? b : c
  Call,
  Index,    // a[b]
  Member,   // a.name or a->name
  Cast,
  // annotation-only forms
  OldExpr,     // \old(a)
  ResultExpr,  // \result
  HeapExpr,    // heap_u32(a) and friends
};

enum class UnOp { Neg, BitNot, LogNot, Deref, AddrOf, PreInc, PreDec, PostInc, PostDec };

enum class BinOp {
  Add, Sub, Mul, Div, Rem, BitAnd, BitOr, BitXor, Shl, Shr,
  Lt, Gt, Le, Ge, Eq, Ne, LogAnd, LogOr,
};

// What an identifier resolved to.
enum class RefKind { Unresolved, Global, Local, Param, Function, EnumConst, Label };

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  SourceLoc loc;

  // IntLit
  uint64_t int_value = 0;
  bool suffix_unsigned = false;
  bool suffix_long = false;
  // FloatLit
  std::string float_text;
  // Ident / Member field name
  std::string name;

  UnOp un = UnOp::Neg;
  BinOp bin = BinOp::Add;
  bool is_arrow = false;           // Member
  bool is_compound = false;        // Assign with op
  BinOp compound_op = BinOp::Add;  // Assign

  ExprPtr a, b, c;                 // operands
  std::vector<ExprPtr> args;       // Call arguments (a = callee)
  CTypePtr cast_type;              // Cast / HeapExpr value type

  // filled by the typechecker
  CTypePtr type;
  RefKind ref = RefKind::Unresolved;
  std::string resolved;            // canonical name (alpha-renamed for locals)
  uint64_t const_value = 0;        // EnumConst
  bool type_pending = false;       // literal/label whose width is still open
};

enum class StmtKind {
  Empty,
  ExprStmt,
  Decl,
  Compound,
  If,
  While,
  For,
  DoWhile,
  Return,
  Break,
  Continue,
  Goto,
  LabelStmt,
  Switch,
};

struct SwitchCase {
  std::optional<uint64_t> value;  // nullopt = default
  std::vector<StmtPtr> body;
  SourceLoc loc;
};

// Loop annotation, resolved against the enclosing function's scope.
struct LoopSpec {
  bool present = false;
  ExprPtr invariant;  // may be null
  ExprPtr measure;    // may be null
  SourceLoc loc;
};

struct Stmt {
  StmtKind kind = StmtKind::Empty;
  SourceLoc loc;

  ExprPtr expr;                 // ExprStmt payload / If-While-DoWhile-Switch condition / Return value
  std::vector<StmtPtr> body;    // Compound
  StmtPtr s1, s2;               // If: then/else; While/For/DoWhile: body in s1
  StmtPtr for_init;             // For (Decl or ExprStmt or Empty)
  ExprPtr for_cond;
  ExprPtr for_step;
  std::string decl_name;        // Decl
  CTypePtr decl_type;
  ExprPtr decl_init;
  std::string resolved_name;    // Decl: alpha-renamed local name
  std::string label;            // Goto / LabelStmt
  std::vector<SwitchCase> cases;
  LoopSpec loop_spec;           // While / For
};

// Function (or loop) specification parsed from a `/*@ ... @*/` block.
struct SpecBlock {
  bool present = false;
  bool total = false;
  bool dont_translate = false;
  ExprPtr requires_e;                  // null = true
  ExprPtr ensures_e;                   // null = true
  std::vector<std::string> labels;     // logical variables bound by the spec
  std::vector<WordType> label_types;
  SourceLoc loc;
};

struct ParamDecl {
  std::string name;
  CTypePtr type;
  SourceLoc loc;
  std::string resolved;  // alpha-renamed
};

struct FunctionDef {
  std::string name;
  CTypePtr type;  // Function type
  std::vector<ParamDecl> params;
  std::vector<ParamDecl> locals;  // collected by the typechecker, alpha-renamed
  std::vector<StmtPtr> body;      // empty when !defined (prototype)
  bool defined = false;
  SpecBlock spec;
  SourceLoc loc;         // location of the function name
  SourceLoc decl_start;  // location of the first declaration token
};

struct GlobalDecl {
  std::string name;
  CTypePtr type;
  ExprPtr init;  // optional constant initializer
  SourceLoc loc;
};

struct EnumConstDecl {
  std::string name;
  uint64_t value = 0;
  WordType type;  // u32, or u64 when the value does not fit 32 bits
  SourceLoc loc;
};

struct StructDecl {
  std::string name;
  CTypePtr type;
  SourceLoc loc;
};

struct Ast {
  std::vector<StructDecl> structs;
  std::vector<GlobalDecl> globals;
  std::vector<EnumConstDecl> enum_consts;
  std::vector<FunctionDef> functions;

  const FunctionDef *find_function(const std::string &name) const {
    for (const auto &f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
  FunctionDef *find_function(const std::string &name) {
    for (auto &f : functions)
      if (f.name == name) return &f;
    return nullptr;
  }
};

}  // namespace wpdrv
