#include "wpdrv/parser.hpp"

#include <cassert>
#include <map>

namespace wpdrv {

namespace {

struct Parser {
  const std::vector<Token> &toks;
  std::vector<Diagnostic> &diags;
  size_t pos = 0;
  std::map<std::string, CTypePtr> struct_types;  // by tag name
  bool annotation_mode = false;

  Parser(const std::vector<Token> &t, std::vector<Diagnostic> &d) : toks(t), diags(d) {}

  const Token &peek(size_t ahead = 0) const {
    size_t i = pos + ahead;
    if (i >= toks.size()) i = toks.size() - 1;  // End token
    return toks[i];
  }
  const Token &cur() const { return peek(0); }
  Tok kind() const { return cur().kind; }
  SourceLoc loc() const { return cur().loc; }

  Token take() {
    Token t = cur();
    if (pos + 1 < toks.size()) ++pos;
    return t;
  }

  bool at(Tok k) const { return kind() == k; }

  bool accept(Tok k) {
    if (at(k)) {
      take();
      return true;
    }
    return false;
  }

  void error(SourceLoc l, const std::string &msg) {
    diags.push_back(make_error("syntax", l, msg));
  }

  bool expect(Tok k, const char *what) {
    if (accept(k)) return true;
    error(loc(), std::string("expected '") + tok_name(k) + "' " + what + ", found '" +
                     (cur().text.empty() ? tok_name(kind()) : cur().text) + "'");
    return false;
  }

  // Skip to a likely statement/declaration boundary after a syntax error.
  void synchronize() {
    int depth = 0;
    while (!at(Tok::End)) {
      if (depth == 0 && (at(Tok::Semi) || at(Tok::RBrace))) {
        take();
        return;
      }
      if (at(Tok::LBrace)) ++depth;
      if (at(Tok::RBrace) && depth > 0) --depth;
      take();
    }
  }

  // --- types --------------------------------------------------------------

  bool starts_type() const {
    switch (kind()) {
      case Tok::KwVoid:
      case Tok::KwUnsigned:
      case Tok::KwSigned:
      case Tok::KwInt:
      case Tok::KwLong:
      case Tok::KwShort:
      case Tok::KwChar:
      case Tok::KwStruct:
      case Tok::KwUnion:
      case Tok::KwFloat:
      case Tok::KwDouble:
      case Tok::KwConst:
      case Tok::KwVolatile:
      case Tok::KwStatic:
      case Tok::KwExtern:
        return true;
      default:
        return false;
    }
  }

  // Parses declaration specifiers (storage classes and qualifiers are
  // accepted and ignored). Returns the base type.
  CTypePtr parse_decl_specifiers() {
    bool saw_unsigned = false, saw_signed = false, saw_int = false;
    int longs = 0;
    bool saw_short = false, saw_char = false, saw_void = false, saw_float = false;
    CTypePtr aggregate;
    bool any = false;
    for (;;) {
      switch (kind()) {
        case Tok::KwStatic:
        case Tok::KwExtern:
        case Tok::KwConst:
        case Tok::KwVolatile:
          take();
          continue;
        case Tok::KwUnsigned: saw_unsigned = true; take(); any = true; continue;
        case Tok::KwSigned: saw_signed = true; take(); any = true; continue;
        case Tok::KwInt: saw_int = true; take(); any = true; continue;
        case Tok::KwLong: ++longs; take(); any = true; continue;
        case Tok::KwShort: saw_short = true; take(); any = true; continue;
        case Tok::KwChar: saw_char = true; take(); any = true; continue;
        case Tok::KwVoid: saw_void = true; take(); any = true; continue;
        case Tok::KwFloat:
        case Tok::KwDouble:
          saw_float = true;
          take();
          any = true;
          continue;
        case Tok::KwStruct:
        case Tok::KwUnion: {
          bool is_union = kind() == Tok::KwUnion;
          SourceLoc l = loc();
          take();
          aggregate = parse_struct_type(is_union, l);
          any = true;
          continue;
        }
        default: break;
      }
      break;
    }
    if (!any) return nullptr;
    if (aggregate) return aggregate;
    if (saw_void) return make_void_type();
    if (saw_float) return make_float_type();
    uint8_t bits = 32;
    if (saw_char) bits = 8;
    else if (saw_short) bits = 16;
    else if (longs > 0) bits = 64;
    bool is_signed = !saw_unsigned;  // plain char is signed in this model
    (void)saw_signed;
    (void)saw_int;
    return make_word_type(WordType{bits, is_signed});
  }

  CTypePtr parse_struct_type(bool is_union, SourceLoc l) {
    std::string tag;
    if (at(Tok::Ident)) tag = take().text;
    if (is_union) {
      // parse the body so the subset checker can reject the construct by name
      if (accept(Tok::LBrace)) {
        int depth = 1;
        while (!at(Tok::End) && depth > 0) {
          if (at(Tok::LBrace)) ++depth;
          if (at(Tok::RBrace)) --depth;
          take();
        }
      }
      auto t = make_struct_type("union " + (tag.empty() ? std::string("<anon>") : tag), {});
      return t;
    }
    if (accept(Tok::LBrace)) {
      std::vector<StructField> fields;
      while (!at(Tok::RBrace) && !at(Tok::End)) {
        CTypePtr base = parse_decl_specifiers();
        if (!base) {
          error(loc(), "expected field type");
          synchronize();
          continue;
        }
        for (;;) {
          auto [ftype, fname, floc] = parse_declarator(base);
          if (fname.empty()) error(floc, "expected field name");
          for (const auto &f : fields)
            if (f.name == fname) error(floc, "duplicate field '" + fname + "'");
          fields.push_back(StructField{fname, ftype});
          if (!accept(Tok::Comma)) break;
        }
        expect(Tok::Semi, "after struct field");
      }
      expect(Tok::RBrace, "to close struct");
      if (tag.empty()) tag = "<anon>";
      auto t = make_struct_type(tag, std::move(fields));
      struct_types[tag] = t;
      return t;
    }
    // reference to a previously declared tag
    auto it = struct_types.find(tag);
    if (it != struct_types.end()) return it->second;
    // forward reference: allowed for pointer declarations
    auto t = make_struct_type(tag, {});
    return t;
  }

  // Parses one declarator given the base type. Handles pointers, arrays and
  // the function-pointer form `ret (*name)(params)`.
  struct Declarator {
    CTypePtr type;
    std::string name;
    SourceLoc loc;
  };

  Declarator parse_declarator(CTypePtr base) {
    CTypePtr t = std::move(base);
    while (accept(Tok::Star)) t = make_pointer_type(t);
    // function pointer: ( * name ) ( params )
    if (at(Tok::LParen) && peek(1).kind == Tok::Star) {
      take();  // (
      take();  // *
      std::string name;
      SourceLoc l = loc();
      if (at(Tok::Ident)) name = take().text;
      expect(Tok::RParen, "in function-pointer declarator");
      std::vector<CTypePtr> params = parse_param_types();
      return Declarator{make_pointer_type(make_function_type(std::move(params), t)), name, l};
    }
    std::string name;
    SourceLoc l = loc();
    if (at(Tok::Ident)) name = take().text;
    // arrays (possibly multi-dimensional, applied outside-in)
    std::vector<uint64_t> dims;
    while (accept(Tok::LBracket)) {
      uint64_t len = 0;
      if (!at(Tok::RBracket)) {
        ExprPtr e = parse_ternary();
        uint64_t v;
        if (e && const_eval(e, v)) {
          len = v;
        } else {
          error(l, "array length must be a constant expression");
        }
      }
      expect(Tok::RBracket, "to close array length");
      dims.push_back(len);
    }
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) t = make_array_type(t, *it);
    return Declarator{t, name, l};
  }

  std::vector<CTypePtr> parse_param_types() {
    std::vector<CTypePtr> out;
    if (!expect(Tok::LParen, "for parameter list")) return out;
    if (accept(Tok::RParen)) return out;
    if (at(Tok::KwVoid) && peek(1).kind == Tok::RParen) {
      take();
      take();
      return out;
    }
    for (;;) {
      CTypePtr base = parse_decl_specifiers();
      if (!base) {
        error(loc(), "expected parameter type");
        break;
      }
      auto d = parse_declarator(base);
      out.push_back(d.type);
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RParen, "to close parameter list");
    return out;
  }

  // Constant expression evaluation for enum values and array lengths.
  bool const_eval(const ExprPtr &e, uint64_t &out) {
    if (!e) return false;
    switch (e->kind) {
      case ExprKind::IntLit:
        out = e->int_value;
        return true;
      case ExprKind::Ident: {
        auto it = enum_values.find(e->name);
        if (it == enum_values.end()) return false;
        out = it->second;
        return true;
      }
      case ExprKind::Unary: {
        uint64_t a;
        if (!const_eval(e->a, a)) return false;
        switch (e->un) {
          case UnOp::Neg: out = ~a + 1; return true;
          case UnOp::BitNot: out = ~a; return true;
          case UnOp::LogNot: out = a == 0; return true;
          default: return false;
        }
      }
      case ExprKind::Binary: {
        uint64_t a, b;
        if (!const_eval(e->a, a) || !const_eval(e->b, b)) return false;
        switch (e->bin) {
          case BinOp::Add: out = a + b; return true;
          case BinOp::Sub: out = a - b; return true;
          case BinOp::Mul: out = a * b; return true;
          case BinOp::Div: if (!b) return false; out = a / b; return true;
          case BinOp::Rem: if (!b) return false; out = a % b; return true;
          case BinOp::BitAnd: out = a & b; return true;
          case BinOp::BitOr: out = a | b; return true;
          case BinOp::BitXor: out = a ^ b; return true;
          case BinOp::Shl: out = b >= 64 ? 0 : a << b; return true;
          case BinOp::Shr: out = b >= 64 ? 0 : a >> b; return true;
          default: return false;
        }
      }
      default:
        return false;
    }
  }

  std::map<std::string, uint64_t> enum_values;

  // --- expressions ----------------------------------------------------------

  ExprPtr mk(ExprKind k, SourceLoc l) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->loc = l;
    return e;
  }

  ExprPtr parse_expr() { return parse_assignment(); }

  ExprPtr parse_assignment() {
    ExprPtr lhs = parse_ternary();
    if (!lhs) return nullptr;
    BinOp op = BinOp::Add;
    bool compound = true;
    switch (kind()) {
      case Tok::Assign: compound = false; break;
      case Tok::PlusAssign: op = BinOp::Add; break;
      case Tok::MinusAssign: op = BinOp::Sub; break;
      case Tok::StarAssign: op = BinOp::Mul; break;
      case Tok::SlashAssign: op = BinOp::Div; break;
      case Tok::PercentAssign: op = BinOp::Rem; break;
      case Tok::AmpAssign: op = BinOp::BitAnd; break;
      case Tok::CaretAssign: op = BinOp::BitXor; break;
      case Tok::PipeAssign: op = BinOp::BitOr; break;
      case Tok::ShlAssign: op = BinOp::Shl; break;
      case Tok::ShrAssign: op = BinOp::Shr; break;
      default: return lhs;
    }
    SourceLoc l = loc();
    take();
    ExprPtr rhs = parse_assignment();
    auto e = mk(ExprKind::Assign, l);
    e->a = lhs;
    e->b = rhs;
    e->is_compound = compound;
    e->compound_op = op;
    return e;
  }

  ExprPtr parse_ternary() {
    ExprPtr c = parse_binary(0);
    if (!c) return nullptr;
    if (at(Tok::Question)) {
      SourceLoc l = loc();
      take();
      ExprPtr t = parse_expr();
      expect(Tok::Colon, "in conditional expression");
      ExprPtr f = parse_ternary();
      auto e = mk(ExprKind::Cond, l);
      e->a = c;
      e->b = t;
      e->c = f;
      return e;
    }
    return c;
  }

  // precedence climbing
  static int binop_prec(Tok t) {
    switch (t) {
      case Tok::PipePipe: return 1;
      case Tok::AmpAmp: return 2;
      case Tok::Pipe: return 3;
      case Tok::Caret: return 4;
      case Tok::Amp: return 5;
      case Tok::EqEq:
      case Tok::BangEq: return 6;
      case Tok::Lt:
      case Tok::Gt:
      case Tok::Le:
      case Tok::Ge: return 7;
      case Tok::Shl:
      case Tok::Shr: return 8;
      case Tok::Plus:
      case Tok::Minus: return 9;
      case Tok::Star:
      case Tok::Slash:
      case Tok::Percent: return 10;
      default: return -1;
    }
  }

  static BinOp binop_of(Tok t) {
    switch (t) {
      case Tok::PipePipe: return BinOp::LogOr;
      case Tok::AmpAmp: return BinOp::LogAnd;
      case Tok::Pipe: return BinOp::BitOr;
      case Tok::Caret: return BinOp::BitXor;
      case Tok::Amp: return BinOp::BitAnd;
      case Tok::EqEq: return BinOp::Eq;
      case Tok::BangEq: return BinOp::Ne;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Le: return BinOp::Le;
      case Tok::Ge: return BinOp::Ge;
      case Tok::Shl: return BinOp::Shl;
      case Tok::Shr: return BinOp::Shr;
      case Tok::Plus: return BinOp::Add;
      case Tok::Minus: return BinOp::Sub;
      case Tok::Star: return BinOp::Mul;
      case Tok::Slash: return BinOp::Div;
      case Tok::Percent: return BinOp::Rem;
      default: assert(false); return BinOp::Add;
    }
  }

  ExprPtr parse_binary(int min_prec) {
    ExprPtr lhs = parse_unary();
    if (!lhs) return nullptr;
    for (;;) {
      int prec = binop_prec(kind());
      if (prec < 0 || prec < min_prec) return lhs;
      Tok opt = kind();
      SourceLoc l = loc();
      take();
      ExprPtr rhs = parse_binary(prec + 1);
      if (!rhs) return lhs;
      auto e = mk(ExprKind::Binary, l);
      e->bin = binop_of(opt);
      e->a = lhs;
      e->b = rhs;
      lhs = e;
    }
  }

  bool starts_cast() const {
    // '(' followed by a type keyword
    if (!at(Tok::LParen)) return false;
    switch (peek(1).kind) {
      case Tok::KwVoid:
      case Tok::KwUnsigned:
      case Tok::KwSigned:
      case Tok::KwInt:
      case Tok::KwLong:
      case Tok::KwShort:
      case Tok::KwChar:
      case Tok::KwStruct:
      case Tok::KwUnion:
      case Tok::KwFloat:
      case Tok::KwDouble:
      case Tok::KwConst:
        return true;
      default:
        return false;
    }
  }

  ExprPtr parse_unary() {
    SourceLoc l = loc();
    switch (kind()) {
      case Tok::Minus: {
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = UnOp::Neg;
        e->a = parse_unary();
        return e;
      }
      case Tok::Tilde: {
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = UnOp::BitNot;
        e->a = parse_unary();
        return e;
      }
      case Tok::Bang: {
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = UnOp::LogNot;
        e->a = parse_unary();
        return e;
      }
      case Tok::Star: {
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = UnOp::Deref;
        e->a = parse_unary();
        return e;
      }
      case Tok::Amp: {
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = UnOp::AddrOf;
        e->a = parse_unary();
        return e;
      }
      case Tok::PlusPlus:
      case Tok::MinusMinus: {
        bool inc = kind() == Tok::PlusPlus;
        take();
        auto e = mk(ExprKind::Unary, l);
        e->un = inc ? UnOp::PreInc : UnOp::PreDec;
        e->a = parse_unary();
        return e;
      }
      case Tok::KwSizeof: {
        error(l, "sizeof is not part of the subset");
        take();
        if (accept(Tok::LParen)) {
          int depth = 1;
          while (!at(Tok::End) && depth > 0) {
            if (at(Tok::LParen)) ++depth;
            if (at(Tok::RParen)) --depth;
            take();
          }
        }
        auto e = mk(ExprKind::IntLit, l);
        return e;
      }
      case Tok::LParen:
        if (starts_cast()) {
          take();  // (
          CTypePtr base = parse_decl_specifiers();
          CTypePtr t = base;
          while (accept(Tok::Star)) t = make_pointer_type(t);
          expect(Tok::RParen, "to close cast");
          auto e = mk(ExprKind::Cast, l);
          e->cast_type = t;
          e->a = parse_unary();
          return e;
        }
        break;
      default:
        break;
    }
    return parse_postfix();
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_primary();
    if (!e) return nullptr;
    for (;;) {
      SourceLoc l = loc();
      if (accept(Tok::LParen)) {
        auto call = mk(ExprKind::Call, l);
        call->a = e;
        if (!at(Tok::RParen)) {
          for (;;) {
            ExprPtr arg = parse_ternary();
            if (!arg) break;
            call->args.push_back(arg);
            if (!accept(Tok::Comma)) break;
          }
        }
        expect(Tok::RParen, "to close call");
        e = call;
        continue;
      }
      if (accept(Tok::LBracket)) {
        auto ix = mk(ExprKind::Index, l);
        ix->a = e;
        ix->b = parse_expr();
        expect(Tok::RBracket, "to close index");
        e = ix;
        continue;
      }
      if (at(Tok::Dot) || at(Tok::Arrow)) {
        bool arrow = kind() == Tok::Arrow;
        take();
        auto m = mk(ExprKind::Member, l);
        m->a = e;
        m->is_arrow = arrow;
        if (at(Tok::Ident)) m->name = take().text;
        else error(loc(), "expected field name");
        e = m;
        continue;
      }
      if (at(Tok::PlusPlus) || at(Tok::MinusMinus)) {
        bool inc = kind() == Tok::PlusPlus;
        take();
        auto u = mk(ExprKind::Unary, l);
        u->un = inc ? UnOp::PostInc : UnOp::PostDec;
        u->a = e;
        e = u;
        continue;
      }
      return e;
    }
  }

  ExprPtr parse_primary() {
    SourceLoc l = loc();
    if (at(Tok::IntLit)) {
      Token t = take();
      auto e = mk(ExprKind::IntLit, l);
      e->int_value = t.int_value;
      e->suffix_unsigned = t.suffix_unsigned;
      e->suffix_long = t.suffix_long;
      return e;
    }
    if (at(Tok::FloatLit)) {
      Token t = take();
      auto e = mk(ExprKind::FloatLit, l);
      e->float_text = t.text;
      return e;
    }
    if (at(Tok::Ident)) {
      Token t = take();
      // annotation-only special forms
      if (annotation_mode && t.text == "\\old") {
        auto e = mk(ExprKind::OldExpr, l);
        expect(Tok::LParen, "after \\old");
        e->a = parse_expr();
        expect(Tok::RParen, "to close \\old");
        return e;
      }
      if (annotation_mode && t.text == "\\result") {
        return mk(ExprKind::ResultExpr, l);
      }
      if (annotation_mode && t.text.rfind("heap_", 0) == 0) {
        WordType tag;
        if (heap_tag_of(t.text, tag)) {
          auto e = mk(ExprKind::HeapExpr, l);
          e->cast_type = make_word_type(tag);
          expect(Tok::LParen, "after heap read");
          e->a = parse_expr();
          expect(Tok::RParen, "to close heap read");
          return e;
        }
      }
      auto e = mk(ExprKind::Ident, l);
      e->name = t.text;
      return e;
    }
    if (accept(Tok::LParen)) {
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "to close parenthesized expression");
      return e;
    }
    error(l, std::string("expected expression, found '") +
                 (cur().text.empty() ? tok_name(kind()) : cur().text) + "'");
    take();
    return nullptr;
  }

  static bool heap_tag_of(const std::string &name, WordType &out) {
    static const std::map<std::string, WordType> tags = {
        {"heap_u8", u8()},   {"heap_u16", u16()}, {"heap_u32", u32()}, {"heap_u64", u64()},
        {"heap_s8", s8()},   {"heap_s16", s16()}, {"heap_s32", s32()}, {"heap_s64", s64()},
    };
    auto it = tags.find(name);
    if (it == tags.end()) return false;
    out = it->second;
    return true;
  }

  // --- statements -----------------------------------------------------------

  StmtPtr mks(StmtKind k, SourceLoc l) {
    auto s = std::make_shared<Stmt>();
    s->kind = k;
    s->loc = l;
    return s;
  }

  StmtPtr parse_statement() {
    SourceLoc l = loc();
    switch (kind()) {
      case Tok::Semi:
        take();
        return mks(StmtKind::Empty, l);
      case Tok::LBrace: {
        take();
        auto s = mks(StmtKind::Compound, l);
        while (!at(Tok::RBrace) && !at(Tok::End)) {
          StmtPtr inner = parse_statement();
          if (inner) s->body.push_back(inner);
        }
        expect(Tok::RBrace, "to close block");
        return s;
      }
      case Tok::KwIf: {
        take();
        auto s = mks(StmtKind::If, l);
        expect(Tok::LParen, "after if");
        s->expr = parse_expr();
        expect(Tok::RParen, "to close if condition");
        s->s1 = parse_statement();
        if (accept(Tok::KwElse)) s->s2 = parse_statement();
        return s;
      }
      case Tok::KwWhile: {
        take();
        auto s = mks(StmtKind::While, l);
        expect(Tok::LParen, "after while");
        s->expr = parse_expr();
        expect(Tok::RParen, "to close while condition");
        s->s1 = parse_statement();
        return s;
      }
      case Tok::KwDo: {
        take();
        auto s = mks(StmtKind::DoWhile, l);
        s->s1 = parse_statement();
        expect(Tok::KwWhile, "after do body");
        expect(Tok::LParen, "after while");
        s->expr = parse_expr();
        expect(Tok::RParen, "to close while condition");
        expect(Tok::Semi, "after do/while");
        return s;
      }
      case Tok::KwFor: {
        take();
        auto s = mks(StmtKind::For, l);
        expect(Tok::LParen, "after for");
        if (at(Tok::Semi)) {
          take();
          s->for_init = mks(StmtKind::Empty, l);
        } else if (starts_type()) {
          s->for_init = parse_declaration_stmt();
        } else {
          auto init = mks(StmtKind::ExprStmt, loc());
          init->expr = parse_expr();
          expect(Tok::Semi, "after for initializer");
          s->for_init = init;
        }
        if (!at(Tok::Semi)) s->for_cond = parse_expr();
        expect(Tok::Semi, "after for condition");
        if (!at(Tok::RParen)) s->for_step = parse_expr();
        expect(Tok::RParen, "to close for header");
        s->s1 = parse_statement();
        return s;
      }
      case Tok::KwReturn: {
        take();
        auto s = mks(StmtKind::Return, l);
        if (!at(Tok::Semi)) s->expr = parse_expr();
        expect(Tok::Semi, "after return");
        return s;
      }
      case Tok::KwBreak: {
        take();
        expect(Tok::Semi, "after break");
        return mks(StmtKind::Break, l);
      }
      case Tok::KwContinue: {
        take();
        expect(Tok::Semi, "after continue");
        return mks(StmtKind::Continue, l);
      }
      case Tok::KwGoto: {
        take();
        auto s = mks(StmtKind::Goto, l);
        if (at(Tok::Ident)) s->label = take().text;
        else error(loc(), "expected label after goto");
        expect(Tok::Semi, "after goto");
        return s;
      }
      case Tok::KwSwitch:
        return parse_switch(l);
      default:
        break;
    }
    if (starts_type()) return parse_declaration_stmt();
    if (at(Tok::Ident) && peek(1).kind == Tok::Colon) {
      auto s = mks(StmtKind::LabelStmt, l);
      s->label = take().text;
      take();  // ':'
      s->s1 = parse_statement();
      return s;
    }
    auto s = mks(StmtKind::ExprStmt, l);
    s->expr = parse_expr();
    if (!expect(Tok::Semi, "after expression")) synchronize();
    return s;
  }

  StmtPtr parse_switch(SourceLoc l) {
    take();  // switch
    auto s = mks(StmtKind::Switch, l);
    expect(Tok::LParen, "after switch");
    s->expr = parse_expr();
    expect(Tok::RParen, "to close switch subject");
    expect(Tok::LBrace, "to open switch body");
    while (!at(Tok::RBrace) && !at(Tok::End)) {
      SwitchCase c;
      c.loc = loc();
      if (accept(Tok::KwCase)) {
        ExprPtr v = parse_ternary();
        uint64_t value = 0;
        if (v && const_eval(v, value)) c.value = value;
        expect(Tok::Colon, "after case value");
      } else if (accept(Tok::KwDefault)) {
        expect(Tok::Colon, "after default");
      } else {
        error(loc(), "expected case or default in switch body");
        synchronize();
        continue;
      }
      while (!at(Tok::KwCase) && !at(Tok::KwDefault) && !at(Tok::RBrace) && !at(Tok::End)) {
        StmtPtr inner = parse_statement();
        if (inner) c.body.push_back(inner);
      }
      s->cases.push_back(std::move(c));
    }
    expect(Tok::RBrace, "to close switch");
    return s;
  }

  // local declaration statement: may declare several names
  StmtPtr parse_declaration_stmt() {
    SourceLoc l = loc();
    CTypePtr base = parse_decl_specifiers();
    if (!base) {
      error(l, "expected declaration");
      synchronize();
      return mks(StmtKind::Empty, l);
    }
    std::vector<StmtPtr> decls;
    for (;;) {
      auto d = parse_declarator(base);
      auto s = mks(StmtKind::Decl, d.loc);
      s->decl_name = d.name;
      s->decl_type = d.type;
      if (accept(Tok::Assign)) s->decl_init = parse_ternary();
      decls.push_back(s);
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::Semi, "after declaration");
    if (decls.size() == 1) return decls[0];
    auto block = mks(StmtKind::Compound, l);
    block->body = std::move(decls);
    return block;
  }

  // --- top level ------------------------------------------------------------

  Ast parse_translation_unit() {
    Ast ast;
    while (!at(Tok::End)) {
      SourceLoc l = loc();
      if (at(Tok::KwTypedef)) {
        error(l, "typedef is not part of the subset");
        synchronize();
        continue;
      }
      if (at(Tok::KwEnum)) {
        parse_enum_decl(ast);
        continue;
      }
      CTypePtr base = parse_decl_specifiers();
      if (!base) {
        error(l, "expected declaration at top level");
        synchronize();
        continue;
      }
      // bare struct declaration: `struct foo { ... };`
      if (accept(Tok::Semi)) {
        if (base->kind == TypeKind::Struct)
          ast.structs.push_back(StructDecl{base->struct_name, base, l});
        continue;
      }
      auto d = parse_declarator(base);
      if (base->kind == TypeKind::Struct && !base->fields.empty()) {
        bool known = false;
        for (const auto &sd : ast.structs)
          if (sd.name == base->struct_name) known = true;
        if (!known) ast.structs.push_back(StructDecl{base->struct_name, base, l});
      }
      if (at(Tok::LParen)) {
        parse_function(ast, d, l);
        continue;
      }
      // global variable(s)
      for (;;) {
        GlobalDecl g;
        g.name = d.name;
        g.type = d.type;
        g.loc = d.loc;
        if (accept(Tok::Assign)) g.init = parse_ternary();
        if (g.name.empty()) error(d.loc, "expected name in global declaration");
        ast.globals.push_back(std::move(g));
        if (!accept(Tok::Comma)) break;
        d = parse_declarator(base);
      }
      expect(Tok::Semi, "after global declaration");
    }
    return ast;
  }

  void parse_enum_decl(Ast &ast) {
    take();  // enum
    if (at(Tok::Ident)) take();
    if (!expect(Tok::LBrace, "to open enum")) {
      synchronize();
      return;
    }
    uint64_t next = 0;
    while (!at(Tok::RBrace) && !at(Tok::End)) {
      if (!at(Tok::Ident)) {
        error(loc(), "expected enum constant");
        synchronize();
        return;
      }
      EnumConstDecl c;
      c.loc = loc();
      c.name = take().text;
      if (accept(Tok::Assign)) {
        ExprPtr v = parse_ternary();
        uint64_t value = 0;
        if (v && const_eval(v, value)) c.value = value;
        else error(c.loc, "enum value must be a constant expression");
      } else {
        c.value = next;
      }
      next = c.value + 1;
      c.type = c.value > 0xffffffffull ? u64() : u32();
      enum_values[c.name] = c.value;
      ast.enum_consts.push_back(std::move(c));
      if (!accept(Tok::Comma)) break;
    }
    expect(Tok::RBrace, "to close enum");
    expect(Tok::Semi, "after enum");
  }

  void parse_function(Ast &ast, const Declarator &d, SourceLoc decl_start) {
    FunctionDef fn;
    fn.name = d.name;
    fn.loc = d.loc;
    fn.decl_start = decl_start;
    // parameters with names
    std::vector<CTypePtr> ptypes;
    expect(Tok::LParen, "for parameter list");
    if (!at(Tok::RParen)) {
      if (at(Tok::KwVoid) && peek(1).kind == Tok::RParen) {
        take();
      } else {
        for (;;) {
          CTypePtr base = parse_decl_specifiers();
          if (!base) {
            error(loc(), "expected parameter type");
            break;
          }
          auto pd = parse_declarator(base);
          ParamDecl p;
          p.name = pd.name;
          p.type = pd.type;
          p.loc = pd.loc;
          ptypes.push_back(pd.type);
          fn.params.push_back(std::move(p));
          if (!accept(Tok::Comma)) break;
        }
      }
    }
    expect(Tok::RParen, "to close parameter list");
    fn.type = make_function_type(std::move(ptypes), d.type);
    if (accept(Tok::Semi)) {
      fn.defined = false;
    } else {
      fn.defined = true;
      if (expect(Tok::LBrace, "to open function body")) {
        while (!at(Tok::RBrace) && !at(Tok::End)) {
          StmtPtr s = parse_statement();
          if (s) fn.body.push_back(s);
        }
        expect(Tok::RBrace, "to close function body");
      }
    }
    // merge with an earlier prototype
    if (FunctionDef *prev = ast.find_function(fn.name)) {
      if (prev->defined && fn.defined) {
        error(fn.loc, "redefinition of function '" + fn.name + "'");
      }
      if (fn.defined) *prev = std::move(fn);
      return;
    }
    ast.functions.push_back(std::move(fn));
  }
};

}  // namespace

ParseResult parse_unit(const TokenStream &tokens) {
  ParseResult r;
  r.diags = tokens.diags;
  r.comments = tokens.comments;
  Parser p(tokens.tokens, r.diags);
  r.ast = p.parse_translation_unit();
  return r;
}

ParseResult parse_source(std::string_view source) {
  return parse_unit(tokenize(source));
}

ExprPtr parse_expression_text(std::string_view text, SourceLoc origin,
                              std::vector<Diagnostic> &diags) {
  LexOptions opts;
  opts.backslash_idents = true;
  opts.origin = origin;
  TokenStream ts = tokenize(text, opts);
  for (auto &d : ts.diags) diags.push_back(d);
  if (has_errors(ts.diags)) return nullptr;
  Parser p(ts.tokens, diags);
  p.annotation_mode = true;
  ExprPtr e = p.parse_expr();
  if (!p.at(Tok::End)) {
    diags.push_back(make_error("annotation", p.loc(), "trailing tokens after formula"));
    return nullptr;
  }
  return e;
}

}  // namespace wpdrv
