// token.hpp
// Lexer for preprocessed C translation units. Comments are kept as trivia
// (specification annotations live inside them); preprocessor line markers
// are skipped.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wpdrv/diagnostics.hpp"

namespace wpdrv {

enum class Tok {
  End,
  Ident,
  IntLit,
  FloatLit,
  // keywords
  KwVoid, KwUnsigned, KwSigned, KwInt, KwLong, KwShort, KwChar,
  KwStruct, KwUnion, KwEnum, KwIf, KwElse, KwWhile, KwFor, KwDo,
  KwReturn, KwStatic, KwExtern, KwConst, KwVolatile, KwGoto, KwSwitch,
  KwCase, KwDefault, KwBreak, KwContinue, KwFloat, KwDouble, KwSizeof,
  KwTypedef,
  // punctuation and operators
  LBrace, RBrace, LParen, RParen, LBracket, RBracket, Semi, Comma, Dot,
  Arrow, Amp, Star, Plus, Minus, Tilde, Bang, Slash, Percent, Shl, Shr,
  Lt, Gt, Le, Ge, EqEq, BangEq, Caret, Pipe, AmpAmp, PipePipe, Question,
  Colon, Assign, PlusAssign, MinusAssign, StarAssign, SlashAssign,
  PercentAssign, AmpAssign, CaretAssign, PipeAssign, ShlAssign, ShrAssign,
  PlusPlus, MinusMinus,
};

const char *tok_name(Tok t);

struct Token {
  Tok kind = Tok::End;
  SourceLoc loc;
  std::string text;
  // IntLit payload
  uint64_t int_value = 0;
  bool suffix_unsigned = false;
  bool suffix_long = false;
};

struct CommentTrivia {
  SourceLoc loc;      // location of the comment opener
  std::string text;   // interior text (without the comment markers)
  bool block = false; // true for /* */, false for //
};

struct TokenStream {
  std::vector<Token> tokens;          // terminated by a Tok::End token
  std::vector<CommentTrivia> comments;
  std::vector<Diagnostic> diags;
};

struct LexOptions {
  // Annotation formulas allow identifiers like \old and \result.
  bool backslash_idents = false;
  // Location of offset (1,1) within the enclosing file, for annotation text.
  SourceLoc origin{1, 1};
};

TokenStream tokenize(std::string_view source, const LexOptions &opts = {});

}  // namespace wpdrv
