#include "wpdrv/token.hpp"

#include <cctype>
#include <map>

namespace wpdrv {

const char *tok_name(Tok t) {
  switch (t) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "integer literal";
    case Tok::FloatLit: return "float literal";
    case Tok::KwVoid: return "void";
    case Tok::KwUnsigned: return "unsigned";
    case Tok::KwSigned: return "signed";
    case Tok::KwInt: return "int";
    case Tok::KwLong: return "long";
    case Tok::KwShort: return "short";
    case Tok::KwChar: return "char";
    case Tok::KwStruct: return "struct";
    case Tok::KwUnion: return "union";
    case Tok::KwEnum: return "enum";
    case Tok::KwIf: return "if";
    case Tok::KwElse: return "else";
    case Tok::KwWhile: return "while";
    case Tok::KwFor: return "for";
    case Tok::KwDo: return "do";
    case Tok::KwReturn: return "return";
    case Tok::KwStatic: return "static";
    case Tok::KwExtern: return "extern";
    case Tok::KwConst: return "const";
    case Tok::KwVolatile: return "volatile";
    case Tok::KwGoto: return "goto";
    case Tok::KwSwitch: return "switch";
    case Tok::KwCase: return "case";
    case Tok::KwDefault: return "default";
    case Tok::KwBreak: return "break";
    case Tok::KwContinue: return "continue";
    case Tok::KwFloat: return "float";
    case Tok::KwDouble: return "double";
    case Tok::KwSizeof: return "sizeof";
    case Tok::KwTypedef: return "typedef";
    case Tok::LBrace: return "{";
    case Tok::RBrace: return "}";
    case Tok::LParen: return "(";
    case Tok::RParen: return ")";
    case Tok::LBracket: return "[";
    case Tok::RBracket: return "]";
    case Tok::Semi: return ";";
    case Tok::Comma: return ",";
    case Tok::Dot: return ".";
    case Tok::Arrow: return "->";
    case Tok::Amp: return "&";
    case Tok::Star: return "*";
    case Tok::Plus: return "+";
    case Tok::Minus: return "-";
    case Tok::Tilde: return "~";
    case Tok::Bang: return "!";
    case Tok::Slash: return "/";
    case Tok::Percent: return "%";
    case Tok::Shl: return "<<";
    case Tok::Shr: return ">>";
    case Tok::Lt: return "<";
    case Tok::Gt: return ">";
    case Tok::Le: return "<=";
    case Tok::Ge: return ">=";
    case Tok::EqEq: return "==";
    case Tok::BangEq: return "!=";
    case Tok::Caret: return "^";
    case Tok::Pipe: return "|";
    case Tok::AmpAmp: return "&&";
    case Tok::PipePipe: return "||";
    case Tok::Question: return "?";
    case Tok::Colon: return ":";
    case Tok::Assign: return "=";
    case Tok::PlusAssign: return "+=";
    case Tok::MinusAssign: return "-=";
    case Tok::StarAssign: return "*=";
    case Tok::SlashAssign: return "/=";
    case Tok::PercentAssign: return "%=";
    case Tok::AmpAssign: return "&=";
    case Tok::CaretAssign: return "^=";
    case Tok::PipeAssign: return "|=";
    case Tok::ShlAssign: return "<<=";
    case Tok::ShrAssign: return ">>=";
    case Tok::PlusPlus: return "++";
    case Tok::MinusMinus: return "--";
  }
  return "?";
}

namespace {

const std::map<std::string, Tok> &keyword_map() {
  static const std::map<std::string, Tok> kw = {
      {"void", Tok::KwVoid},       {"unsigned", Tok::KwUnsigned},
      {"signed", Tok::KwSigned},   {"int", Tok::KwInt},
      {"long", Tok::KwLong},       {"short", Tok::KwShort},
      {"char", Tok::KwChar},       {"struct", Tok::KwStruct},
      {"union", Tok::KwUnion},     {"enum", Tok::KwEnum},
      {"if", Tok::KwIf},           {"else", Tok::KwElse},
      {"while", Tok::KwWhile},     {"for", Tok::KwFor},
      {"do", Tok::KwDo},           {"return", Tok::KwReturn},
      {"static", Tok::KwStatic},   {"extern", Tok::KwExtern},
      {"const", Tok::KwConst},     {"volatile", Tok::KwVolatile},
      {"goto", Tok::KwGoto},       {"switch", Tok::KwSwitch},
      {"case", Tok::KwCase},       {"default", Tok::KwDefault},
      {"break", Tok::KwBreak},     {"continue", Tok::KwContinue},
      {"float", Tok::KwFloat},     {"double", Tok::KwDouble},
      {"sizeof", Tok::KwSizeof},   {"typedef", Tok::KwTypedef},
  };
  return kw;
}

struct Lexer {
  std::string_view src;
  const LexOptions &opts;
  size_t pos = 0;
  int line, col;
  TokenStream out;

  explicit Lexer(std::string_view s, const LexOptions &o)
      : src(s), opts(o), line(o.origin.line), col(o.origin.col) {}

  char peek(size_t ahead = 0) const {
    return pos + ahead < src.size() ? src[pos + ahead] : '\0';
  }

  char advance() {
    char c = src[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  SourceLoc here() const { return SourceLoc{line, col}; }

  void push(Tok k, SourceLoc loc, std::string text) {
    Token t;
    t.kind = k;
    t.loc = loc;
    t.text = std::move(text);
    out.tokens.push_back(std::move(t));
  }

  void error(SourceLoc loc, const std::string &msg) {
    out.diags.push_back(make_error("lex", loc, msg));
  }

  bool ident_start(char c) const {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
           (opts.backslash_idents && c == '\\');
  }
  static bool ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  void run() {
    while (pos < src.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
        continue;
      }
      SourceLoc loc = here();
      if (c == '#' && col == 1) {
        // preprocessor line marker; skip to end of line
        while (pos < src.size() && peek() != '\n') advance();
        continue;
      }
      if (c == '/' && peek(1) == '/') {
        advance();
        advance();
        std::string text;
        while (pos < src.size() && peek() != '\n') text += advance();
        out.comments.push_back(CommentTrivia{loc, text, false});
        continue;
      }
      if (c == '/' && peek(1) == '*') {
        advance();
        advance();
        std::string text;
        bool closed = false;
        while (pos < src.size()) {
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            closed = true;
            break;
          }
          text += advance();
        }
        if (!closed) error(loc, "unterminated comment");
        out.comments.push_back(CommentTrivia{loc, text, true});
        continue;
      }
      if (ident_start(c)) {
        lex_ident(loc);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(loc);
        continue;
      }
      if (c == '\'' || c == '"') {
        error(loc, std::string("character/string literals are not part of the subset"));
        // skip to matching quote on the same line
        char q = advance();
        while (pos < src.size() && peek() != q && peek() != '\n') {
          if (peek() == '\\') advance();
          if (pos < src.size()) advance();
        }
        if (pos < src.size() && peek() == q) advance();
        continue;
      }
      lex_punct(loc);
    }
    push(Tok::End, here(), "");
  }

  void lex_ident(SourceLoc loc) {
    std::string s;
    s += advance();
    while (pos < src.size() && ident_cont(peek())) s += advance();
    auto it = keyword_map().find(s);
    if (it != keyword_map().end()) {
      push(it->second, loc, s);
    } else {
      push(Tok::Ident, loc, s);
    }
  }

  void lex_number(SourceLoc loc) {
    std::string s;
    uint64_t value = 0;
    bool overflow = false;
    if (peek() == '0' && (peek(1) == 'x' || peek(1) == 'X')) {
      s += advance();
      s += advance();
      if (!std::isxdigit(static_cast<unsigned char>(peek()))) {
        error(loc, "malformed hex literal");
        push(Tok::IntLit, loc, s);
        return;
      }
      while (std::isxdigit(static_cast<unsigned char>(peek()))) {
        char d = advance();
        s += d;
        uint64_t digit = std::isdigit(static_cast<unsigned char>(d))
                             ? uint64_t(d - '0')
                             : uint64_t(std::tolower(d) - 'a' + 10);
        if (value > (~uint64_t{0} >> 4)) overflow = true;
        value = (value << 4) | digit;
      }
    } else {
      bool octal = peek() == '0';
      while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
      // a '.' or exponent makes it a float literal
      if (peek() == '.' || peek() == 'e' || peek() == 'E') {
        if (peek() == '.') s += advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
        if (peek() == 'e' || peek() == 'E') {
          s += advance();
          if (peek() == '+' || peek() == '-') s += advance();
          while (std::isdigit(static_cast<unsigned char>(peek()))) s += advance();
        }
        if (peek() == 'f' || peek() == 'F' || peek() == 'l' || peek() == 'L') s += advance();
        push(Tok::FloatLit, loc, s);
        return;
      }
      uint64_t base = octal && s.size() > 1 ? 8 : 10;
      for (char d : s) {
        uint64_t digit = uint64_t(d - '0');
        if (base == 8 && digit > 7) {
          error(loc, "bad octal digit");
          break;
        }
        uint64_t next = value * base + digit;
        if (next < value) overflow = true;
        value = next;
      }
    }
    if (overflow) error(loc, "integer literal does not fit in 64 bits");
    Token t;
    t.kind = Tok::IntLit;
    t.loc = loc;
    t.int_value = value;
    while (peek() == 'u' || peek() == 'U' || peek() == 'l' || peek() == 'L') {
      char suf = advance();
      s += suf;
      if (suf == 'u' || suf == 'U') t.suffix_unsigned = true;
      else t.suffix_long = true;
    }
    t.text = s;
    out.tokens.push_back(std::move(t));
  }

  void lex_punct(SourceLoc loc) {
    char c = advance();
    auto two = [&](char second, Tok yes, Tok no) {
      if (peek() == second) {
        advance();
        push(yes, loc, std::string{c, second});
      } else {
        push(no, loc, std::string{c});
      }
    };
    switch (c) {
      case '{': push(Tok::LBrace, loc, "{"); return;
      case '}': push(Tok::RBrace, loc, "}"); return;
      case '(': push(Tok::LParen, loc, "("); return;
      case ')': push(Tok::RParen, loc, ")"); return;
      case '[': push(Tok::LBracket, loc, "["); return;
      case ']': push(Tok::RBracket, loc, "]"); return;
      case ';': push(Tok::Semi, loc, ";"); return;
      case ',': push(Tok::Comma, loc, ","); return;
      case '.': push(Tok::Dot, loc, "."); return;
      case '~': push(Tok::Tilde, loc, "~"); return;
      case '?': push(Tok::Question, loc, "?"); return;
      case ':': push(Tok::Colon, loc, ":"); return;
      case '+':
        if (peek() == '+') { advance(); push(Tok::PlusPlus, loc, "++"); return; }
        two('=', Tok::PlusAssign, Tok::Plus);
        return;
      case '-':
        if (peek() == '-') { advance(); push(Tok::MinusMinus, loc, "--"); return; }
        if (peek() == '>') { advance(); push(Tok::Arrow, loc, "->"); return; }
        two('=', Tok::MinusAssign, Tok::Minus);
        return;
      case '*': two('=', Tok::StarAssign, Tok::Star); return;
      case '/': two('=', Tok::SlashAssign, Tok::Slash); return;
      case '%': two('=', Tok::PercentAssign, Tok::Percent); return;
      case '!': two('=', Tok::BangEq, Tok::Bang); return;
      case '=': two('=', Tok::EqEq, Tok::Assign); return;
      case '^': two('=', Tok::CaretAssign, Tok::Caret); return;
      case '&':
        if (peek() == '&') { advance(); push(Tok::AmpAmp, loc, "&&"); return; }
        two('=', Tok::AmpAssign, Tok::Amp);
        return;
      case '|':
        if (peek() == '|') { advance(); push(Tok::PipePipe, loc, "||"); return; }
        two('=', Tok::PipeAssign, Tok::Pipe);
        return;
      case '<':
        if (peek() == '<') {
          advance();
          two('=', Tok::ShlAssign, Tok::Shl);
          return;
        }
        two('=', Tok::Le, Tok::Lt);
        return;
      case '>':
        if (peek() == '>') {
          advance();
          two('=', Tok::ShrAssign, Tok::Shr);
          return;
        }
        two('=', Tok::Ge, Tok::Gt);
        return;
      default:
        error(loc, std::string("stray character '") + c + "'");
        return;
    }
  }
};

}  // namespace

TokenStream tokenize(std::string_view source, const LexOptions &opts) {
  Lexer lx(source, opts);
  lx.run();
  return std::move(lx.out);
}

}  // namespace wpdrv
