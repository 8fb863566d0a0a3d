#include "doctest.h"
#include "wpdrv/annotations.hpp"
#include "wpdrv/ast_printer.hpp"
#include "wpdrv/parser.hpp"
#include "wpdrv/subset.hpp"
#include "wpdrv/typecheck.hpp"

using namespace wpdrv;

// the function-pointer demonstration program
static const char *kPfunSource = R"(
static int counter;
void foo(void) { counter++; }
void (*p_fun)(void);
void set_function(void) { p_fun = foo; }
void call_function(void) {
    if (p_fun) p_fun();
}
)";

TEST_CASE("tokenize: minimal declaration") {
  TokenStream ts = tokenize("int x;");
  REQUIRE(ts.diags.empty());
  REQUIRE(ts.tokens.size() == 4);  // incl. End
  CHECK(ts.tokens[0].kind == Tok::KwInt);
  CHECK(ts.tokens[1].kind == Tok::Ident);
  CHECK(ts.tokens[1].text == "x");
  CHECK(ts.tokens[2].kind == Tok::Semi);
}

TEST_CASE("tokenize: postfix increment") {
  TokenStream ts = tokenize("counter++;");
  REQUIRE(ts.tokens.size() == 4);
  CHECK(ts.tokens[0].kind == Tok::Ident);
  CHECK(ts.tokens[1].kind == Tok::PlusPlus);
  CHECK(ts.tokens[2].kind == Tok::Semi);
}

TEST_CASE("tokenize: wide hex literal") {
  TokenStream ts = tokenize("0x0001180040000000");
  REQUIRE(ts.tokens.size() == 2);
  CHECK(ts.tokens[0].kind == Tok::IntLit);
  CHECK(ts.tokens[0].int_value == 0x1180040000000ull);
}

TEST_CASE("tokenize: comments become trivia") {
  TokenStream ts = tokenize("/*@ requires true; @*/\nint x; // tail\n");
  REQUIRE(ts.comments.size() == 2);
  CHECK(ts.comments[0].block);
  CHECK(ts.comments[0].text.find("requires") != std::string::npos);
  CHECK(ts.comments[0].loc.line == 1);
  CHECK(!ts.comments[1].block);
}

TEST_CASE("tokenize: every diagnostic has a location") {
  TokenStream ts = tokenize("int $x;\n\"abc\"");
  CHECK(!ts.diags.empty());
  for (const auto &d : ts.diags) CHECK(d.loc.valid());
}

TEST_CASE("parse: empty function") {
  ParseResult r = parse_source("void f(void) {}");
  REQUIRE(r.ok());
  REQUIRE(r.ast.functions.size() == 1);
  CHECK(r.ast.functions[0].name == "f");
  CHECK(r.ast.functions[0].defined);
  CHECK(r.ast.functions[0].body.empty());
}

TEST_CASE("parse: function-pointer program shape") {
  ParseResult r = parse_source(kPfunSource);
  REQUIRE(r.ok());
  CHECK(r.ast.functions.size() == 3);
  CHECK(r.ast.globals.size() == 2);
  const FunctionDef *cf = r.ast.find_function("call_function");
  REQUIRE(cf != nullptr);
  CHECK(cf->defined);
  const GlobalDecl *pf = nullptr;
  for (const auto &g : r.ast.globals)
    if (g.name == "p_fun") pf = &g;
  REQUIRE(pf != nullptr);
  CHECK(pf->type->is_function_pointer());
}

TEST_CASE("parse: struct, array and enum declarations") {
  ParseResult r = parse_source(R"(
    enum { MAX_QUEUE = 8, TIMEOUT = 100 };
    enum { BIG = 0x1180040000000 };
    struct task { unsigned int timeout; unsigned int start; void (*timeout_fun)(void); };
    struct task tasks[MAX_QUEUE];
    unsigned int timer;
  )");
  REQUIRE(r.ok());
  REQUIRE(r.ast.enum_consts.size() == 3);
  CHECK(r.ast.enum_consts[0].value == 8);
  CHECK(r.ast.enum_consts[1].value == 100);
  CHECK(r.ast.enum_consts[2].value == 0x1180040000000ull);
  CHECK(r.ast.enum_consts[2].type.bits == 64);
  REQUIRE(r.ast.structs.size() == 1);
  CHECK(r.ast.structs[0].type->fields.size() == 3);
  REQUIRE(r.ast.globals.size() == 2);
  CHECK(r.ast.globals[0].type->kind == TypeKind::Array);
  CHECK(r.ast.globals[0].type->array_len == 8);
}

TEST_CASE("typecheck: widening insertion and resolution") {
  ParseResult r = parse_source(R"(
    unsigned long ctrl;
    unsigned int get_register(unsigned long addr) { return (unsigned int)ctrl; }
    void f(void) {
      unsigned long r;
      r = get_register(0x1180040000000);
    }
  )");
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  CHECK(t.ok());
  const FunctionDef *f = r.ast.find_function("f");
  REQUIRE(f != nullptr);
  REQUIRE(f->locals.size() == 1);
  CHECK(f->locals[0].resolved == "f::r");
  CHECK(f->locals[0].type->word.bits == 64);
}

TEST_CASE("typecheck: structure assigned to word is an error") {
  ParseResult r = parse_source(R"(
    struct s { unsigned int a; };
    struct s g;
    unsigned int w;
    void f(void) { w = g; }
  )");
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  CHECK(!t.ok());
}

TEST_CASE("typecheck: taking a function value is allowed") {
  ParseResult r = parse_source(kPfunSource);
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  CHECK(t.ok());
}

TEST_CASE("typecheck: locals alpha-renamed across functions") {
  ParseResult r = parse_source(R"(
    unsigned int f(void) { unsigned int value; value = 1; return value; }
    unsigned int g(void) { unsigned int value; value = 2; return value; }
  )");
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  REQUIRE(t.ok());
  CHECK(r.ast.functions[0].locals[0].resolved == "f::value");
  CHECK(r.ast.functions[1].locals[0].resolved == "g::value");
}

TEST_CASE("typecheck: undeclared identifier") {
  ParseResult r = parse_source("void f(void) { x = 1; }");
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  CHECK(!t.ok());
  CHECK(t.diags[0].loc.valid());
}

static Ast checked(const char *src, bool with_annotations = true) {
  TokenStream ts = tokenize(src);
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  TypecheckResult t = typecheck_unit(r.ast);
  REQUIRE(t.ok());
  if (with_annotations) {
    AnnotateResult a = parse_annotations(r.ast, ts);
    REQUIRE(a.ok());
  }
  return std::move(r.ast);
}

TEST_CASE("subset: indirect call rejected exactly at the caller") {
  Ast ast = checked(kPfunSource);
  auto diags = check_subset(ast);
  REQUIRE(diags.size() == 1);
  CHECK(diags[0].code == "indirect-call");
  CHECK(diags[0].loc.valid());
}

TEST_CASE("subset: dont_translate silences the caller") {
  std::string src = std::string("static int counter;\n"
                                "void foo(void) { counter++; }\n"
                                "void (*p_fun)(void);\n"
                                "void set_function(void) { p_fun = foo; }\n"
                                "/*@ dont_translate; @*/\n"
                                "void call_function(void) {\n"
                                "    if (p_fun) p_fun();\n"
                                "}\n");
  Ast ast = checked(src.c_str());
  CHECK(ast.find_function("call_function")->spec.dont_translate);
  auto diags = check_subset(ast);
  CHECK(diags.empty());
}

TEST_CASE("subset: goto, switch, union, float each rejected") {
  struct Case {
    const char *src;
    const char *code;
  } cases[] = {
      {"void f(void) { goto out; out: return; }", "goto"},
      {"void f(unsigned int x) { switch (x) { case 1: break; default: break; } }", "switch"},
      {"union u { int a; unsigned int b; }; union u g; void f(void) {}", "union"},
      {"void f(void) { double d; d = 1.5; }", "float"},
      {"void f(void) { while (1) { return; } }", "return-in-loop"},
  };
  for (const auto &c : cases) {
    CAPTURE(c.src);
    TokenStream ts = tokenize(c.src);
    ParseResult r = parse_unit(ts);
    REQUIRE(r.ok());
    typecheck_unit(r.ast);  // floats and friends pass through
    auto diags = check_subset(r.ast);
    bool found = false;
    for (const auto &d : diags)
      if (d.code == c.code) found = true;
    CHECK(found);
  }
}

TEST_CASE("subset: address-of locals and globals") {
  TokenStream ts = tokenize(R"(
    unsigned int g;
    void f(void) { unsigned int x; unsigned int *p; p = &x; p = &g; }
  )");
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  typecheck_unit(r.ast);
  auto diags = check_subset(r.ast);
  REQUIRE(diags.size() == 2);
  CHECK(diags[0].code == "address-of-local");
  CHECK(diags[1].code == "address-of-global");
}

TEST_CASE("annotations: spec block attaches to the following function") {
  Ast ast = checked(R"(
    unsigned int timer;
    /*@ requires timer == a; ensures timer == a + 1; total; @*/
    void idle(void) { timer = timer + 1; }
  )");
  const FunctionDef *idle = ast.find_function("idle");
  REQUIRE(idle != nullptr);
  REQUIRE(idle->spec.present);
  CHECK(idle->spec.total);
  REQUIRE(idle->spec.requires_e != nullptr);
  REQUIRE(idle->spec.ensures_e != nullptr);
  REQUIRE(idle->spec.labels.size() == 1);
  CHECK(idle->spec.labels[0] == "a");
  CHECK(idle->spec.label_types[0].bits == 32);
}

TEST_CASE("annotations: loop annotation attaches to while") {
  Ast ast = checked(R"(
    enum { TIMEOUT = 100 };
    unsigned int timer;
    /*@ requires timer == 0; ensures timer == TIMEOUT; total; @*/
    void run(void) {
      /*@ invariant 0 <= timer && timer <= TIMEOUT; measure TIMEOUT - timer; @*/
      while (timer < TIMEOUT) {
        timer = timer + 1;
      }
    }
  )");
  const FunctionDef *run = ast.find_function("run");
  REQUIRE(run != nullptr);
  const Stmt *loop = nullptr;
  for (const auto &s : run->body)
    if (s->kind == StmtKind::While) loop = s.get();
  REQUIRE(loop != nullptr);
  CHECK(loop->loop_spec.present);
  CHECK(loop->loop_spec.invariant != nullptr);
  CHECK(loop->loop_spec.measure != nullptr);
}

TEST_CASE("annotations: total spec with unannotated loop is an error") {
  TokenStream ts = tokenize(R"(
    unsigned int timer;
    /*@ requires timer == 0; ensures timer == 100; total; @*/
    void run(void) {
      while (timer < 100) { timer = timer + 1; }
    }
  )");
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  REQUIRE(typecheck_unit(r.ast).ok());
  AnnotateResult a = parse_annotations(r.ast, ts);
  CHECK(!a.ok());
  CHECK(a.diags[0].code == "spec");
}

TEST_CASE("annotations: invariant on a non-loop is an error") {
  TokenStream ts = tokenize(R"(
    unsigned int timer;
    /*@ invariant timer == 0; @*/
    void f(void) { timer = 1; }
  )");
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  REQUIRE(typecheck_unit(r.ast).ok());
  AnnotateResult a = parse_annotations(r.ast, ts);
  CHECK(!a.ok());
}

TEST_CASE("annotations: function with no annotation stays translatable") {
  Ast ast = checked("void f(void) {}");
  CHECK(!ast.find_function("f")->spec.present);
  CHECK(check_subset(ast).empty());
}

TEST_CASE("round trip: print then reparse is structurally identical") {
  const char *sources[] = {
      kPfunSource,
      R"(
        enum { MAX_QUEUE = 8 };
        struct task { unsigned int timeout; unsigned int start; void (*timeout_fun)(void); };
        struct task tasks[MAX_QUEUE];
        unsigned int timer;
        int add_task(void (*fun)(void), unsigned int timeout) {
          unsigned int slot;
          if (timer >= 8u) { return -1; }
          slot = timer % MAX_QUEUE;
          tasks[slot].timeout = timeout;
          tasks[slot].start = timer;
          tasks[slot].timeout_fun = fun;
          return 0;
        }
        void loops(void) {
          unsigned int i;
          for (i = 0; i < 8u; i++) { timer = timer + i; }
          while (timer > 0u) { timer = timer - 1; }
        }
      )",
  };
  for (const char *src : sources) {
    ParseResult first = parse_source(src);
    REQUIRE(first.ok());
    std::string printed = print_unit(first.ast);
    CAPTURE(printed);
    ParseResult second = parse_source(printed);
    REQUIRE(second.ok());
    CHECK(dump_ast(first.ast) == dump_ast(second.ast));
  }
}
