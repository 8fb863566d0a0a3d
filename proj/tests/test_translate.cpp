#include <fstream>
#include <sstream>

#include "doctest.h"
#include "wpdrv/annotations.hpp"
#include "wpdrv/parser.hpp"
#include "wpdrv/subset.hpp"
#include "wpdrv/translate.hpp"
#include "wpdrv/typecheck.hpp"

using namespace wpdrv;

static std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static TranslationUnit translate_source(const std::string &src,
                                        const TranslateOptions &opts = {}) {
  TokenStream ts = tokenize(src);
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  REQUIRE(typecheck_unit(r.ast).ok());
  REQUIRE(parse_annotations(r.ast, ts).ok());
  return translate_unit(std::move(r.ast), opts);
}

static TranslationUnit translate_corpus(const char *file,
                                        const TranslateOptions &opts = {}) {
  return translate_source(slurp(std::string(WPDRV_CORPUS_DIR) + "/" + file), opts);
}

TEST_CASE("records: corpus globals flatten in declaration order") {
  TranslationUnit u = translate_corpus("octrng.c");
  REQUIRE(u.ok());
  std::vector<LocId> names;
  for (const auto &f : u.globals.fields) names.push_back(f.loc);
  REQUIRE(names.size() == 5 + 8 * 3);
  CHECK(names[0] == "rng_regs.control_addr");
  CHECK(names[1] == "timer");
  CHECK(names[2] == "rand_value");
  CHECK(names[3] == "running_tasks");
  CHECK(names[4] == "current_tasks");
  CHECK(names[5] == "tasks[0].timeout");
  CHECK(names[6] == "tasks[0].start");
  CHECK(names[7] == "tasks[0].timeout_fun");
  CHECK(names.back() == "tasks[7].timeout_fun");
  CHECK(u.globals.find("rng_regs.control_addr")->type.bits == 64);
  CHECK(u.globals.find("rand_value")->type.is_signed);
  CHECK(u.globals.find("tasks[3].timeout_fun")->is_pointer);
}

TEST_CASE("records: empty unit gives empty record") {
  TranslationUnit u = translate_source("void f(void) {}");
  CHECK(u.globals.fields.empty());
}

TEST_CASE("records: same-named locals stay distinct after renaming") {
  TranslationUnit u = translate_source(R"(
    unsigned int f(void) { unsigned int value; value = 1; return value; }
    unsigned int g(void) { unsigned int value; value = 2; return value; }
  )");
  REQUIRE(u.ok());
  CHECK(u.locals.at("f").fields[0].loc == "f::value");
  CHECK(u.locals.at("g").fields[0].loc == "g::value");
}

TEST_CASE("symbol table is injective and stable") {
  TranslationUnit u = translate_corpus("sched.c");
  std::set<uint64_t> addrs;
  for (const auto &[name, addr] : u.symbols.addr_of) {
    CHECK(addr != 0);
    CHECK(addrs.insert(addr).second);
    CHECK(*u.symbols.resolve(addr) == name);
  }
  TranslationUnit u2 = translate_corpus("sched.c");
  CHECK(u2.symbols.addr_of == u.symbols.addr_of);
}

TEST_CASE("lowering: counter++ becomes a Basic increment") {
  TranslationUnit u = translate_source(R"(
    static int counter;
    void foo(void) { counter++; }
  )");
  REQUIRE(u.ok());
  const TranslatedFunction *foo = u.find("foo");
  REQUIRE(foo != nullptr);
  REQUIRE(foo->lowered);
  std::string dump = deep_to_string(foo->deep);
  CHECK(dump.find("(basic (counter := (add (read counter s32) (const s32 1))))") !=
        std::string::npos);
}

TEST_CASE("lowering: empty body is Skip / return unit") {
  TranslationUnit u = translate_source("void f(void) {}");
  const TranslatedFunction *f = u.find("f");
  REQUIRE(f->lowered);
  CHECK(f->deep->kind == DeepKind::Skip);
  CHECK(f->monadic->kind == MonKind::Return);
}

TEST_CASE("lowering: control_reg |= flag folds into one or") {
  TranslationUnit u = translate_corpus("octrng.c");
  REQUIRE(u.ok());
  const TranslatedFunction *attach = u.find("octrng_attach");
  REQUIRE(attach != nullptr);
  REQUIRE(attach->lowered);
  std::string m = monadic_to_string(attach->monadic);
  // the three-step monadic sequence: get, set with (ret | 3), queue the task
  CHECK(m.find("(bind ret") != std::string::npos);
  CHECK(m.find("(call get_register (const u64 0x1180040000000))") != std::string::npos);
  CHECK(m.find("(call set_register (const u64 0x1180040000000) "
               "(bor (zext u64 (var ret u32)) (const u64 3)))") != std::string::npos);
  CHECK(m.find("(call add_task (sym octrng_rnd) (const u32 5))") != std::string::npos);
}

TEST_CASE("lowering: octrng_rnd binds the read and queues itself") {
  TranslationUnit u = translate_corpus("octrng.c");
  const TranslatedFunction *rnd = u.find("octrng_rnd");
  REQUIRE(rnd != nullptr);
  std::string m = monadic_to_string(rnd->monadic);
  CHECK(m.find("(call get_register (const u64 0))") != std::string::npos);
  CHECK(m.find("(modify (rand_value := (trunc s32 (var ret u32))))") != std::string::npos);
  CHECK(m.find("(call add_task (sym octrng_rnd) (const u32 10))") != std::string::npos);
}

TEST_CASE("lowering: array writes flatten to guarded conditional updates") {
  TranslationUnit u = translate_corpus("octrng.c");
  const TranslatedFunction *at = u.find("add_task");
  REQUIRE(at != nullptr);
  REQUIRE(at->lowered);
  std::string d = deep_to_string(at->deep);
  CHECK(d.find("(guard bounds") != std::string::npos);
  CHECK(d.find("tasks[0].timeout :=") != std::string::npos);
  CHECK(d.find("tasks[7].timeout :=") != std::string::npos);
  // parameters stay free variables in the monadic form
  std::string m = monadic_to_string(at->monadic);
  CHECK(m.find("(var add_task::timeout u32)") != std::string::npos);
  CHECK(at->params_in_state.empty());
}

TEST_CASE("lowering: dispatcher with indirect call lowers via call-ptr") {
  TranslationUnit u = translate_corpus("sched.c");
  REQUIRE(u.ok());
  const TranslatedFunction *rt = u.find("run_tasks");
  REQUIRE(rt != nullptr);
  CHECK(rt->skipped);
  REQUIRE(rt->lowered);  // still executable by the interpreter
  std::string d = deep_to_string(rt->deep);
  CHECK(d.find("(call-ptr") != std::string::npos);
  CHECK(d.find("(while") != std::string::npos);
}

TEST_CASE("lowering: loop annotations reach the While node") {
  TranslationUnit u = translate_corpus("sched.c");
  const TranslatedFunction *mf = u.find("main_function");
  REQUIRE(mf != nullptr);
  std::string m = monadic_to_string(mf->monadic);
  CHECK(m.find("(whileLoop (ult (read timer u32) (const u32 100))") != std::string::npos);
  CHECK(m.find("(invariant") != std::string::npos);
  CHECK(m.find("(measure (sub (const u32 100) (read timer u32)))") != std::string::npos);
}

TEST_CASE("modifies: corpus sets") {
  TranslationUnit u = translate_corpus("sched.c");
  REQUIRE(u.ok());
  CHECK(u.find("idle")->modifies == std::set<LocId>{"timer"});
  const TranslatedFunction *at = u.find("add_task");
  CHECK(at->modifies.count("current_tasks") == 1);
  CHECK(at->modifies.count("running_tasks") == 1);
  CHECK(at->modifies.count("tasks[0].timeout_fun") == 1);
  CHECK(at->modifies.count("timer") == 0);
  const TranslatedFunction *ga = u.find("octrng_attach");
  CHECK(ga->modifies.count("rng_regs.control_addr") == 1);
  CHECK(ga->modifies.count("timer") == 0);
  CHECK(ga->modifies.count("rand_value") == 0);
  // the skipped dispatcher contributes every global
  const TranslatedFunction *rt = u.find("run_tasks");
  CHECK(rt->modifies_top);
  CHECK(rt->modifies.size() == u.globals.fields.size());
  // and so does its caller, transitively
  CHECK(u.find("main_function")->modifies_top);
}

TEST_CASE("modifies: foo touches only counter") {
  TranslationUnit u = translate_source(R"(
    static int counter;
    void foo(void) { counter++; }
    void nothing(void) {}
  )");
  CHECK(u.find("foo")->modifies == std::set<LocId>{"counter"});
  CHECK(u.find("nothing")->modifies.empty());
}

TEST_CASE("recursion is rejected") {
  TokenStream ts = tokenize(R"(
    void odd(unsigned int n);
    void even(unsigned int n) { if (n != 0u) odd(n - 1); }
    void odd(unsigned int n) { if (n != 0u) even(n - 1); }
  )");
  ParseResult r = parse_unit(ts);
  REQUIRE(r.ok());
  REQUIRE(typecheck_unit(r.ast).ok());
  TranslationUnit u = translate_unit(std::move(r.ast));
  CHECK(!u.ok());
  CHECK(u.diags[0].code == "recursion");
}

TEST_CASE("skip-modifies treats every function as writing all globals") {
  TranslateOptions opts;
  opts.skip_modifies = true;
  TranslationUnit u = translate_corpus("sched.c", opts);
  CHECK(u.find("idle")->modifies_top);
}

TEST_CASE("dump-ir is deterministic") {
  TranslationUnit a = translate_corpus("sched.c");
  TranslationUnit b = translate_corpus("sched.c");
  CHECK(dump_ir(a) == dump_ir(b));
  CHECK(dump_ir(a).find("(function octrng_attach") != std::string::npos);
}

TEST_CASE("word abstraction: increment gains a fit guard") {
  TranslationUnit u = translate_corpus("sched.c");
  const TranslatedFunction *idle = u.find("idle");
  MonPtr abs = abstract_words(idle->monadic);
  std::string m = monadic_to_string(abs);
  CHECK(m.find("(guard overflow (ult (add (zext u64 (read timer u32)) (const u64 1)) "
               "(const u64 0x100000000)))") != std::string::npos);
  CHECK(m.find("(modify (timer := (trunc u32 (add (zext u64 (read timer u32)) "
               "(const u64 1)))))") != std::string::npos);
}

TEST_CASE("word abstraction: return unchanged for constants") {
  TranslationUnit u = translate_source("unsigned int f(void) { return 0; }");
  const TranslatedFunction *f = u.find("f");
  MonPtr abs = abstract_words(f->monadic);
  CHECK(monadic_to_string(abs) == monadic_to_string(f->monadic));
}
