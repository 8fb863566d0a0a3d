#include <map>

#include "doctest.h"
#include "wpdrv/formula.hpp"
#include "wpdrv/formula_eval.hpp"

using namespace wpdrv;

TEST_CASE("construction and printing") {
  Term x = mk_var("x", u32());
  Term c = mk_const(3, u32());
  Term sum = mk_binary(TermOp::Add, x, c);
  CHECK(term_to_string(sum) == "(add (var x u32) (const u32 3))");
  Formula f = mk_cmp(CmpOp::Ult, x, c);
  CHECK(formula_to_string(f) == "(ult (var x u32) (const u32 3))");
  CHECK(formula_to_string(mk_and(f, mk_true())) ==
        "(and (ult (var x u32) (const u32 3)) true)");
}

TEST_CASE("and/or flattening") {
  Formula a = mk_cmp(CmpOp::Eq, mk_var("a", u8()), mk_const(0, u8()));
  Formula b = mk_cmp(CmpOp::Eq, mk_var("b", u8()), mk_const(0, u8()));
  Formula cd = mk_and(a, mk_and(b, mk_and(a, b)));
  CHECK(cd->args.size() == 4);
  CHECK(split_conjuncts(cd).size() == 4);
  CHECK(split_conjuncts(a).size() == 1);
}

TEST_CASE("width mismatch is rejected") {
  CHECK_THROWS_AS(mk_binary(TermOp::Add, mk_var("x", u8()), mk_var("y", u16())),
                  std::logic_error);
  CHECK_THROWS_AS(mk_cmp(CmpOp::Eq, mk_var("x", u8()), mk_var("y", u64())), std::logic_error);
}

TEST_CASE("substitution of state reads") {
  Term timer = mk_state_read("timer", u32());
  Formula post = mk_cmp(CmpOp::Eq, timer, mk_var("a", u32()));
  Subst s;
  s.state["timer"] = mk_binary(TermOp::Add, timer, mk_const(1, u32()));
  Formula wp = subst_formula(post, s);
  CHECK(formula_to_string(wp) ==
        "(eq (add (read timer u32) (const u32 1)) (var a u32))");
}

TEST_CASE("heap read-over-write respects types") {
  Term addr = mk_var("p", u64());
  Term rd_u32 = mk_heap_read(u32(), addr);
  Term rd_s32 = mk_heap_read(s32(), addr);
  Subst s;
  s.has_heap_write = true;
  s.heap_tag = u32();
  s.heap_addr = mk_var("q", u64());
  s.heap_value = mk_const(7, u32());
  Term w1 = subst_term(rd_u32, s);
  CHECK(w1->op == TermOp::Ite);  // same heap: conditional on address equality
  Term w2 = subst_term(rd_s32, s);
  CHECK(w2->op == TermOp::HeapRead);  // distinct heap: untouched
}

TEST_CASE("free variable collection is deterministic") {
  Term x = mk_var("x", u32());
  Term t = mk_binary(TermOp::Add, mk_state_read("g", u32()), x);
  Formula f =
      mk_and(mk_cmp(CmpOp::Eq, t, mk_var("a", u32())), mk_cmp(CmpOp::Ne, x, mk_const(0, u32())));
  FreeVars fv;
  collect_free(f, fv);
  CHECK(fv.vars.size() == 2);
  CHECK(fv.state.size() == 1);
  CHECK(fv.vars.begin()->first == "a");
}

TEST_CASE("evaluation") {
  ConcreteState st;
  st.set("timer", WordVal(41, u32()));
  std::map<std::string, WordVal> vars{{"a", WordVal(42, u32())}};
  StateValuation v(st, vars);
  Term timer = mk_state_read("timer", u32());
  Term incr = mk_binary(TermOp::Add, timer, mk_const(1, u32()));
  CHECK(eval_term(incr, v).raw == 42);
  CHECK(eval_formula(mk_cmp(CmpOp::Eq, incr, mk_var("a", u32())), v));
  Term ite = mk_ite(mk_cmp(CmpOp::Ult, timer, mk_const(10, u32())), mk_const(1, u32()),
                    mk_const(2, u32()));
  CHECK(eval_term(ite, v).raw == 2);
}

TEST_CASE("structural equality") {
  Term a = mk_binary(TermOp::BOr, mk_var("c", u64()), mk_const(3, u64()));
  Term b = mk_binary(TermOp::BOr, mk_var("c", u64()), mk_const(3, u64()));
  CHECK(term_equal(a, b));
  Term c = mk_binary(TermOp::BOr, mk_var("c", u64()), mk_const(4, u64()));
  CHECK(!term_equal(a, c));
}
