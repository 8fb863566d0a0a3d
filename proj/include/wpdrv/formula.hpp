// formula.hpp
// Quantifier-free predicate language over fixed-width words: global-record
// field reads, local/logical variables, typed-heap reads, bitwise and modular
// arithmetic, comparisons, boolean connectives, and pre-state reads.
//
// Terms are word-valued, formulas are boolean-valued; both are immutable
// shared DAGs. Width and signedness are checked at construction.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "wpdrv/word.hpp"

namespace wpdrv {

struct TermNode;
struct FormulaNode;
using Term = std::shared_ptr<const TermNode>;
using Formula = std::shared_ptr<const FormulaNode>;

enum class TermOp {
  Const,
  Var,        // local, parameter, logical label, or havoc variable
  StateRead,  // global-record field (flattened scalar location)
  OldRead,    // \old(global); eliminated by vcgen before solving
  HeapRead,   // typed-heap read heap_tau(addr)
  Neg,
  BNot,
  Add,
  Sub,
  Mul,
  UDiv,
  URem,
  BAnd,
  BOr,
  BXor,
  Shl,
  LShr,
  AShr,
  Ite,
  ZExt,
  SExt,
  Trunc,
};

enum class CmpOp { Eq, Ne, Ult, Ule, Slt, Sle };

enum class FormulaOp { True, False, Cmp, Not, And, Or, Implies };

struct TermNode {
  TermOp op;
  WordType type;      // result type
  WordVal value;      // Const
  std::string name;   // Var / StateRead / OldRead
  WordType heap_tag;  // HeapRead: which typed heap
  Term a, b;          // operands (HeapRead: a = address)
  Formula cond;       // Ite
};

struct FormulaNode {
  FormulaOp op;
  CmpOp cmp = CmpOp::Eq;       // Cmp
  Term lhs, rhs;               // Cmp
  std::vector<Formula> args;   // Not: 1, Implies: 2, And/Or: n
};

// --- constructors -------------------------------------------------------

Term mk_const(WordVal v);
Term mk_const(uint64_t v, WordType t);
Term mk_var(std::string name, WordType t);
Term mk_state_read(std::string loc, WordType t);
Term mk_old_read(std::string loc, WordType t);
Term mk_heap_read(WordType tag, Term addr);  // addr must be u64
Term mk_unary(TermOp op, Term a);
Term mk_binary(TermOp op, Term a, Term b);
Term mk_ite(Formula c, Term a, Term b);
Term mk_extend(TermOp op, Term a, WordType target);  // ZExt/SExt/Trunc
// Zero- or sign-extend / truncate / reinterpret `a` to exactly `target`,
// choosing the conversion from the source type (no-op when widths match).
Term mk_convert(Term a, WordType target);

Formula mk_true();
Formula mk_false();
Formula mk_cmp(CmpOp op, Term a, Term b);
Formula mk_not(Formula f);
Formula mk_and(std::vector<Formula> fs);  // flattens nested Ands
Formula mk_or(std::vector<Formula> fs);   // flattens nested Ors
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
Formula mk_bool(bool b);

// --- printing -----------------------------------------------------------

std::string term_to_string(const Term &t);
std::string formula_to_string(const Formula &f);

// --- structure ----------------------------------------------------------

struct FreeVars {
  // name -> type, gathered deterministically (ordered maps)
  std::map<std::string, WordType> vars;
  std::map<std::string, WordType> state;
  std::map<std::string, WordType> old_state;
  // every distinct HeapRead node in the DAG (tag + address term)
  std::vector<Term> heap_reads;
};

void collect_free(const Term &t, FreeVars &out);
void collect_free(const Formula &f, FreeVars &out);

// Structural equality (DAG-aware).
bool term_equal(const Term &a, const Term &b);
bool formula_equal(const Formula &a, const Formula &b);

// --- substitution -------------------------------------------------------

// Simultaneous substitution. Heap writes apply the read-over-write rule:
// a read on the written heap becomes ite(addr = written, value, read),
// reads on other typed heaps are untouched.
struct Subst {
  std::map<std::string, Term> state;
  std::map<std::string, Term> vars;
  std::map<std::string, Term> old_state;
  bool has_heap_write = false;
  WordType heap_tag;
  Term heap_addr, heap_value;
};

Term subst_term(const Term &t, const Subst &s);
Formula subst_formula(const Formula &f, const Subst &s);

// Split top-level conjunction into conjuncts (returns {f} when not an And).
std::vector<Formula> split_conjuncts(const Formula &f);

// Light normalization used during translation: constant folding, identity
// elimination (x|0, x+0, x&~0, ...), and merging of constant operands across
// associative bitwise/add chains, e.g. (x|2)|1 -> x|3. The heavyweight
// equivalence-preserving simplifier lives in the solver.
Term fold_constants(const Term &t);
Formula fold_constants(const Formula &f);

}  // namespace wpdrv
