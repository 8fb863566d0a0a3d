// ir.hpp
// The two program representations the verifier reasons over:
//  - DeepStmt: deeply embedded statements (Skip, Basic, Seq, Cond, Guard,
//    While, Call, Fail) whose structure mirrors the source;
//  - MonadicTerm: shallowly embedded state-monad programs (return, gets,
//    modify, bind, guard, condition, whileLoop, call, fail) that weakest
//    preconditions are computed on.
// CallPtr exists in both so the concrete interpreter can execute indirect
// calls; the verifier never accepts it (the subset checker rejects such
// functions unless they are marked dont_translate).

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wpdrv/diagnostics.hpp"
#include "wpdrv/formula.hpp"

namespace wpdrv {

using LocId = std::string;

struct LocWrite {
  LocId loc;
  Term value;
};

struct HeapWriteOp {
  WordType tag;
  Term addr;
  Term value;
};

// One atomic state update: simultaneous scalar writes, or one heap write.
struct StateUpdate {
  std::vector<LocWrite> writes;
  std::optional<HeapWriteOp> heap;

  bool empty() const { return writes.empty() && !heap; }
};

enum class GuardKind { NullCheck, Alignment, Bounds, DivByZero, Overflow };
const char *guard_kind_name(GuardKind k);

// --- deep embedding -------------------------------------------------------

struct DeepStmt;
using DeepPtr = std::shared_ptr<const DeepStmt>;

enum class DeepKind { Skip, Basic, Seq, Cond, Guard, While, Call, CallPtr, Fail };

struct DeepStmt {
  DeepKind kind = DeepKind::Skip;
  SourceLoc loc;

  StateUpdate update;   // Basic
  Formula cond;         // Cond / Guard / While condition
  GuardKind gkind = GuardKind::NullCheck;  // Guard
  DeepPtr s1, s2;       // Seq(s1,s2); Cond(then,else); Guard/While body in s1

  Formula invariant;    // While (may be null)
  Term measure;         // While (may be null)

  std::string callee;            // Call
  Term callee_addr;              // CallPtr: address expression
  std::vector<Term> args;        // Call/CallPtr
  std::optional<LocId> result;   // Call/CallPtr: location receiving the value
};

DeepPtr deep_skip(SourceLoc loc = {});
DeepPtr deep_basic(StateUpdate u, SourceLoc loc);
DeepPtr deep_seq(DeepPtr a, DeepPtr b);
DeepPtr deep_cond(Formula c, DeepPtr t, DeepPtr e, SourceLoc loc);
DeepPtr deep_guard(Formula c, GuardKind k, DeepPtr body, SourceLoc loc);
DeepPtr deep_while(Formula c, DeepPtr body, Formula inv, Term measure, SourceLoc loc);
DeepPtr deep_call(std::string callee, std::vector<Term> args, std::optional<LocId> result,
                  SourceLoc loc);
DeepPtr deep_callptr(Term addr, std::vector<Term> args, std::optional<LocId> result,
                     SourceLoc loc);
DeepPtr deep_fail(SourceLoc loc);

// --- shallow (monadic) embedding -------------------------------------------

struct MonadicTerm;
using MonPtr = std::shared_ptr<const MonadicTerm>;

enum class MonKind { Return, Gets, Modify, Bind, Guard, Condition, While, Call, CallPtr, Fail };

struct MonadicTerm {
  MonKind kind = MonKind::Return;
  SourceLoc loc;

  Term expr;            // Return value (null = unit); Gets projection
  StateUpdate update;   // Modify
  Formula cond;         // Guard / Condition / While
  GuardKind gkind = GuardKind::NullCheck;
  MonPtr m1, m2;        // Bind(m1, bound, m2); Condition(m1, m2); While body in m1
  std::string bound;    // Bind: name the result of m1 is bound to ("" = discard)

  Formula invariant;    // While
  Term measure;         // While

  std::string callee;
  Term callee_addr;
  std::vector<Term> args;
};

MonPtr mon_return(Term e, SourceLoc loc = {});
MonPtr mon_return_unit(SourceLoc loc = {});
MonPtr mon_gets(Term projection, SourceLoc loc = {});
MonPtr mon_modify(StateUpdate u, SourceLoc loc);
MonPtr mon_bind(MonPtr a, std::string bound, MonPtr b);
MonPtr mon_seq(MonPtr a, MonPtr b);  // bind with discarded result
MonPtr mon_guard(Formula c, GuardKind k, SourceLoc loc);
MonPtr mon_condition(Formula c, MonPtr t, MonPtr e, SourceLoc loc);
MonPtr mon_while(Formula c, MonPtr body, Formula inv, Term measure, SourceLoc loc);
MonPtr mon_call(std::string callee, std::vector<Term> args, SourceLoc loc);
MonPtr mon_callptr(Term addr, std::vector<Term> args, SourceLoc loc);
MonPtr mon_fail(SourceLoc loc);

// deterministic s-expression dumps
std::string deep_to_string(const DeepPtr &s, int indent = 0);
std::string monadic_to_string(const MonPtr &m, int indent = 0);

}  // namespace wpdrv
