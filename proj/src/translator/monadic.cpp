// Deep-to-shallow conversion. Locals are lifted out of the state wherever a
// forward value is known inside straight-line code: assignments to locals
// update a propagation environment instead of the state, call results become
// bind variables, and pending values are flushed back into the state at
// control-flow joins (condition, loop entry, loop back edge, branch ends).
// Read-only parameters become free variables of the resulting term.

#include <cassert>
#include <functional>
#include <map>

#include "wpdrv/translate.hpp"

namespace wpdrv {

DeepPtr lower_function_body(const Ast &ast, const GlobalsRecord &globals,
                            const SymbolTable &symbols, const FunctionDef &fn,
                            LocalsRecord &locals_rec, std::set<std::string> &params_written,
                            std::vector<Diagnostic> &diags, bool &ok);

namespace {

struct Abstraction {
  const GlobalsRecord &globals;
  const FunctionDef &fn;
  const std::set<std::string> &state_params;  // written parameters stay in state
  int bind_counter = 0;
  std::map<LocId, Term> env;  // pending local values

  Abstraction(const GlobalsRecord &g, const FunctionDef &f, const std::set<std::string> &sp)
      : globals(g), fn(f), state_params(sp) {}

  bool is_local(const LocId &loc) const {
    return loc.rfind(fn.name + "::", 0) == 0;
  }

  bool is_free_param(const LocId &loc) const {
    if (state_params.count(loc)) return false;
    for (const auto &p : fn.params)
      if (p.resolved == loc) return true;
    return false;
  }

  Term subst(const Term &t) {
    Subst s;
    for (const auto &[loc, v] : env) s.state[loc] = v;
    for (const auto &p : fn.params) {
      if (!state_params.count(p.resolved) && !env.count(p.resolved))
        s.state[p.resolved] = mk_var(p.resolved, scalar_of(p.type));
    }
    return fold_constants(subst_term(t, s));
  }

  Formula subst(const Formula &f) {
    Subst s;
    for (const auto &[loc, v] : env) s.state[loc] = v;
    for (const auto &p : fn.params) {
      if (!state_params.count(p.resolved) && !env.count(p.resolved))
        s.state[p.resolved] = mk_var(p.resolved, scalar_of(p.type));
    }
    return fold_constants(subst_formula(f, s));
  }

  static WordType scalar_of(const CTypePtr &t) {
    return t->is_pointer() ? pointer_word_type() : t->word;
  }

  std::string fresh_bind() {
    std::string n = bind_counter == 0 ? "ret" : "ret!" + std::to_string(bind_counter);
    ++bind_counter;
    return n;
  }

  MonPtr flush(SourceLoc loc) {
    if (env.empty()) return nullptr;
    StateUpdate u;
    for (const auto &[loc_id, v] : env) u.writes.push_back(LocWrite{loc_id, v});
    env.clear();
    return mon_modify(std::move(u), loc);
  }

  MonPtr seq_flush(MonPtr m, SourceLoc loc) {
    MonPtr f = flush(loc);
    return f ? mon_seq(std::move(m), std::move(f)) : m;
  }

  // Continuation transformer: abstract(s) yields a function placing the
  // abstraction of s in front of an already-built continuation. Building
  // happens left to right (so the propagation environment flows forward);
  // the continuation is plugged in afterwards, which lets a call result
  // bind scope over everything that follows.
  using Trans = std::function<MonPtr(MonPtr)>;

  static Trans identity() {
    return [](MonPtr k) { return k; };
  }

  Trans abstract(const DeepPtr &s) {
    if (!s) return identity();
    switch (s->kind) {
      case DeepKind::Skip:
        return identity();
      case DeepKind::Basic: {
        StateUpdate out;
        std::vector<std::pair<LocId, Term>> local_writes;
        for (const auto &w : s->update.writes) {
          Term v = subst(w.value);
          if (is_local(w.loc)) {
            local_writes.emplace_back(w.loc, v);
          } else {
            out.writes.push_back(LocWrite{w.loc, v});
          }
        }
        if (s->update.heap) {
          out.heap =
              HeapWriteOp{s->update.heap->tag, subst(s->update.heap->addr),
                          subst(s->update.heap->value)};
        }
        // locals: update the environment only
        for (auto &[loc, v] : local_writes) env[loc] = v;
        if (out.empty()) return identity();
        MonPtr node = mon_modify(std::move(out), s->loc);
        return [node](MonPtr k) { return mon_seq(node, std::move(k)); };
      }
      case DeepKind::Seq: {
        Trans a = abstract(s->s1);
        Trans b = abstract(s->s2);
        return [a, b](MonPtr k) { return a(b(std::move(k))); };
      }
      case DeepKind::Guard: {
        MonPtr node = mon_guard(subst(s->cond), s->gkind, s->loc);
        return [node](MonPtr k) { return mon_seq(node, std::move(k)); };
      }
      case DeepKind::Cond: {
        Formula c = subst(s->cond);
        MonPtr pre = flush(s->loc);
        MonPtr t = abstract_block(s->s1, s->loc);
        MonPtr e = abstract_block(s->s2, s->loc);
        MonPtr node = mon_condition(std::move(c),
                                    t ? t : mon_return_unit(s->loc),
                                    e ? e : mon_return_unit(s->loc), s->loc);
        if (pre) node = mon_seq(std::move(pre), std::move(node));
        return [node](MonPtr k) { return mon_seq(node, std::move(k)); };
      }
      case DeepKind::While: {
        MonPtr pre = flush(s->loc);
        // condition and annotations are evaluated per-iteration, with no
        // pending locals
        Formula c = subst(s->cond);
        MonPtr body = abstract_block(s->s1, s->loc);
        Formula inv = s->invariant ? fold_constants(param_subst(s->invariant)) : nullptr;
        Term meas = s->measure ? fold_constants(param_subst(s->measure)) : nullptr;
        MonPtr node = mon_while(std::move(c), body ? body : mon_return_unit(s->loc), inv, meas,
                                s->loc);
        if (pre) node = mon_seq(std::move(pre), std::move(node));
        return [node](MonPtr k) { return mon_seq(node, std::move(k)); };
      }
      case DeepKind::Call:
      case DeepKind::CallPtr: {
        std::vector<Term> args;
        for (const auto &a : s->args) args.push_back(subst(a));
        MonPtr call = s->kind == DeepKind::Call
                          ? mon_call(s->callee, std::move(args), s->loc)
                          : mon_callptr(subst(s->callee_addr), std::move(args), s->loc);
        if (!s->result) {
          return [call](MonPtr k) { return mon_seq(call, std::move(k)); };
        }
        const LocId &target = *s->result;
        WordType rt = result_type_of(target);
        std::string v = fresh_bind();
        if (is_local(target)) {
          env[target] = mk_var(v, rt);
          return [call, v](MonPtr k) { return mon_bind(call, v, std::move(k)); };
        }
        StateUpdate u;
        u.writes.push_back(LocWrite{target, mk_var(v, rt)});
        MonPtr st = mon_modify(std::move(u), s->loc);
        return [call, v, st](MonPtr k) { return mon_bind(call, v, mon_seq(st, std::move(k))); };
      }
      case DeepKind::Fail: {
        MonPtr node = mon_fail(s->loc);
        return [node](MonPtr) { return node; };
      }
    }
    return identity();
  }

  // parameters only (no pending locals): used under loop heads
  Term param_subst(const Term &t) {
    Subst s;
    for (const auto &p : fn.params) {
      if (!state_params.count(p.resolved))
        s.state[p.resolved] = mk_var(p.resolved, scalar_of(p.type));
    }
    return subst_term(t, s);
  }
  Formula param_subst(const Formula &f) {
    Subst s;
    for (const auto &p : fn.params) {
      if (!state_params.count(p.resolved))
        s.state[p.resolved] = mk_var(p.resolved, scalar_of(p.type));
    }
    return subst_formula(f, s);
  }

  WordType result_type_of(const LocId &target) const {
    // search locals, then globals
    if (is_local(target)) {
      // the locals record is not at hand here; call results always carry the
      // callee result type, recorded on the temp at lowering. The target was
      // added as a RecordField; look it up through the stored map.
      auto it = local_types.find(target);
      if (it != local_types.end()) return it->second;
      return u32();
    }
    const RecordField *f = globals.find(target);
    return f ? f->type : u32();
  }

  std::map<LocId, WordType> local_types;

  // abstract a branch/loop body with its own empty environment, flushing
  // pending locals at its end
  MonPtr abstract_block(const DeepPtr &s, SourceLoc loc) {
    assert(env.empty());
    Trans t = abstract(s);
    MonPtr f = flush(loc);
    MonPtr tail = f ? f : mon_return_unit(loc);
    MonPtr m = t(tail);
    env.clear();
    return m;
  }

  MonPtr run(const DeepPtr &body, bool has_result, WordType result_type) {
    Trans t = abstract(body);
    LocId res = fn.name + "::#result";
    MonPtr ret;
    if (has_result) {
      auto it = env.find(res);
      // pending locals at function exit are dead; only the propagated result
      // value survives, and its term was fully substituted at write time
      Term value = it != env.end() ? it->second : mk_state_read(res, result_type);
      ret = mon_return(value, body ? body->loc : SourceLoc{});
    } else {
      ret = mon_return_unit(body ? body->loc : SourceLoc{});
    }
    MonPtr m = t(std::move(ret));
    env.clear();
    return m;
  }
};

// modifies analysis over the deep form
struct ModAnalysis {
  const GlobalsRecord &globals;
  std::set<LocId> writes;
  std::set<std::string> callees;
  bool callptr = false;
  bool heap = false;

  void scan(const DeepPtr &s) {
    if (!s) return;
    switch (s->kind) {
      case DeepKind::Basic:
        for (const auto &w : s->update.writes)
          if (globals.contains(w.loc)) writes.insert(w.loc);
        if (s->update.heap) heap = true;
        return;
      case DeepKind::Call:
        callees.insert(s->callee);
        if (s->result && globals.contains(*s->result)) writes.insert(*s->result);
        return;
      case DeepKind::CallPtr:
        callptr = true;
        if (s->result && globals.contains(*s->result)) writes.insert(*s->result);
        return;
      default:
        scan(s->s1);
        scan(s->s2);
        return;
    }
  }
};

}  // namespace

TranslationUnit translate_unit(Ast ast, const TranslateOptions &opts) {
  TranslationUnit unit;
  unit.ast = std::move(ast);
  build_records(unit.ast, unit.globals, unit.locals, unit.diags);
  unit.symbols = build_symbol_table(unit.ast);

  // direct recursion (including cycles) is rejected
  {
    std::map<std::string, std::set<std::string>> calls;
    std::function<void(const StmtPtr &, std::set<std::string> &)> scan_stmt =
        [&](const StmtPtr &s, std::set<std::string> &out) {
          if (!s) return;
          std::function<void(const ExprPtr &)> scan_expr = [&](const ExprPtr &e) {
            if (!e) return;
            if (e->kind == ExprKind::Call && e->a && e->a->kind == ExprKind::Ident &&
                e->a->ref == RefKind::Function)
              out.insert(e->a->name);
            scan_expr(e->a);
            scan_expr(e->b);
            scan_expr(e->c);
            for (const auto &a : e->args) scan_expr(a);
          };
          scan_expr(s->expr);
          scan_expr(s->decl_init);
          scan_expr(s->for_cond);
          scan_expr(s->for_step);
          scan_stmt(s->for_init, out);
          scan_stmt(s->s1, out);
          scan_stmt(s->s2, out);
          for (const auto &inner : s->body) scan_stmt(inner, out);
          for (const auto &c : s->cases)
            for (const auto &inner : c.body) scan_stmt(inner, out);
        };
    for (const auto &fn : unit.ast.functions) {
      auto &out = calls[fn.name];
      for (const auto &s : fn.body) scan_stmt(s, out);
    }
    // DFS cycle detection
    std::map<std::string, int> color;  // 0 white, 1 grey, 2 black
    std::function<bool(const std::string &, std::vector<std::string> &)> dfs =
        [&](const std::string &f, std::vector<std::string> &path) -> bool {
      color[f] = 1;
      path.push_back(f);
      for (const auto &g : calls[f]) {
        if (color[g] == 1) {
          path.push_back(g);
          return true;
        }
        if (color[g] == 0 && dfs(g, path)) return true;
      }
      color[f] = 2;
      path.pop_back();
      return false;
    };
    for (const auto &fn : unit.ast.functions) {
      if (color[fn.name] != 0) continue;
      std::vector<std::string> path;
      if (dfs(fn.name, path)) {
        const FunctionDef *f = unit.ast.find_function(path.front());
        unit.diags.push_back(make_error(
            "recursion", f ? f->loc : SourceLoc{},
            "recursive calls are not supported (cycle through '" + path.back() + "')"));
        break;
      }
    }
  }

  for (const auto &fn : unit.ast.functions) {
    TranslatedFunction tf;
    tf.name = fn.name;
    tf.def = &fn;
    tf.skipped = fn.spec.dont_translate;
    tf.has_result = !fn.type->result->is_void();
    if (tf.has_result) {
      tf.result_type = fn.type->result->is_pointer() ? pointer_word_type()
                                                     : fn.type->result->word;
    }
    for (const auto &p : fn.params) {
      tf.param_vars.push_back(p.resolved);
      tf.param_types.push_back(p.type->is_pointer() ? pointer_word_type() : p.type->word);
    }
    if (fn.defined) {
      // the result cell participates in the locals record
      if (tf.has_result)
        unit.locals[fn.name].fields.push_back(
            RecordField{fn.name + "::#result", tf.result_type, false, 0, fn.loc});
      bool ok = false;
      std::set<std::string> params_written;
      DeepPtr body = lower_function_body(unit.ast, unit.globals, unit.symbols, fn,
                                         unit.locals[fn.name], params_written, unit.diags, ok);
      if (ok) {
        tf.deep = body ? body : deep_skip(fn.loc);
        tf.params_in_state = params_written;
        Abstraction abs(unit.globals, fn, tf.params_in_state);
        for (const auto &f : unit.locals[fn.name].fields) abs.local_types[f.loc] = f.type;
        tf.monadic = abs.run(tf.deep, tf.has_result, tf.result_type);
        tf.lowered = true;
      }
    }
    unit.functions.emplace(fn.name, std::move(tf));
  }

  // modifies fixpoint over the call graph
  std::map<std::string, ModAnalysis> mods;
  for (auto &[name, tf] : unit.functions) {
    ModAnalysis m{unit.globals, {}, {}, false, false};
    if (tf.lowered) {
      m.scan(tf.deep);
    } else {
      m.callptr = true;  // unknown body: all globals
    }
    if (opts.skip_modifies) m.callptr = true;
    mods.emplace(name, std::move(m));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto &[name, m] : mods) {
      for (const auto &callee : m.callees) {
        auto it = mods.find(callee);
        if (it == mods.end()) {
          if (!m.callptr) {
            m.callptr = true;
            changed = true;
          }
          continue;
        }
        if (it->second.callptr && !m.callptr) {
          m.callptr = true;
          changed = true;
        }
        if (it->second.heap && !m.heap) {
          m.heap = true;
          changed = true;
        }
        for (const auto &w : it->second.writes) {
          if (m.writes.insert(w).second) changed = true;
        }
      }
    }
  }
  for (auto &[name, tf] : unit.functions) {
    auto &m = mods.at(name);
    tf.modifies_top = m.callptr;
    tf.writes_heap = m.heap || m.callptr;
    if (m.callptr) {
      for (const auto &f : unit.globals.fields) tf.modifies.insert(f.loc);
    } else {
      tf.modifies = m.writes;
    }
  }
  return unit;
}

std::string dump_ir_function(const TranslationUnit &unit, const std::string &name) {
  const TranslatedFunction *tf = unit.find(name);
  if (!tf) return "";
  std::string out = "(function " + name + "\n";
  if (tf->skipped) out += "  (skipped dont_translate)\n";
  if (!tf->param_vars.empty()) {
    out += "  (params";
    for (const auto &p : tf->param_vars) out += " " + p;
    out += ")\n";
  }
  {
    out += "  (modifies";
    if (tf->modifies_top) {
      out += " <all>";
    } else {
      for (const auto &m : tf->modifies) out += " " + m;
    }
    out += ")\n";
  }
  if (tf->lowered) {
    out += "  (deep\n" + deep_to_string(tf->deep, 2) + ")\n";
    out += "  (monadic\n" + monadic_to_string(tf->monadic, 2) + ")\n";
  } else {
    out += "  (not-lowered)\n";
  }
  out += ")\n";
  return out;
}

std::string dump_ir(const TranslationUnit &unit) {
  std::string out;
  out += "(globals";
  for (const auto &f : unit.globals.fields)
    out += " (" + f.loc + " " + (f.type.is_signed ? "s" : "u") + std::to_string(f.type.bits) +
           ")";
  out += ")\n";
  for (const auto &fn : unit.ast.functions) {
    if (!fn.defined) continue;
    out += dump_ir_function(unit, fn.name);
  }
  return out;
}

}  // namespace wpdrv
