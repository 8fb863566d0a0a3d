#include "wpdrv/annotations.hpp"

#include <algorithm>
#include <cctype>

#include "wpdrv/parser.hpp"
#include "wpdrv/typecheck.hpp"

namespace wpdrv {

namespace {

struct Clause {
  std::string keyword;
  std::string text;
  SourceLoc loc;       // of the keyword
  SourceLoc text_loc;  // of the formula text
};

bool loc_less(SourceLoc a, SourceLoc b) {
  return a.line < b.line || (a.line == b.line && a.col < b.col);
}

// Split the interior of an annotation comment into clauses. `origin` is the
// location of the first interior character.
std::vector<Clause> split_clauses(const std::string &text, SourceLoc origin,
                                  std::vector<Diagnostic> &diags) {
  std::vector<Clause> out;
  size_t i = 0;
  int line = origin.line, col = origin.col;
  auto advance_to = [&](size_t j) {
    for (; i < j && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  // skip the leading '@'
  size_t begin = text.find('@');
  if (begin != std::string::npos) advance_to(begin + 1);
  size_t end = text.size();
  // drop a trailing '@' (the `@*/` closer)
  size_t last = text.find_last_not_of(" \t\r\n");
  if (last != std::string::npos && text[last] == '@') end = last;

  while (i < end) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      advance_to(i + 1);
      continue;
    }
    SourceLoc kw_loc{line, col};
    size_t kw_start = i;
    while (i < end && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
      advance_to(i + 1);
    }
    std::string keyword = text.substr(kw_start, i - kw_start);
    if (keyword.empty()) {
      diags.push_back(make_error("annotation", kw_loc, "expected a clause keyword"));
      return out;
    }
    // skip whitespace before the clause body
    while (i < end && std::isspace(static_cast<unsigned char>(text[i]))) advance_to(i + 1);
    SourceLoc body_loc{line, col};
    size_t body_start = i;
    while (i < end && text[i] != ';') advance_to(i + 1);
    std::string body = text.substr(body_start, i - body_start);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back())))
      body.pop_back();
    if (i < end) advance_to(i + 1);  // ';'
    out.push_back(Clause{keyword, body, kw_loc, body_loc});
  }
  return out;
}

struct Attacher {
  Ast &ast;
  const TokenStream &ts;
  std::vector<Diagnostic> diags;

  struct LoopPoint {
    Stmt *stmt;
    SourceLoc loc;
    FunctionDef *fn;
  };
  std::vector<LoopPoint> loops;

  explicit Attacher(Ast &a, const TokenStream &t) : ast(a), ts(t) {
    for (auto &fn : ast.functions)
      for (auto &s : fn.body) collect_loops(s, fn);
  }

  void collect_loops(const StmtPtr &s, FunctionDef &fn) {
    if (!s) return;
    if (s->kind == StmtKind::While || s->kind == StmtKind::For || s->kind == StmtKind::DoWhile)
      loops.push_back(LoopPoint{s.get(), s->loc, &fn});
    for (const auto &inner : s->body) collect_loops(inner, fn);
    collect_loops(s->s1, fn);
    collect_loops(s->s2, fn);
    collect_loops(s->for_init, fn);
    for (const auto &c : s->cases)
      for (const auto &inner : c.body) collect_loops(inner, fn);
  }

  // first source token at or after `l`
  const Token *next_token_after(SourceLoc l) const {
    const Token *best = nullptr;
    for (const auto &t : ts.tokens) {
      if (t.kind == Tok::End) continue;
      if (loc_less(l, t.loc)) {
        if (!best || loc_less(t.loc, best->loc)) best = &t;
      }
    }
    return best;
  }

  void run() {
    for (const auto &c : ts.comments) {
      // annotation comments start with '@'
      size_t first = c.text.find_first_not_of(" \t");
      if (first == std::string::npos || c.text[first] != '@') continue;
      process(c);
    }
    // spec-level consistency: total specs need loop annotations
    for (auto &fn : ast.functions) {
      if (!fn.spec.present || !fn.spec.total || fn.spec.dont_translate) continue;
      for (const auto &lp : loops) {
        if (lp.fn != &fn) continue;
        if (!lp.stmt->loop_spec.present || !lp.stmt->loop_spec.invariant ||
            !lp.stmt->loop_spec.measure) {
          diags.push_back(make_error(
              "spec", lp.loc,
              "total-correctness spec on '" + fn.name +
                  "' requires an invariant and a measure for this loop"));
        }
      }
    }
  }

  void process(const CommentTrivia &c) {
    SourceLoc interior{c.loc.line, c.loc.col + 2};  // skip "/*"
    auto clauses = split_clauses(c.text, interior, diags);
    if (clauses.empty()) return;

    const Token *next = next_token_after(c.loc);
    if (!next) {
      diags.push_back(make_error("annotation", c.loc, "annotation at end of input"));
      return;
    }
    // function whose declaration starts exactly at the next token
    FunctionDef *fn = nullptr;
    for (auto &f : ast.functions)
      if (f.decl_start == next->loc) fn = &f;
    Stmt *loop = nullptr;
    FunctionDef *loop_fn = nullptr;
    for (const auto &lp : loops) {
      if (lp.loc == next->loc) {
        loop = lp.stmt;
        loop_fn = lp.fn;
      }
    }

    bool has_loop_clause = false, has_fn_clause = false;
    for (const auto &cl : clauses) {
      if (cl.keyword == "invariant" || cl.keyword == "measure") has_loop_clause = true;
      else has_fn_clause = true;
    }

    if (loop) {
      if (has_fn_clause) {
        diags.push_back(make_error("annotation", clauses[0].loc,
                                   "function clauses cannot be attached to a loop"));
        return;
      }
      attach_loop(*loop, *loop_fn, clauses);
      return;
    }
    if (fn) {
      if (has_loop_clause) {
        diags.push_back(make_error("annotation", clauses[0].loc,
                                   "invariant/measure must precede a loop"));
        return;
      }
      attach_function(*fn, clauses, c.loc);
      return;
    }
    diags.push_back(make_error("annotation", c.loc,
                               "annotation does not precede a function or a loop"));
  }

  void attach_function(FunctionDef &fn, const std::vector<Clause> &clauses, SourceLoc loc) {
    if (fn.spec.present) {
      diags.push_back(make_error("annotation", loc,
                                 "function '" + fn.name + "' already has a specification"));
      return;
    }
    fn.spec.present = true;
    fn.spec.loc = loc;
    std::vector<ExprPtr> requires_list, ensures_list;
    for (const auto &cl : clauses) {
      if (cl.keyword == "total") {
        fn.spec.total = true;
      } else if (cl.keyword == "dont_translate") {
        fn.spec.dont_translate = true;
      } else if (cl.keyword == "requires" || cl.keyword == "ensures") {
        if (cl.text.empty()) {
          diags.push_back(make_error("annotation", cl.loc, cl.keyword + " needs a formula"));
          continue;
        }
        ExprPtr e = parse_expression_text(cl.text, cl.text_loc, diags);
        if (!e) continue;
        AnnotationScope scope{ast, fn, fn.spec, /*allow_locals=*/false,
                              /*in_ensures=*/cl.keyword == "ensures"};
        if (!typecheck_annotation(e, scope, diags)) continue;
        (cl.keyword == "requires" ? requires_list : ensures_list).push_back(e);
      } else {
        diags.push_back(
            make_error("annotation", cl.loc, "unknown clause '" + cl.keyword + "'"));
      }
    }
    fn.spec.requires_e = conjoin(requires_list);
    fn.spec.ensures_e = conjoin(ensures_list);
  }

  void attach_loop(Stmt &loop, FunctionDef &fn, const std::vector<Clause> &clauses) {
    loop.loop_spec.present = true;
    loop.loop_spec.loc = loop.loc;
    std::vector<ExprPtr> invariants;
    for (const auto &cl : clauses) {
      if (cl.text.empty()) {
        diags.push_back(make_error("annotation", cl.loc, cl.keyword + " needs a formula"));
        continue;
      }
      ExprPtr e = parse_expression_text(cl.text, cl.text_loc, diags);
      if (!e) continue;
      AnnotationScope scope{ast, fn, fn.spec, /*allow_locals=*/true, /*in_ensures=*/false};
      if (!typecheck_annotation(e, scope, diags)) continue;
      if (cl.keyword == "invariant") {
        invariants.push_back(e);
      } else {
        if (loop.loop_spec.measure)
          diags.push_back(make_error("annotation", cl.loc, "loop already has a measure"));
        if (e->type && !e->type->is_word())
          diags.push_back(make_error("annotation", cl.loc, "measure must be word-valued"));
        loop.loop_spec.measure = e;
      }
    }
    if (!invariants.empty()) loop.loop_spec.invariant = conjoin(invariants);
  }

  static ExprPtr conjoin(const std::vector<ExprPtr> &es) {
    if (es.empty()) return nullptr;
    ExprPtr acc = es[0];
    for (size_t i = 1; i < es.size(); ++i) {
      auto e = std::make_shared<Expr>();
      e->kind = ExprKind::Binary;
      e->bin = BinOp::LogAnd;
      e->loc = es[i]->loc;
      e->a = acc;
      e->b = es[i];
      e->type = make_word_type(s32());
      acc = e;
    }
    return acc;
  }
};

}  // namespace

AnnotateResult parse_annotations(Ast &ast, const TokenStream &tokens) {
  Attacher a(ast, tokens);
  a.run();
  return AnnotateResult{std::move(a.diags)};
}

}  // namespace wpdrv
