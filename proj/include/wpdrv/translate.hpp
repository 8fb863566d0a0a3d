// translate.hpp
// Lowers a checked unit: splits variables into a flattened globals record and
// per-function locals records, lowers each function to the deep embedding,
// then abstracts it to the monadic form, and computes modified-globals sets.

#pragma once

#include <map>
#include <set>

#include "wpdrv/ast.hpp"
#include "wpdrv/ir.hpp"

namespace wpdrv {

struct RecordField {
  LocId loc;                // flattened name, e.g. "tasks[3].start"
  WordType type;            // scalar storage type (pointers are u64)
  bool is_pointer = false;  // pointer-valued (incl. function pointers)
  uint64_t init_value = 0;  // evaluated initializer (0 when none)
  SourceLoc decl_loc;
};

struct GlobalsRecord {
  std::vector<RecordField> fields;  // declaration order

  const RecordField *find(const LocId &loc) const {
    for (const auto &f : fields)
      if (f.loc == loc) return &f;
    return nullptr;
  }
  bool contains(const LocId &loc) const { return find(loc) != nullptr; }
};

struct LocalsRecord {
  std::string function;
  std::vector<RecordField> fields;  // parameters first, then locals
};

// function name -> stable abstract code address (nonzero, injective)
struct SymbolTable {
  std::map<std::string, uint64_t> addr_of;
  std::map<uint64_t, std::string> name_of;

  uint64_t lookup(const std::string &name) const {
    auto it = addr_of.find(name);
    return it == addr_of.end() ? 0 : it->second;
  }
  const std::string *resolve(uint64_t addr) const {
    auto it = name_of.find(addr);
    return it == name_of.end() ? nullptr : &it->second;
  }
};

struct TranslatedFunction {
  std::string name;
  const FunctionDef *def = nullptr;  // owned by the unit's Ast
  bool skipped = false;              // dont_translate: excluded from verification
  bool lowered = false;              // deep/monadic forms available
  DeepPtr deep;
  MonPtr monadic;

  // parameters as free variables of the monadic form
  std::vector<std::string> param_vars;  // resolved names
  std::vector<WordType> param_types;
  std::set<std::string> params_in_state;  // parameters that are written (stay state-resident)

  bool has_result = false;
  WordType result_type;

  std::set<LocId> modifies;   // global fields possibly written
  bool modifies_top = false;  // unknown callees: all globals
  bool writes_heap = false;
};

struct TranslateOptions {
  bool skip_modifies = false;  // treat every function as modifying all globals
};

struct TranslationUnit {
  Ast ast;
  GlobalsRecord globals;
  std::map<std::string, LocalsRecord> locals;
  std::map<std::string, TranslatedFunction> functions;
  SymbolTable symbols;
  std::vector<Diagnostic> diags;

  bool ok() const { return !has_errors(diags); }
  const TranslatedFunction *find(const std::string &name) const {
    auto it = functions.find(name);
    return it == functions.end() ? nullptr : &it->second;
  }
};

// Individual passes (exposed for tests) ------------------------------------

// Flattens globals (and each function's params+locals) into scalar records.
void build_records(const Ast &ast, GlobalsRecord &globals,
                   std::map<std::string, LocalsRecord> &locals,
                   std::vector<Diagnostic> &diags);

SymbolTable build_symbol_table(const Ast &ast);

// Whole-unit translation: records, deep lowering, monadic abstraction,
// modifies fixpoint. `ast` must have passed typecheck and annotation parsing;
// functions rejected by the subset checker must carry dont_translate.
TranslationUnit translate_unit(Ast ast, const TranslateOptions &opts = {});

// Optional pass: arithmetic on words below 64 bits is recomputed at double
// width with explicit fit guards, so intermediate results can be read as
// unbounded integers. Bitwise operators stay at word level.
MonPtr abstract_words(const MonPtr &m);
Term abstract_words_term(const Term &t, std::vector<std::pair<Formula, GuardKind>> &obligations);

// dump-ir text for one function or the whole unit (deterministic)
std::string dump_ir(const TranslationUnit &unit);
std::string dump_ir_function(const TranslationUnit &unit, const std::string &name);

}  // namespace wpdrv
