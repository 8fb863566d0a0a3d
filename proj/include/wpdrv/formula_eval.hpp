// formula_eval.hpp
// Concrete evaluation of terms and formulas under a valuation. Used by the
// interpreter for guards and conditions, by the oracle for pre/post checks,
// and by the solver to validate counterexamples.

#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "wpdrv/formula.hpp"
#include "wpdrv/state.hpp"

namespace wpdrv {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Valuation {
 public:
  virtual ~Valuation() = default;
  virtual WordVal state(const std::string &loc, WordType t) const = 0;
  virtual WordVal var(const std::string &name, WordType t) const = 0;
  virtual WordVal heap(WordType tag, uint64_t addr) const = 0;
  virtual WordVal old_state(const std::string &loc, WordType t) const {
    (void)loc;
    (void)t;
    throw EvalError("\\old read with no pre-state available");
  }
};

// Valuation over a concrete state plus an environment of bound variables.
class StateValuation : public Valuation {
 public:
  StateValuation(const ConcreteState &s, const std::map<std::string, WordVal> &vars,
                 const ConcreteState *old_s = nullptr)
      : state_(s), vars_(vars), old_(old_s) {}

  WordVal state(const std::string &loc, WordType t) const override {
    return state_.get(loc, t);
  }
  WordVal var(const std::string &name, WordType t) const override {
    auto it = vars_.find(name);
    if (it == vars_.end()) throw EvalError("unbound variable: " + name);
    return WordVal(it->second.raw, t);
  }
  WordVal heap(WordType tag, uint64_t addr) const override {
    return state_.heaps.read(tag, addr);
  }
  WordVal old_state(const std::string &loc, WordType t) const override {
    if (!old_) return Valuation::old_state(loc, t);
    return old_->get(loc, t);
  }

 private:
  const ConcreteState &state_;
  const std::map<std::string, WordVal> &vars_;
  const ConcreteState *old_;
};

// Flat assignment: state reads, variables and heap-read surrogates all live
// in one name -> value map. Missing names default to 0 (the solver reports
// only the bits it constrained).
class AssignmentValuation : public Valuation {
 public:
  explicit AssignmentValuation(const std::map<std::string, WordVal> &a) : a_(a) {}

  WordVal state(const std::string &loc, WordType t) const override { return lookup(loc, t); }
  WordVal var(const std::string &name, WordType t) const override { return lookup(name, t); }
  WordVal old_state(const std::string &loc, WordType t) const override {
    return lookup("\\old(" + loc + ")", t);
  }
  WordVal heap(WordType tag, uint64_t addr) const override;

  // key used for a heap cell in flat assignments
  static std::string heap_key(WordType tag, uint64_t addr);

 private:
  WordVal lookup(const std::string &k, WordType t) const {
    auto it = a_.find(k);
    return it == a_.end() ? WordVal(0, t) : WordVal(it->second.raw, t);
  }
  const std::map<std::string, WordVal> &a_;
};

WordVal eval_term(const Term &t, const Valuation &v);
bool eval_formula(const Formula &f, const Valuation &v);

}  // namespace wpdrv
