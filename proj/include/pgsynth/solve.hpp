#pragma once

// Deciding 2-QBF problems: an exhaustive lexicographic evaluator (the desk
// oracle), a counterexample-guided expansion solver for synthesis-scale
// formulas, the backend abstraction, and per-variable strategy extraction
// for backends that report no witness.

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pgsynth/formula.hpp"
#include "pgsynth/qbf.hpp"
#include "pgsynth/sat.hpp"

namespace pgsynth {

struct BruteForceCaps {
  int max_strategy_vars = 22;
  int max_universal_vars = 24;
};

namespace detail {

inline void add_lowered_clauses(SatSolver& sat, const LoweredFormula& f,
                                int gate_var_base) {
  auto to_sat = [&](int lit) {
    int var;
    if (f.lit_is_gate(lit))
      var = gate_var_base + f.lit_gate_index(lit);
    else
      var = f.lit_var(lit);
    return SatSolver::lit(var, lit > 0);
  };
  for (const auto& cl : tseitin_clauses(f)) {
    std::vector<int> mapped;
    mapped.reserve(cl.size());
    for (int l : cl) mapped.push_back(to_sat(l));
    sat.add_clause(std::move(mapped));
  }
}

/// SAT check of a lowered formula conjoined with `assert_output`.
/// Gate variables start right after the problem variables.
inline bool sat_check(const LoweredFormula& f, bool assert_output,
                      std::vector<bool>* model) {
  if (f.is_const) {
    if (f.const_value != assert_output) return false;
    if (model) model->assign(f.nvars, false);
    return true;
  }
  SatSolver sat;
  sat.ensure_vars(f.nvars + static_cast<int>(f.gates.size()));
  add_lowered_clauses(sat, f, f.nvars);
  int out_var = f.lit_is_gate(f.output) ? f.nvars + f.lit_gate_index(f.output)
                                        : f.lit_var(f.output);
  bool out_sign = (f.output > 0) == assert_output;
  sat.add_clause({SatSolver::lit(out_var, out_sign)});
  if (!sat.solve()) return false;
  if (model) {
    model->assign(f.nvars, false);
    for (int v = 0; v < f.nvars; ++v) (*model)[v] = sat.model_value(v);
  }
  return true;
}

}  // namespace detail

/// Exact evaluation of the 2-QBF prefix by lexicographic enumeration of the
/// strategy block; the universal check per candidate searches for a
/// falsifying assignment. Returns the lexicographically first witness.
inline SolveResult eval_bruteforce(const QbfProblem& q,
                                   const BruteForceCaps& caps = {}) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> strategy = q.strategy_vars();
  std::vector<int> universal = q.universal_vars();
  if (!q.aux_vars().empty())
    throw ArgumentError("eval_bruteforce does not take aux variables");
  if (static_cast<int>(strategy.size()) > caps.max_strategy_vars)
    throw ResourceError("strategy variable cap exceeded: " +
                        std::to_string(strategy.size()));
  if (static_cast<int>(universal.size()) > caps.max_universal_vars)
    throw ResourceError("universal variable cap exceeded: " +
                        std::to_string(universal.size()));

  LoweredFormula f = q.lowered();
  SolveResult result;
  result.solver_name = "bruteforce";

  auto finish = [&](SolveStatus st) {
    result.status = st;
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return result;
  };

  if (f.is_const) {
    if (f.const_value) {
      for (int v : strategy) result.witness[v] = false;
      return finish(SolveStatus::Sat);
    }
    return finish(SolveStatus::Unsat);
  }

  std::vector<std::vector<bool>> counterexamples;  // full assignments
  const std::size_t kMaxCached = 128;

  std::size_t k = strategy.size();
  if (k > 63) throw ResourceError("strategy block too wide to enumerate");
  std::vector<bool> values(f.nvars, false);
  std::vector<char> assigned(f.nvars, 0);
  for (int v : strategy) assigned[v] = 1;

  for (std::uint64_t pattern = 0;; ++pattern) {
    if (k < 64 && pattern >= (std::uint64_t{1} << k)) break;
    // First strategy variable is the most significant bit: false < true.
    for (std::size_t i = 0; i < k; ++i)
      values[strategy[i]] = ((pattern >> (k - 1 - i)) & 1) != 0;

    bool killed = false;
    for (const auto& u : counterexamples) {
      std::vector<bool> full = u;
      for (std::size_t i = 0; i < k; ++i)
        full[strategy[i]] = values[strategy[i]];
      if (!eval_lowered(f, full)) {
        killed = true;
        break;
      }
    }
    if (killed) {
      if (k == 0) return finish(SolveStatus::Unsat);
      continue;
    }

    LoweredFormula folded = fold_lowered(f, assigned, values);
    std::vector<bool> cex;
    bool falsifiable = detail::sat_check(folded, false, &cex);
    if (!falsifiable) {
      for (std::size_t i = 0; i < k; ++i)
        result.witness[strategy[i]] = values[strategy[i]];
      return finish(SolveStatus::Sat);
    }
    if (counterexamples.size() < kMaxCached) counterexamples.push_back(cex);
    if (k == 0) return finish(SolveStatus::Unsat);
  }
  return finish(SolveStatus::Unsat);
}

struct CegarOptions {
  std::int64_t max_refinements = 200000;
};

/// Counterexample-guided expansion for the same prefix shape: iterate
/// candidate strategy assignments from a growing SAT abstraction, check each
/// against all universal assignments, and refine with the failing one.
inline SolveResult solve_cegar(const QbfProblem& q,
                               const CegarOptions& opts = {}) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<int> strategy = q.strategy_vars();
  if (!q.aux_vars().empty())
    throw ArgumentError("solve_cegar does not take aux variables");

  LoweredFormula f = q.lowered();
  SolveResult result;
  result.solver_name = "cegar";
  auto finish = [&](SolveStatus st) {
    result.status = st;
    result.seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return result;
  };

  if (f.is_const) {
    if (f.const_value) {
      for (int v : strategy) result.witness[v] = false;
      return finish(SolveStatus::Sat);
    }
    return finish(SolveStatus::Unsat);
  }

  std::vector<char> strategy_mask(f.nvars, 0);
  for (int v : strategy) strategy_mask[v] = 1;
  std::vector<char> universal_mask(f.nvars, 0);
  for (int v = 0; v < f.nvars; ++v)
    if (!strategy_mask[v]) universal_mask[v] = 1;

  SatSolver outer;
  outer.ensure_vars(f.nvars);

  std::vector<bool> values(f.nvars, false);

  for (std::int64_t round = 0; round < opts.max_refinements; ++round) {
    if (!outer.solve()) return finish(SolveStatus::Unsat);
    for (int v : strategy) values[v] = outer.model_value(v);

    LoweredFormula under_s = fold_lowered(f, strategy_mask, values);
    std::vector<bool> cex;
    bool falsified;
    if (under_s.is_const) {
      falsified = !under_s.const_value;
      cex.assign(f.nvars, false);
    } else {
      falsified = detail::sat_check(under_s, false, &cex);
    }
    if (!falsified) {
      for (int v : strategy) result.witness[v] = values[v];
      return finish(SolveStatus::Sat);
    }

    // Refine: the matrix under this universal assignment must hold.
    std::vector<bool> uvals(f.nvars, false);
    for (int v = 0; v < f.nvars; ++v)
      if (universal_mask[v] && v < static_cast<int>(cex.size()))
        uvals[v] = cex[v];
    LoweredFormula under_u = fold_lowered(f, universal_mask, uvals);
    if (under_u.is_const) {
      if (!under_u.const_value) return finish(SolveStatus::Unsat);
      // Constraint vacuous; forbid the candidate directly to progress.
      std::vector<int> block;
      for (int v : strategy)
        block.push_back(SatSolver::lit(v, !values[v]));
      if (block.empty()) return finish(SolveStatus::Unsat);
      outer.add_clause(std::move(block));
      continue;
    }
    int gate_base = outer.num_vars();
    for (std::size_t g = 0; g < under_u.gates.size(); ++g) outer.new_var();
    detail::add_lowered_clauses(outer, under_u, gate_base);
    int out_var = under_u.lit_is_gate(under_u.output)
                      ? gate_base + under_u.lit_gate_index(under_u.output)
                      : under_u.lit_var(under_u.output);
    outer.add_clause({SatSolver::lit(out_var, under_u.output > 0)});
  }
  return finish(SolveStatus::Unknown);
}

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  virtual SolveResult solve(const QbfProblem& q) = 0;
  virtual std::string name() const = 0;
};

class InternalBackend : public SolverBackend {
 public:
  enum class Mode { Cegar, BruteForce };

  explicit InternalBackend(Mode mode = Mode::Cegar, BruteForceCaps caps = {})
      : mode_(mode), caps_(caps) {}

  SolveResult solve(const QbfProblem& q) override {
    if (mode_ == Mode::BruteForce) return eval_bruteforce(q, caps_);
    return solve_cegar(q);
  }

  std::string name() const override {
    return mode_ == Mode::BruteForce ? "internal-bruteforce" : "internal-cegar";
  }

 private:
  Mode mode_;
  BruteForceCaps caps_;
};

struct ExtractionError : NetError {
  using NetError::NetError;
};

/// Assignment over the strategy variables that makes the universal part
/// hold. Backends that produce a witness short-circuit; otherwise each
/// variable is probed by pinning it true and re-solving.
inline std::map<int, bool> extract_strategy(const QbfProblem& q,
                                            SolverBackend& backend) {
  SolveResult first = backend.solve(q);
  if (first.status != SolveStatus::Sat)
    throw ExtractionError("backend did not report SAT");
  if (!first.witness.empty()) return first.witness;

  std::vector<int> strategy = q.strategy_vars();
  std::map<int, bool> pinned;
  for (int v : strategy) {
    QbfProblem probe;
    probe.vars = q.vars;
    probe.store = q.store;
    probe.kind = q.kind;
    probe.n = q.n;
    probe.bound = q.bound;
    std::vector<NodeId_t> conj{q.matrix};
    for (const auto& [pv, val] : pinned) {
      NodeId_t lit = probe.store.mk_var(pv);
      conj.push_back(val ? lit : probe.store.mk_not(lit));
    }
    conj.push_back(probe.store.mk_var(v));
    probe.matrix = probe.store.mk_and(std::move(conj));
    SolveResult r = backend.solve(probe);
    pinned[v] = (r.status == SolveStatus::Sat);
    if (r.status == SolveStatus::Unknown)
      throw ExtractionError("backend returned unknown during probing");
  }

  // One final solve with everything pinned guards against an inconsistent
  // backend.
  QbfProblem check;
  check.vars = q.vars;
  check.store = q.store;
  check.kind = q.kind;
  check.n = q.n;
  check.bound = q.bound;
  std::vector<NodeId_t> conj{q.matrix};
  for (const auto& [pv, val] : pinned) {
    NodeId_t lit = check.store.mk_var(pv);
    conj.push_back(val ? lit : check.store.mk_not(lit));
  }
  check.matrix = check.store.mk_and(std::move(conj));
  if (backend.solve(check).status != SolveStatus::Sat)
    throw ExtractionError("pinned assignment no longer satisfiable");
  return pinned;
}

}  // namespace pgsynth
