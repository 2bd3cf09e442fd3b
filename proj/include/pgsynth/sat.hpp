#pragma once

// Compact CDCL SAT solver: two-watched literals, first-UIP learning,
// activity-based branching, phase saving, geometric restarts. Sized for the
// formulas this project produces, not for competition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace pgsynth {

class SatSolver {
 public:
  // Literal encoding: var v (0-based) positive -> 2v, negative -> 2v+1.
  static int lit(int var, bool positive) { return 2 * var + (positive ? 0 : 1); }
  static int lit_from_dimacs(int dlit) {
    return lit(std::abs(dlit) - 1, dlit > 0);
  }
  static int neg(int l) { return l ^ 1; }
  static int lit_var(int l) { return l >> 1; }
  static bool lit_sign(int l) { return (l & 1) == 0; }

  int new_var() {
    int v = static_cast<int>(assign_.size());
    assign_.push_back(kUndef);
    phase_.push_back(false);
    activity_.push_back(0.0);
    level_.push_back(0);
    reason_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    seen_.push_back(0);
    return v;
  }

  void ensure_vars(int n) {
    while (static_cast<int>(assign_.size()) < n) new_var();
  }

  int num_vars() const { return static_cast<int>(assign_.size()); }

  /// Add a clause of literals (encoded form). Returns false if the clause
  /// set is already unsatisfiable at the root level.
  bool add_clause(std::vector<int> lits) {
    if (failed_) return false;
    // Root-level simplification.
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      if (i + 1 < lits.size() && lits[i + 1] == neg(lits[i])) return true;
      if (i > 0 && lits[i] == neg(lits[i - 1])) return true;
      int v = value(lits[i]);
      if (v == kTrue && level_[lit_var(lits[i])] == 0) return true;
      if (v == kFalse && level_[lit_var(lits[i])] == 0) continue;
      kept.push_back(lits[i]);
    }
    if (kept.empty()) {
      failed_ = true;
      return false;
    }
    if (kept.size() == 1) {
      if (!enqueue_root(kept[0])) {
        failed_ = true;
        return false;
      }
      return true;
    }
    attach_clause(std::move(kept), false);
    return true;
  }

  /// Decide satisfiability; assumptions (if any) are temporary unit
  /// decisions for this call only.
  bool solve(const std::vector<int>& assumptions = {}) {
    if (failed_) return false;
    cancel_until(0);
    current_assumptions_ = 0;
    if (propagate() != -1) {
      failed_ = true;
      return false;
    }

    std::int64_t conflicts_budget = 256;
    while (true) {
      bool restart = false;
      while (!restart) {
        int confl = propagate();
        if (confl != -1) {
          if (decision_level() == 0) {
            failed_ = true;
            return false;
          }
          if (current_assumptions_ > 0 &&
              decision_level() <= current_assumptions_) {
            // Conflict depends only on assumptions.
            cancel_until(0);
            current_assumptions_ = 0;
            return false;
          }
          std::vector<int> learnt;
          int back_level = analyze(confl, learnt);
          if (learnt.size() == 1) {
            // A learnt unit is implied by the formula alone; assumptions
            // get re-placed by the decision loop.
            cancel_until(0);
            if (!enqueue_root(learnt[0])) {
              failed_ = true;
              return false;
            }
          } else {
            cancel_until(std::max(back_level, current_assumptions_));
            int ci = attach_clause(std::move(learnt), true);
            enqueue(clauses_[ci].lits[0], ci);
          }
          decay_activities();
          if (--conflicts_budget <= 0) {
            restart = true;
            conflicts_budget = static_cast<std::int64_t>(
                last_budget_ = last_budget_ * 3 / 2 + 16);
          }
        } else {
          // Place assumptions first, then decide.
          if (decision_level() < static_cast<int>(assumptions.size())) {
            int l = assumptions[decision_level()];
            ensure_vars(lit_var(l) + 1);
            int v = value(l);
            if (v == kFalse) {
              cancel_until(0);
              current_assumptions_ = 0;
              return false;
            }
            new_decision_level();
            current_assumptions_ = decision_level();
            if (v == kUndef) enqueue(l, -1);
            continue;
          }
          int next = pick_branch_var();
          if (next == -1) {
            model_.assign(assign_.begin(), assign_.end());
            cancel_until(0);
            current_assumptions_ = 0;
            return true;
          }
          new_decision_level();
          enqueue(lit(next, phase_[next]), -1);
        }
      }
      cancel_until(current_assumptions_);
    }
  }

  /// Value of a variable in the last satisfying model.
  bool model_value(int var) const {
    return var < static_cast<int>(model_.size()) && model_[var] == kTrue;
  }

  bool failed() const { return failed_; }

 private:
  static constexpr char kUndef = 0, kTrue = 1, kFalse = 2;

  struct Clause {
    std::vector<int> lits;
    bool learnt;
  };

  int value(int l) const {
    char a = assign_[lit_var(l)];
    if (a == kUndef) return kUndef;
    bool is_true = (a == kTrue) == lit_sign(l);
    return is_true ? kTrue : kFalse;
  }

  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void new_decision_level() { trail_lim_.push_back(trail_.size()); }

  bool enqueue_root(int l) {
    int v = value(l);
    if (v == kTrue) return true;
    if (v == kFalse) return false;
    enqueue(l, -1);
    return propagate() == -1;
  }

  void enqueue(int l, int reason) {
    int var = lit_var(l);
    assign_[var] = lit_sign(l) ? kTrue : kFalse;
    level_[var] = decision_level();
    reason_[var] = reason;
    phase_[var] = lit_sign(l);
    trail_.push_back(l);
  }

  void cancel_until(int level) {
    if (decision_level() <= level) return;
    std::size_t lim = trail_lim_[level];
    for (std::size_t i = trail_.size(); i > lim; --i) {
      int var = lit_var(trail_[i - 1]);
      assign_[var] = kUndef;
      reason_[var] = -1;
    }
    trail_.resize(lim);
    trail_lim_.resize(level);
    qhead_ = std::min(qhead_, trail_.size());
  }

  int attach_clause(std::vector<int> lits, bool learnt) {
    if (learnt) {
      // First literal is the asserting one; second should be of the highest
      // remaining level for correct watching.
      int best = 1;
      for (std::size_t i = 2; i < lits.size(); ++i)
        if (level_[lit_var(lits[i])] > level_[lit_var(lits[best])])
          best = static_cast<int>(i);
      if (lits.size() > 1) std::swap(lits[1], lits[best]);
    }
    clauses_.push_back({std::move(lits), learnt});
    int ci = static_cast<int>(clauses_.size()) - 1;
    const auto& c = clauses_[ci].lits;
    watches_[neg(c[0])].push_back(ci);
    watches_[neg(c[1])].push_back(ci);
    return ci;
  }

  /// Unit propagation; returns a conflicting clause index or -1.
  int propagate() {
    while (qhead_ < trail_.size()) {
      int l = trail_[qhead_++];
      auto& watch_list = watches_[l];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < watch_list.size(); ++i) {
        int ci = watch_list[i];
        auto& lits = clauses_[ci].lits;
        // Normalize: watched literal being falsified is neg(l); move it to
        // position 1.
        int false_lit = neg(l);
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        if (value(lits[0]) == kTrue) {
          watch_list[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < lits.size(); ++k) {
          if (value(lits[k]) != kFalse) {
            std::swap(lits[1], lits[k]);
            watches_[neg(lits[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        // Unit or conflict.
        watch_list[keep++] = ci;
        if (value(lits[0]) == kFalse) {
          for (std::size_t k = i + 1; k < watch_list.size(); ++k)
            watch_list[keep++] = watch_list[k];
          watch_list.resize(keep);
          qhead_ = trail_.size();
          return ci;
        }
        enqueue(lits[0], ci);
      }
      watch_list.resize(keep);
    }
    return -1;
  }

  int analyze(int confl, std::vector<int>& out_learnt) {
    out_learnt.clear();
    out_learnt.push_back(0);  // placeholder for the asserting literal
    int counter = 0;
    int p = -1;
    std::size_t index = trail_.size();
    std::vector<int> to_clear;

    do {
      const auto& c = clauses_[confl].lits;
      for (std::size_t i = (p == -1 ? 0 : 1); i < c.size(); ++i) {
        int q = c[i];
        int v = lit_var(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          to_clear.push_back(v);
          bump_activity(v);
          if (level_[v] == decision_level())
            ++counter;
          else
            out_learnt.push_back(q);
        }
      }
      while (!seen_[lit_var(trail_[index - 1])]) --index;
      p = trail_[index - 1];
      --index;
      seen_[lit_var(p)] = 0;
      confl = reason_[lit_var(p)];
      --counter;
    } while (counter > 0);
    out_learnt[0] = neg(p);

    int back_level = 0;
    for (std::size_t i = 1; i < out_learnt.size(); ++i)
      back_level = std::max(back_level, level_[lit_var(out_learnt[i])]);
    for (int v : to_clear) seen_[v] = 0;
    return back_level;
  }

  int pick_branch_var() {
    int best = -1;
    double best_act = -1.0;
    for (int v = 0; v < num_vars(); ++v) {
      if (assign_[v] != kUndef) continue;
      if (activity_[v] > best_act) {
        best_act = activity_[v];
        best = v;
      }
    }
    return best;
  }

  void bump_activity(int v) {
    activity_[v] += activity_inc_;
    if (activity_[v] > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      activity_inc_ *= 1e-100;
    }
  }

  void decay_activities() { activity_inc_ *= 1.052; }

  std::vector<char> assign_;
  std::vector<bool> phase_;
  std::vector<double> activity_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<int>> watches_;  // indexed by literal
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::vector<char> seen_;
  std::vector<char> model_;
  std::size_t qhead_ = 0;
  bool failed_ = false;
  double activity_inc_ = 1.0;
  std::int64_t last_budget_ = 256;
  int current_assumptions_ = 0;
};

}  // namespace pgsynth
