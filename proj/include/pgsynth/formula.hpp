#pragma once

// Boolean formula DAGs with hash-consing and constant folding, plus a
// lowered and/or form (negation as literal polarity) used by the
// evaluators and the QCIR / QDIMACS writers.

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "pgsynth/net.hpp"

namespace pgsynth {

enum class NodeKind : uint8_t {
  False,
  True,
  Var,
  Not,
  And,
  Or,
  Implies,
  Iff,
};

using NodeId_t = int32_t;

struct FormulaNode {
  NodeKind kind;
  int32_t var = -1;                 // for Var
  std::vector<NodeId_t> children;  // for connectives
};

/// Owns formula nodes; structurally identical subformulas share one id.
class FormulaStore {
 public:
  FormulaStore() {
    false_id_ = add_raw({NodeKind::False, -1, {}});
    true_id_ = add_raw({NodeKind::True, -1, {}});
  }

  NodeId_t mk_false() const { return false_id_; }
  NodeId_t mk_true() const { return true_id_; }
  NodeId_t mk_const(bool b) const { return b ? true_id_ : false_id_; }

  NodeId_t mk_var(int32_t v) {
    FormulaNode n{NodeKind::Var, v, {}};
    return intern(std::move(n));
  }

  NodeId_t mk_not(NodeId_t a) {
    const FormulaNode& n = node(a);
    if (n.kind == NodeKind::True) return false_id_;
    if (n.kind == NodeKind::False) return true_id_;
    if (n.kind == NodeKind::Not) return n.children[0];
    return intern({NodeKind::Not, -1, {a}});
  }

  NodeId_t mk_and(std::vector<NodeId_t> children) {
    std::vector<NodeId_t> kept;
    for (NodeId_t c : children) {
      if (c == false_id_) return false_id_;
      if (c == true_id_) continue;
      if (kept.empty() || kept.back() != c) kept.push_back(c);
    }
    if (kept.empty()) return true_id_;
    if (kept.size() == 1) return kept[0];
    return intern({NodeKind::And, -1, std::move(kept)});
  }

  NodeId_t mk_or(std::vector<NodeId_t> children) {
    std::vector<NodeId_t> kept;
    for (NodeId_t c : children) {
      if (c == true_id_) return true_id_;
      if (c == false_id_) continue;
      if (kept.empty() || kept.back() != c) kept.push_back(c);
    }
    if (kept.empty()) return false_id_;
    if (kept.size() == 1) return kept[0];
    return intern({NodeKind::Or, -1, std::move(kept)});
  }

  NodeId_t mk_implies(NodeId_t a, NodeId_t b) {
    if (a == true_id_) return b;
    if (a == false_id_) return true_id_;
    if (b == true_id_) return true_id_;
    if (b == false_id_) return mk_not(a);
    if (a == b) return true_id_;
    return intern({NodeKind::Implies, -1, {a, b}});
  }

  NodeId_t mk_iff(NodeId_t a, NodeId_t b) {
    if (a == true_id_) return b;
    if (b == true_id_) return a;
    if (a == false_id_) return mk_not(b);
    if (b == false_id_) return mk_not(a);
    if (a == b) return true_id_;
    return intern({NodeKind::Iff, -1, {a, b}});
  }

  const FormulaNode& node(NodeId_t id) const { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }

 private:
  NodeId_t add_raw(FormulaNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId_t>(nodes_.size()) - 1;
  }

  NodeId_t intern(FormulaNode n) {
    std::string key;
    key.reserve(8 + n.children.size() * 4);
    key.push_back(static_cast<char>(n.kind));
    auto push32 = [&key](int32_t v) {
      for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>(v >> (8 * i)));
    };
    push32(n.var);
    for (NodeId_t c : n.children) push32(c);
    auto it = interned_.find(key);
    if (it != interned_.end()) return it->second;
    NodeId_t id = add_raw(std::move(n));
    interned_.emplace(std::move(key), id);
    return id;
  }

  std::vector<FormulaNode> nodes_;
  std::unordered_map<std::string, NodeId_t> interned_;
  NodeId_t false_id_ = 0;
  NodeId_t true_id_ = 1;
};

/// Lowered form: and/or gates over signed references. A literal is
/// +(v+1) / -(v+1) for variable v, or +-(nvars + g + 1) for gate g.
/// Implies/iff/not from the rich DAG are resolved during lowering.
struct LoweredFormula {
  struct Gate {
    bool is_and;
    std::vector<int> lits;
  };
  int nvars = 0;
  std::vector<Gate> gates;
  int output = 0;  // signed literal; 0 only for constant formulas
  bool const_value = false;
  bool is_const = false;

  int gate_lit(int gate_index) const { return nvars + gate_index + 1; }
  bool lit_is_gate(int lit) const { return std::abs(lit) > nvars; }
  int lit_gate_index(int lit) const { return std::abs(lit) - nvars - 1; }
  int lit_var(int lit) const { return std::abs(lit) - 1; }
};

namespace detail {

class Lowerer {
 public:
  Lowerer(const FormulaStore& store, int nvars) : store_(store) {
    out_.nvars = nvars;
  }

  LoweredFormula run(NodeId_t root) {
    const FormulaNode& n = store_.node(root);
    if (n.kind == NodeKind::True || n.kind == NodeKind::False) {
      out_.is_const = true;
      out_.const_value = (n.kind == NodeKind::True);
      out_.output = 0;
      return std::move(out_);
    }
    out_.output = lower(root);
    return std::move(out_);
  }

 private:
  int lower(NodeId_t id) {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    const FormulaNode& n = store_.node(id);
    int lit = 0;
    switch (n.kind) {
      case NodeKind::Var:
        lit = n.var + 1;
        break;
      case NodeKind::Not:
        lit = -lower(n.children[0]);
        break;
      case NodeKind::And:
      case NodeKind::Or: {
        std::vector<int> lits;
        lits.reserve(n.children.size());
        for (NodeId_t c : n.children) lits.push_back(lower(c));
        lit = add_gate(n.kind == NodeKind::And, std::move(lits));
        break;
      }
      case NodeKind::Implies: {
        int a = lower(n.children[0]);
        int b = lower(n.children[1]);
        lit = add_gate(false, {-a, b});
        break;
      }
      case NodeKind::Iff: {
        int a = lower(n.children[0]);
        int b = lower(n.children[1]);
        int l = add_gate(false, {-a, b});
        int r = add_gate(false, {a, -b});
        lit = add_gate(true, {l, r});
        break;
      }
      default:
        throw ArgumentError("constant below a connective was not folded");
    }
    cache_.emplace(id, lit);
    return lit;
  }

  int add_gate(bool is_and, std::vector<int> lits) {
    out_.gates.push_back({is_and, std::move(lits)});
    return out_.gate_lit(static_cast<int>(out_.gates.size()) - 1);
  }

  const FormulaStore& store_;
  LoweredFormula out_;
  std::unordered_map<NodeId_t, int> cache_;
};

}  // namespace detail

inline LoweredFormula lower_formula(const FormulaStore& store, NodeId_t root,
                                    int nvars) {
  return detail::Lowerer(store, nvars).run(root);
}

/// Evaluate under a total assignment of the problem variables.
inline bool eval_lowered(const LoweredFormula& f,
                         const std::vector<bool>& assignment) {
  if (f.is_const) return f.const_value;
  std::vector<char> gate_val(f.gates.size(), 0);
  auto lit_value = [&](int lit) {
    bool v;
    if (f.lit_is_gate(lit))
      v = gate_val[f.lit_gate_index(lit)] != 0;
    else
      v = assignment[f.lit_var(lit)];
    return lit > 0 ? v : !v;
  };
  for (std::size_t g = 0; g < f.gates.size(); ++g) {
    const auto& gate = f.gates[g];
    bool v = gate.is_and;
    for (int lit : gate.lits) {
      bool lv = lit_value(lit);
      if (gate.is_and)
        v = v && lv;
      else
        v = v || lv;
      if (v != gate.is_and) break;
    }
    gate_val[g] = v ? 1 : 0;
  }
  return lit_value(f.output);
}

/// Partially evaluate: variables with assigned[v] set take values[v]; the
/// rest stay symbolic. Returns a new lowered formula over the same variable
/// numbering with constants folded through.
inline LoweredFormula fold_lowered(const LoweredFormula& f,
                                   const std::vector<char>& assigned,
                                   const std::vector<bool>& values) {
  LoweredFormula out;
  out.nvars = f.nvars;
  if (f.is_const) return f;

  constexpr int kTrue = INT32_MAX;
  constexpr int kFalse = INT32_MIN + 1;
  std::vector<int> mapped(f.gates.size(), 0);

  auto map_lit = [&](int lit) -> int {
    int v;
    if (f.lit_is_gate(lit)) {
      v = mapped[f.lit_gate_index(lit)];
    } else {
      int var = f.lit_var(lit);
      if (assigned[var])
        v = values[var] ? kTrue : kFalse;
      else
        v = var + 1;
    }
    if (lit < 0) {
      if (v == kTrue) return kFalse;
      if (v == kFalse) return kTrue;
      return -v;
    }
    return v;
  };

  for (std::size_t g = 0; g < f.gates.size(); ++g) {
    const auto& gate = f.gates[g];
    std::vector<int> lits;
    bool shortcut = false;
    for (int lit : gate.lits) {
      int m = map_lit(lit);
      if (m == kTrue) {
        if (!gate.is_and) {
          mapped[g] = kTrue;
          shortcut = true;
          break;
        }
        continue;
      }
      if (m == kFalse) {
        if (gate.is_and) {
          mapped[g] = kFalse;
          shortcut = true;
          break;
        }
        continue;
      }
      lits.push_back(m);
    }
    if (shortcut) continue;
    if (lits.empty()) {
      mapped[g] = gate.is_and ? kTrue : kFalse;
    } else if (lits.size() == 1) {
      mapped[g] = lits[0];
    } else {
      out.gates.push_back({gate.is_and, std::move(lits)});
      mapped[g] = out.gate_lit(static_cast<int>(out.gates.size()) - 1);
    }
  }

  int o = map_lit(f.output);
  if (o == kTrue) {
    out.is_const = true;
    out.const_value = true;
    out.output = 0;
  } else if (o == kFalse) {
    out.is_const = true;
    out.const_value = false;
    out.output = 0;
  } else {
    out.output = o;
  }
  return out;
}

/// Full Tseitin clauses for a lowered formula. Literal numbering matches
/// the lowered form: +-(v+1) for problem variables, +-(nvars+g+1) for gate
/// g. The output literal is not asserted here.
inline std::vector<std::vector<int>> tseitin_clauses(const LoweredFormula& f) {
  std::vector<std::vector<int>> clauses;
  for (std::size_t g = 0; g < f.gates.size(); ++g) {
    int glit = f.gate_lit(static_cast<int>(g));
    const auto& gate = f.gates[g];
    if (gate.is_and) {
      std::vector<int> big{glit};
      for (int l : gate.lits) {
        clauses.push_back({-glit, l});
        big.push_back(-l);
      }
      clauses.push_back(std::move(big));
    } else {
      std::vector<int> big{-glit};
      for (int l : gate.lits) {
        clauses.push_back({glit, -l});
        big.push_back(l);
      }
      clauses.push_back(std::move(big));
    }
  }
  return clauses;
}

}  // namespace pgsynth
