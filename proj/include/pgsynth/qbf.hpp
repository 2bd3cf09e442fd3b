#pragma once

// 2-QBF problems over a formula DAG: an existential strategy block, a
// universal block (markings, environment choices, stalls), and an optional
// innermost existential block for auxiliaries introduced by emitters.

#include <map>
#include <string>
#include <vector>

#include "pgsynth/formula.hpp"
#include "pgsynth/net.hpp"

namespace pgsynth {

enum class VarRole : uint8_t {
  Strategy,   // (system place copy, original transition)
  Marking,    // (place copy, time)
  EnvChoice,  // (environment place copy, transition copy, time)
  Stall,      // (transition copy)
  Aux,        // emitter-internal
};

struct VarInfo {
  VarRole role;
  PlaceId place;           // Strategy, Marking, EnvChoice
  TransitionId transition;  // Strategy (original), EnvChoice/Stall (copy)
  int time = 0;            // Marking, EnvChoice
  int serial = 0;          // Aux

  std::string describe() const {
    switch (role) {
      case VarRole::Strategy:
        return "S(" + place + "," + transition + ")";
      case VarRole::Marking:
        return "M(" + place + "," + std::to_string(time) + ")";
      case VarRole::EnvChoice:
        return "E(" + place + "," + transition + "," + std::to_string(time) +
               ")";
      case VarRole::Stall:
        return "L(" + transition + ")";
      case VarRole::Aux:
        return "A(" + std::to_string(serial) + ")";
    }
    return "?";
  }
};

/// Dense variable ids in role-major, field-minor order so emitted files are
/// byte-stable.
class VarRegistry {
 public:
  int add(VarInfo info) {
    vars_.push_back(std::move(info));
    return static_cast<int>(vars_.size()) - 1;
  }

  const VarInfo& info(int v) const { return vars_[v]; }
  int count() const { return static_cast<int>(vars_.size()); }

  std::vector<int> by_role(VarRole role) const {
    std::vector<int> out;
    for (int v = 0; v < count(); ++v)
      if (vars_[v].role == role) out.push_back(v);
    return out;
  }

 private:
  std::vector<VarInfo> vars_;
};

enum class EncodingKind { Sequential, TrueConcurrent };

struct QbfProblem {
  VarRegistry vars;
  FormulaStore store;
  NodeId_t matrix = 0;

  EncodingKind kind = EncodingKind::Sequential;
  int n = 0;      // simulation length, when built by an encoder
  int bound = 0;  // unfolding bound, when built by an encoder

  std::vector<int> strategy_vars() const {
    return vars.by_role(VarRole::Strategy);
  }
  std::vector<int> universal_vars() const {
    std::vector<int> out;
    for (int v = 0; v < vars.count(); ++v) {
      VarRole r = vars.info(v).role;
      if (r == VarRole::Marking || r == VarRole::EnvChoice ||
          r == VarRole::Stall)
        out.push_back(v);
    }
    return out;
  }
  std::vector<int> aux_vars() const { return vars.by_role(VarRole::Aux); }

  LoweredFormula lowered() const {
    return lower_formula(store, matrix, vars.count());
  }
};

enum class SolveStatus { Sat, Unsat, Unknown };

inline std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Sat:
      return "SAT";
    case SolveStatus::Unsat:
      return "UNSAT";
    case SolveStatus::Unknown:
      return "UNKNOWN";
  }
  return "?";
}

struct SolveResult {
  SolveStatus status = SolveStatus::Unknown;
  // Assignment over strategy variables, present only when status == Sat and
  // the backend produced or extraction requested one.
  std::map<int, bool> witness;
  std::string solver_name;
  double seconds = 0.0;
  std::string detail;
};

}  // namespace pgsynth
