#pragma once

// System and environment strategies as subprocesses of an unfolding, the
// S1-S3 / E1-E3 requirement checkers, the winning check, and an exhaustive
// enumerator of environment strategies (the semantic oracle used to
// cross-check the encodings).

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pgsynth/game.hpp"
#include "pgsynth/net.hpp"
#include "pgsynth/unfolding.hpp"

namespace pgsynth {

enum class StrategyKind { System, Environment };

/// A subprocess of a base game: a set of kept transitions plus the derived
/// net after pruning everything that can no longer be produced from the
/// initial marking.
struct StrategyNet {
  StrategyKind kind = StrategyKind::System;
  PetriGame base;                    // the net this strategy restricts
  std::map<NodeId, NodeId> lambda;   // base/derived node -> original game node
  std::set<TransitionId> kept;       // base transitions not removed
  PetriGame derived;                 // base minus removals and dead nodes
  std::size_t reach_guard = kDefaultStrategyReachGuard;

  static constexpr std::size_t kDefaultStrategyReachGuard =
      std::size_t{1} << 18;
};

struct Violation {
  Marking marking;          // witness marking (may be empty for syntactic checks)
  std::vector<NodeId> nodes;  // witness nodes (place and/or transitions)
  std::string detail;
};

struct ViolationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }

  std::string to_string() const {
    std::ostringstream out;
    for (const auto& v : violations) {
      out << v.detail;
      if (!v.marking.empty()) {
        out << " at {";
        bool first = true;
        for (const auto& p : v.marking) {
          if (!first) out << ",";
          out << p;
          first = false;
        }
        out << "}";
      }
      out << "\n";
    }
    return out.str();
  }
};

namespace detail {

/// Forward closure from the initial marking: a transition stays alive iff
/// all its preset places are alive, a place iff it is initial or has an
/// alive producer.
inline PetriGame prune_dead(const PetriGame& base,
                            const std::set<TransitionId>& kept) {
  std::set<PlaceId> alive_places(base.net.initial_marking().begin(),
                                 base.net.initial_marking().end());
  std::set<TransitionId> alive_trans;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& t : kept) {
      if (alive_trans.count(t)) continue;
      bool ready = true;
      for (const auto& p : base.net.preset(t))
        if (!alive_places.count(p)) {
          ready = false;
          break;
        }
      if (ready) {
        alive_trans.insert(t);
        for (const auto& p : base.net.postset(t))
          if (alive_places.insert(p).second) changed = true;
        changed = true;
      }
    }
  }

  std::vector<PlaceId> places(alive_places.begin(), alive_places.end());
  std::vector<TransitionId> transitions(alive_trans.begin(),
                                        alive_trans.end());
  std::vector<Arc> arcs;
  for (const auto& t : alive_trans) {
    for (const auto& p : base.net.preset(t)) arcs.push_back({p, t});
    for (const auto& p : base.net.postset(t)) arcs.push_back({t, p});
  }
  std::set<PlaceId> environment, bad;
  for (const auto& p : alive_places) {
    if (base.is_environment(p)) environment.insert(p);
    if (base.is_bad(p)) bad.insert(p);
  }
  return PetriGame::build(
      PetriNet::build(places, transitions, arcs,
                      base.net.initial_marking()),
      environment, bad);
}

}  // namespace detail

/// Restrict an unfolded game by removing transitions; yields a system
/// strategy candidate.
inline StrategyNet restrict_unfolding(const BoundedUnfolding& u,
                                      const std::set<TransitionId>& removed) {
  for (const auto& t : removed)
    if (!u.game.net.has_transition(t))
      throw LookupError("removed transition not in base: " + t);
  StrategyNet s;
  s.kind = StrategyKind::System;
  s.base = u.game;
  s.lambda = u.lambda;
  for (const auto& t : u.game.net.transitions())
    if (!removed.count(t)) s.kept.insert(t);
  s.derived = detail::prune_dead(s.base, s.kept);
  return s;
}

/// Restrict an existing strategy further; yields an environment strategy
/// candidate when applied to a system strategy.
inline StrategyNet restrict_strategy(const StrategyNet& base,
                                     const std::set<TransitionId>& removed,
                                     StrategyKind kind) {
  for (const auto& t : removed)
    if (!base.derived.net.has_transition(t))
      throw LookupError("removed transition not in base: " + t);
  StrategyNet s;
  s.kind = kind;
  s.base = base.derived;
  s.lambda = base.lambda;
  s.reach_guard = base.reach_guard;
  for (const auto& t : base.derived.net.transitions())
    if (!removed.count(t)) s.kept.insert(t);
  s.derived = detail::prune_dead(s.base, s.kept);
  return s;
}

/// (S1) Determinism: at every reachable marking every marked system place
/// has at most one fully enabled outgoing transition.
inline ViolationReport check_s1_determinism(const StrategyNet& s) {
  ViolationReport report;
  for (const auto& m : s.derived.net.reachable_markings(s.reach_guard)) {
    for (const auto& p : m) {
      if (!s.derived.is_system(p)) continue;
      std::vector<TransitionId> enabled;
      for (const auto& t : s.derived.net.postset(p))
        if (s.derived.net.is_enabled(m, t)) enabled.push_back(t);
      if (enabled.size() > 1) {
        Violation v;
        v.marking = m;
        v.nodes.push_back(p);
        v.nodes.insert(v.nodes.end(), enabled.begin(), enabled.end());
        v.detail = "S1: system place " + p + " has " +
                   std::to_string(enabled.size()) + " enabled transitions";
        report.violations.push_back(std::move(v));
      }
    }
  }
  return report;
}

/// (S2) System refusal: a removal whose preset survives must be justified by
/// a system place that deleted every copy of that transition's original.
inline ViolationReport check_s2_system_refusal(const StrategyNet& s) {
  ViolationReport report;
  for (const auto& t : s.base.net.transitions()) {
    if (s.derived.net.has_transition(t)) continue;
    bool preset_survives = true;
    for (const auto& p : s.base.net.preset(t))
      if (!s.derived.net.has_place(p)) {
        preset_survives = false;
        break;
      }
    if (!preset_survives) continue;
    bool justified = false;
    for (const auto& p : s.base.net.preset(t)) {
      if (!s.base.is_system(p)) continue;
      bool deletes_all_copies = true;
      for (const auto& t2 : s.base.net.postset(p)) {
        if (s.lambda.at(t2) == s.lambda.at(t) &&
            s.derived.net.has_transition(t2)) {
          deletes_all_copies = false;
          break;
        }
      }
      if (deletes_all_copies) {
        justified = true;
        break;
      }
    }
    if (!justified) {
      Violation v;
      v.nodes.push_back(t);
      v.detail = "S2: removal of " + t + " not justified by a system place";
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

/// (S3) Deadlock avoidance: wherever the base still has an enabled
/// transition, the strategy must enable one too.
inline ViolationReport check_s3_deadlock_avoidance(const StrategyNet& s) {
  ViolationReport report;
  for (const auto& m : s.derived.net.reachable_markings(s.reach_guard)) {
    bool base_enabled = false;
    NodeId base_witness;
    for (const auto& t : s.base.net.transitions()) {
      bool enabled = true;
      for (const auto& p : s.base.net.preset(t))
        if (!m.count(p)) {
          enabled = false;
          break;
        }
      if (enabled) {
        base_enabled = true;
        base_witness = t;
        break;
      }
    }
    if (!base_enabled) continue;
    bool own_enabled = false;
    for (const auto& t : s.derived.net.transitions())
      if (s.derived.net.is_enabled(m, t)) {
        own_enabled = true;
        break;
      }
    if (!own_enabled) {
      Violation v;
      v.marking = m;
      v.nodes.push_back(base_witness);
      v.detail = "S3: deadlock while base enables " + base_witness;
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

/// (E1) Explicit choice: every environment place keeps at most one outgoing
/// transition.
inline ViolationReport check_e1_explicit_choice(const StrategyNet& e) {
  ViolationReport report;
  for (const auto& p : e.derived.net.places()) {
    if (!e.derived.is_environment(p)) continue;
    const auto& outs = e.derived.net.postset(p);
    if (outs.size() > 1) {
      Violation v;
      v.nodes.push_back(p);
      v.nodes.insert(v.nodes.end(), outs.begin(), outs.end());
      v.detail = "E1: environment place " + p + " keeps " +
                 std::to_string(outs.size()) + " outgoing transitions";
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

/// (E2) Environment refusal: removals with surviving preset must involve an
/// environment place.
inline ViolationReport check_e2_environment_refusal(const StrategyNet& e) {
  ViolationReport report;
  for (const auto& t : e.base.net.transitions()) {
    if (e.derived.net.has_transition(t)) continue;
    bool preset_survives = true;
    for (const auto& p : e.base.net.preset(t))
      if (!e.derived.net.has_place(p)) {
        preset_survives = false;
        break;
      }
    if (!preset_survives) continue;
    bool has_env = false;
    for (const auto& p : e.base.net.preset(t))
      if (e.base.is_environment(p)) {
        has_env = true;
        break;
      }
    if (!has_env) {
      Violation v;
      v.nodes.push_back(t);
      v.detail = "E2: removal of " + t + " has no environment place in preset";
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

/// (E3) Progress: wherever the parent system strategy enables a transition,
/// the environment strategy enables one too.
inline ViolationReport check_e3_progress(const StrategyNet& e) {
  ViolationReport report;
  for (const auto& m : e.derived.net.reachable_markings(e.reach_guard)) {
    bool parent_enabled = false;
    NodeId witness;
    for (const auto& t : e.base.net.transitions()) {
      bool enabled = true;
      for (const auto& p : e.base.net.preset(t))
        if (!m.count(p)) {
          enabled = false;
          break;
        }
      if (enabled) {
        parent_enabled = true;
        witness = t;
        break;
      }
    }
    if (!parent_enabled) continue;
    bool own_enabled = false;
    for (const auto& t : e.derived.net.transitions())
      if (e.derived.net.is_enabled(m, t)) {
        own_enabled = true;
        break;
      }
    if (!own_enabled) {
      Violation v;
      v.marking = m;
      v.nodes.push_back(witness);
      v.detail = "E3: no progress while parent enables " + witness;
      report.violations.push_back(std::move(v));
    }
  }
  return report;
}

/// Winning for safety: no reachable marking touches a bad place, and the
/// strategy satisfies S1-S3.
inline bool is_winning_system(const StrategyNet& s) {
  for (const auto& m : s.derived.net.reachable_markings(s.reach_guard))
    if (s.derived.marking_hits_bad(m)) return false;
  if (!check_s1_determinism(s).ok()) return false;
  if (!check_s2_system_refusal(s).ok()) return false;
  if (!check_s3_deadlock_avoidance(s).ok()) return false;
  return true;
}

/// Every place of the strategy keeps at most one outgoing transition, so
/// runs are unique up to reordering of independent transitions.
inline bool has_unique_run(const StrategyNet& e) {
  for (const auto& p : e.derived.net.places())
    if (e.derived.net.postset(p).size() > 1) return false;
  return true;
}

/// All environment strategies of a system strategy: per environment place,
/// commit to at most one kept outgoing transition, then filter by E3 and
/// deduplicate nets that prune to the same subprocess.
inline std::vector<StrategyNet> enumerate_environment_strategies(
    const StrategyNet& s, std::size_t guard = 1 << 16) {
  std::vector<PlaceId> env_places;
  std::vector<std::vector<TransitionId>> options;
  for (const auto& p : s.derived.net.places()) {
    if (!s.derived.is_environment(p)) continue;
    const auto& outs = s.derived.net.postset(p);
    if (outs.empty()) continue;
    env_places.push_back(p);
    options.emplace_back(outs.begin(), outs.end());
  }

  std::size_t combos = 1;
  for (const auto& o : options) {
    combos *= o.size() + 1;  // each transition, or no choice at all
    if (combos > guard)
      throw ResourceError("environment strategy enumeration guard exceeded");
  }

  std::vector<StrategyNet> result;
  std::set<std::set<TransitionId>> seen;
  std::vector<std::size_t> pick(env_places.size(), 0);
  while (true) {
    std::set<TransitionId> removed;
    // pick[i] == options[i].size() means "no choice": remove all outgoing.
    for (std::size_t i = 0; i < env_places.size(); ++i)
      for (std::size_t j = 0; j < options[i].size(); ++j)
        if (j != pick[i]) removed.insert(options[i][j]);
    StrategyNet e = restrict_strategy(s, removed, StrategyKind::Environment);
    if (check_e3_progress(e).ok()) {
      std::set<TransitionId> key(e.derived.net.transitions().begin(),
                                 e.derived.net.transitions().end());
      if (seen.insert(key).second) result.push_back(std::move(e));
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == options[k].size() + 1) {
      pick[k] = 0;
      ++k;
    }
    if (k == pick.size()) break;
  }
  return result;
}

}  // namespace pgsynth
