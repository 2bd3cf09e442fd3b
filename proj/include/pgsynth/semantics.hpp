#pragma once

// Sequential and true-concurrent flow semantics: traces over both, adjacent
// reordering, the transformations between the two trace kinds, and bounded
// traces.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pgsynth/game.hpp"
#include "pgsynth/net.hpp"

namespace pgsynth {

struct ConflictError : NetError {
  using NetError::NetError;
};
struct ReorderError : NetError {
  using NetError::NetError;
};

struct SeqTrace {
  std::vector<TransitionId> steps;
  std::vector<Marking> markings;  // markings[0] is the initial marking

  const Marking& final_marking() const { return markings.back(); }
};

struct TcTrace {
  std::vector<std::set<TransitionId>> steps;
  std::vector<Marking> markings;

  const Marking& final_marking() const { return markings.back(); }
};

/// Fire a set of transitions in one true-concurrent step. Presets must be
/// pairwise disjoint and jointly covered by the marking.
inline Marking tc_fire(const PetriNet& net, const Marking& m,
                       const std::set<TransitionId>& ts) {
  std::set<PlaceId> consumed;
  for (const auto& t : ts) {
    for (const auto& p : net.preset(t)) {
      if (!consumed.insert(p).second)
        throw ConflictError("transitions share preset place " + p);
      if (!m.count(p)) throw FiringError("transition not enabled: " + t);
    }
  }
  Marking out;
  for (const auto& p : m)
    if (!consumed.count(p)) out.insert(p);
  for (const auto& t : ts) {
    for (const auto& p : net.postset(t)) {
      if (out.count(p))
        throw UnsafeNetError("concurrent step puts a second token on " + p);
      out.insert(p);
    }
  }
  return out;
}

/// The set of all enabled transitions, required to be conflict-free; two
/// enabled transitions sharing a preset place raise a non-determinism error
/// (on resolved strategies this cannot happen).
inline std::set<TransitionId> max_concurrent_set(const PetriNet& net,
                                                 const Marking& m) {
  std::set<TransitionId> enabled;
  for (const auto& t : net.transitions())
    if (net.is_enabled(m, t)) enabled.insert(t);
  std::set<PlaceId> used;
  for (const auto& t : enabled)
    for (const auto& p : net.preset(t))
      if (!used.insert(p).second)
        throw ConflictError("non-determinism: enabled transitions share " + p);
  return enabled;
}

namespace detail {

/// All maximal conflict-free subsets of the enabled transitions at m, in
/// deterministic order. On conflict-free markings this is the single
/// all-enabled set.
inline std::vector<std::set<TransitionId>> maximal_concurrent_sets(
    const PetriNet& net, const Marking& m) {
  std::vector<TransitionId> enabled;
  for (const auto& t : net.transitions())
    if (net.is_enabled(m, t)) enabled.push_back(t);

  std::vector<std::set<TransitionId>> result;
  std::set<TransitionId> current;
  std::set<PlaceId> used;

  auto conflicts = [&](const TransitionId& t) {
    for (const auto& p : net.preset(t))
      if (used.count(p)) return true;
    return false;
  };

  // Backtracking over candidates in order; a branch is maximal when no
  // further transition fits.
  std::function<void(std::size_t)> recurse = [&](std::size_t i) {
    bool extended = false;
    for (std::size_t j = i; j < enabled.size(); ++j) {
      if (conflicts(enabled[j])) continue;
      extended = true;
      for (const auto& p : net.preset(enabled[j])) used.insert(p);
      current.insert(enabled[j]);
      recurse(j + 1);
      current.erase(enabled[j]);
      for (const auto& p : net.preset(enabled[j])) used.erase(p);
    }
    if (!extended) {
      // Maximality must hold against all enabled transitions, not only the
      // ones after i.
      for (const auto& t : enabled)
        if (!current.count(t) && !conflicts(t)) return;
      if (!current.empty() &&
          std::find(result.begin(), result.end(), current) == result.end())
        result.push_back(current);
    }
  };
  if (!enabled.empty()) recurse(0);
  return result;
}

}  // namespace detail

/// Closure of true-concurrent firing from the initial marking. Conflicts
/// between enabled transitions branch over every maximal conflict-free set.
inline std::set<Marking> reach_tc(const PetriNet& net,
                                  std::size_t guard =
                                      PetriNet::kDefaultReachGuard) {
  std::set<Marking> seen{net.initial_marking()};
  std::vector<Marking> work{net.initial_marking()};
  while (!work.empty()) {
    Marking m = std::move(work.back());
    work.pop_back();
    for (const auto& ts : detail::maximal_concurrent_sets(net, m)) {
      Marking next = tc_fire(net, m, ts);
      if (seen.insert(next).second) {
        if (seen.size() > guard)
          throw ResourceError("tc reachability guard exceeded");
        work.push_back(std::move(next));
      }
    }
  }
  return seen;
}

inline SeqTrace make_seq_trace(const PetriNet& net,
                               const std::vector<TransitionId>& steps) {
  SeqTrace trace;
  trace.steps = steps;
  trace.markings.push_back(net.initial_marking());
  for (const auto& t : steps)
    trace.markings.push_back(net.fire(trace.markings.back(), t));
  return trace;
}

inline TcTrace make_tc_trace(const PetriNet& net,
                             const std::vector<std::set<TransitionId>>& steps) {
  TcTrace trace;
  for (const auto& ts : steps)
    if (ts.empty()) throw ArgumentError("tc trace step must be non-empty");
  trace.steps = steps;
  trace.markings.push_back(net.initial_marking());
  for (const auto& ts : steps)
    trace.markings.push_back(tc_fire(net, trace.markings.back(), ts));
  return trace;
}

/// Swap steps i and i+1 (1-based). Only the marking between them changes.
inline SeqTrace reorder_adjacent(const PetriNet& net, const SeqTrace& trace,
                                 std::size_t i) {
  if (i < 1 || i >= trace.steps.size())
    throw ArgumentError("reorder index out of range");
  std::vector<TransitionId> steps = trace.steps;
  std::swap(steps[i - 1], steps[i]);
  const Marking& before = trace.markings[i - 1];
  if (!net.is_enabled(before, steps[i - 1]))
    throw ReorderError("swapped transition not enabled earlier: " +
                       steps[i - 1]);
  try {
    return make_seq_trace(net, steps);
  } catch (const FiringError&) {
    throw ReorderError("swap does not yield a valid trace at index " +
                       std::to_string(i));
  } catch (const UnsafeNetError&) {
    throw ReorderError("swap does not yield a valid trace at index " +
                       std::to_string(i));
  }
}

/// Unroll each concurrent step in sorted order; conflict-freeness makes the
/// result a valid sequential trace with the same final marking.
inline SeqTrace tc_to_seq(const PetriNet& net, const TcTrace& trace) {
  std::vector<TransitionId> steps;
  for (const auto& ts : trace.steps)
    for (const auto& t : ts) steps.push_back(t);
  return make_seq_trace(net, steps);
}

/// Group a sequential trace into true-concurrent waves: repeatedly collect
/// every not-yet-fired transition that can join the current wave. Requires
/// the fired transitions to be pairwise preset-disjoint (resolved runs
/// satisfy this; so do traces of strategy nets whose remaining conflicts
/// were settled by the run itself).
inline TcTrace seq_to_tc(const PetriNet& net, const SeqTrace& trace) {
  std::set<TransitionId> distinct(trace.steps.begin(), trace.steps.end());
  for (const auto& t1 : distinct)
    for (const auto& t2 : distinct) {
      if (t1 >= t2) continue;
      for (const auto& p : net.preset(t1))
        if (net.preset(t2).count(p))
          throw ArgumentError("seq_to_tc requires conflict-free runs; " + t1 +
                              " and " + t2 + " share place " + p);
    }

  std::vector<TransitionId> remaining = trace.steps;
  std::vector<std::set<TransitionId>> waves;
  Marking m = net.initial_marking();
  while (!remaining.empty()) {
    std::set<TransitionId> wave;
    std::set<PlaceId> wave_pre, wave_post;
    std::vector<TransitionId> rest;
    for (const auto& t : remaining) {
      bool can_join = !wave.count(t);
      for (const auto& p : net.preset(t))
        if (!m.count(p) || wave_pre.count(p)) {
          can_join = false;
          break;
        }
      if (can_join) {
        // The step must stay 1-safe: produced tokens may not collide with
        // other wave outputs or with tokens that survive the wave.
        for (const auto& p : net.postset(t)) {
          bool consumed = wave_pre.count(p) || net.preset(t).count(p);
          if (wave_post.count(p) || (m.count(p) && !consumed)) {
            can_join = false;
            break;
          }
        }
      }
      if (can_join) {
        wave.insert(t);
        for (const auto& p : net.preset(t)) wave_pre.insert(p);
        for (const auto& p : net.postset(t)) wave_post.insert(p);
      } else {
        rest.push_back(t);
      }
    }
    if (wave.empty())
      throw FiringError("trace is not fireable under wave grouping");
    m = tc_fire(net, m, wave);
    waves.push_back(std::move(wave));
    remaining = std::move(rest);
  }
  return make_tc_trace(net, waves);
}

inline bool reaches_bad(const SeqTrace& trace, const PetriGame& game,
                        const std::map<NodeId, NodeId>* lambda = nullptr) {
  for (const auto& m : trace.markings)
    for (const auto& p : m) {
      const NodeId& original = lambda ? lambda->at(p) : p;
      if (game.bad_places.count(original)) return true;
    }
  return false;
}

inline bool reaches_bad(const TcTrace& trace, const PetriGame& game,
                        const std::map<NodeId, NodeId>* lambda = nullptr) {
  for (const auto& m : trace.markings)
    for (const auto& p : m) {
      const NodeId& original = lambda ? lambda->at(p) : p;
      if (game.bad_places.count(original)) return true;
    }
  return false;
}

/// Bounded trace: at most the final marking repeats one earlier marking;
/// all other visited markings are pairwise distinct.
inline bool is_bounded_trace(const SeqTrace& trace) {
  const auto& ms = trace.markings;
  for (std::size_t i = 0; i + 1 < ms.size(); ++i)
    for (std::size_t j = i + 1; j + 1 < ms.size(); ++j)
      if (ms[i] == ms[j]) return false;
  return true;
}

inline std::string format_marking(const Marking& m) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (const auto& p : m) {
    if (!first) out << ",";
    out << p;
    first = false;
  }
  out << "}";
  return out.str();
}

/// One step per line; concurrent steps braced.
inline std::string format_trace(const SeqTrace& trace) {
  std::ostringstream out;
  for (const auto& t : trace.steps) out << "  " << t << "\n";
  out << "  final: " << format_marking(trace.final_marking()) << "\n";
  return out.str();
}

inline std::string format_trace(const TcTrace& trace) {
  std::ostringstream out;
  for (const auto& ts : trace.steps) {
    out << "  {";
    bool first = true;
    for (const auto& t : ts) {
      if (!first) out << ", ";
      out << t;
      first = false;
    }
    out << "}\n";
  }
  out << "  final: " << format_marking(trace.final_marking()) << "\n";
  return out.str();
}

}  // namespace pgsynth
