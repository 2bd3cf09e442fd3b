#pragma once

// Bounded unfoldings: breadth-first branching-process construction with a
// memory bound b on the number of place copies, plus the homomorphism back
// to the original game.
//
// When a fresh copy of a place would exceed the bound, the producing arc is
// redirected to the existing copy with the lowest ordinal (fold-back). This
// makes the unfolded net finite and possibly cyclic. The concurrency
// relation between conditions is maintained incrementally; fold-back merges
// extend it optimistically, which can admit structurally spurious events
// but never drops a fireable one at bound 1.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pgsynth/game.hpp"
#include "pgsynth/net.hpp"

namespace pgsynth {

struct BoundedUnfolding {
  PetriGame game;      // the unfolded game; classes and bad set inherited
  PetriGame original;  // the game that was unfolded
  std::map<NodeId, NodeId> lambda;  // unfolded node -> original node
  int bound = 1;
  // place copy -> (original place, ordinal < bound)
  std::map<PlaceId, std::pair<PlaceId, int>> copy_index;
};

struct UnfoldOptions {
  std::size_t node_guard = 50000;
};

namespace detail {

inline std::string primed_name(const std::string& base, int ordinal,
                               const std::set<std::string>& used) {
  std::string name = base;
  for (int i = 0; i < ordinal; ++i) name += '\'';
  while (used.count(name)) name += '\'';
  return name;
}

}  // namespace detail

inline BoundedUnfolding unfold(const PetriGame& game, int bound,
                               const UnfoldOptions& opts = {}) {
  if (bound < 1) throw ArgumentError("unfolding bound must be >= 1");

  struct Condition {
    std::string name;
    PlaceId original;
    int ordinal;
  };
  struct Event {
    std::string name;
    TransitionId original;
    std::vector<int> pre;   // condition ids
    std::vector<int> post;  // condition ids (fresh or folded)
  };

  std::vector<Condition> conds;
  std::vector<Event> events;
  std::vector<std::set<int>> co;  // symmetric concurrency between conditions
  std::map<PlaceId, std::vector<int>> copies;  // original place -> cond ids
  std::map<TransitionId, int> event_count;     // instances per original
  std::set<std::string> used_names;
  std::map<std::pair<TransitionId, std::vector<int>>, bool> seen_events;

  auto new_condition = [&](const PlaceId& original) {
    int ordinal = static_cast<int>(copies[original].size());
    Condition c{detail::primed_name(original, ordinal, used_names), original,
                ordinal};
    used_names.insert(c.name);
    conds.push_back(c);
    co.emplace_back();
    int id = static_cast<int>(conds.size()) - 1;
    copies[original].push_back(id);
    return id;
  };

  // Fresh copies of the initial marking form the initial cut: all pairwise
  // concurrent.
  std::vector<int> initial_conds;
  for (const auto& p : game.net.initial_marking())
    initial_conds.push_back(new_condition(p));
  for (int a : initial_conds)
    for (int b : initial_conds)
      if (a != b) co[a].insert(b);

  auto add_event = [&](const TransitionId& t, const std::vector<int>& pre) {
    int ord = event_count[t]++;
    Event e;
    e.name = detail::primed_name(t, ord, used_names);
    used_names.insert(e.name);
    e.original = t;
    e.pre = pre;

    // Conditions concurrent with the whole preset; the event's postset
    // joins this context.
    std::set<int> context;
    if (!pre.empty()) {
      context = co[pre[0]];
      for (std::size_t i = 1; i < pre.size(); ++i) {
        std::set<int> next;
        for (int c : context)
          if (co[pre[i]].count(c)) next.insert(c);
        context = std::move(next);
      }
      for (int c : pre) context.erase(c);
    }

    std::vector<int> post_ids;
    std::vector<int> fresh_ids;
    for (const auto& q : game.net.postset(t)) {
      auto& qcopies = copies[q];
      if (static_cast<int>(qcopies.size()) < bound) {
        int id = new_condition(q);
        post_ids.push_back(id);
        fresh_ids.push_back(id);
      } else {
        post_ids.push_back(qcopies.front());  // fold-back, lowest ordinal
      }
    }
    for (int d : post_ids) {
      for (int c : context) {
        co[d].insert(c);
        co[c].insert(d);
      }
      for (int d2 : post_ids) {
        if (d2 != d) {
          co[d].insert(d2);
          co[d2].insert(d);
        }
      }
    }
    e.post = post_ids;
    events.push_back(std::move(e));
  };

  // Rounds: collect every instantiable event over the conditions that exist
  // at round start, then add them all. Deterministic by construction.
  while (true) {
    std::vector<std::pair<TransitionId, std::vector<int>>> candidates;
    for (const auto& t : game.net.transitions()) {
      std::vector<PlaceId> pre_places(game.net.preset(t).begin(),
                                      game.net.preset(t).end());
      std::vector<int> tuple(pre_places.size(), 0);
      std::vector<const std::vector<int>*> pools;
      bool feasible = true;
      for (const auto& p : pre_places) {
        auto it = copies.find(p);
        if (it == copies.end() || it->second.empty()) {
          feasible = false;
          break;
        }
        pools.push_back(&it->second);
      }
      if (!feasible) continue;
      // Enumerate all preset copy combinations in lexicographic order.
      std::vector<std::size_t> pick(pools.size(), 0);
      while (true) {
        std::vector<int> chosen;
        chosen.reserve(pools.size());
        for (std::size_t i = 0; i < pools.size(); ++i)
          chosen.push_back((*pools[i])[pick[i]]);
        bool pairwise_co = true;
        for (std::size_t i = 0; i < chosen.size() && pairwise_co; ++i)
          for (std::size_t j = i + 1; j < chosen.size(); ++j)
            if (!co[chosen[i]].count(chosen[j])) {
              pairwise_co = false;
              break;
            }
        if (pairwise_co) {
          auto key = std::make_pair(t, chosen);
          if (!seen_events.count(key)) {
            seen_events[key] = true;
            candidates.emplace_back(t, std::move(chosen));
          }
        }
        std::size_t k = 0;
        while (k < pick.size() && ++pick[k] == pools[k]->size()) {
          pick[k] = 0;
          ++k;
        }
        if (k == pick.size()) break;
      }
    }
    if (candidates.empty()) break;
    for (const auto& [t, pre] : candidates) add_event(t, pre);
    if (conds.size() + events.size() > opts.node_guard)
      throw ResourceError("unfolding node guard exceeded");
  }

  // Materialize the unfolded game.
  std::vector<PlaceId> places;
  std::vector<TransitionId> transitions;
  std::vector<Arc> arcs;
  Marking initial;
  std::set<PlaceId> environment, bad;
  BoundedUnfolding u;
  u.bound = bound;
  u.original = game;

  for (const auto& c : conds) {
    places.push_back(c.name);
    u.lambda[c.name] = c.original;
    u.copy_index[c.name] = {c.original, c.ordinal};
    if (game.is_environment(c.original)) environment.insert(c.name);
    if (game.is_bad(c.original)) bad.insert(c.name);
  }
  for (const auto& e : events) {
    transitions.push_back(e.name);
    u.lambda[e.name] = e.original;
    for (int c : e.pre) arcs.push_back({conds[c].name, e.name});
    for (int c : e.post) arcs.push_back({e.name, conds[c].name});
  }
  for (int c : initial_conds) initial.insert(conds[c].name);

  u.game = PetriGame::build(
      PetriNet::build(places, transitions, arcs, initial), environment, bad);
  return u;
}

/// Exhaustive self-check of the homomorphism invariants. Returns a list of
/// human-readable problems; empty on success.
inline std::vector<std::string> verify_homomorphism(const BoundedUnfolding& u) {
  std::vector<std::string> problems;
  const auto& unf = u.game;
  const auto& orig = u.original;

  std::map<PlaceId, int> copy_counts;
  for (const auto& p : unf.net.places()) {
    auto it = u.lambda.find(p);
    if (it == u.lambda.end()) {
      problems.push_back("place without lambda image: " + p);
      continue;
    }
    if (!orig.net.has_place(it->second)) {
      problems.push_back("lambda maps place to non-place: " + p);
      continue;
    }
    ++copy_counts[it->second];
    if (unf.is_environment(p) != orig.is_environment(it->second))
      problems.push_back("place class not preserved: " + p);
    if (unf.is_bad(p) != orig.is_bad(it->second))
      problems.push_back("bad classification not preserved: " + p);
    auto ci = u.copy_index.find(p);
    if (ci == u.copy_index.end())
      problems.push_back("place missing from copy_index: " + p);
    else if (ci->second.first != it->second)
      problems.push_back("copy_index disagrees with lambda: " + p);
    else if (ci->second.second < 0 || ci->second.second >= u.bound)
      problems.push_back("copy ordinal out of range: " + p);
    // Arc images must exist in the original (containment; producers of a
    // copy are generally a subset of the original's).
    for (const auto& t : unf.net.preset(p)) {
      auto lt = u.lambda.find(t);
      if (lt == u.lambda.end() ||
          !orig.net.preset(it->second).count(lt->second))
        problems.push_back("producer arc has no original image: " + t +
                           " -> " + p);
    }
    for (const auto& t : unf.net.postset(p)) {
      auto lt = u.lambda.find(t);
      if (lt == u.lambda.end() ||
          !orig.net.postset(it->second).count(lt->second))
        problems.push_back("consumer arc has no original image: " + p +
                           " -> " + t);
    }
  }
  for (const auto& [orig_place, count] : copy_counts) {
    if (count > u.bound)
      problems.push_back("more than b copies of place: " + orig_place);
  }

  for (const auto& t : unf.net.transitions()) {
    auto it = u.lambda.find(t);
    if (it == u.lambda.end()) {
      problems.push_back("transition without lambda image: " + t);
      continue;
    }
    if (!orig.net.has_transition(it->second)) {
      problems.push_back("lambda maps transition to non-transition: " + t);
      continue;
    }
    // lambda restricted to the pre/postset must be a bijection onto the
    // original pre/postset.
    for (bool post : {false, true}) {
      const auto& copy_side = post ? unf.net.postset(t) : unf.net.preset(t);
      const auto& orig_side =
          post ? orig.net.postset(it->second) : orig.net.preset(it->second);
      std::set<NodeId> image;
      for (const auto& p : copy_side) {
        auto lp = u.lambda.find(p);
        if (lp != u.lambda.end()) image.insert(lp->second);
      }
      if (image != orig_side || copy_side.size() != orig_side.size())
        problems.push_back(std::string(post ? "postset" : "preset") +
                           " of " + t + " does not map bijectively");
    }
  }

  // The initial cut maps bijectively onto the original initial marking.
  std::set<PlaceId> init_image;
  for (const auto& p : unf.net.initial_marking()) {
    auto it = u.lambda.find(p);
    if (it != u.lambda.end()) init_image.insert(it->second);
  }
  if (init_image != orig.net.initial_marking() ||
      unf.net.initial_marking().size() != orig.net.initial_marking().size())
    problems.push_back("initial marking does not map bijectively");

  return problems;
}

}  // namespace pgsynth
