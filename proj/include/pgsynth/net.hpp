#pragma once

// 1-bounded Petri nets: markings, enabledness, firing, reachability,
// structural conflict, and place SCCs.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgsynth {

using PlaceId = std::string;
using TransitionId = std::string;
using NodeId = std::string;

/// A marking positions at most one token per place, so a set suffices.
using Marking = std::set<PlaceId>;

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : NetError {
  using NetError::NetError;
};
struct LookupError : NetError {
  using NetError::NetError;
};
struct FiringError : NetError {
  using NetError::NetError;
};
struct UnsafeNetError : NetError {
  using NetError::NetError;
};
struct ResourceError : NetError {
  using NetError::NetError;
};
struct ArgumentError : NetError {
  using NetError::NetError;
};

struct Arc {
  NodeId from;
  NodeId to;
};

/// Immutable 1-bounded Petri net. All operations are pure; the net is safe
/// to share across threads once built.
class PetriNet {
 public:
  PetriNet() = default;

  static PetriNet build(const std::vector<PlaceId>& places,
                        const std::vector<TransitionId>& transitions,
                        const std::vector<Arc>& arcs, const Marking& initial) {
    PetriNet net;
    for (const auto& p : places) {
      if (!net.places_.insert(p).second)
        throw ValidationError("duplicate place: " + p);
    }
    for (const auto& t : transitions) {
      if (net.places_.count(t))
        throw ValidationError("name used as both place and transition: " + t);
      if (!net.transitions_.insert(t).second)
        throw ValidationError("duplicate transition: " + t);
    }
    for (const auto& p : net.places_) {
      net.pre_[p];
      net.post_[p];
    }
    for (const auto& t : net.transitions_) {
      net.pre_[t];
      net.post_[t];
    }
    for (const auto& arc : arcs) {
      bool from_place = net.places_.count(arc.from) > 0;
      bool from_trans = net.transitions_.count(arc.from) > 0;
      bool to_place = net.places_.count(arc.to) > 0;
      bool to_trans = net.transitions_.count(arc.to) > 0;
      if (!from_place && !from_trans)
        throw ValidationError("arc from unknown node: " + arc.from);
      if (!to_place && !to_trans)
        throw ValidationError("arc to unknown node: " + arc.to);
      if (from_place == to_place)
        throw ValidationError("arc must connect a place and a transition: " +
                              arc.from + " -> " + arc.to);
      net.post_[arc.from].insert(arc.to);
      net.pre_[arc.to].insert(arc.from);
    }
    for (const auto& t : net.transitions_) {
      if (net.pre_.at(t).empty())
        throw ValidationError("transition with empty preset: " + t);
      if (net.post_.at(t).empty())
        throw ValidationError("transition with empty postset: " + t);
    }
    for (const auto& p : initial) {
      if (!net.places_.count(p))
        throw ValidationError("initial marking references unknown place: " + p);
    }
    net.initial_ = initial;
    return net;
  }

  const std::set<PlaceId>& places() const { return places_; }
  const std::set<TransitionId>& transitions() const { return transitions_; }
  const Marking& initial_marking() const { return initial_; }

  bool has_place(const NodeId& id) const { return places_.count(id) > 0; }
  bool has_transition(const NodeId& id) const {
    return transitions_.count(id) > 0;
  }
  bool has_node(const NodeId& id) const {
    return has_place(id) || has_transition(id);
  }

  const std::set<NodeId>& preset(const NodeId& node) const {
    auto it = pre_.find(node);
    if (it == pre_.end()) throw LookupError("unknown node: " + node);
    return it->second;
  }

  const std::set<NodeId>& postset(const NodeId& node) const {
    auto it = post_.find(node);
    if (it == post_.end()) throw LookupError("unknown node: " + node);
    return it->second;
  }

  bool is_enabled(const Marking& m, const TransitionId& t) const {
    const auto& pre = preset(t);
    if (!has_transition(t)) throw LookupError("not a transition: " + t);
    for (const auto& p : pre)
      if (!m.count(p)) return false;
    return true;
  }

  /// Successor marking (m \ preset(t)) v postset(t). Firing into a still
  /// occupied place is a hard error: the model is 1-bounded by assumption
  /// and overflow has no defined semantics.
  Marking fire(const Marking& m, const TransitionId& t) const {
    if (!is_enabled(m, t))
      throw FiringError("transition not enabled: " + t);
    Marking out;
    const auto& pre = preset(t);
    const auto& post = postset(t);
    for (const auto& p : m)
      if (!pre.count(p)) out.insert(p);
    for (const auto& p : post) {
      if (out.count(p))
        throw UnsafeNetError("firing " + t + " puts a second token on " + p);
      out.insert(p);
    }
    return out;
  }

  static constexpr std::size_t kDefaultReachGuard = std::size_t{1} << 20;

  /// Fixed point of fire over all enabled transitions from the initial
  /// marking. Throws ResourceError once the guard is exceeded.
  std::set<Marking> reachable_markings(
      std::size_t guard = kDefaultReachGuard) const {
    std::set<Marking> seen;
    std::vector<Marking> work;
    seen.insert(initial_);
    work.push_back(initial_);
    while (!work.empty()) {
      Marking m = std::move(work.back());
      work.pop_back();
      for (const auto& t : transitions_) {
        if (!is_enabled(m, t)) continue;
        Marking next = fire(m, t);
        if (seen.insert(next).second) {
          if (seen.size() > guard)
            throw ResourceError("reachable marking guard exceeded");
          work.push_back(std::move(next));
        }
      }
    }
    return seen;
  }

  /// Structural conflict: some place outside {x, y} reaches x and y through
  /// two distinct outgoing transitions. Reachability is over flow arcs, not
  /// token semantics.
  bool in_conflict(const NodeId& x, const NodeId& y) const {
    if (!has_node(x)) throw LookupError("unknown node: " + x);
    if (!has_node(y)) throw LookupError("unknown node: " + y);
    if (x == y) return false;
    std::map<NodeId, std::set<NodeId>> reach_cache;
    auto reaches = [&](const NodeId& from, const NodeId& target) {
      auto it = reach_cache.find(from);
      if (it == reach_cache.end())
        it = reach_cache.emplace(from, forward_reachable(from)).first;
      return it->second.count(target) > 0;
    };
    for (const auto& p : places_) {
      if (p == x || p == y) continue;
      const auto& outs = post_.at(p);
      for (const auto& t1 : outs) {
        for (const auto& t2 : outs) {
          if (t1 == t2) continue;
          if (reaches(t1, x) && reaches(t2, y)) return true;
        }
      }
    }
    return false;
  }

  /// SCCs of the flow digraph, restricted to places. Nontrivial components
  /// come first (ordered by smallest member); places on no cycle are
  /// collected into one final set.
  std::vector<std::vector<PlaceId>> place_sccs() const {
    std::vector<NodeId> nodes;
    nodes.insert(nodes.end(), places_.begin(), places_.end());
    nodes.insert(nodes.end(), transitions_.begin(), transitions_.end());
    std::map<NodeId, int> index, low;
    std::map<NodeId, bool> on_stack;
    std::vector<NodeId> stack;
    int counter = 0;
    std::vector<std::vector<NodeId>> comps;

    // Tarjan with an explicit stack of (node, child iterator position).
    for (const auto& root : nodes) {
      if (index.count(root)) continue;
      std::vector<std::pair<NodeId, std::set<NodeId>::const_iterator>> dfs;
      index[root] = low[root] = counter++;
      stack.push_back(root);
      on_stack[root] = true;
      dfs.emplace_back(root, post_.at(root).begin());
      while (!dfs.empty()) {
        auto& [v, it] = dfs.back();
        if (it != post_.at(v).end()) {
          NodeId w = *it;
          ++it;
          if (!index.count(w)) {
            index[w] = low[w] = counter++;
            stack.push_back(w);
            on_stack[w] = true;
            dfs.emplace_back(w, post_.at(w).begin());
          } else if (on_stack[w]) {
            low[v] = std::min(low[v], index[w]);
          }
        } else {
          NodeId v_done = v;
          dfs.pop_back();
          if (!dfs.empty())
            low[dfs.back().first] =
                std::min(low[dfs.back().first], low[v_done]);
          if (low[v_done] == index[v_done]) {
            std::vector<NodeId> comp;
            while (true) {
              NodeId w = stack.back();
              stack.pop_back();
              on_stack[w] = false;
              comp.push_back(w);
              if (w == v_done) break;
            }
            comps.push_back(std::move(comp));
          }
        }
      }
    }

    std::vector<std::vector<PlaceId>> result;
    std::set<PlaceId> leftover = places_;
    for (auto& comp : comps) {
      if (comp.size() < 2) continue;
      std::vector<PlaceId> comp_places;
      for (const auto& n : comp)
        if (has_place(n)) comp_places.push_back(n);
      if (comp_places.empty()) continue;
      std::sort(comp_places.begin(), comp_places.end());
      for (const auto& p : comp_places) leftover.erase(p);
      result.push_back(std::move(comp_places));
    }
    std::sort(result.begin(), result.end());
    if (!leftover.empty())
      result.emplace_back(leftover.begin(), leftover.end());
    return result;
  }

 private:
  std::set<NodeId> forward_reachable(const NodeId& start) const {
    std::set<NodeId> seen{start};
    std::vector<NodeId> work{start};
    while (!work.empty()) {
      NodeId n = std::move(work.back());
      work.pop_back();
      for (const auto& next : post_.at(n))
        if (seen.insert(next).second) work.push_back(next);
    }
    return seen;
  }

  std::set<PlaceId> places_;
  std::set<TransitionId> transitions_;
  std::map<NodeId, std::set<NodeId>> pre_, post_;
  Marking initial_;
};

}  // namespace pgsynth
