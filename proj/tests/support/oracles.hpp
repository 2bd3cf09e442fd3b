#pragma once

// Test-only oracles, written independently of the library paths they check:
// a naive reachability search, a Kosaraju SCC computation, and a
// truth-table QBF evaluator.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/formula.hpp"
#include "pgsynth/game.hpp"
#include "pgsynth/net.hpp"

namespace pgsynth::testing {

/// Breadth-first reachability with its own firing rule.
inline std::set<Marking> naive_reach(const PetriNet& net) {
  std::set<Marking> seen{net.initial_marking()};
  std::vector<Marking> queue{net.initial_marking()};
  while (!queue.empty()) {
    Marking m = queue.back();
    queue.pop_back();
    for (const auto& t : net.transitions()) {
      bool enabled = true;
      for (const auto& p : net.preset(t))
        if (!m.count(p)) enabled = false;
      if (!enabled) continue;
      Marking next;
      for (const auto& p : m)
        if (!net.preset(t).count(p)) next.insert(p);
      for (const auto& p : net.postset(t)) next.insert(p);
      if (seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

/// Kosaraju SCCs over the flow digraph, restricted to places, mirroring the
/// contract of PetriNet::place_sccs.
inline std::vector<std::vector<PlaceId>> kosaraju_place_sccs(
    const PetriNet& net) {
  std::vector<NodeId> nodes;
  for (const auto& p : net.places()) nodes.push_back(p);
  for (const auto& t : net.transitions()) nodes.push_back(t);

  std::vector<NodeId> order;
  std::set<NodeId> visited;
  std::function<void(const NodeId&)> dfs1 = [&](const NodeId& v) {
    visited.insert(v);
    for (const auto& w : net.postset(v))
      if (!visited.count(w)) dfs1(w);
    order.push_back(v);
  };
  for (const auto& v : nodes)
    if (!visited.count(v)) dfs1(v);

  std::map<NodeId, int> comp;
  int ncomp = 0;
  std::function<void(const NodeId&, int)> dfs2 = [&](const NodeId& v, int c) {
    comp[v] = c;
    for (const auto& w : net.preset(v))
      if (!comp.count(w)) dfs2(w, c);
  };
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    if (!comp.count(*it)) dfs2(*it, ncomp++);

  std::map<int, std::vector<NodeId>> groups;
  for (const auto& [v, c] : comp) groups[c].push_back(v);

  std::vector<std::vector<PlaceId>> result;
  std::set<PlaceId> leftover(net.places().begin(), net.places().end());
  for (auto& [c, members] : groups) {
    if (members.size() < 2) continue;
    std::vector<PlaceId> places;
    for (const auto& v : members)
      if (net.has_place(v)) places.push_back(v);
    if (places.empty()) continue;
    std::sort(places.begin(), places.end());
    for (const auto& p : places) leftover.erase(p);
    result.push_back(std::move(places));
  }
  std::sort(result.begin(), result.end());
  if (!leftover.empty())
    result.emplace_back(leftover.begin(), leftover.end());
  return result;
}

/// Exact 2-QBF semantics by full enumeration of both blocks. Exponential;
/// keep totals small.
inline bool truth_table_2qbf(const LoweredFormula& f,
                             const std::vector<int>& exists_vars,
                             const std::vector<int>& forall_vars) {
  if (f.is_const) return f.const_value;
  std::vector<bool> assignment(f.nvars, false);
  std::uint64_t ecount = std::uint64_t{1} << exists_vars.size();
  std::uint64_t ucount = std::uint64_t{1} << forall_vars.size();
  for (std::uint64_t e = 0; e < ecount; ++e) {
    for (std::size_t i = 0; i < exists_vars.size(); ++i)
      assignment[exists_vars[i]] = (e >> i) & 1;
    bool all_good = true;
    for (std::uint64_t u = 0; u < ucount && all_good; ++u) {
      for (std::size_t i = 0; i < forall_vars.size(); ++i)
        assignment[forall_vars[i]] = (u >> i) & 1;
      if (!eval_lowered(f, assignment)) all_good = false;
    }
    if (all_good) return true;
  }
  return false;
}

}  // namespace pgsynth::testing
