#pragma once

// Random small QBF problems for solver cross-checks.

#include <random>
#include <vector>

#include "pgsynth/qbf.hpp"

namespace pgsynth::testing {

/// A random 2-QBF problem: ne existential (strategy-role) variables, nu
/// universal (marking-role) variables, and a random connective tree.
inline QbfProblem random_qbf(std::mt19937& rng, int ne, int nu,
                             int connectives) {
  QbfProblem q;
  for (int i = 0; i < ne; ++i) {
    VarInfo info;
    info.role = VarRole::Strategy;
    info.place = "s" + std::to_string(i);
    info.transition = "t";
    q.vars.add(info);
  }
  for (int i = 0; i < nu; ++i) {
    VarInfo info;
    info.role = VarRole::Marking;
    info.place = "u" + std::to_string(i);
    info.time = 1;
    q.vars.add(info);
  }

  std::uniform_int_distribution<int> op_pick(0, 4);
  std::vector<NodeId_t> pool;
  for (int v = 0; v < ne + nu; ++v) pool.push_back(q.store.mk_var(v));
  if (pool.empty()) {
    pool.push_back(q.store.mk_true());
    pool.push_back(q.store.mk_false());
  }

  auto draw = [&]() { return pool[std::uniform_int_distribution<std::size_t>(
                          0, pool.size() - 1)(rng)]; };

  for (int i = 0; i < connectives; ++i) {
    NodeId_t a = draw();
    NodeId_t b = draw();
    NodeId_t node;
    switch (op_pick(rng)) {
      case 0: node = q.store.mk_and({a, b}); break;
      case 1: node = q.store.mk_or({a, b}); break;
      case 2: node = q.store.mk_not(a); break;
      case 3: node = q.store.mk_implies(a, b); break;
      default: node = q.store.mk_iff(a, b); break;
    }
    pool.push_back(node);
  }
  q.matrix = pool.back();
  return q;
}

}  // namespace pgsynth::testing
