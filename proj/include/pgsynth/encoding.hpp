#pragma once

// The sequential interleaving encoding and the true-concurrent encoding of
// bounded synthesis over a bounded unfolding, as 2-QBF problems.
//
// Sequential: one transition fires between consecutive markings; the
// universal player picks the interleaving through the marking variables.
// True concurrent: every enabled, allowed, not-stalled transition fires;
// the environment picks per-time choices at its places and may stall
// transitions with a system place in their preset globally. Loops are then
// detected per place SCC instead of globally.

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pgsynth/qbf.hpp"
#include "pgsynth/unfolding.hpp"

namespace pgsynth {

/// Theoretical simulation length 2^{|P^b|} + 1, saturated at an
/// implementation cap. Exposed for completeness arguments; schedules pass
/// much smaller n.
inline std::int64_t max_simulation_length(const BoundedUnfolding& u) {
  constexpr std::int64_t kCap = (std::int64_t{1} << 40) + 1;
  std::size_t p = u.game.net.places().size();
  if (p >= 40) return kCap;
  return (std::int64_t{1} << p) + 1;
}

struct EncodeOptions {
  // Diagnostic switch: drop the stall variables from the true-concurrent
  // encoding. Without them hidden non-determinism goes undetected.
  bool with_stalling = true;
};

namespace detail {

struct EncoderContext {
  const BoundedUnfolding* u;
  QbfProblem* q;
  int n;

  std::map<std::pair<PlaceId, TransitionId>, int> svar;
  std::map<std::pair<PlaceId, int>, int> mvar;
  std::map<std::tuple<PlaceId, TransitionId, int>, int> evar;
  std::map<TransitionId, int> lvar;

  NodeId_t S(const PlaceId& p, const TransitionId& original) const {
    return q->store.mk_var(svar.at({p, original}));
  }
  NodeId_t M(const PlaceId& p, int i) const {
    return q->store.mk_var(mvar.at({p, i}));
  }
  NodeId_t E(const PlaceId& p, const TransitionId& t, int i) const {
    return q->store.mk_var(evar.at({p, t, i}));
  }
  NodeId_t L(const TransitionId& t) const {
    return q->store.mk_var(lvar.at(t));
  }

  bool has_system_preset(const TransitionId& t) const {
    for (const auto& p : u->game.net.preset(t))
      if (u->game.is_system(p)) return true;
    return false;
  }
};

inline void allocate_strategy_vars(EncoderContext& ctx) {
  const auto& net = ctx.u->game.net;
  for (const auto& p : net.places()) {
    if (!ctx.u->game.is_system(p)) continue;
    std::set<TransitionId> originals;
    for (const auto& t : net.postset(p)) originals.insert(ctx.u->lambda.at(t));
    for (const auto& orig : originals) {
      VarInfo info;
      info.role = VarRole::Strategy;
      info.place = p;
      info.transition = orig;
      ctx.svar[{p, orig}] = ctx.q->vars.add(info);
    }
  }
}

inline void allocate_marking_vars(EncoderContext& ctx) {
  const auto& net = ctx.u->game.net;
  for (int i = 1; i <= ctx.n; ++i) {
    for (const auto& p : net.places()) {
      VarInfo info;
      info.role = VarRole::Marking;
      info.place = p;
      info.time = i;
      ctx.mvar[{p, i}] = ctx.q->vars.add(info);
    }
  }
}

inline void allocate_env_vars(EncoderContext& ctx, bool with_stalling) {
  const auto& net = ctx.u->game.net;
  for (int i = 1; i < ctx.n; ++i) {
    for (const auto& p : net.places()) {
      if (!ctx.u->game.is_environment(p)) continue;
      for (const auto& t : net.postset(p)) {
        VarInfo info;
        info.role = VarRole::EnvChoice;
        info.place = p;
        info.transition = t;
        info.time = i;
        ctx.evar[{p, t, i}] = ctx.q->vars.add(info);
      }
    }
  }
  if (with_stalling) {
    for (const auto& t : net.transitions()) {
      if (!ctx.has_system_preset(t)) continue;
      VarInfo info;
      info.role = VarRole::Stall;
      info.transition = t;
      ctx.lvar[t] = ctx.q->vars.add(info);
    }
  }
}

inline NodeId_t build_initial(EncoderContext& ctx) {
  const auto& net = ctx.u->game.net;
  std::vector<NodeId_t> conj;
  for (const auto& p : net.places()) {
    NodeId_t v = ctx.M(p, 1);
    conj.push_back(net.initial_marking().count(p) ? v
                                                  : ctx.q->store.mk_not(v));
  }
  return ctx.q->store.mk_and(std::move(conj));
}

inline NodeId_t build_nobadplace(EncoderContext& ctx, int i) {
  std::vector<NodeId_t> conj;
  for (const auto& p : ctx.u->game.net.places())
    if (ctx.u->game.is_bad(p))
      conj.push_back(ctx.q->store.mk_not(ctx.M(p, i)));
  return ctx.q->store.mk_and(std::move(conj));
}

inline NodeId_t build_deterministic(EncoderContext& ctx, int i) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::vector<TransitionId> ts(net.transitions().begin(),
                               net.transitions().end());
  std::vector<NodeId_t> conj;
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      bool shared_system = false;
      for (const auto& p : net.preset(ts[a]))
        if (ctx.u->game.is_system(p) && net.preset(ts[b]).count(p)) {
          shared_system = true;
          break;
        }
      if (!shared_system) continue;
      std::vector<NodeId_t> disj;
      std::set<PlaceId> both(net.preset(ts[a]).begin(),
                             net.preset(ts[a]).end());
      both.insert(net.preset(ts[b]).begin(), net.preset(ts[b]).end());
      for (const auto& p : both) disj.push_back(st.mk_not(ctx.M(p, i)));
      for (const auto& p : net.preset(ts[a]))
        if (ctx.u->game.is_system(p))
          disj.push_back(st.mk_not(ctx.S(p, ctx.u->lambda.at(ts[a]))));
      for (const auto& p : net.preset(ts[b]))
        if (ctx.u->game.is_system(p))
          disj.push_back(st.mk_not(ctx.S(p, ctx.u->lambda.at(ts[b]))));
      conj.push_back(st.mk_or(std::move(disj)));
    }
  }
  return st.mk_and(std::move(conj));
}

inline NodeId_t build_deadlock(EncoderContext& ctx, int i) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::vector<NodeId_t> conj;
  for (const auto& t : net.transitions()) {
    std::vector<NodeId_t> disj;
    for (const auto& p : net.preset(t)) disj.push_back(st.mk_not(ctx.M(p, i)));
    for (const auto& p : net.preset(t))
      if (ctx.u->game.is_system(p))
        disj.push_back(st.mk_not(ctx.S(p, ctx.u->lambda.at(t))));
    conj.push_back(st.mk_or(std::move(disj)));
  }
  return st.mk_and(std::move(conj));
}

inline NodeId_t build_terminating(EncoderContext& ctx, int i) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::vector<NodeId_t> conj;
  for (const auto& t : net.transitions()) {
    std::vector<NodeId_t> disj;
    for (const auto& p : net.preset(t)) disj.push_back(st.mk_not(ctx.M(p, i)));
    conj.push_back(st.mk_or(std::move(disj)));
  }
  return st.mk_and(std::move(conj));
}

inline NodeId_t build_win(EncoderContext& ctx, int i) {
  auto& st = ctx.q->store;
  return st.mk_and({build_nobadplace(ctx, i), build_deterministic(ctx, i),
                    st.mk_implies(build_deadlock(ctx, i),
                                  build_terminating(ctx, i))});
}

/// Loop over the given place sets: each set repeats its marking at some
/// pair of time points. The sequential encoding passes one set with all
/// places; the tc encoding passes the place SCCs.
inline NodeId_t build_loop(EncoderContext& ctx,
                           const std::vector<std::vector<PlaceId>>& sets) {
  auto& st = ctx.q->store;
  std::vector<NodeId_t> conj;
  for (const auto& set : sets) {
    std::vector<NodeId_t> disj;
    for (int i1 = 1; i1 <= ctx.n; ++i1) {
      for (int i2 = i1 + 1; i2 <= ctx.n; ++i2) {
        std::vector<NodeId_t> eq;
        for (const auto& p : set)
          eq.push_back(st.mk_iff(ctx.M(p, i1), ctx.M(p, i2)));
        disj.push_back(st.mk_and(std::move(eq)));
      }
    }
    conj.push_back(st.mk_or(std::move(disj)));
  }
  return st.mk_and(std::move(conj));
}

inline NodeId_t build_seqflow(EncoderContext& ctx, int i) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::vector<NodeId_t> disj;
  for (const auto& t : net.transitions()) {
    std::vector<NodeId_t> conj;
    const auto& pre = net.preset(t);
    const auto& post = net.postset(t);
    for (const auto& p : pre) conj.push_back(ctx.M(p, i));
    for (const auto& p : pre)
      if (ctx.u->game.is_system(p))
        conj.push_back(ctx.S(p, ctx.u->lambda.at(t)));
    for (const auto& p : post) conj.push_back(ctx.M(p, i + 1));
    for (const auto& p : pre)
      if (!post.count(p)) conj.push_back(st.mk_not(ctx.M(p, i + 1)));
    for (const auto& p : net.places())
      if (!pre.count(p) && !post.count(p))
        conj.push_back(st.mk_iff(ctx.M(p, i), ctx.M(p, i + 1)));
    disj.push_back(st.mk_and(std::move(conj)));
  }
  return st.mk_or(std::move(disj));
}

inline NodeId_t build_enabled(EncoderContext& ctx, int i,
                              const TransitionId& t, bool with_stalling) {
  const auto& net = ctx.u->game.net;
  std::vector<NodeId_t> conj;
  for (const auto& p : net.preset(t)) conj.push_back(ctx.M(p, i));
  for (const auto& p : net.preset(t))
    if (ctx.u->game.is_system(p))
      conj.push_back(ctx.S(p, ctx.u->lambda.at(t)));
  for (const auto& p : net.preset(t))
    if (ctx.u->game.is_environment(p)) conj.push_back(ctx.E(p, t, i));
  if (with_stalling && ctx.has_system_preset(t)) conj.push_back(ctx.L(t));
  return ctx.q->store.mk_and(std::move(conj));
}

inline NodeId_t build_tcflow(EncoderContext& ctx, int i, bool with_stalling) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::map<TransitionId, NodeId_t> enabled;
  for (const auto& t : net.transitions())
    enabled[t] = build_enabled(ctx, i, t, with_stalling);

  std::vector<NodeId_t> fire;
  for (const auto& t : net.transitions()) {
    std::vector<NodeId_t> effect;
    for (const auto& p : net.preset(t))
      if (!net.postset(t).count(p))
        effect.push_back(st.mk_not(ctx.M(p, i + 1)));
    for (const auto& p : net.postset(t)) effect.push_back(ctx.M(p, i + 1));
    fire.push_back(st.mk_implies(enabled[t], st.mk_and(std::move(effect))));
  }

  std::vector<NodeId_t> update;
  for (const auto& p : net.places()) {
    std::vector<NodeId_t> none;
    for (const auto& t : net.preset(p)) none.push_back(st.mk_not(enabled[t]));
    for (const auto& t : net.postset(p))
      if (!net.preset(p).count(t)) none.push_back(st.mk_not(enabled[t]));
    update.push_back(st.mk_implies(st.mk_and(std::move(none)),
                                   st.mk_iff(ctx.M(p, i), ctx.M(p, i + 1))));
  }

  return st.mk_and(
      {st.mk_and(std::move(fire)), st.mk_and(std::move(update))});
}

inline NodeId_t build_choice(EncoderContext& ctx) {
  const auto& net = ctx.u->game.net;
  auto& st = ctx.q->store;
  std::vector<NodeId_t> conj;
  for (const auto& p : net.places()) {
    if (!ctx.u->game.is_environment(p)) continue;
    const auto& outs = net.postset(p);
    // Places without outgoing transitions make no choice; the literal
    // formula would otherwise collapse to a constant and void the matrix.
    if (outs.empty()) continue;
    for (int i = 1; i < ctx.n; ++i) {
      std::vector<NodeId_t> one_of;
      for (const auto& t : outs) {
        std::vector<NodeId_t> pick{ctx.E(p, t, i)};
        for (const auto& t2 : outs)
          if (t2 != t) pick.push_back(st.mk_not(ctx.E(p, t2, i)));
        one_of.push_back(st.mk_and(std::move(pick)));
      }
      conj.push_back(st.mk_or(std::move(one_of)));
    }
  }
  return st.mk_and(std::move(conj));
}

}  // namespace detail

inline QbfProblem encode_sequential(const BoundedUnfolding& u, int n) {
  if (n < 1) throw ArgumentError("simulation length must be >= 1");
  QbfProblem q;
  q.kind = EncodingKind::Sequential;
  q.n = n;
  q.bound = u.bound;

  detail::EncoderContext ctx{&u, &q, n, {}, {}, {}, {}};
  detail::allocate_strategy_vars(ctx);
  detail::allocate_marking_vars(ctx);

  auto& st = q.store;
  NodeId_t sequence = detail::build_initial(ctx);
  std::vector<NodeId_t> conj;
  for (int i = 1; i <= n; ++i) {
    if (i > 1) sequence = st.mk_and({sequence, detail::build_seqflow(ctx, i - 1)});
    NodeId_t win = detail::build_win(ctx, i);
    if (i < n) {
      conj.push_back(st.mk_implies(sequence, win));
    } else if (n == 1) {
      conj.push_back(st.mk_implies(sequence, win));
    } else {
      std::vector<PlaceId> all(u.game.net.places().begin(),
                               u.game.net.places().end());
      NodeId_t loop = detail::build_loop(ctx, {all});
      conj.push_back(st.mk_implies(sequence, st.mk_and({win, loop})));
    }
  }
  q.matrix = st.mk_and(std::move(conj));
  return q;
}

inline QbfProblem encode_true_concurrent(const BoundedUnfolding& u, int n,
                                         const EncodeOptions& opts = {}) {
  if (n < 1) throw ArgumentError("simulation length must be >= 1");
  QbfProblem q;
  q.kind = EncodingKind::TrueConcurrent;
  q.n = n;
  q.bound = u.bound;

  detail::EncoderContext ctx{&u, &q, n, {}, {}, {}, {}};
  detail::allocate_strategy_vars(ctx);
  detail::allocate_marking_vars(ctx);
  detail::allocate_env_vars(ctx, opts.with_stalling);

  auto& st = q.store;
  NodeId_t sequence = detail::build_initial(ctx);
  std::vector<NodeId_t> conj;
  for (int i = 1; i <= n; ++i) {
    if (i > 1)
      sequence = st.mk_and(
          {sequence, detail::build_tcflow(ctx, i - 1, opts.with_stalling)});
    NodeId_t win = detail::build_win(ctx, i);
    if (i < n) {
      conj.push_back(st.mk_implies(sequence, win));
    } else if (n == 1) {
      conj.push_back(st.mk_implies(sequence, win));
    } else {
      NodeId_t loop = detail::build_loop(ctx, u.game.net.place_sccs());
      conj.push_back(st.mk_implies(sequence, st.mk_and({win, loop})));
    }
  }
  q.matrix = st.mk_implies(detail::build_choice(ctx),
                           st.mk_and(std::move(conj)));
  return q;
}

struct FormulaStats {
  int strategy_vars = 0;
  int marking_vars = 0;
  int env_choice_vars = 0;
  int stall_vars = 0;
  int aux_vars = 0;
  int and_gates = 0;
  int or_gates = 0;

  std::string csv_header() const {
    return "strategy_vars,marking_vars,env_choice_vars,stall_vars,aux_vars,"
           "and_gates,or_gates";
  }
  std::string csv_row() const {
    return std::to_string(strategy_vars) + "," + std::to_string(marking_vars) +
           "," + std::to_string(env_choice_vars) + "," +
           std::to_string(stall_vars) + "," + std::to_string(aux_vars) + "," +
           std::to_string(and_gates) + "," + std::to_string(or_gates);
  }
};

inline FormulaStats formula_stats(const QbfProblem& q) {
  FormulaStats s;
  for (int v = 0; v < q.vars.count(); ++v) {
    switch (q.vars.info(v).role) {
      case VarRole::Strategy: ++s.strategy_vars; break;
      case VarRole::Marking: ++s.marking_vars; break;
      case VarRole::EnvChoice: ++s.env_choice_vars; break;
      case VarRole::Stall: ++s.stall_vars; break;
      case VarRole::Aux: ++s.aux_vars; break;
    }
  }
  LoweredFormula f = q.lowered();
  for (const auto& g : f.gates) {
    if (g.is_and)
      ++s.and_gates;
    else
      ++s.or_gates;
  }
  return s;
}

}  // namespace pgsynth
