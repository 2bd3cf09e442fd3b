#include <catch2/catch_amalgamated.hpp>

#include "pgsynth/sat.hpp"
#include "pgsynth/solve.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"
#include "support/random_qbf.hpp"

using namespace pgsynth;
using namespace pgsynth::testing;

namespace {

QbfProblem make_problem(int ne, int nu,
                        std::function<NodeId_t(QbfProblem&)> build) {
  QbfProblem q;
  for (int i = 0; i < ne; ++i) {
    VarInfo info;
    info.role = VarRole::Strategy;
    info.place = "s" + std::to_string(i);
    q.vars.add(info);
  }
  for (int i = 0; i < nu; ++i) {
    VarInfo info;
    info.role = VarRole::Marking;
    info.place = "u" + std::to_string(i);
    info.time = 1;
    q.vars.add(info);
  }
  q.matrix = build(q);
  return q;
}

}  // namespace

TEST_CASE("sat solver handles plain propositional formulas") {
  SECTION("simple satisfiable") {
    SatSolver s;
    s.ensure_vars(3);
    s.add_clause({SatSolver::lit(0, true), SatSolver::lit(1, true)});
    s.add_clause({SatSolver::lit(0, false), SatSolver::lit(2, true)});
    CHECK(s.solve());
  }
  SECTION("simple unsatisfiable") {
    SatSolver s;
    s.ensure_vars(2);
    s.add_clause({SatSolver::lit(0, true)});
    s.add_clause({SatSolver::lit(0, false), SatSolver::lit(1, true)});
    s.add_clause({SatSolver::lit(1, false)});
    CHECK_FALSE(s.solve());
  }
  SECTION("random 3-cnf agrees with exhaustive enumeration") {
    std::mt19937 rng(4242);
    for (int round = 0; round < 300; ++round) {
      int nv = rand_int(rng, 1, 10);
      int nc = rand_int(rng, 1, 40);
      std::vector<std::vector<int>> clauses;
      for (int c = 0; c < nc; ++c) {
        std::vector<int> cl;
        int width = rand_int(rng, 1, 3);
        for (int k = 0; k < width; ++k)
          cl.push_back(SatSolver::lit(rand_int(rng, 0, nv - 1),
                                      rand_int(rng, 0, 1) == 1));
        clauses.push_back(cl);
      }

      bool expected = false;
      for (int m = 0; m < (1 << nv) && !expected; ++m) {
        bool all = true;
        for (const auto& cl : clauses) {
          bool sat = false;
          for (int l : cl) {
            bool v = (m >> SatSolver::lit_var(l)) & 1;
            if (v == SatSolver::lit_sign(l)) sat = true;
          }
          if (!sat) all = false;
        }
        if (all) expected = true;
      }

      SatSolver s;
      s.ensure_vars(nv);
      for (auto& cl : clauses) s.add_clause(std::move(cl));
      CHECK(s.solve() == expected);
    }
  }
  SECTION("assumptions restrict without committing") {
    SatSolver s;
    s.ensure_vars(2);
    s.add_clause({SatSolver::lit(0, true), SatSolver::lit(1, true)});
    CHECK_FALSE(s.solve({SatSolver::lit(0, false), SatSolver::lit(1, false)}));
    CHECK(s.solve({SatSolver::lit(0, false)}));
    CHECK(s.model_value(1));
    CHECK(s.solve());
  }
}

TEST_CASE("eval_bruteforce on textbook cases") {
  SECTION("constant true is SAT with the all-false witness") {
    QbfProblem q = make_problem(2, 0, [](QbfProblem& p) {
      return p.store.mk_true();
    });
    SolveResult r = eval_bruteforce(q);
    CHECK(r.status == SolveStatus::Sat);
    CHECK(r.witness == std::map<int, bool>{{0, false}, {1, false}});
  }
  SECTION("exists x forall y (x or y)") {
    QbfProblem q = make_problem(1, 1, [](QbfProblem& p) {
      return p.store.mk_or({p.store.mk_var(0), p.store.mk_var(1)});
    });
    SolveResult r = eval_bruteforce(q);
    CHECK(r.status == SolveStatus::Sat);
    CHECK(r.witness.at(0) == true);
  }
  SECTION("exists x forall y (x and y)") {
    QbfProblem q = make_problem(1, 1, [](QbfProblem& p) {
      return p.store.mk_and({p.store.mk_var(0), p.store.mk_var(1)});
    });
    CHECK(eval_bruteforce(q).status == SolveStatus::Unsat);
  }
  SECTION("caps produce resource errors") {
    QbfProblem q = make_problem(3, 0, [](QbfProblem& p) {
      return p.store.mk_var(0);
    });
    BruteForceCaps caps;
    caps.max_strategy_vars = 2;
    CHECK_THROWS_AS(eval_bruteforce(q, caps), ResourceError);
  }
  SECTION("witness is the lexicographically first one") {
    // forall-free: every assignment works, so all-false must come back.
    QbfProblem q = make_problem(3, 0, [](QbfProblem& p) {
      return p.store.mk_or(
          {p.store.mk_var(0), p.store.mk_not(p.store.mk_var(1)),
           p.store.mk_var(2)});
    });
    SolveResult r = eval_bruteforce(q);
    REQUIRE(r.status == SolveStatus::Sat);
    CHECK(r.witness == std::map<int, bool>{{0, false}, {1, false}, {2, false}});
  }
}

TEST_CASE("eval_bruteforce and cegar agree with the truth table") {
  std::mt19937 rng(111222);
  for (int round = 0; round < 200; ++round) {
    int ne = rand_int(rng, 0, 5);
    int nu = rand_int(rng, 0, 5);
    QbfProblem q = random_qbf(rng, ne, nu, rand_int(rng, 1, 25));

    LoweredFormula f = q.lowered();
    bool expected = truth_table_2qbf(f, q.strategy_vars(), q.universal_vars());

    SolveResult brute = eval_bruteforce(q);
    SolveResult cegar = solve_cegar(q);
    CHECK(brute.status ==
          (expected ? SolveStatus::Sat : SolveStatus::Unsat));
    CHECK(cegar.status == brute.status);

    if (brute.status == SolveStatus::Sat) {
      // Both witnesses must actually win against every universal assignment.
      for (const auto& witness : {brute.witness, cegar.witness}) {
        std::vector<bool> assignment(q.vars.count(), false);
        for (const auto& [v, val] : witness) assignment[v] = val;
        std::uint64_t ucount = std::uint64_t{1} << nu;
        auto universal = q.universal_vars();
        for (std::uint64_t u = 0; u < ucount; ++u) {
          for (std::size_t i = 0; i < universal.size(); ++i)
            assignment[universal[i]] = (u >> i) & 1;
          CHECK(eval_lowered(f, assignment));
        }
      }
    }
  }
}

TEST_CASE("extract_strategy") {
  SECTION("bruteforce witnesses pass through") {
    QbfProblem q = make_problem(2, 1, [](QbfProblem& p) {
      // x0 must be true; x1 free; universal u irrelevant.
      return p.store.mk_and({p.store.mk_var(0),
                             p.store.mk_or({p.store.mk_var(2),
                                            p.store.mk_not(p.store.mk_var(2))})});
    });
    InternalBackend backend(InternalBackend::Mode::BruteForce);
    auto assignment = extract_strategy(q, backend);
    CHECK(assignment.at(0) == true);
    CHECK(assignment.at(1) == false);  // lexicographically first
  }

  SECTION("probing recovers a unique witness") {
    // Unique witness: x0 true, x1 false.
    QbfProblem q = make_problem(2, 1, [](QbfProblem& p) {
      return p.store.mk_and(
          {p.store.mk_var(0), p.store.mk_not(p.store.mk_var(1)),
           p.store.mk_implies(p.store.mk_var(2), p.store.mk_var(2))});
    });

    // A backend that strips witnesses, to force the probing path.
    class Stripped : public SolverBackend {
     public:
      SolveResult solve(const QbfProblem& q2) override {
        SolveResult r = solve_cegar(q2);
        r.witness.clear();
        return r;
      }
      std::string name() const override { return "stripped"; }
    } backend;

    auto assignment = extract_strategy(q, backend);
    CHECK(assignment == std::map<int, bool>{{0, true}, {1, false}});
  }

  SECTION("non-SAT problems are rejected") {
    QbfProblem q = make_problem(1, 0, [](QbfProblem& p) {
      return p.store.mk_and({p.store.mk_var(0),
                             p.store.mk_not(p.store.mk_var(0))});
    });
    InternalBackend backend;
    CHECK_THROWS_AS(extract_strategy(q, backend), ExtractionError);
  }
}
