#pragma once

// Shared test fixtures: the production-line running example and the
// stalling counterexample net.

#include "pgsynth/game.hpp"
#include "pgsynth/net.hpp"

namespace pgsynth::testing {

/// Production line with two robots: the environment picks whether one or
/// both robots must repair; mismatched decisions reach the bad place.
inline PetriGame production_line_2() {
  std::vector<PlaceId> places = {
      "env",      "1_robot_check", "2_robots_check", "env1",     "env2",
      "robot1",   "robot2",        "ignored1",       "ignored2", "repaired1",
      "repaired2", "bad"};
  std::vector<TransitionId> transitions = {
      "1_robot",       "2_robots",      "ignore1",     "repair1",
      "ignore2",       "repair2",       "wrong_ignore1", "wrong_ignore2",
      "wrong_repair",  "wrong_ignore3"};
  std::vector<Arc> arcs = {
      {"env", "1_robot"},
      {"1_robot", "1_robot_check"},
      {"1_robot", "env1"},
      {"1_robot", "robot1"},
      {"1_robot", "env2"},
      {"1_robot", "robot2"},
      {"env", "2_robots"},
      {"2_robots", "2_robots_check"},
      {"2_robots", "env1"},
      {"2_robots", "robot1"},
      {"2_robots", "env2"},
      {"2_robots", "robot2"},
      {"robot1", "ignore1"},
      {"ignore1", "ignored1"},
      {"env1", "repair1"},
      {"robot1", "repair1"},
      {"repair1", "repaired1"},
      {"robot2", "ignore2"},
      {"ignore2", "ignored2"},
      {"env2", "repair2"},
      {"robot2", "repair2"},
      {"repair2", "repaired2"},
      {"ignored1", "wrong_ignore1"},
      {"1_robot_check", "wrong_ignore1"},
      {"wrong_ignore1", "bad"},
      {"ignored2", "wrong_ignore2"},
      {"2_robots_check", "wrong_ignore2"},
      {"wrong_ignore2", "bad"},
      {"repaired2", "wrong_repair"},
      {"1_robot_check", "wrong_repair"},
      {"wrong_repair", "bad"},
      {"ignored1", "wrong_ignore3"},
      {"2_robots_check", "wrong_ignore3"},
      {"wrong_ignore3", "bad"},
  };
  PetriNet net = PetriNet::build(places, transitions, arcs, {"env"});
  std::set<PlaceId> environment = {"env",  "1_robot_check", "2_robots_check",
                                   "env1", "env2"};
  return PetriGame::build(std::move(net), environment, {"bad"});
}

/// The stalling counterexample: no bad places, but any strategy keeping
/// both t4 and t6 is non-deterministic at sys, and dropping either one
/// deadlocks some environment branch.
inline PetriGame nondet_stall_game() {
  std::vector<PlaceId> places = {"env0", "e1", "e2", "e4", "e5", "sys"};
  std::vector<TransitionId> transitions = {"t1", "t2", "t3", "t4", "t5", "t6"};
  std::vector<Arc> arcs = {
      {"env0", "t1"}, {"t1", "e1"},
      {"env0", "t2"}, {"t2", "e2"},
      {"env0", "t3"}, {"t3", "e1"}, {"t3", "e2"},
      {"e2", "t5"},   {"t5", "e4"},
      {"sys", "t4"},  {"e1", "t4"}, {"t4", "e5"},
      {"sys", "t6"},  {"e4", "t6"}, {"t6", "e5"},
  };
  PetriNet net = PetriNet::build(places, transitions, arcs, {"env0", "sys"});
  std::set<PlaceId> environment = {"env0", "e1", "e2", "e4", "e5"};
  return PetriGame::build(std::move(net), environment, {});
}

}  // namespace pgsynth::testing
