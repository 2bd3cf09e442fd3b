#include <catch2/catch_amalgamated.hpp>

#include "pgsynth/unfolding.hpp"
#include "support/fixtures.hpp"

using namespace pgsynth;
using pgsynth::testing::nondet_stall_game;
using pgsynth::testing::production_line_2;

namespace {

// Label-isomorphism on node sets: same original label multiset, same arc
// structure through lambda.
bool label_isomorphic_to_original(const BoundedUnfolding& u) {
  const auto& net = u.game.net;
  const auto& orig = u.original.net;
  if (net.places().size() != orig.places().size()) return false;
  if (net.transitions().size() != orig.transitions().size()) return false;
  for (const auto& p : net.places()) {
    std::set<NodeId> pre_image, post_image;
    for (const auto& t : net.preset(p)) pre_image.insert(u.lambda.at(t));
    for (const auto& t : net.postset(p)) post_image.insert(u.lambda.at(t));
    if (pre_image != orig.preset(u.lambda.at(p))) return false;
    if (post_image != orig.postset(u.lambda.at(p))) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("bound must be positive") {
  CHECK_THROWS_AS(unfold(production_line_2(), 0), ArgumentError);
}

TEST_CASE("bound 1 unfolding is label-isomorphic to the game") {
  PetriGame g = production_line_2();
  BoundedUnfolding u = unfold(g, 1);
  CHECK(label_isomorphic_to_original(u));
  CHECK(verify_homomorphism(u).empty());

  // At bound 1 lambda is a bijection.
  std::set<NodeId> images;
  for (const auto& [copy, orig] : u.lambda) images.insert(orig);
  CHECK(images.size() == u.lambda.size());
}

TEST_CASE("bound 1 reachable markings map onto the original's") {
  PetriGame g = production_line_2();
  BoundedUnfolding u = unfold(g, 1);
  std::set<Marking> mapped;
  for (const auto& m : u.game.net.reachable_markings()) {
    Marking image;
    for (const auto& p : m) image.insert(u.lambda.at(p));
    mapped.insert(image);
  }
  CHECK(mapped == g.net.reachable_markings());
}

TEST_CASE("production line at bound 2 splits robot2 by causal past") {
  PetriGame g = production_line_2();
  BoundedUnfolding u = unfold(g, 2);
  CHECK(verify_homomorphism(u).empty());

  std::vector<PlaceId> robot2_copies;
  for (const auto& p : u.game.net.places())
    if (u.lambda.at(p) == "robot2") robot2_copies.push_back(p);
  REQUIRE(robot2_copies.size() == 2);

  // The two copies are produced by the two different profile choices.
  std::set<TransitionId> producers;
  for (const auto& p : robot2_copies) {
    REQUIRE(u.game.net.preset(p).size() == 1);
    producers.insert(u.lambda.at(*u.game.net.preset(p).begin()));
  }
  CHECK(producers == std::set<TransitionId>{"1_robot", "2_robots"});
}

TEST_CASE("acyclic game without joins unfolds isomorphically at any bound") {
  PetriNet net = PetriNet::build(
      {"a", "b", "c", "d"}, {"t1", "t2", "t3"},
      {{"a", "t1"}, {"t1", "b"}, {"b", "t2"}, {"t2", "c"}, {"b", "t3"},
       {"t3", "d"}},
      {"a"});
  PetriGame g = PetriGame::build(std::move(net), {"a"}, {});
  for (int b = 1; b <= 3; ++b) {
    BoundedUnfolding u = unfold(g, b);
    CHECK(label_isomorphic_to_original(u));
    CHECK(verify_homomorphism(u).empty());
  }
}

TEST_CASE("verify_homomorphism flags corrupted lambdas") {
  BoundedUnfolding u = unfold(production_line_2(), 1);
  u.lambda["robot1"] = "robot2";
  CHECK_FALSE(verify_homomorphism(u).empty());
}

TEST_CASE("node count is monotone in the bound") {
  PetriGame g = production_line_2();
  std::size_t prev = 0;
  for (int b = 1; b <= 3; ++b) {
    BoundedUnfolding u = unfold(g, b);
    std::size_t count =
        u.game.net.places().size() + u.game.net.transitions().size();
    CHECK(count >= prev);
    prev = count;
  }
}

TEST_CASE("transition copies map bijectively on pre- and postsets") {
  for (int b : {1, 2}) {
    BoundedUnfolding u = unfold(production_line_2(), b);
    for (const auto& t : u.game.net.transitions()) {
      std::set<NodeId> pre_image;
      for (const auto& p : u.game.net.preset(t))
        pre_image.insert(u.lambda.at(p));
      CHECK(pre_image == u.original.net.preset(u.lambda.at(t)));
      CHECK(u.game.net.preset(t).size() == pre_image.size());
      std::set<NodeId> post_image;
      for (const auto& p : u.game.net.postset(t))
        post_image.insert(u.lambda.at(p));
      CHECK(post_image == u.original.net.postset(u.lambda.at(t)));
      CHECK(u.game.net.postset(t).size() == post_image.size());
    }
  }
}

TEST_CASE("unfolding a looping net folds back into a cycle") {
  PetriNet net = PetriNet::build({"p", "q"}, {"go", "back"},
                                 {{"p", "go"}, {"go", "q"}, {"q", "back"},
                                  {"back", "p"}},
                                 {"p"});
  PetriGame g = PetriGame::build(std::move(net), {}, {});
  BoundedUnfolding u = unfold(g, 1);
  CHECK(u.game.net.places().size() == 2);
  auto sccs = u.game.net.place_sccs();
  REQUIRE(sccs.size() == 1);
  CHECK(sccs[0].size() == 2);  // the fold-back closed the loop

  BoundedUnfolding u2 = unfold(g, 2);
  CHECK(verify_homomorphism(u2).empty());
  CHECK(u2.game.net.places().size() == 4);
}

TEST_CASE("unfolding is deterministic") {
  PetriGame g = production_line_2();
  BoundedUnfolding a = unfold(g, 2);
  BoundedUnfolding b = unfold(g, 2);
  CHECK(a.game.net.places() == b.game.net.places());
  CHECK(a.game.net.transitions() == b.game.net.transitions());
  CHECK(a.lambda == b.lambda);
}

TEST_CASE("stall example unfolds flat at bound 1") {
  BoundedUnfolding u = unfold(nondet_stall_game(), 1);
  CHECK(verify_homomorphism(u).empty());
  CHECK(label_isomorphic_to_original(u));
}
