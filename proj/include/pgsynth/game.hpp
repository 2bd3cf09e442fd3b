#pragma once

// Petri games: a net whose places are split between the system and the
// environment, with a set of bad places the system must avoid.

#include <set>

#include "pgsynth/net.hpp"

namespace pgsynth {

struct PetriGame {
  PetriNet net;
  std::set<PlaceId> system_places;
  std::set<PlaceId> environment_places;
  std::set<PlaceId> bad_places;

  static PetriGame build(PetriNet net, const std::set<PlaceId>& environment,
                         const std::set<PlaceId>& bad) {
    PetriGame g;
    for (const auto& p : environment)
      if (!net.has_place(p))
        throw ValidationError("environment set references unknown place: " + p);
    for (const auto& p : bad)
      if (!net.has_place(p))
        throw ValidationError("bad set references unknown place: " + p);
    for (const auto& p : net.places())
      if (!environment.count(p)) g.system_places.insert(p);
    g.environment_places = environment;
    g.bad_places = bad;
    g.net = std::move(net);
    return g;
  }

  bool is_system(const PlaceId& p) const { return system_places.count(p) > 0; }
  bool is_environment(const PlaceId& p) const {
    return environment_places.count(p) > 0;
  }
  bool is_bad(const PlaceId& p) const { return bad_places.count(p) > 0; }

  bool marking_hits_bad(const Marking& m) const {
    for (const auto& p : m)
      if (bad_places.count(p)) return true;
    return false;
  }
};

}  // namespace pgsynth
