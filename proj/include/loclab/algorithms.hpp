#pragma once

#include "loclab/simulate.hpp"

#include <algorithm>
#include <string>
#include <vector>

// Named rules for the simulators, shared by the command line and the checks.
namespace loclab::algorithms {

/// Node label: size of the view. Ports: degree of the neighbor when it is
/// in the view.
inline LocalAlgorithm view_census(std::size_t radius) {
  LocalAlgorithm a;
  a.locality = radius;
  a.rule = [](const View& v) {
    const NodeId me = v.anchor();
    NodeOutput o{std::to_string(v.size()), {}};
    for (auto& port : v.ports[me]) {
      if (!port.local_edge) {
        o.ports.push_back("");
        continue;
      }
      NodeId other = v.base.graph().other_end(*port.local_edge, me);
      o.ports.push_back(std::to_string(v.ports[other].size()));
    }
    return o;
  };
  return a;
}

inline std::vector<std::string> seed_alphabet(std::size_t k) {
  std::vector<std::string> s;
  for (std::size_t i = 0; i < k; ++i) s.push_back(std::to_string(i));
  return s;
}

/// Node label: own seed and the number of view nodes with a nonzero seed.
/// Ports carry the neighbor's seed when the neighbor is in the view.
inline RandomizedLocalAlgorithm seed_census(std::size_t radius, std::size_t k = 2) {
  RandomizedLocalAlgorithm a;
  a.locality = radius;
  a.seeds = seed_alphabet(k);
  a.rule = [](const View& v, std::span<const std::string> seeds) {
    const NodeId me = v.anchor();
    auto busy = std::count_if(seeds.begin(), seeds.end(), [](const std::string& s) { return s != "0"; });
    NodeOutput o{seeds[me] + ":" + std::to_string(busy), {}};
    for (auto& port : v.ports[me])
      o.ports.push_back(port.local_edge ? seeds[v.base.graph().other_end(*port.local_edge, me)] : "");
    return o;
  };
  return a;
}

/// Every edge carries 1/2 when its endpoints drew different seeds and 0
/// otherwise; node labels are 0. A feasible fractional matching.
inline RandomizedLocalAlgorithm disagreement_edges(std::size_t radius, std::size_t k = 2) {
  RandomizedLocalAlgorithm a;
  a.locality = std::max<std::size_t>(radius, 1);
  a.seeds = seed_alphabet(k);
  a.rule = [](const View& v, std::span<const std::string> seeds) {
    const NodeId me = v.anchor();
    NodeOutput o{"0", {}};
    for (auto& port : v.ports[me]) {
      NodeId other = v.base.graph().other_end(*port.local_edge, me);
      o.ports.push_back(seeds[me] != seeds[other] ? "1/2" : "0");
    }
    return o;
  };
  return a;
}

inline const std::vector<std::string>& local_names() {
  static const std::vector<std::string> n{"view-census"};
  return n;
}

inline const std::vector<std::string>& randomized_names() {
  static const std::vector<std::string> n{"seed-census", "disagreement"};
  return n;
}

inline LocalAlgorithm local_by_name(const std::string& name, std::size_t radius) {
  if (name == "view-census") return view_census(radius);
  throw input_error("unknown LOCAL algorithm '" + name + "'");
}

inline RandomizedLocalAlgorithm randomized_by_name(const std::string& name, std::size_t radius, std::size_t k) {
  if (k == 0) throw input_error("seed alphabet must be nonempty");
  if (name == "seed-census") return seed_census(radius, k);
  if (name == "disagreement") return disagreement_edges(radius, k);
  throw input_error("unknown randomized algorithm '" + name + "'");
}

}  // namespace loclab::algorithms
