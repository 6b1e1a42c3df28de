#pragma once

#include "loclab/simulate.hpp"

#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace loclab {

enum class MatchingIssue { none, unknown_edge, shared_node, augmenting_edge };

struct MatchingVerdict {
  MatchingIssue issue = MatchingIssue::none;
  std::size_t witness = 0;  // edge id, or node id for shared_node
  bool ok() const { return issue == MatchingIssue::none; }
  std::string describe() const {
    switch (issue) {
      case MatchingIssue::none: return "ok";
      case MatchingIssue::unknown_edge: return "unknown edge " + std::to_string(witness);
      case MatchingIssue::shared_node: return "not a matching: node " + std::to_string(witness) + " is covered twice";
      case MatchingIssue::augmenting_edge: return "not maximal: edge " + std::to_string(witness) + " can be added";
    }
    return "?";
  }
};

/// Matching check for hyperedges given as member lists over `members` items.
/// A hyperedge that repeats a member can never be matched.
inline MatchingVerdict is_maximal_hypermatching(std::size_t members, const std::vector<std::vector<NodeId>>& hyperedges,
                                                std::span<const std::size_t> chosen) {
  std::vector<bool> covered(members, false), in(hyperedges.size(), false);
  for (std::size_t h : chosen) {
    if (h >= hyperedges.size() || in[h]) return {MatchingIssue::unknown_edge, h};
    in[h] = true;
    auto ms = hyperedges[h];
    std::sort(ms.begin(), ms.end());
    if (std::adjacent_find(ms.begin(), ms.end()) != ms.end()) return {MatchingIssue::shared_node, ms.front()};
    for (NodeId m : ms) {
      if (covered[m]) return {MatchingIssue::shared_node, m};
      covered[m] = true;
    }
  }
  for (std::size_t h = 0; h < hyperedges.size(); ++h) {
    if (in[h]) continue;
    auto ms = hyperedges[h];
    std::sort(ms.begin(), ms.end());
    if (std::adjacent_find(ms.begin(), ms.end()) != ms.end()) continue;
    if (std::none_of(ms.begin(), ms.end(), [&](NodeId m) { return covered[m]; })) return {MatchingIssue::augmenting_edge, h};
  }
  return {};
}

inline std::vector<std::vector<NodeId>> edge_members(const Graph& g) {
  std::vector<std::vector<NodeId>> out;
  for (auto& e : g.edges()) out.push_back({e.u, e.v});
  return out;
}

inline MatchingVerdict is_maximal_matching(const Graph& g, std::span<const EdgeId> m) {
  return is_maximal_hypermatching(g.node_count(), edge_members(g), m);
}

/// Units conflict when they share a member; self-conflicting units carry
/// the label "loop".
inline LabeledGraph conflict_graph(const std::vector<std::vector<NodeId>>& hyperedges) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < hyperedges.size(); ++a)
    for (std::size_t b = a + 1; b < hyperedges.size(); ++b) {
      bool share = false;
      for (NodeId x : hyperedges[a])
        for (NodeId y : hyperedges[b]) share = share || x == y;
      if (share) edges.push_back({a, b});
    }
  Graph g(hyperedges.size(), std::move(edges));
  Labeling l = Labeling::blank(g);
  for (std::size_t h = 0; h < hyperedges.size(); ++h) {
    auto ms = hyperedges[h];
    std::sort(ms.begin(), ms.end());
    if (std::adjacent_find(ms.begin(), ms.end()) != ms.end()) l.nodes[h] = "loop";
  }
  return LabeledGraph(std::move(g), std::move(l));
}

/// One-round greedy on the conflict graph: a unit joins unless it is a loop
/// or an already processed conflicting unit joined. Output node label is
/// "1" for joined units and "0" otherwise.
inline SlocalAlgorithm greedy_unit_algorithm() {
  SlocalAlgorithm a;
  a.locality = 1;
  a.step = [](SlocalContext& ctx) {
    const View& v = ctx.view(1);
    const NodeId me = ctx.current_local();
    bool join = v.base.node_label(me) != "loop";
    for (NodeId u = 0; u < v.size() && join; ++u)
      if (u != me && ctx.state(u) == std::optional<std::string>("1")) join = false;
    std::string bit = join ? "1" : "0";
    ctx.set_state(me, bit);
    ctx.set_output(me, NodeOutput{bit, std::vector<std::string>(v.base.graph().degree(me), "")});
  };
  return a;
}

/// The greedy matcher for plain graphs; its processing units are the edges
/// of `g`, i.e. it runs on conflict_graph(edge_members(g)).
inline SlocalAlgorithm greedy_maximal_matching(const Graph& g) {
  (void)g;
  return greedy_unit_algorithm();
}

/// Unit order induced by a member order: units sorted by the earliest
/// processed member, then the id of the unit's other member, then unit id.
/// This makes an unmatched member take its smallest-id free partner.
inline std::vector<NodeId> induced_unit_order(std::size_t members, const std::vector<std::vector<NodeId>>& hyperedges,
                                              std::span<const NodeId> member_order) {
  std::vector<std::size_t> pos(members, members);
  for (std::size_t i = 0; i < member_order.size(); ++i) pos.at(member_order[i]) = i;
  for (auto p : pos)
    if (p == members) throw input_error("member order is not a permutation");
  struct Key {
    std::size_t first_pos, other, id;
    auto operator<=>(const Key&) const = default;
  };
  std::vector<Key> keys;
  for (std::size_t h = 0; h < hyperedges.size(); ++h) {
    const auto& ms = hyperedges[h];
    if (ms.empty()) {
      keys.push_back({members, members, h});
      continue;
    }
    NodeId lead = *std::min_element(ms.begin(), ms.end(), [&](NodeId a, NodeId b) { return pos[a] < pos[b]; });
    NodeId other = members;
    for (NodeId m : ms)
      if (m != lead) other = std::min(other, m);
    if (other == members) other = lead;
    keys.push_back({pos[lead], other, h});
  }
  std::sort(keys.begin(), keys.end());
  std::vector<NodeId> order;
  for (auto& k : keys) order.push_back(k.id);
  return order;
}

struct GreedyRun {
  std::vector<std::size_t> matched;  // unit ids, ascending
  std::size_t locality = 0;
  std::size_t units = 0;
};

inline GreedyRun run_greedy_units(const std::vector<std::vector<NodeId>>& hyperedges, std::span<const NodeId> unit_order) {
  auto cg = conflict_graph(hyperedges);
  auto run = run_slocal(greedy_unit_algorithm(), cg, unit_order);
  GreedyRun out;
  out.units = hyperedges.size();
  out.locality = run.locality;
  for (std::size_t h = 0; h < hyperedges.size(); ++h)
    if (run.labeling.nodes[h] == "1") out.matched.push_back(h);
  return out;
}

inline GreedyRun run_greedy_matching(const Graph& g, std::span<const NodeId> node_order) {
  auto members = edge_members(g);
  auto order = induced_unit_order(g.node_count(), members, node_order);
  return run_greedy_units(members, order);
}

/// Every maximal matching of a small graph, as ascending edge lists.
inline std::vector<std::vector<EdgeId>> all_maximal_matchings(const Graph& g) {
  std::vector<std::vector<EdgeId>> out;
  std::vector<EdgeId> current;
  std::vector<bool> covered(g.node_count(), false);
  std::function<void(EdgeId)> rec = [&](EdgeId e) {
    if (e == g.edge_count()) {
      if (is_maximal_matching(g, current).ok()) out.push_back(current);
      return;
    }
    rec(e + 1);
    const Edge& ed = g.edge(e);
    if (!covered[ed.u] && !covered[ed.v]) {
      covered[ed.u] = covered[ed.v] = true;
      current.push_back(e);
      rec(e + 1);
      current.pop_back();
      covered[ed.u] = covered[ed.v] = false;
    }
  };
  rec(0);
  return out;
}

}  // namespace loclab
