#pragma once

#include "loclab/common.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace loclab {

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  auto operator<=>(const Edge&) const = default;
};

struct HalfEdge {
  NodeId node = 0;
  EdgeId edge = 0;
  auto operator<=>(const HalfEdge&) const = default;
};

/// Undirected graph on dense node ids 0..n-1 with dense edge ids.
///
/// Every node carries an explicit ordering of its incident edges (its
/// adjacency list). Parallel edges are rejected unless the multi flag is set;
/// self-loops are always rejected.
class Graph {
 public:
  Graph() = default;

  explicit Graph(std::size_t n, std::vector<Edge> edges = {}, bool multi = false)
      : n_(n), multi_(multi), edges_(std::move(edges)), adjacency_(n) {
    validate_edges();
    for (EdgeId e = 0; e < edges_.size(); ++e) {
      adjacency_[edges_[e].u].push_back(e);
      adjacency_[edges_[e].v].push_back(e);
    }
  }

  Graph(std::size_t n, std::vector<Edge> edges, std::vector<std::vector<EdgeId>> adjacency_order,
        bool multi)
      : n_(n), multi_(multi), edges_(std::move(edges)), adjacency_(std::move(adjacency_order)) {
    validate_edges();
    if (adjacency_.size() != n_) throw input_error("adjacency_order must list every node");
    std::vector<std::size_t> seen(edges_.size(), 0);
    for (NodeId v = 0; v < n_; ++v) {
      for (EdgeId e : adjacency_[v]) {
        if (e >= edges_.size()) throw input_error("adjacency_order names unknown edge");
        if (edges_[e].u != v && edges_[e].v != v)
          throw input_error("adjacency_order lists edge " + std::to_string(e) + " at non-endpoint " +
                            std::to_string(v));
        ++seen[e];
      }
    }
    for (EdgeId e = 0; e < edges_.size(); ++e)
      if (seen[e] != 2) throw input_error("edge " + std::to_string(e) + " must appear in exactly two adjacency lists");
  }

  std::size_t node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool is_multi() const { return multi_; }

  const Edge& edge(EdgeId e) const { return edges_.at(e); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const EdgeId> incident(NodeId v) const { return adjacency_.at(v); }
  const std::vector<std::vector<EdgeId>>& adjacency() const { return adjacency_; }
  std::size_t degree(NodeId v) const { return adjacency_.at(v).size(); }

  NodeId other_end(EdgeId e, NodeId v) const {
    const Edge& ed = edges_.at(e);
    return ed.u == v ? ed.v : ed.u;
  }

  /// 0 when v is the first endpoint of e, 1 when it is the second.
  std::size_t slot(NodeId v, EdgeId e) const {
    const Edge& ed = edges_.at(e);
    if (ed.u == v) return 0;
    if (ed.v == v) return 1;
    throw input_error("node " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(e));
  }

  /// Position of e in v's adjacency order.
  std::size_t port_of(NodeId v, EdgeId e) const {
    const auto& adj = adjacency_.at(v);
    auto it = std::find(adj.begin(), adj.end(), e);
    if (it == adj.end()) throw input_error("edge not incident to node");
    return static_cast<std::size_t>(it - adj.begin());
  }

  std::optional<EdgeId> find_edge(NodeId u, NodeId v) const {
    for (EdgeId e : adjacency_.at(u))
      if (other_end(e, u) == v) return e;
    return std::nullopt;
  }
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v).has_value(); }

  std::vector<NodeId> neighbors(NodeId v) const {
    std::vector<NodeId> out;
    for (EdgeId e : adjacency_.at(v)) out.push_back(other_end(e, v));
    return out;
  }

  void check_node(NodeId v) const {
    if (v >= n_) throw input_error("unknown node id " + std::to_string(v));
  }

  bool operator==(const Graph&) const = default;

 private:
  void validate_edges() const {
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Edge& e : edges_) {
      if (e.u >= n_ || e.v >= n_) throw input_error("edge endpoint out of range");
      if (e.u == e.v) throw input_error("self-loop at node " + std::to_string(e.u));
      auto key = std::minmax(e.u, e.v);
      if (!seen.insert(key).second && !multi_)
        throw input_error("parallel edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                          "} in a simple graph");
    }
  }

  std::size_t n_ = 0;
  bool multi_ = false;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
};

using Alphabet = std::set<std::string>;

/// Labels on every node and every half-edge. Half-edge labels are stored per
/// edge, indexed by endpoint slot (see Graph::slot).
struct Labeling {
  std::vector<std::string> nodes;
  std::vector<std::array<std::string, 2>> half_edges;

  static Labeling blank(const Graph& g) {
    return Labeling{std::vector<std::string>(g.node_count()),
                    std::vector<std::array<std::string, 2>>(g.edge_count())};
  }

  bool fits(const Graph& g) const {
    return nodes.size() == g.node_count() && half_edges.size() == g.edge_count();
  }

  const std::string& half_edge(const Graph& g, NodeId v, EdgeId e) const {
    return half_edges.at(e)[g.slot(v, e)];
  }

  auto operator<=>(const Labeling&) const = default;
};

/// A graph together with a (V,E)-labeling, optionally over declared alphabets.
class LabeledGraph {
 public:
  LabeledGraph() = default;

  explicit LabeledGraph(Graph g) : graph_(std::move(g)), labels_(Labeling::blank(graph_)) {}

  LabeledGraph(Graph g, Labeling labels, std::optional<Alphabet> node_alphabet = std::nullopt,
               std::optional<Alphabet> edge_alphabet = std::nullopt)
      : graph_(std::move(g)),
        labels_(std::move(labels)),
        node_alphabet_(std::move(node_alphabet)),
        edge_alphabet_(std::move(edge_alphabet)) {
    if (!labels_.fits(graph_)) throw input_error("labeling does not cover every node and half-edge");
    if (node_alphabet_)
      for (const auto& l : labels_.nodes)
        if (!node_alphabet_->contains(l)) throw input_error("node label '" + l + "' outside declared alphabet");
    if (edge_alphabet_)
      for (const auto& pair : labels_.half_edges)
        for (const auto& l : pair)
          if (!edge_alphabet_->contains(l))
            throw input_error("half-edge label '" + l + "' outside declared alphabet");
  }

  const Graph& graph() const { return graph_; }
  const Labeling& labels() const { return labels_; }
  const std::string& node_label(NodeId v) const { return labels_.nodes.at(v); }
  const std::string& half_edge_label(NodeId v, EdgeId e) const { return labels_.half_edge(graph_, v, e); }
  const std::string& half_edge_label(HalfEdge h) const { return half_edge_label(h.node, h.edge); }
  const std::optional<Alphabet>& node_alphabet() const { return node_alphabet_; }
  const std::optional<Alphabet>& edge_alphabet() const { return edge_alphabet_; }

  bool operator==(const LabeledGraph&) const = default;

 private:
  Graph graph_;
  Labeling labels_;
  std::optional<Alphabet> node_alphabet_;
  std::optional<Alphabet> edge_alphabet_;
};

/// Shortest-path length, or the explicit infinity token when disconnected.
class Distance {
 public:
  static Distance infinity() { return Distance(); }
  explicit Distance(std::size_t hops) : finite_(true), hops_(hops) {}

  bool is_infinite() const { return !finite_; }
  std::size_t value() const {
    if (!finite_) throw std::logic_error("distance is infinite");
    return hops_;
  }

  bool operator==(const Distance&) const = default;
  std::strong_ordering operator<=>(const Distance& o) const {
    if (finite_ != o.finite_) return finite_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return hops_ <=> o.hops_;
  }

 private:
  Distance() = default;
  bool finite_ = false;
  std::size_t hops_ = 0;
};

/// Multi-source BFS; nullopt marks unreachable nodes.
inline std::vector<std::optional<std::size_t>> bfs_distances(const Graph& g, std::span<const NodeId> sources,
                                                            std::optional<std::size_t> limit = std::nullopt) {
  std::vector<std::optional<std::size_t>> dist(g.node_count());
  std::deque<NodeId> queue;
  for (NodeId s : sources) {
    g.check_node(s);
    if (!dist[s]) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    if (limit && *dist[v] >= *limit) continue;
    for (EdgeId e : g.incident(v)) {
      NodeId w = g.other_end(e, v);
      if (!dist[w]) {
        dist[w] = *dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

inline Distance distance(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  const NodeId src[] = {u};
  auto d = bfs_distances(g, src)[v];
  return d ? Distance(*d) : Distance::infinity();
}

/// N_T[A], sorted.
inline std::vector<NodeId> neighborhood(const Graph& g, std::span<const NodeId> anchors, std::size_t radius) {
  auto dist = bfs_distances(g, anchors, radius);
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (dist[v] && *dist[v] <= radius) out.push_back(v);
  return out;
}

inline std::vector<NodeId> all_nodes(const Graph& g) {
  std::vector<NodeId> out(g.node_count());
  for (NodeId v = 0; v < out.size(); ++v) out[v] = v;
  return out;
}

inline bool is_connected(const Graph& g) {
  if (g.node_count() == 0) return true;
  const NodeId src[] = {0};
  auto dist = bfs_distances(g, src);
  return std::all_of(dist.begin(), dist.end(), [](const auto& d) { return d.has_value(); });
}

/// Component index per node, components numbered by smallest member.
inline std::vector<std::size_t> connected_components(const Graph& g, std::size_t* count = nullptr) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(g.node_count(), unset);
  std::size_t next = 0;
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (comp[s] != unset) continue;
    std::vector<NodeId> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident(v)) {
        NodeId w = g.other_end(e, v);
        if (comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

/// Subgraph induced by `nodes` (kept in the given order). Adjacency order is
/// inherited from the parent graph; `edge_map`, when given, receives the
/// parent edge id of every induced edge.
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes,
                              std::vector<EdgeId>* edge_map = nullptr) {
  std::vector<std::optional<NodeId>> local(g.node_count());
  for (NodeId i = 0; i < nodes.size(); ++i) local[nodes[i]] = i;
  std::vector<Edge> edges;
  std::vector<std::optional<EdgeId>> local_edge(g.edge_count());
  std::vector<EdgeId> parent_edges;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if (local[ed.u] && local[ed.v]) {
      local_edge[e] = edges.size();
      edges.push_back({*local[ed.u], *local[ed.v]});
      parent_edges.push_back(e);
    }
  }
  std::vector<std::vector<EdgeId>> adjacency(nodes.size());
  for (NodeId i = 0; i < nodes.size(); ++i)
    for (EdgeId e : g.incident(nodes[i]))
      if (local_edge[e]) adjacency[i].push_back(*local_edge[e]);
  if (edge_map) *edge_map = std::move(parent_edges);
  return Graph(nodes.size(), std::move(edges), std::move(adjacency), g.is_multi());
}

}  // namespace loclab
