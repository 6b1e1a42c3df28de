#pragma once

#include "loclab/graph.hpp"

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace loclab {

/// One incident half-edge of a view node, in the source adjacency order.
/// `local_edge` is empty when the edge is not part of the view (this happens
/// for anchors at radius 0, which still see their half-edge labels).
struct ViewPort {
  EdgeId source_edge = 0;
  std::optional<EdgeId> local_edge;
  std::string label;
};

/// The radius-T view of an anchor set. Local node ids follow increasing
/// source ids; local edges follow increasing source edge ids.
struct View {
  LabeledGraph base;
  std::vector<NodeId> source_nodes;
  std::vector<EdgeId> source_edges;
  std::vector<NodeId> anchors;  // local ids
  std::vector<std::size_t> depth;
  std::vector<std::vector<ViewPort>> ports;  // per local node
  std::size_t radius = 0;

  NodeId anchor() const { return anchors.at(0); }
  std::size_t size() const { return source_nodes.size(); }

  std::optional<NodeId> local_of(NodeId source) const {
    auto it = std::lower_bound(source_nodes.begin(), source_nodes.end(), source);
    if (it == source_nodes.end() || *it != source) return std::nullopt;
    return static_cast<NodeId>(it - source_nodes.begin());
  }

  bool is_anchor(NodeId local) const { return std::binary_search(anchors.begin(), anchors.end(), local); }
};

inline View extract_view(const LabeledGraph& g, std::span<const NodeId> anchors, std::size_t radius) {
  if (anchors.empty()) throw input_error("view needs a nonempty anchor set");
  const Graph& G = g.graph();
  auto dist = bfs_distances(G, anchors, radius);

  View view;
  view.radius = radius;
  std::vector<std::optional<NodeId>> local(G.node_count());
  for (NodeId v = 0; v < G.node_count(); ++v) {
    if (dist[v] && *dist[v] <= radius) {
      local[v] = view.source_nodes.size();
      view.source_nodes.push_back(v);
      view.depth.push_back(*dist[v]);
    }
  }

  std::vector<Edge> edges;
  std::vector<std::optional<EdgeId>> local_edge(G.edge_count());
  Labeling labels;
  for (EdgeId e = 0; e < G.edge_count(); ++e) {
    const Edge& ed = G.edge(e);
    if (!local[ed.u] || !local[ed.v]) continue;
    if (*dist[ed.u] >= radius && *dist[ed.v] >= radius) continue;
    local_edge[e] = edges.size();
    edges.push_back({*local[ed.u], *local[ed.v]});
    view.source_edges.push_back(e);
    labels.half_edges.push_back(g.labels().half_edges[e]);
  }

  const std::size_t m = view.source_nodes.size();
  std::vector<std::vector<EdgeId>> adjacency(m);
  view.ports.resize(m);
  for (NodeId i = 0; i < m; ++i) {
    NodeId v = view.source_nodes[i];
    labels.nodes.push_back(g.node_label(v));
    const bool anchor = view.depth[i] == 0;
    for (EdgeId e : G.incident(v)) {
      if (local_edge[e]) {
        adjacency[i].push_back(*local_edge[e]);
        view.ports[i].push_back({e, local_edge[e], g.half_edge_label(v, e)});
      } else if (anchor) {
        view.ports[i].push_back({e, std::nullopt, g.half_edge_label(v, e)});
      }
    }
    if (anchor) view.anchors.push_back(i);
  }
  view.base = LabeledGraph(Graph(m, std::move(edges), std::move(adjacency), G.is_multi()), std::move(labels));
  return view;
}

inline View extract_view(const LabeledGraph& g, NodeId anchor, std::size_t radius) {
  const NodeId a[] = {anchor};
  return extract_view(g, a, radius);
}

namespace detail {

/// Parallel-edge bundle between two nodes: sorted label pairs, oriented from
/// the first node's side.
using Bundle = std::vector<std::pair<std::string, std::string>>;

struct IsoSide {
  const LabeledGraph* g;
  const std::vector<std::string>* colors;
  std::vector<std::string> signature;
  std::map<std::pair<NodeId, NodeId>, Bundle> bundles;

  IsoSide(const LabeledGraph& graph, const std::vector<std::string>& c) : g(&graph), colors(&c) {
    const Graph& G = g->graph();
    for (EdgeId e = 0; e < G.edge_count(); ++e) {
      const Edge& ed = G.edge(e);
      const auto& hl = g->labels().half_edges[e];
      bundles[{ed.u, ed.v}].push_back({hl[0], hl[1]});
      bundles[{ed.v, ed.u}].push_back({hl[1], hl[0]});
    }
    for (auto& [k, b] : bundles) std::sort(b.begin(), b.end());
    signature.resize(G.node_count());
    for (NodeId v = 0; v < G.node_count(); ++v) {
      std::vector<std::string> inc;
      for (EdgeId e : G.incident(v)) {
        NodeId w = G.other_end(e, v);
        inc.push_back(g->half_edge_label(v, e) + '\x1f' + g->half_edge_label(w, e) + '\x1f' + g->node_label(w) +
                      '\x1f' + (*colors)[w]);
      }
      std::sort(inc.begin(), inc.end());
      std::string s = g->node_label(v) + '\x1e' + (*colors)[v];
      for (auto& x : inc) s += '\x1e' + x;
      signature[v] = std::move(s);
    }
  }

  const Bundle& bundle(NodeId u, NodeId v) const {
    static const Bundle empty;
    auto it = bundles.find({u, v});
    return it == bundles.end() ? empty : it->second;
  }
};

}  // namespace detail

/// Enumerates label- and color-preserving isomorphisms a → b. The callback
/// receives the node map and returns false to stop the search.
inline void for_each_isomorphism(const LabeledGraph& a, const std::vector<std::string>& colors_a,
                                 const LabeledGraph& b, const std::vector<std::string>& colors_b,
                                 const std::function<bool(const std::vector<NodeId>&)>& visit) {
  const std::size_t n = a.graph().node_count();
  if (n != b.graph().node_count() || a.graph().edge_count() != b.graph().edge_count()) return;
  detail::IsoSide sa(a, colors_a), sb(b, colors_b);
  {
    auto x = sa.signature, y = sb.signature;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) return;
  }
  // Search order: BFS from the rarest-signature node so each step touches
  // already-mapped neighbors.
  std::map<std::string, std::size_t> freq;
  for (auto& s : sa.signature) ++freq[s];
  std::vector<NodeId> order;
  std::vector<bool> placed(n, false);
  while (order.size() < n) {
    NodeId best = n;
    for (NodeId v = 0; v < n; ++v)
      if (!placed[v] && (best == n || freq[sa.signature[v]] < freq[sa.signature[best]])) best = v;
    std::size_t head = order.size();
    order.push_back(best);
    placed[best] = true;
    while (head < order.size()) {
      NodeId v = order[head++];
      for (NodeId w : a.graph().neighbors(v))
        if (!placed[w]) {
          placed[w] = true;
          order.push_back(w);
        }
    }
  }
  std::vector<std::vector<NodeId>> candidates(n);
  for (NodeId v = 0; v < n; ++v)
    for (NodeId w = 0; w < n; ++w)
      if (sa.signature[v] == sb.signature[w]) candidates[v].push_back(w);

  std::vector<NodeId> phi(n, n);
  std::vector<bool> used(n, false);
  bool stop = false;
  std::function<void(std::size_t)> extend = [&](std::size_t depth) {
    if (stop) return;
    if (depth == n) {
      if (!visit(phi)) stop = true;
      return;
    }
    NodeId v = order[depth];
    for (NodeId w : candidates[v]) {
      if (used[w]) continue;
      bool ok = true;
      for (std::size_t i = 0; i < depth && ok; ++i) {
        NodeId u = order[i];
        ok = sa.bundle(v, u) == sb.bundle(w, phi[u]);
      }
      if (!ok) continue;
      phi[v] = w;
      used[w] = true;
      extend(depth + 1);
      used[w] = false;
      phi[v] = n;
      if (stop) return;
    }
  };
  extend(0);
}

inline std::optional<std::vector<NodeId>> find_isomorphism(const LabeledGraph& a, const std::vector<std::string>& colors_a,
                                                           const LabeledGraph& b,
                                                           const std::vector<std::string>& colors_b) {
  std::optional<std::vector<NodeId>> found;
  for_each_isomorphism(a, colors_a, b, colors_b, [&](const std::vector<NodeId>& phi) {
    found = phi;
    return false;
  });
  return found;
}

/// Per-node colors that pin anchors, depths, and the labels of half-edges
/// that lie outside the view.
inline std::vector<std::string> view_colors(const View& v) {
  std::vector<std::string> colors(v.size());
  for (NodeId i = 0; i < v.size(); ++i) {
    std::string c = std::to_string(v.depth[i]);
    std::vector<std::string> dangling;
    for (const auto& p : v.ports[i])
      if (!p.local_edge) dangling.push_back(p.label);
    std::sort(dangling.begin(), dangling.end());
    for (auto& d : dangling) c += '\x1d' + d;
    colors[i] = std::move(c);
  }
  return colors;
}

/// Isomorphism between two views mapping anchors onto anchors; returned as a
/// map from local ids of `a` to local ids of `b`.
inline std::optional<std::vector<NodeId>> views_isomorphic(const View& a, const View& b) {
  if (a.radius != b.radius || a.anchors.size() != b.anchors.size()) return std::nullopt;
  return find_isomorphism(a.base, view_colors(a), b.base, view_colors(b));
}

inline void for_each_view_isomorphism(const View& a, const View& b,
                                      const std::function<bool(const std::vector<NodeId>&)>& visit) {
  if (a.radius != b.radius || a.anchors.size() != b.anchors.size()) return;
  for_each_isomorphism(a.base, view_colors(a), b.base, view_colors(b), visit);
}

/// Maps each local edge of `a` to the corresponding local edge of `b` under
/// the node map. Parallel edges are paired in label order.
inline std::vector<EdgeId> edge_map(const LabeledGraph& a, const LabeledGraph& b, const std::vector<NodeId>& phi) {
  const Graph& A = a.graph();
  const Graph& B = b.graph();
  std::vector<EdgeId> out(A.edge_count());
  std::map<std::pair<NodeId, NodeId>, std::vector<EdgeId>> by_pair_a, by_pair_b;
  for (EdgeId e = 0; e < A.edge_count(); ++e) by_pair_a[std::minmax(A.edge(e).u, A.edge(e).v)].push_back(e);
  for (EdgeId e = 0; e < B.edge_count(); ++e) by_pair_b[std::minmax(B.edge(e).u, B.edge(e).v)].push_back(e);
  for (auto& [key, ea] : by_pair_a) {
    NodeId lo = key.first;
    auto target = std::minmax(phi[key.first], phi[key.second]);
    auto eb = by_pair_b.at(target);
    auto oriented = [](const LabeledGraph& g, EdgeId e, NodeId from) {
      return std::make_pair(g.half_edge_label(from, e), g.half_edge_label(g.graph().other_end(e, from), e));
    };
    std::sort(ea.begin(), ea.end(), [&](EdgeId x, EdgeId y) {
      return std::make_pair(oriented(a, x, lo), x) < std::make_pair(oriented(a, y, lo), y);
    });
    std::sort(eb.begin(), eb.end(), [&](EdgeId x, EdgeId y) {
      return std::make_pair(oriented(b, x, phi[lo]), x) < std::make_pair(oriented(b, y, phi[lo]), y);
    });
    for (std::size_t i = 0; i < ea.size(); ++i) out[ea[i]] = eb[i];
  }
  return out;
}

}  // namespace loclab
