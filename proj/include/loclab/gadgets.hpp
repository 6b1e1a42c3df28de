#pragma once

#include "loclab/lcl.hpp"
#include "loclab/linearizable.hpp"

#include <bit>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace loclab {

/// Position in a tree-like gadget: `layer` from the top, `pos` within it.
struct Coord {
  std::size_t layer = 0;
  std::size_t pos = 0;
  auto operator<=>(const Coord&) const = default;
};

inline std::size_t coord_index(Coord c) { return (std::size_t{1} << c.layer) - 1 + c.pos; }

inline Coord coord_at(std::size_t index) {
  std::size_t layer = static_cast<std::size_t>(std::bit_width(index + 1)) - 1;
  return {layer, index + 1 - (std::size_t{1} << layer)};
}

inline bool tree_like_adjacent(Coord a, Coord b) {
  if (a.layer == b.layer) return a.pos + 1 == b.pos || b.pos + 1 == a.pos;
  if (a.layer + 1 == b.layer) return a.pos == b.pos / 2;
  if (b.layer + 1 == a.layer) return b.pos == a.pos / 2;
  return false;
}

inline std::size_t tree_like_size(std::size_t height) { return (std::size_t{1} << height) - 1; }
inline std::size_t tree_like_edge_count(std::size_t height) {
  const std::size_t n = tree_like_size(height);
  return height == 0 ? 0 : (n - 1) + (n - height);
}

/// Nodes of one tree-like gadget inside a host graph, indexed by
/// coord_index.
struct GadgetWitness {
  std::size_t height = 0;
  std::vector<NodeId> nodes;

  NodeId at(Coord c) const { return nodes.at(coord_index(c)); }
  NodeId root() const { return nodes.at(0); }
  NodeId leaf(std::size_t pos) const { return at({height - 1, pos}); }
  NodeId leftmost_leaf() const { return leaf(0); }
  std::size_t leaf_count() const { return std::size_t{1} << (height - 1); }
};

struct TreeLikeGadget {
  Graph graph;
  std::vector<Coord> coords;  // per node
  std::size_t height = 0;
};

namespace detail {

/// Appends the gadget's internal edges over the given node ids.
inline void add_tree_like_edges(const std::vector<NodeId>& nodes, std::vector<Edge>& edges) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Coord c = coord_at(i);
    if (c.layer > 0) edges.push_back({nodes[coord_index({c.layer - 1, c.pos / 2})], nodes[i]});
    if (c.pos > 0) edges.push_back({nodes[coord_index({c.layer, c.pos - 1})], nodes[i]});
  }
}

}  // namespace detail

inline TreeLikeGadget gen_tree_like(std::size_t height) {
  if (height == 0) throw input_error("tree-like gadget height must be positive");
  if (height > 20) throw input_error("tree-like gadget height too large");
  const std::size_t n = tree_like_size(height);
  std::vector<NodeId> nodes(n);
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<Edge> edges;
  detail::add_tree_like_edges(nodes, edges);
  TreeLikeGadget g{Graph(n, std::move(edges)), {}, height};
  for (std::size_t i = 0; i < n; ++i) g.coords.push_back(coord_at(i));
  return g;
}

/// Checks that `w` is a tree-like gadget of the host: right size and exactly
/// the predicted internal edges. `member[v]` must be the index of v in
/// w.nodes, or npos for outsiders.
inline bool tree_like_witness_ok(const Graph& g, const GadgetWitness& w) {
  if (w.height == 0 || w.nodes.size() != tree_like_size(w.height)) return false;
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    if (!index.emplace(w.nodes[i], i).second) return false;
  std::size_t internal = 0;
  for (std::size_t i = 0; i < w.nodes.size(); ++i)
    for (EdgeId e : g.incident(w.nodes[i])) {
      NodeId o = g.other_end(e, w.nodes[i]);
      auto it = index.find(o);
      if (it == index.end()) continue;
      if (!tree_like_adjacent(coord_at(i), coord_at(it->second))) return false;
      ++internal;
    }
  return internal == 2 * tree_like_edge_count(w.height);
}

/// All coordinate maps that make G[nodes] a tree-like gadget, as witnesses.
inline std::vector<GadgetWitness> tree_like_maps(const Graph& g, std::span<const NodeId> nodes) {
  std::vector<GadgetWitness> out;
  const std::size_t n = nodes.size();
  if (n == 0 || std::popcount(n + 1) != 1) return out;
  const std::size_t height = static_cast<std::size_t>(std::countr_zero(n + 1));
  std::vector<EdgeId> emap;
  Graph local = induced_subgraph(g, nodes, &emap);
  if (local.edge_count() != tree_like_edge_count(height)) return out;
  if (height == 1) {
    out.push_back({1, {nodes[0]}});
    return out;
  }
  std::set<std::vector<NodeId>> seen;
  for (NodeId root = 0; root < n; ++root) {
    if (local.degree(root) != 2) continue;
    const NodeId src[] = {root};
    auto dist = bfs_distances(local, src);
    std::vector<std::vector<NodeId>> layers(height);
    bool ok = true;
    for (NodeId v = 0; v < n && ok; ++v) {
      if (!dist[v] || *dist[v] >= height) ok = false;
      else layers[*dist[v]].push_back(v);
    }
    for (std::size_t l = 0; l < height && ok; ++l) ok = layers[l].size() == (std::size_t{1} << l);
    if (!ok) continue;
    for (int mirror = 0; mirror < 2; ++mirror) {
      std::vector<std::vector<NodeId>> order(height);
      order[0] = {root};
      order[1] = layers[1];
      if (mirror) std::swap(order[1][0], order[1][1]);
      bool good = true;
      auto same_layer_degree = [&](NodeId v, std::size_t l) {
        std::size_t c = 0;
        for (NodeId w : local.neighbors(v))
          if (dist[w] && *dist[w] == l) ++c;
        return c;
      };
      for (std::size_t l = 2; l < height && good; ++l) {
        for (std::size_t p = 0; p < order[l - 1].size() && good; ++p) {
          NodeId parent = order[l - 1][p];
          std::vector<NodeId> kids;
          for (NodeId w : local.neighbors(parent))
            if (dist[w] && *dist[w] == l) kids.push_back(w);
          if (kids.size() != 2) {
            good = false;
            break;
          }
          bool first_left;
          if (p == 0)
            first_left = same_layer_degree(kids[0], l) == 1;
          else
            first_left = local.has_edge(order[l].back(), kids[0]);
          if (!first_left) std::swap(kids[0], kids[1]);
          order[l].push_back(kids[0]);
          order[l].push_back(kids[1]);
        }
      }
      if (!good) continue;
      GadgetWitness w{height, {}};
      for (auto& layer : order)
        for (NodeId v : layer) w.nodes.push_back(nodes[v]);
      if (tree_like_witness_ok(g, w) && seen.insert(w.nodes).second) out.push_back(std::move(w));
    }
  }
  return out;
}

inline std::optional<std::vector<Coord>> recognize_tree_like(const Graph& g) {
  auto maps = tree_like_maps(g, all_nodes(g));
  if (maps.empty()) return std::nullopt;
  std::vector<Coord> coords(g.node_count());
  for (std::size_t i = 0; i < maps[0].nodes.size(); ++i) coords[maps[0].nodes[i]] = coord_at(i);
  return coords;
}

struct PortWitness {
  std::size_t i = 0;  // head leaf position
  std::size_t j = 1;  // 1 or 2
  GadgetWitness gadget;
};

struct OctopusWitness {
  GadgetWitness head;
  std::vector<std::size_t> eta;
  std::vector<PortWitness> ports;  // lexicographic (i, j)

  std::size_t x() const { return head.height; }
  NodeId head_leaf(std::size_t i) const { return head.leaf(i); }
  std::vector<NodeId> nodes() const {
    std::vector<NodeId> out = head.nodes;
    for (auto& p : ports) out.insert(out.end(), p.gadget.nodes.begin(), p.gadget.nodes.end());
    return out;
  }
};

enum class NodeRole { intra, inter };

struct ProperWitness {
  std::vector<NodeRole> node_roles;
  std::vector<OctopusWitness> octopi;

  std::vector<NodeId> inter_nodes() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < node_roles.size(); ++v)
      if (node_roles[v] == NodeRole::inter) out.push_back(v);
    return out;
  }
};

struct OctopusGadget {
  Graph graph;
  OctopusWitness witness;
};

inline std::vector<std::pair<std::size_t, std::size_t>> port_index_set(const std::vector<std::size_t>& eta) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < eta.size(); ++i)
    for (std::size_t j = 1; j <= eta[i]; ++j) out.push_back({i, j});
  return out;
}

namespace detail {

/// Builds an octopus on fresh ids starting at `next`, appending its edges.
inline OctopusWitness build_octopus(std::size_t x, const std::vector<std::size_t>& eta,
                                    const std::vector<std::size_t>& port_heights, NodeId& next, std::vector<Edge>& edges) {
  OctopusWitness w;
  w.head.height = x;
  for (std::size_t i = 0; i < tree_like_size(x); ++i) w.head.nodes.push_back(next++);
  add_tree_like_edges(w.head.nodes, edges);
  w.eta = eta;
  auto index = port_index_set(eta);
  for (std::size_t t = 0; t < index.size(); ++t) {
    PortWitness p{index[t].first, index[t].second, {port_heights[t], {}}};
    for (std::size_t i = 0; i < tree_like_size(port_heights[t]); ++i) p.gadget.nodes.push_back(next++);
    add_tree_like_edges(p.gadget.nodes, edges);
    edges.push_back({w.head_leaf(p.i), p.gadget.root()});
    w.ports.push_back(std::move(p));
  }
  return w;
}

inline void check_octopus_shape(std::size_t x, const std::vector<std::size_t>& eta, std::size_t port_count) {
  if (x == 0) throw input_error("head height must be positive");
  if (x > 20) throw input_error("head height too large");
  if (eta.size() != (std::size_t{1} << (x - 1)))
    throw input_error("eta must have 2^(x-1) = " + std::to_string(std::size_t{1} << (x - 1)) + " entries");
  for (auto e : eta)
    if (e != 1 && e != 2) throw input_error("eta entries must be 1 or 2");
  if (port_count != port_index_set(eta).size())
    throw input_error("port heights must be given exactly for the index set of eta");
}

}  // namespace detail

/// `port_heights` lists w_(i,j) in lexicographic (i, j) order.
inline OctopusGadget gen_octopus(std::size_t x, const std::vector<std::size_t>& eta,
                                 const std::vector<std::size_t>& port_heights) {
  detail::check_octopus_shape(x, eta, port_heights.size());
  for (auto h : port_heights)
    if (h == 0 || h > 20) throw input_error("port heights must be in 1..20");
  NodeId next = 0;
  std::vector<Edge> edges;
  auto w = detail::build_octopus(x, eta, port_heights, next, edges);
  return {Graph(next, std::move(edges)), std::move(w)};
}

/// Structural check of a witness against the definition of a proper
/// instance. Returns a description of the first problem found.
inline std::optional<std::string> validate_proper_witness(const Graph& g, const ProperWitness& w) {
  const std::size_t n = g.node_count();
  if (w.node_roles.size() != n) return "node roles do not cover every node";
  struct Place {
    std::size_t octopus, gadget, index;
  };
  std::vector<std::optional<Place>> place(n);
  std::vector<std::size_t> internal_edges;
  std::vector<std::size_t> gadget_base;
  for (std::size_t o = 0; o < w.octopi.size(); ++o) {
    const auto& oc = w.octopi[o];
    if (oc.head.height == 0) return "octopus " + std::to_string(o) + " has an empty head";
    if (oc.eta.size() != oc.head.leaf_count()) return "octopus " + std::to_string(o) + " has a wrong eta length";
    auto index = port_index_set(oc.eta);
    for (auto e : oc.eta)
      if (e != 1 && e != 2) return "octopus " + std::to_string(o) + " has eta entry outside {1,2}";
    if (index.size() != oc.ports.size()) return "octopus " + std::to_string(o) + " has a wrong number of ports";
    for (std::size_t t = 0; t < index.size(); ++t)
      if (oc.ports[t].i != index[t].first || oc.ports[t].j != index[t].second)
        return "octopus " + std::to_string(o) + " lists ports out of order";
    std::vector<const GadgetWitness*> gadgets{&oc.head};
    for (auto& p : oc.ports) gadgets.push_back(&p.gadget);
    for (std::size_t gi = 0; gi < gadgets.size(); ++gi) {
      const auto* gw = gadgets[gi];
      if (gw->height == 0 || gw->nodes.size() != tree_like_size(gw->height))
        return "octopus " + std::to_string(o) + " has a malformed gadget";
      for (std::size_t idx = 0; idx < gw->nodes.size(); ++idx) {
        NodeId v = gw->nodes[idx];
        if (v >= n) return "witness names unknown node";
        if (place[v]) return "node " + std::to_string(v) + " belongs to two gadgets";
        if (w.node_roles[v] != NodeRole::intra) return "gadget node " + std::to_string(v) + " is marked inter";
        place[v] = Place{o, gi, idx};
      }
    }
  }
  for (NodeId v = 0; v < n; ++v)
    if (w.node_roles[v] == NodeRole::intra && !place[v]) return "intra node " + std::to_string(v) + " is in no octopus";

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> internal;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> connectors;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    NodeId u = g.edge(e).u, v = g.edge(e).v;
    const bool iu = w.node_roles[u] == NodeRole::inter, iv = w.node_roles[v] == NodeRole::inter;
    if (iu && iv) return "inter nodes " + std::to_string(u) + " and " + std::to_string(v) + " are adjacent";
    if (iu || iv) {
      NodeId x = iu ? v : u;
      const Place& p = *place[x];
      if (p.gadget == 0) return "inter node attached to a head node";
      const auto& port = w.octopi[p.octopus].ports[p.gadget - 1].gadget;
      if (port.leftmost_leaf() != x) return "inter node attached away from a left-most leaf";
      continue;
    }
    const Place& a = *place[u];
    const Place& b = *place[v];
    if (a.octopus != b.octopus) return "edge joins two octopi";
    if (a.gadget == b.gadget) {
      if (!tree_like_adjacent(coord_at(a.index), coord_at(b.index))) return "gadget has a foreign internal edge";
      ++internal[{a.octopus, a.gadget}];
      continue;
    }
    const Place& head = a.gadget == 0 ? a : b;
    const Place& port = a.gadget == 0 ? b : a;
    if (head.gadget != 0) return "edge joins two port gadgets";
    const auto& oc = w.octopi[head.octopus];
    const auto& pw = oc.ports[port.gadget - 1];
    if (port.index != 0 || oc.head_leaf(pw.i) != oc.head.nodes[head.index])
      return "connector edge in the wrong place";
    ++connectors[{port.octopus, port.gadget}];
  }
  for (std::size_t o = 0; o < w.octopi.size(); ++o) {
    const auto& oc = w.octopi[o];
    if (internal[{o, 0}] != tree_like_edge_count(oc.head.height)) return "head gadget misses internal edges";
    for (std::size_t p = 0; p < oc.ports.size(); ++p) {
      if (internal[{o, p + 1}] != tree_like_edge_count(oc.ports[p].gadget.height))
        return "port gadget misses internal edges";
      if (connectors[{o, p + 1}] != 1) return "port gadget lacks its connector";
    }
  }
  return std::nullopt;
}

inline std::size_t ceil_log2(std::size_t v) { return v <= 1 ? 0 : static_cast<std::size_t>(std::bit_width(v - 1)); }

inline std::size_t head_height_for(std::size_t degree) { return std::max<std::size_t>(1, ceil_log2(degree)); }

/// Extra conditions satisfied by every generated instance: inter nodes have
/// exactly `rank` attachments, each port is attached at most once, only a
/// lone port may be unattached, heads are sized by the degree rule, and all
/// ports share one height.
inline std::optional<std::string> check_generator_form(const Graph& g, const ProperWitness& w, std::size_t rank) {
  std::optional<std::size_t> height;
  for (NodeId v : w.inter_nodes())
    if (g.degree(v) != rank) return "inter node " + std::to_string(v) + " does not have degree " + std::to_string(rank);
  for (std::size_t o = 0; o < w.octopi.size(); ++o) {
    const auto& oc = w.octopi[o];
    std::size_t attached = 0;
    for (auto& p : oc.ports) {
      if (height && *height != p.gadget.height) return "port heights differ";
      height = p.gadget.height;
      std::size_t inter = 0;
      for (NodeId nb : g.neighbors(p.gadget.leftmost_leaf()))
        if (w.node_roles[nb] == NodeRole::inter) ++inter;
      if (inter > 1) return "port attached to several inter nodes";
      attached += inter;
    }
    const std::size_t d = oc.ports.size();
    if (attached != d && !(d == 1 && attached == 0)) return "octopus " + std::to_string(o) + " has an unattached port";
    if (oc.x() != head_height_for(d)) return "octopus " + std::to_string(o) + " head height does not follow its degree";
    std::size_t twos = std::count(oc.eta.begin(), oc.eta.end(), std::size_t{2});
    if (twos != d - oc.head.leaf_count()) return "octopus " + std::to_string(o) + " eta does not follow its degree";
  }
  return std::nullopt;
}

struct RecognizeOptions {
  bool allow_inter = true;
  std::optional<std::size_t> generator_rank;  // also require check_generator_form
};

namespace detail {

enum class UnitRole { head, port, inter };

struct UnitOption {
  UnitRole role;
  std::size_t map;  // index into the unit's coordinate maps
};

struct Unit {
  std::vector<NodeId> nodes;
  std::vector<GadgetWitness> maps;
  std::vector<UnitOption> options;
};

class ProperSearch {
 public:
  ProperSearch(const Graph& g, RecognizeOptions opt) : g_(g), opt_(opt) {}

  std::optional<ProperWitness> run() {
    if (g_.is_multi()) return std::nullopt;
    if (!partition()) return std::nullopt;
    for (auto& u : units_) {
      for (std::size_t m = 0; m < u.maps.size(); ++m)
        for (UnitRole r : {UnitRole::head, UnitRole::port})
          if (unary_ok(u, {r, m})) u.options.push_back({r, m});
      if (u.nodes.size() == 1 && opt_.allow_inter) u.options.push_back({UnitRole::inter, 0});
      if (u.options.empty()) return std::nullopt;
    }
    build_arcs();
    std::vector<std::vector<bool>> dom;
    for (auto& u : units_) dom.emplace_back(u.options.size(), true);
    if (!propagate(dom)) return std::nullopt;
    return search(dom);
  }

 private:
  bool partition() {
    const std::size_t n = g_.node_count();
    std::vector<std::vector<NodeId>> nb(n);
    for (NodeId v = 0; v < n; ++v) {
      nb[v] = g_.neighbors(v);
      std::sort(nb[v].begin(), nb[v].end());
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    for (auto& e : g_.edges()) {
      std::vector<NodeId> common;
      std::set_intersection(nb[e.u].begin(), nb[e.u].end(), nb[e.v].begin(), nb[e.v].end(), std::back_inserter(common));
      if (!common.empty()) parent[find(e.u)] = find(e.v);
    }
    std::map<std::size_t, std::vector<NodeId>> groups;
    for (NodeId v = 0; v < n; ++v) groups[find(v)].push_back(v);
    std::vector<std::vector<NodeId>> ordered;
    for (auto& [k, nodes] : groups) ordered.push_back(nodes);
    std::sort(ordered.begin(), ordered.end());
    unit_of_.assign(n, 0);
    for (auto& nodes : ordered) {
      Unit u;
      u.nodes = nodes;
      u.maps = tree_like_maps(g_, nodes);
      if (u.maps.empty()) return false;
      for (NodeId v : nodes) unit_of_[v] = units_.size();
      units_.push_back(std::move(u));
    }
    // Per node: index within every map.
    index_in_map_.resize(units_.size());
    for (std::size_t ui = 0; ui < units_.size(); ++ui)
      for (auto& m : units_[ui].maps) {
        std::map<NodeId, std::size_t> idx;
        for (std::size_t i = 0; i < m.nodes.size(); ++i) idx[m.nodes[i]] = i;
        index_in_map_[ui].push_back(std::move(idx));
      }
    return true;
  }

  std::size_t outside_degree(const Unit& u, NodeId v) const {
    std::size_t c = 0;
    for (NodeId w : g_.neighbors(v))
      if (unit_of_[w] != unit_of_[u.nodes[0]]) ++c;
    return c;
  }

  Coord coord_of(std::size_t ui, std::size_t map, NodeId v) const { return coord_at(index_in_map_[ui][map].at(v)); }

  bool unary_ok(const Unit& u, UnitOption o) const {
    const std::size_t ui = unit_of_[u.nodes[0]];
    const auto& m = u.maps[o.map];
    for (NodeId v : u.nodes) {
      const std::size_t out = outside_degree(u, v);
      if (out == 0) continue;
      Coord c = coord_of(ui, o.map, v);
      if (o.role == UnitRole::head) {
        if (c.layer + 1 != m.height || out > 2) return false;
      } else {
        const bool root = c == Coord{0, 0};
        const bool leftmost = c == Coord{m.height - 1, 0};
        if (!root && !leftmost) return false;
        if (root && !leftmost && out != 1) return false;
      }
    }
    if (o.role == UnitRole::head)
      for (std::size_t i = 0; i < m.leaf_count(); ++i)
        if (outside_degree(u, m.leaf(i)) == 0) return false;
    if (o.role == UnitRole::port && outside_degree(u, m.root()) == 0) return false;
    return true;
  }

  bool edge_ok(std::size_t ua, const UnitOption& a, NodeId x, std::size_t ub, const UnitOption& b, NodeId y) const {
    auto is_leaf = [&](std::size_t ui, const UnitOption& o, NodeId v) {
      return coord_of(ui, o.map, v).layer + 1 == units_[ui].maps[o.map].height;
    };
    auto is_root = [&](std::size_t ui, const UnitOption& o, NodeId v) { return coord_of(ui, o.map, v) == Coord{0, 0}; };
    auto is_leftmost = [&](std::size_t ui, const UnitOption& o, NodeId v) {
      return coord_of(ui, o.map, v) == Coord{units_[ui].maps[o.map].height - 1, 0};
    };
    if (a.role == UnitRole::head && b.role == UnitRole::port) return is_leaf(ua, a, x) && is_root(ub, b, y);
    if (a.role == UnitRole::port && b.role == UnitRole::head) return is_root(ua, a, x) && is_leaf(ub, b, y);
    if (a.role == UnitRole::port && b.role == UnitRole::inter) return is_leftmost(ua, a, x);
    if (a.role == UnitRole::inter && b.role == UnitRole::port) return is_leftmost(ub, b, y);
    return false;
  }

  void build_arcs() {
    arcs_.assign(units_.size(), {});
    for (auto& e : g_.edges()) {
      std::size_t a = unit_of_[e.u], b = unit_of_[e.v];
      if (a == b) continue;
      arcs_[a][b].push_back({e.u, e.v});
      arcs_[b][a].push_back({e.v, e.u});
    }
  }

  bool supported(std::size_t ua, std::size_t oa, std::size_t ub, const std::vector<bool>& db) const {
    const auto& cross = arcs_[ua].at(ub);
    for (std::size_t ob = 0; ob < db.size(); ++ob) {
      if (!db[ob]) continue;
      bool ok = true;
      for (auto& [x, y] : cross)
        if (!edge_ok(ua, units_[ua].options[oa], x, ub, units_[ub].options[ob], y)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
    return false;
  }

  /// A height-1 port must see exactly one head.
  bool port_root_count_ok(std::size_t ui, std::size_t oi, const std::vector<std::vector<bool>>& dom) const {
    const auto& o = units_[ui].options[oi];
    if (o.role != UnitRole::port) return true;
    const NodeId root = units_[ui].maps[o.map].root();
    std::size_t sure = 0, maybe = 0;
    for (NodeId w : g_.neighbors(root)) {
      std::size_t uw = unit_of_[w];
      if (uw == ui) continue;
      bool can_head = false, can_other = false;
      for (std::size_t k = 0; k < dom[uw].size(); ++k)
        if (dom[uw][k]) (units_[uw].options[k].role == UnitRole::head ? can_head : can_other) = true;
      if (can_head && !can_other) ++sure;
      if (can_head) ++maybe;
    }
    return sure <= 1 && maybe >= 1;
  }

  bool propagate(std::vector<std::vector<bool>>& dom) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t ua = 0; ua < units_.size(); ++ua) {
        std::size_t alive = 0;
        for (std::size_t oa = 0; oa < dom[ua].size(); ++oa) {
          if (!dom[ua][oa]) continue;
          bool keep = port_root_count_ok(ua, oa, dom);
          for (auto it = arcs_[ua].begin(); keep && it != arcs_[ua].end(); ++it) keep = supported(ua, oa, it->first, dom[it->first]);
          if (!keep) {
            dom[ua][oa] = false;
            changed = true;
          } else {
            ++alive;
          }
        }
        if (alive == 0) return false;
      }
    }
    return true;
  }

  std::optional<ProperWitness> search(std::vector<std::vector<bool>>& dom) {
    std::size_t pick = units_.size(), best = 0;
    for (std::size_t u = 0; u < units_.size(); ++u) {
      std::size_t c = std::count(dom[u].begin(), dom[u].end(), true);
      if (c > 1 && (pick == units_.size() || c < best)) {
        pick = u;
        best = c;
      }
    }
    if (pick == units_.size()) return assemble(dom);
    for (std::size_t o = 0; o < dom[pick].size(); ++o) {
      if (!dom[pick][o]) continue;
      auto next = dom;
      std::fill(next[pick].begin(), next[pick].end(), false);
      next[pick][o] = true;
      if (!propagate(next)) continue;
      if (auto w = search(next)) return w;
    }
    return std::nullopt;
  }

  std::optional<ProperWitness> assemble(const std::vector<std::vector<bool>>& dom) const {
    auto chosen = [&](std::size_t u) -> const UnitOption& {
      return units_[u].options[static_cast<std::size_t>(std::find(dom[u].begin(), dom[u].end(), true) - dom[u].begin())];
    };
    ProperWitness w;
    w.node_roles.assign(g_.node_count(), NodeRole::intra);
    for (std::size_t u = 0; u < units_.size(); ++u) {
      const auto& o = chosen(u);
      if (o.role == UnitRole::inter) w.node_roles[units_[u].nodes[0]] = NodeRole::inter;
      if (o.role != UnitRole::head) continue;
      OctopusWitness oc;
      oc.head = units_[u].maps[o.map];
      for (std::size_t i = 0; i < oc.head.leaf_count(); ++i) {
        std::vector<std::pair<NodeId, std::size_t>> roots;
        for (NodeId r : g_.neighbors(oc.head_leaf(i))) {
          std::size_t ur = unit_of_[r];
          if (ur != u && chosen(ur).role == UnitRole::port) roots.push_back({r, ur});
        }
        std::sort(roots.begin(), roots.end());
        if (roots.empty() || roots.size() > 2) return std::nullopt;
        oc.eta.push_back(roots.size());
        for (std::size_t j = 0; j < roots.size(); ++j)
          oc.ports.push_back({i, j + 1, units_[roots[j].second].maps[chosen(roots[j].second).map]});
      }
      w.octopi.push_back(std::move(oc));
    }
    if (validate_proper_witness(g_, w)) return std::nullopt;
    if (opt_.generator_rank && check_generator_form(g_, w, *opt_.generator_rank)) return std::nullopt;
    return w;
  }

  const Graph& g_;
  RecognizeOptions opt_;
  std::vector<Unit> units_;
  std::vector<std::size_t> unit_of_;
  std::vector<std::vector<std::map<NodeId, std::size_t>>> index_in_map_;
  std::vector<std::map<std::size_t, std::vector<std::pair<NodeId, NodeId>>>> arcs_;
};

}  // namespace detail

/// Searches for a decomposition into octopus gadgets and inter-octopus
/// nodes. Gadgets of height two or more are exactly the components of the
/// triangle-edge subgraph, so the search only decides roles and coordinates.
inline std::optional<ProperWitness> recognize_proper_instance(const Graph& g, RecognizeOptions opt = {}) {
  return detail::ProperSearch(g, opt).run();
}

inline std::optional<OctopusWitness> recognize_octopus(const Graph& g) {
  if (g.node_count() == 0 || !is_connected(g)) return std::nullopt;
  auto w = recognize_proper_instance(g, {.allow_inter = false, .generator_rank = std::nullopt});
  if (!w || w->octopi.size() != 1) return std::nullopt;
  return w->octopi[0];
}

// ---------------------------------------------------------------------------
// Family labeling

namespace family {
inline const std::string head = "H";
inline const std::string port1 = "P1";
inline const std::string port2 = "P2";
inline const std::string inter = "I";
inline const std::string up = "up", down_left = "dl", down_right = "dr", left = "l", right = "r";
inline const std::string to_port = "port", to_head = "head", to_inter = "out", from_port = "in";

inline Alphabet node_alphabet() { return {head, port1, port2, inter}; }
inline Alphabet edge_alphabet() { return {up, down_left, down_right, left, right, to_port, to_head, to_inter, from_port}; }
}  // namespace family

/// Re-encodes a witness as node and half-edge labels: gadget roles on nodes,
/// directions inside gadgets and connector kinds on half-edges.
inline LabeledGraph family_labeling(const Graph& g, const ProperWitness& w) {
  Labeling l = Labeling::blank(g);
  std::vector<std::optional<Coord>> coord(g.node_count());
  std::vector<std::size_t> gadget_id(g.node_count(), 0);
  std::size_t next_gadget = 1;
  auto mark = [&](const GadgetWitness& gw, const std::string& label) {
    for (std::size_t i = 0; i < gw.nodes.size(); ++i) {
      coord[gw.nodes[i]] = coord_at(i);
      gadget_id[gw.nodes[i]] = next_gadget;
      l.nodes[gw.nodes[i]] = label;
    }
    ++next_gadget;
  };
  for (auto& oc : w.octopi) {
    mark(oc.head, family::head);
    for (auto& p : oc.ports) mark(p.gadget, p.j == 1 ? family::port1 : family::port2);
  }
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (w.node_roles[v] == NodeRole::inter) l.nodes[v] = family::inter;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    for (std::size_t s = 0; s < 2; ++s) {
      NodeId a = s == 0 ? g.edge(e).u : g.edge(e).v;
      NodeId b = g.other_end(e, a);
      std::string& out = l.half_edges[e][s];
      if (w.node_roles[a] == NodeRole::inter) {
        out = family::from_port;
      } else if (w.node_roles[b] == NodeRole::inter) {
        out = family::to_inter;
      } else if (gadget_id[a] != gadget_id[b]) {
        out = l.nodes[a] == family::head ? family::to_port : family::to_head;
      } else {
        Coord ca = *coord[a], cb = *coord[b];
        if (cb.layer + 1 == ca.layer) out = family::up;
        else if (ca.layer + 1 == cb.layer) out = cb.pos == 2 * ca.pos ? family::down_left : family::down_right;
        else out = cb.pos < ca.pos ? family::left : family::right;
      }
    }
  }
  return LabeledGraph(g, std::move(l), family::node_alphabet(), family::edge_alphabet());
}

struct ProperInstance {
  Graph graph;
  ProperWitness witness;
  LabeledGraph family;
  std::size_t port_height = 0;
};

/// f_G: port roots to source incidence-graph edges, and back.
struct PortMap {
  std::map<NodeId, EdgeId> edge_of_root;
  std::map<EdgeId, NodeId> root_of_edge;
};

inline std::size_t default_port_height(std::size_t n) { return std::max<std::size_t>(1, ceil_log2(std::max<std::size_t>(n, 2))); }

/// One octopus per white node (ports follow its adjacency order), one inter
/// node per black node attached to the left-most leaves of the matching
/// ports. White nodes come first in id order, inter nodes last.
inline std::pair<ProperInstance, PortMap> gen_proper_instance(const IncidenceGraph& src, std::optional<std::size_t> k = {}) {
  const Graph& G = src.graph();
  if (G.is_multi()) throw input_error("source incidence graph must be simple");
  const std::size_t height = k.value_or(default_port_height(G.node_count()));
  if (height == 0 || height > 20) throw input_error("port height must be in 1..20");
  NodeId next = 0;
  std::vector<Edge> edges;
  ProperInstance pi;
  PortMap f;
  std::vector<std::pair<NodeId, EdgeId>> attachments;  // leftmost leaf, source edge
  for (NodeId v : src.whites()) {
    const std::size_t d = G.degree(v);
    const std::size_t ports = std::max<std::size_t>(d, 1);
    const std::size_t x = head_height_for(ports);
    const std::size_t leaves = std::size_t{1} << (x - 1);
    std::vector<std::size_t> eta(leaves, 1);
    for (std::size_t i = 0; i < ports - leaves; ++i) eta[i] = 2;
    auto w = detail::build_octopus(x, eta, std::vector<std::size_t>(ports, height), next, edges);
    auto inc = G.incident(v);
    for (std::size_t t = 0; t < inc.size(); ++t) {
      f.edge_of_root[w.ports[t].gadget.root()] = inc[t];
      f.root_of_edge[inc[t]] = w.ports[t].gadget.root();
      attachments.push_back({w.ports[t].gadget.leftmost_leaf(), inc[t]});
    }
    pi.witness.octopi.push_back(std::move(w));
  }
  const std::size_t intra = next;
  std::map<NodeId, NodeId> inter_of_black;
  for (NodeId b : src.blacks()) inter_of_black[b] = next++;
  std::sort(attachments.begin(), attachments.end(), [](auto& a, auto& b) { return a.second < b.second; });
  for (auto& [leaf, e] : attachments) {
    NodeId b = src.role(G.edge(e).u) == Role::black ? G.edge(e).u : G.edge(e).v;
    edges.push_back({leaf, inter_of_black.at(b)});
  }
  pi.graph = Graph(next, std::move(edges));
  pi.witness.node_roles.assign(next, NodeRole::intra);
  for (NodeId v = intra; v < next; ++v) pi.witness.node_roles[v] = NodeRole::inter;
  pi.port_height = height;
  pi.family = family_labeling(pi.graph, pi.witness);
  if (auto err = validate_proper_witness(pi.graph, pi.witness)) throw std::logic_error("generator produced: " + *err);
  return {std::move(pi), std::move(f)};
}

/// The radius-2 constraint set of the family labeling: every ball that
/// occurs in generated instances over a seed corpus (all graphs on up to
/// four nodes, stars up to degree 8, cliques up to six nodes) with port
/// heights 1 through 6.
inline const ConstraintSet& proper_instance_constraints() {
  static const ConstraintSet c = [] {
    ConstraintSet set(2, 5, family::node_alphabet(), family::edge_alphabet(), {});
    std::vector<Graph> seeds;
    // Graphs on up to four nodes: every edge subset, isomorphic copies
    // collapse in the set anyway.
    for (std::size_t n = 1; n <= 4; ++n) {
      std::vector<std::pair<NodeId, NodeId>> slots;
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) slots.push_back({a, b});
      for (std::size_t mask = 0; mask < (std::size_t{1} << slots.size()); ++mask) {
        std::vector<Edge> e;
        for (std::size_t i = 0; i < slots.size(); ++i)
          if (mask >> i & 1) e.push_back({slots[i].first, slots[i].second});
        seeds.emplace_back(n, std::move(e));
      }
    }
    for (std::size_t d = 1; d <= 8; ++d) {
      std::vector<Edge> e;
      for (NodeId leaf = 1; leaf <= d; ++leaf) e.push_back({0, leaf});
      seeds.emplace_back(d + 1, std::move(e));
    }
    for (std::size_t n = 5; n <= 6; ++n) {
      std::vector<Edge> e;
      for (NodeId a = 0; a < n; ++a)
        for (NodeId b = a + 1; b < n; ++b) e.push_back({a, b});
      seeds.emplace_back(n, std::move(e));
    }
    for (auto& h : seeds)
      for (std::size_t k = 1; k <= 6; ++k) set.absorb(gen_proper_instance(incidence_graph(h), k).first.family);
    return set;
  }();
  return c;
}

}  // namespace loclab
