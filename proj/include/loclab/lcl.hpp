#pragma once

#include "loclab/view.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loclab {

struct CenteredGraph {
  LabeledGraph graph;
  NodeId center = 0;
};

/// G[N_r[v]] with all labels, centered at v. Local ids follow source ids.
inline CenteredGraph centered_ball(const LabeledGraph& g, NodeId v, std::size_t r,
                                   std::vector<NodeId>* source_nodes = nullptr) {
  g.graph().check_node(v);
  const NodeId a[] = {v};
  auto nodes = neighborhood(g.graph(), a, r);
  std::vector<EdgeId> emap;
  Graph sub = induced_subgraph(g.graph(), nodes, &emap);
  Labeling labels;
  for (NodeId u : nodes) labels.nodes.push_back(g.node_label(u));
  for (EdgeId e : emap) labels.half_edges.push_back(g.labels().half_edges[e]);
  NodeId center = static_cast<NodeId>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin());
  if (source_nodes) *source_nodes = nodes;
  return {LabeledGraph(std::move(sub), std::move(labels)), center};
}

inline std::vector<std::string> center_colors(const CenteredGraph& c) {
  std::vector<std::string> colors(c.graph.graph().node_count());
  colors[c.center] = "*";
  return colors;
}

inline std::optional<std::vector<NodeId>> centered_isomorphism(const CenteredGraph& a, const CenteredGraph& b) {
  return find_isomorphism(a.graph, center_colors(a), b.graph, center_colors(b));
}

/// Isomorphism-invariant fingerprint used to bucket balls before the exact
/// search.
inline std::string ball_fingerprint(const CenteredGraph& c) {
  const Graph& G = c.graph.graph();
  const NodeId src[] = {c.center};
  auto dist = bfs_distances(G, src);
  std::vector<std::string> parts;
  for (NodeId v = 0; v < G.node_count(); ++v) {
    std::vector<std::string> hl;
    for (EdgeId e : G.incident(v)) hl.push_back(c.graph.half_edge_label(v, e));
    std::sort(hl.begin(), hl.end());
    std::string s = (dist[v] ? std::to_string(*dist[v]) : "inf") + '\x1f' + c.graph.node_label(v);
    for (auto& h : hl) s += '\x1f' + h;
    parts.push_back(std::move(s));
  }
  std::sort(parts.begin(), parts.end());
  std::string key = std::to_string(G.node_count()) + ':' + std::to_string(G.edge_count());
  for (auto& p : parts) key += '\x1e' + p;
  return key;
}

inline bool eccentricity_bound_ok(const CenteredGraph& c, std::size_t r) {
  const NodeId src[] = {c.center};
  auto dist = bfs_distances(c.graph.graph(), src);
  for (auto& d : dist)
    if (!d || *d > r) return false;
  return true;
}

/// A finite set of allowed centered labeled balls of radius r.
class ConstraintSet {
 public:
  ConstraintSet() = default;

  ConstraintSet(std::size_t radius, std::size_t max_degree, std::optional<Alphabet> node_alphabet,
                std::optional<Alphabet> edge_alphabet, std::vector<CenteredGraph> members)
      : radius_(radius),
        max_degree_(max_degree),
        node_alphabet_(std::move(node_alphabet)),
        edge_alphabet_(std::move(edge_alphabet)) {
    for (auto& m : members)
      if (!insert(std::move(m))) throw input_error("constraint set lists two isomorphic members");
  }

  /// All distinct radius-r balls of `g`.
  static ConstraintSet closure_of(const LabeledGraph& g, std::size_t radius, std::optional<std::size_t> max_degree = {}) {
    std::size_t delta = 0;
    for (NodeId v = 0; v < g.graph().node_count(); ++v) delta = std::max(delta, g.graph().degree(v));
    ConstraintSet c(radius, max_degree.value_or(delta), g.node_alphabet(), g.edge_alphabet(), {});
    c.absorb(g);
    return c;
  }

  /// Adds every ball of `g` not yet present.
  void absorb(const LabeledGraph& g) {
    for (NodeId v = 0; v < g.graph().node_count(); ++v) insert(centered_ball(g, v, radius_));
  }

  /// Adds a member unless an isomorphic one is present; returns whether it
  /// was new. Invalid members throw.
  bool insert(CenteredGraph member) {
    validate(member);
    auto key = ball_fingerprint(member);
    auto& bucket = index_[key];
    for (std::size_t i : bucket)
      if (centered_isomorphism(member, members_[i])) return false;
    bucket.push_back(members_.size());
    members_.push_back(std::move(member));
    return true;
  }

  /// Index of the member isomorphic to `ball`, if any.
  std::optional<std::size_t> match(const CenteredGraph& ball) const {
    auto it = index_.find(ball_fingerprint(ball));
    if (it == index_.end()) return std::nullopt;
    for (std::size_t i : it->second)
      if (centered_isomorphism(ball, members_[i])) return i;
    return std::nullopt;
  }

  std::size_t radius() const { return radius_; }
  std::size_t max_degree() const { return max_degree_; }
  const std::optional<Alphabet>& node_alphabet() const { return node_alphabet_; }
  const std::optional<Alphabet>& edge_alphabet() const { return edge_alphabet_; }
  const std::vector<CenteredGraph>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  void validate(const CenteredGraph& m) const {
    const Graph& G = m.graph.graph();
    if (m.center >= G.node_count()) throw input_error("constraint member center out of range");
    if (!eccentricity_bound_ok(m, radius_)) throw input_error("constraint member exceeds the radius");
    for (NodeId v = 0; v < G.node_count(); ++v)
      if (G.degree(v) > max_degree_) throw input_error("constraint member exceeds the degree bound");
    if (node_alphabet_)
      for (auto& l : m.graph.labels().nodes)
        if (!node_alphabet_->contains(l)) throw input_error("constraint member node label '" + l + "' outside alphabet");
    if (edge_alphabet_)
      for (auto& pair : m.graph.labels().half_edges)
        for (auto& l : pair)
          if (!edge_alphabet_->contains(l)) throw input_error("constraint member half-edge label '" + l + "' outside alphabet");
  }

  std::size_t radius_ = 0;
  std::size_t max_degree_ = 0;
  std::optional<Alphabet> node_alphabet_;
  std::optional<Alphabet> edge_alphabet_;
  std::vector<CenteredGraph> members_;
  std::map<std::string, std::vector<std::size_t>> index_;
};

struct ConstraintVerdict {
  std::vector<NodeId> violators;                    // ascending
  std::vector<std::optional<std::size_t>> witness;  // matched member per node
  bool ok() const { return violators.empty(); }
};

inline ConstraintVerdict check_constraints(const LabeledGraph& g, const ConstraintSet& c) {
  const auto& labels = g.labels();
  if (c.node_alphabet())
    for (auto& l : labels.nodes)
      if (!c.node_alphabet()->contains(l)) throw input_error("node label '" + l + "' outside the constraint alphabet");
  if (c.edge_alphabet())
    for (auto& pair : labels.half_edges)
      for (auto& l : pair)
        if (!c.edge_alphabet()->contains(l))
          throw input_error("half-edge label '" + l + "' outside the constraint alphabet");
  ConstraintVerdict verdict;
  for (NodeId v = 0; v < g.graph().node_count(); ++v) {
    auto ball = centered_ball(g, v, c.radius());
    auto hit = c.match(ball);
    if (hit && !centered_isomorphism(ball, c.members()[*hit])) hit.reset();
    verdict.witness.push_back(hit);
    if (!hit) verdict.violators.push_back(v);
  }
  return verdict;
}

/// Label of a product alphabet entry.
inline std::string product_label(const std::string& in, const std::string& out) {
  for (const auto* s : {&in, &out})
    if (s->find_first_of("(),") != std::string::npos)
      throw input_error("labels used in product alphabets must not contain '(', ')' or ','");
  return "(" + in + "," + out + ")";
}

inline Alphabet product_alphabet(const Alphabet& a, const Alphabet& b) {
  Alphabet out;
  for (auto& x : a)
    for (auto& y : b) out.insert(product_label(x, y));
  return out;
}

struct LclProblem {
  Alphabet node_in, edge_in, node_out, edge_out;
  ConstraintSet constraints;
};

/// Checks an output labeling by forming the product labeling and matching
/// every ball against the problem's constraints.
inline ConstraintVerdict verify_lcl_solution(const LclProblem& p, const LabeledGraph& input, const Labeling& out) {
  const Graph& G = input.graph();
  if (out.nodes.size() != G.node_count()) throw input_error("output labeling misses node labels");
  if (out.half_edges.size() != G.edge_count()) throw input_error("output labeling misses half-edge labels");
  auto need = [](const Alphabet& a, const std::string& l, const char* what) {
    if (!a.contains(l)) throw input_error(std::string(what) + " label '" + l + "' outside its alphabet");
  };
  Labeling product;
  for (NodeId v = 0; v < G.node_count(); ++v) {
    need(p.node_in, input.node_label(v), "input node");
    need(p.node_out, out.nodes[v], "output node");
    product.nodes.push_back(product_label(input.node_label(v), out.nodes[v]));
  }
  for (EdgeId e = 0; e < G.edge_count(); ++e) {
    std::array<std::string, 2> pair;
    for (std::size_t s = 0; s < 2; ++s) {
      need(p.edge_in, input.labels().half_edges[e][s], "input half-edge");
      need(p.edge_out, out.half_edges[e][s], "output half-edge");
      pair[s] = product_label(input.labels().half_edges[e][s], out.half_edges[e][s]);
    }
    product.half_edges.push_back(pair);
  }
  return check_constraints(LabeledGraph(G, std::move(product)), p.constraints);
}

}  // namespace loclab
