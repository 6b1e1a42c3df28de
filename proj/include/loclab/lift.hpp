#pragma once

#include "loclab/gadgets.hpp"
#include "loclab/outcome.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace loclab {

inline const std::string kBottom = "⊥";

struct PromiseVerdict {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

namespace detail {

/// Label of each port in lexicographic order, or nullopt when the port is
/// not uniformly labeled.
inline std::optional<std::string> port_label(const PortWitness& p, const std::vector<std::string>& out) {
  const std::string& first = out.at(p.gadget.root());
  for (NodeId v : p.gadget.nodes)
    if (out.at(v) != first) return std::nullopt;
  return first;
}

inline std::string port_name(std::size_t o, const PortWitness& p) {
  return "port (" + std::to_string(p.i) + "," + std::to_string(p.j) + ") of octopus " + std::to_string(o);
}

}  // namespace detail

/// Checks a node labeling against the lifted problem: bottom outside port
/// gadgets, one alphabet label per port gadget, the white-string rules along
/// every octopus and the black-multiset rule at every inter node.
inline PromiseVerdict verify_pi_promise(const ProperInstance& pi, const std::vector<std::string>& out,
                                        const LinearizableProblem& p) {
  PromiseVerdict v;
  const Graph& g = pi.graph;
  if (out.size() != g.node_count()) {
    v.violations.push_back("labeling covers " + std::to_string(out.size()) + " of " + std::to_string(g.node_count()) +
                           " nodes");
    return v;
  }
  std::vector<bool> in_port(g.node_count(), false);
  for (auto& oc : pi.witness.octopi)
    for (auto& port : oc.ports)
      for (NodeId u : port.gadget.nodes) in_port[u] = true;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!in_port[u] && out[u] != kBottom) v.violations.push_back("node " + std::to_string(u) + " is outside port gadgets but not labeled " + kBottom);
    if (in_port[u] && !p.in_sigma(out[u])) v.violations.push_back("port node " + std::to_string(u) + " has label '" + out[u] + "' outside the alphabet");
  }
  std::map<NodeId, std::string> leaf_label;
  for (std::size_t o = 0; o < pi.witness.octopi.size(); ++o) {
    const auto& oc = pi.witness.octopi[o];
    std::vector<std::string> s;
    bool uniform = true;
    for (auto& port : oc.ports) {
      auto l = detail::port_label(port, out);
      if (!l) {
        v.violations.push_back(detail::port_name(o, port) + " is not uniformly labeled");
        uniform = false;
        continue;
      }
      s.push_back(*l);
      leaf_label[port.gadget.leftmost_leaf()] = *l;
    }
    if (uniform && !white_string_ok(p, s)) {
      std::string joined;
      for (auto& l : s) joined += l;
      v.violations.push_back("octopus " + std::to_string(o) + " reads '" + joined + "', which breaks the white rules");
    }
  }
  for (NodeId b : pi.witness.inter_nodes()) {
    std::multiset<std::string> m;
    bool known = true;
    for (NodeId u : g.neighbors(b)) {
      auto it = leaf_label.find(u);
      if (it == leaf_label.end()) known = false;
      else m.insert(it->second);
    }
    if (known && !black_multiset_ok(p, m)) v.violations.push_back("inter node " + std::to_string(b) + " sees a forbidden multiset");
  }
  return v;
}

/// The contracted graph: one white per octopus, one black per inter node,
/// one edge per (port, inter node) attachment. White adjacency follows the
/// left-to-right port order.
struct Contraction {
  IncidenceGraph hat;
  std::vector<NodeId> inter_of_black;  // indexed by black id - octopus count
  struct Link {
    std::size_t octopus;
    std::size_t port;
    NodeId inter;
  };
  std::vector<Link> links;  // per contracted edge
};

inline Contraction contract_octopi(const ProperInstance& pi) {
  const Graph& g = pi.graph;
  const auto& w = pi.witness;
  Contraction c;
  c.inter_of_black = w.inter_nodes();
  std::map<NodeId, NodeId> black_of;
  const std::size_t whites = w.octopi.size();
  for (std::size_t i = 0; i < c.inter_of_black.size(); ++i) black_of[c.inter_of_black[i]] = whites + i;
  std::vector<Edge> edges;
  for (std::size_t o = 0; o < whites; ++o)
    for (std::size_t p = 0; p < w.octopi[o].ports.size(); ++p)
      for (NodeId b : g.neighbors(w.octopi[o].ports[p].gadget.leftmost_leaf()))
        if (w.node_roles[b] == NodeRole::inter) {
          edges.push_back({o, black_of.at(b)});
          c.links.push_back({o, p, b});
        }
  std::vector<Role> roles(whites, Role::white);
  roles.resize(whites + c.inter_of_black.size(), Role::black);
  Graph hat(roles.size(), std::move(edges), true);
  c.hat = IncidenceGraph(std::move(hat), std::move(roles));
  return c;
}

struct LiftRun {
  std::vector<std::string> labels;  // per node of the proper instance
  std::vector<NodeId> matched_inter;
  std::size_t unit_locality = 0;  // locality observed on the contracted graph
  std::size_t stretch = 0;        // largest distance between inter nodes of one octopus
  std::size_t locality = 0;       // unit_locality * stretch
  std::size_t locality_bound = 0; // 2 * (port height + head height), maximized
};

/// Runs the greedy matcher on the contracted graph and writes each port's
/// label from the matching encoding. Ports without an attachment get B or
/// A by their position relative to the matched port, or P when the octopus
/// stays unmatched.
inline LiftRun lift_slocal_algorithm(const ProperInstance& pi, std::span<const NodeId> octopus_order) {
  auto c = contract_octopi(pi);
  auto greedy = run_greedy(c.hat, octopus_order);
  auto enc = encode_matching(c.hat, greedy.matched);
  const auto& w = pi.witness;
  LiftRun run;
  run.labels.assign(pi.graph.node_count(), kBottom);
  run.unit_locality = greedy.locality;
  for (NodeId b : greedy.matched) run.matched_inter.push_back(c.inter_of_black[b - w.octopi.size()]);
  std::vector<std::vector<std::optional<std::string>>> port_labels(w.octopi.size());
  for (std::size_t o = 0; o < w.octopi.size(); ++o) port_labels[o].resize(w.octopi[o].ports.size());
  for (EdgeId e = 0; e < c.links.size(); ++e) {
    auto& slot = port_labels[c.links[e].octopus][c.links[e].port];
    if (!slot) slot = enc[e];
  }
  std::size_t max_port = 0, max_head = 0;
  for (std::size_t o = 0; o < w.octopi.size(); ++o) {
    const auto& oc = w.octopi[o];
    max_head = std::max(max_head, oc.x());
    std::optional<std::size_t> hit;
    for (std::size_t p = 0; p < oc.ports.size(); ++p)
      if (port_labels[o][p] == labels::M) hit = p;
    for (std::size_t p = 0; p < oc.ports.size(); ++p) {
      max_port = std::max(max_port, oc.ports[p].gadget.height);
      std::string l = port_labels[o][p].value_or(!hit ? labels::Ptr : p < *hit ? labels::B : labels::A);
      for (NodeId u : oc.ports[p].gadget.nodes) run.labels[u] = l;
    }
  }
  // Distances between inter nodes sharing an octopus.
  std::map<std::size_t, std::set<NodeId>> inter_of_octopus;
  for (auto& l : c.links) inter_of_octopus[l.octopus].insert(l.inter);
  for (auto& [o, inters] : inter_of_octopus) {
    for (NodeId a : inters) {
      const NodeId src[] = {a};
      auto dist = bfs_distances(pi.graph, src);
      for (NodeId b : inters)
        if (b != a && dist[b]) run.stretch = std::max(run.stretch, *dist[b]);
    }
  }
  run.locality = run.unit_locality * run.stretch;
  run.locality_bound = 2 * (max_port + max_head);
  return run;
}

inline LiftRun lift_slocal_algorithm(const ProperInstance& pi) {
  std::vector<NodeId> order(pi.witness.octopi.size());
  std::iota(order.begin(), order.end(), 0);
  return lift_slocal_algorithm(pi, order);
}

/// Edge labels read off the first half of every edge.
inline EdgeLabels edge_labels_of(const Labeling& l) {
  EdgeLabels out;
  for (auto& pair : l.half_edges) out.push_back(pair[0]);
  return out;
}

/// Moves an outcome on the proper instance to the source incidence graph:
/// every source edge takes the label of the root of its port gadget.
inline Outcome pullback_outcome(const Outcome& o, const PortMap& f, const IncidenceGraph& src) {
  const Graph& G = src.graph();
  LabeledGraph target(G);
  std::vector<WeightedLabeling> support;
  for (auto& wl : o.support()) {
    Labeling l = Labeling::blank(G);
    for (EdgeId e = 0; e < G.edge_count(); ++e) {
      auto it = f.root_of_edge.find(e);
      if (it == f.root_of_edge.end()) throw input_error("port map misses source edge " + std::to_string(e));
      const std::string& label = wl.labeling.nodes.at(it->second);
      l.half_edges[e] = {label, label};
    }
    support.push_back({std::move(l), wl.p});
  }
  return Outcome(std::move(target), std::move(support));
}

/// Node labeling as an output labeling of the proper instance.
inline Labeling node_output(const Graph& g, const std::vector<std::string>& labels) {
  Labeling l = Labeling::blank(g);
  l.nodes = labels;
  return l;
}

/// The lifted problem as a radius-2 LCL over the family labeling: every
/// family ball of `pi` with every port-uniform assignment that passes the
/// string and multiset rules visible from the center and its neighbors.
/// The pair rule across two head leaves is checked at the left leaf only.
inline LclProblem promise_lcl_problem(const ProperInstance& pi, const LinearizableProblem& p) {
  LclProblem prob;
  prob.node_in = family::node_alphabet();
  prob.edge_in = family::edge_alphabet();
  prob.node_out = Alphabet(p.sigma.begin(), p.sigma.end());
  prob.node_out.insert(kBottom);
  prob.edge_out = {""};
  prob.constraints = ConstraintSet(2, 5, product_alphabet(prob.node_in, prob.node_out),
                                   product_alphabet(prob.edge_in, prob.edge_out), {});
  ConstraintSet balls(2, 5, family::node_alphabet(), family::edge_alphabet(), {});
  balls.absorb(pi.family);
  auto is_port = [](const std::string& l) { return l == family::port1 || l == family::port2; };
  for (const auto& ball : balls.members()) {
    const Graph& G = ball.graph.graph();
    const auto& lab = ball.graph.labels();
    const std::size_t n = G.node_count();
    std::vector<std::size_t> group(n, n);
    std::size_t groups = 0;
    for (NodeId s = 0; s < n; ++s) {
      if (!is_port(lab.nodes[s]) || group[s] != n) continue;
      std::vector<NodeId> stack{s};
      group[s] = groups;
      while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId x : G.neighbors(u))
          if (is_port(lab.nodes[x]) && group[x] == n) {
            group[x] = groups;
            stack.push_back(x);
          }
      }
      ++groups;
    }
    const NodeId src[] = {ball.center};
    auto depth = bfs_distances(G, src);
    auto along = [&](NodeId u, const std::string& half) {
      std::vector<NodeId> out;
      for (EdgeId e : G.incident(u))
        if (ball.graph.half_edge_label(u, e) == half) out.push_back(G.other_end(e, u));
      return out;
    };
    std::vector<std::size_t> pick(groups, 0);
    std::vector<std::string> out(n);
    while (true) {
      for (NodeId u = 0; u < n; ++u) out[u] = group[u] == n ? kBottom : p.sigma[pick[group[u]]];
      auto string_at = [&](NodeId leaf) {
        auto ports = along(leaf, family::to_port);
        std::sort(ports.begin(), ports.end(), [&](NodeId a, NodeId b) { return lab.nodes[a] < lab.nodes[b]; });
        std::vector<std::string> s;
        for (NodeId q : ports) s.push_back(out[q]);
        return s;
      };
      bool ok = true;
      for (NodeId u = 0; u < n && ok; ++u) {
        if (!depth[u] || *depth[u] > 1) continue;
        if (lab.nodes[u] == family::head) {
          auto s = string_at(u);
          if (s.empty()) continue;
          for (std::size_t i = 0; i + 1 < s.size() && ok; ++i) ok = p.pairs.contains({s[i], s[i + 1]});
          if (along(u, family::left).empty()) ok = ok && p.first.contains(s.front());
          auto right = along(u, family::right);
          if (right.empty()) ok = ok && p.last.contains(s.back());
          if (*depth[u] == 0 && !right.empty()) {
            auto t = string_at(right[0]);
            if (!t.empty()) ok = ok && p.pairs.contains({s.back(), t.front()});
          }
        } else if (lab.nodes[u] == family::inter) {
          std::multiset<std::string> m;
          for (NodeId x : G.neighbors(u)) m.insert(out[x]);
          ok = black_multiset_ok(p, m);
        }
      }
      if (ok) {
        Labeling prod = Labeling::blank(G);
        for (NodeId u = 0; u < n; ++u) prod.nodes[u] = product_label(lab.nodes[u], out[u]);
        for (EdgeId e = 0; e < G.edge_count(); ++e)
          for (std::size_t s = 0; s < 2; ++s) prod.half_edges[e][s] = product_label(lab.half_edges[e][s], "");
        prob.constraints.insert({LabeledGraph(G, std::move(prod)), ball.center});
      }
      std::size_t i = 0;
      while (i < groups && ++pick[i] == p.sigma.size()) pick[i++] = 0;
      if (i == groups) break;
    }
  }
  return prob;
}

}  // namespace loclab
