#pragma once

#include "loclab/matching.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace loclab {

/// An edge-labeling problem on a bipartite incidence graph: white nodes read
/// their incident labels as a string in adjacency order, black nodes read
/// them as a multiset.
struct LinearizableProblem {
  std::vector<std::string> sigma;
  std::set<std::string> first;
  std::set<std::string> last;
  std::set<std::pair<std::string, std::string>> pairs;
  std::vector<std::multiset<std::string>> black;
  std::size_t rank = 2;

  void validate() const {
    std::set<std::string> s(sigma.begin(), sigma.end());
    if (s.size() != sigma.size()) throw input_error("alphabet lists a label twice");
    if (first.empty() || last.empty()) throw input_error("first and last label sets must be nonempty");
    auto known = [&](const std::string& l) {
      if (!s.contains(l)) throw input_error("label '" + l + "' is not in the alphabet");
    };
    for (auto& l : first) known(l);
    for (auto& l : last) known(l);
    for (auto& [a, b] : pairs) known(a), known(b);
    for (auto& m : black) {
      if (m.size() > rank) throw input_error("black configuration exceeds the rank bound");
      for (auto& l : m) known(l);
    }
  }

  bool in_sigma(const std::string& l) const { return std::find(sigma.begin(), sigma.end(), l) != sigma.end(); }
};

namespace labels {
inline const std::string M = "M";
inline const std::string B = "B";
inline const std::string A = "A";
inline const std::string Ptr = "P";
}  // namespace labels

/// Maximal matching as a linearizable problem.
inline LinearizableProblem matching_problem() {
  using namespace labels;
  LinearizableProblem p;
  p.sigma = {M, B, A, Ptr};
  p.first = {M, B, Ptr};
  p.last = {M, A, Ptr};
  p.pairs = {{B, B}, {B, M}, {M, A}, {A, A}, {Ptr, Ptr}};
  p.black = {{M, M}, {Ptr, B}, {Ptr, A}, {B, B}, {B, A}, {A, A}};
  p.rank = 2;
  return p;
}

enum class Role { white, black };

class IncidenceGraph {
 public:
  IncidenceGraph() = default;
  IncidenceGraph(Graph g, std::vector<Role> roles) : graph_(std::move(g)), roles_(std::move(roles)) {
    if (roles_.size() != graph_.node_count()) throw input_error("role list does not cover every node");
    for (auto& e : graph_.edges())
      if (roles_[e.u] == roles_[e.v]) throw input_error("incidence graph edge joins two nodes of the same role");
  }

  const Graph& graph() const { return graph_; }
  const std::vector<Role>& roles() const { return roles_; }
  Role role(NodeId v) const { return roles_.at(v); }

  std::vector<NodeId> nodes_with(Role r) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < roles_.size(); ++v)
      if (roles_[v] == r) out.push_back(v);
    return out;
  }
  std::vector<NodeId> whites() const { return nodes_with(Role::white); }
  std::vector<NodeId> blacks() const { return nodes_with(Role::black); }

  /// White members of every black node, in black-id order.
  std::vector<std::vector<NodeId>> black_members() const {
    std::vector<std::vector<NodeId>> out;
    for (NodeId b : blacks()) out.push_back(graph_.neighbors(b));
    return out;
  }

 private:
  Graph graph_;
  std::vector<Role> roles_;
};

/// Whites 0..n-1 are the nodes of `h`; black n+e stands for edge e.
/// White adjacency follows h's adjacency order.
inline IncidenceGraph incidence_graph(const Graph& h) {
  const std::size_t n = h.node_count();
  std::vector<Edge> edges;
  std::vector<std::vector<EdgeId>> adj(n + h.edge_count());
  for (EdgeId e = 0; e < h.edge_count(); ++e) {
    edges.push_back({h.edge(e).u, n + e});
    edges.push_back({h.edge(e).v, n + e});
    adj[n + e] = {2 * e, 2 * e + 1};
  }
  for (NodeId v = 0; v < n; ++v)
    for (EdgeId e : h.incident(v)) adj[v].push_back(h.edge(e).u == v ? 2 * e : 2 * e + 1);
  std::vector<Role> roles(n, Role::white);
  roles.resize(n + h.edge_count(), Role::black);
  return IncidenceGraph(Graph(n + h.edge_count(), std::move(edges), std::move(adj), h.is_multi()), std::move(roles));
}

using EdgeLabels = std::vector<std::string>;  // indexed by incidence-graph edge id

struct LinearizableVerdict {
  std::vector<NodeId> white_violations;
  std::vector<NodeId> black_violations;
  bool ok() const { return white_violations.empty() && black_violations.empty(); }
};

inline bool white_string_ok(const LinearizableProblem& p, const std::vector<std::string>& s) {
  if (s.empty()) return true;
  if (!p.first.contains(s.front()) || !p.last.contains(s.back())) return false;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!p.pairs.contains({s[i], s[i + 1]})) return false;
  return true;
}

inline bool black_multiset_ok(const LinearizableProblem& p, const std::multiset<std::string>& m) {
  return std::find(p.black.begin(), p.black.end(), m) != p.black.end();
}

inline LinearizableVerdict verify_linearizable(const LinearizableProblem& p, const IncidenceGraph& g, const EdgeLabels& lab) {
  const Graph& G = g.graph();
  if (lab.size() != G.edge_count()) throw input_error("edge labeling does not cover every edge");
  for (auto& l : lab)
    if (!p.in_sigma(l)) throw input_error("edge label '" + l + "' is not in the alphabet");
  LinearizableVerdict v;
  for (NodeId u = 0; u < G.node_count(); ++u) {
    if (g.role(u) == Role::white) {
      std::vector<std::string> s;
      for (EdgeId e : G.incident(u)) s.push_back(lab[e]);
      if (!white_string_ok(p, s)) v.white_violations.push_back(u);
    } else {
      if (G.degree(u) > p.rank) {
        v.black_violations.push_back(u);
        continue;
      }
      std::multiset<std::string> m;
      for (EdgeId e : G.incident(u)) m.insert(lab[e]);
      if (!black_multiset_ok(p, m)) v.black_violations.push_back(u);
    }
  }
  return v;
}

inline MatchingVerdict is_maximal_matching(const IncidenceGraph& g, std::span<const NodeId> matched_blacks) {
  auto blacks = g.blacks();
  std::vector<std::size_t> idx;
  for (NodeId b : matched_blacks) {
    auto it = std::lower_bound(blacks.begin(), blacks.end(), b);
    if (it == blacks.end() || *it != b) return {MatchingIssue::unknown_edge, b};
    idx.push_back(static_cast<std::size_t>(it - blacks.begin()));
  }
  auto verdict = is_maximal_hypermatching(g.graph().node_count(), g.black_members(), idx);
  if (verdict.issue == MatchingIssue::augmenting_edge || verdict.issue == MatchingIssue::unknown_edge)
    verdict.witness = blacks.at(verdict.witness);
  return verdict;
}

/// Matched node: M on its matched edge, B before it, A after it. Unmatched
/// node: Ptr everywhere.
inline EdgeLabels encode_matching(const IncidenceGraph& g, std::span<const NodeId> matched_blacks) {
  auto verdict = is_maximal_matching(g, matched_blacks);
  if (!verdict.ok()) throw input_error(verdict.describe());
  const Graph& G = g.graph();
  std::vector<bool> matched(G.node_count(), false);
  for (NodeId b : matched_blacks) matched[b] = true;
  EdgeLabels lab(G.edge_count());
  for (NodeId w : g.whites()) {
    auto inc = G.incident(w);
    std::size_t hit = inc.size();
    for (std::size_t i = 0; i < inc.size(); ++i)
      if (matched[G.other_end(inc[i], w)]) hit = i;
    for (std::size_t i = 0; i < inc.size(); ++i)
      lab[inc[i]] = hit == inc.size() ? labels::Ptr : i < hit ? labels::B : i == hit ? labels::M : labels::A;
  }
  return lab;
}

/// Black nodes whose incident edges are all labeled M.
inline std::vector<NodeId> decode_to_matching(const IncidenceGraph& g, const EdgeLabels& lab) {
  auto p = matching_problem();
  if (!verify_linearizable(p, g, lab).ok()) throw contract_error("labeling is not a valid maximal-matching encoding");
  const Graph& G = g.graph();
  std::vector<NodeId> out;
  for (NodeId b : g.blacks()) {
    auto inc = G.incident(b);
    if (!inc.empty() && std::all_of(inc.begin(), inc.end(), [&](EdgeId e) { return lab[e] == labels::M; }))
      out.push_back(b);
  }
  auto verdict = is_maximal_matching(g, out);
  if (!verdict.ok()) throw contract_error("decoded edge set is not a maximal matching: " + verdict.describe());
  return out;
}

/// Greedy SLOCAL run with black nodes as processing units, ordered by the
/// given white order.
inline GreedyRun run_greedy(const IncidenceGraph& g, std::span<const NodeId> white_order) {
  auto blacks = g.blacks();
  auto members = g.black_members();
  std::vector<NodeId> full_order(white_order.begin(), white_order.end());
  std::vector<bool> seen(g.graph().node_count(), false);
  for (NodeId w : white_order) {
    if (w >= seen.size() || g.role(w) != Role::white || seen[w]) throw input_error("order is not a permutation of the white nodes");
    seen[w] = true;
  }
  if (white_order.size() != g.whites().size()) throw input_error("order is not a permutation of the white nodes");
  for (NodeId b : blacks) full_order.push_back(b);
  auto order = induced_unit_order(g.graph().node_count(), members, full_order);
  auto run = run_greedy_units(members, order);
  for (auto& m : run.matched) m = blacks[m];
  return run;
}

}  // namespace loclab
