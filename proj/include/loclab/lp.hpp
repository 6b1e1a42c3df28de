#pragma once

#include "loclab/matching.hpp"
#include "loclab/outcome.hpp"
#include "loclab/simulate.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace loclab {

enum class LpKind { node_based, edge_based, node_edge_based };
enum class Sense { maximize, minimize };
enum class Relation { le, eq, ge };

struct Owner {
  enum class Kind { node, edge } kind = Kind::node;
  std::size_t id = 0;
  bool operator==(const Owner&) const = default;
};

struct LpVariable {
  std::string name;
  Owner owner;
};

struct LpRow {
  std::vector<std::pair<std::size_t, Rational>> coefficients;  // variable index -> coefficient
  Relation relation = Relation::le;
  Rational bound;
  NodeId owner = 0;
};

/// A linear program whose variables and rows are owned by graph elements.
/// All variables are implicitly nonnegative.
class DistLP {
 public:
  DistLP() = default;
  DistLP(Graph g, LpKind kind, Sense sense, std::vector<LpVariable> vars, std::vector<LpRow> rows,
         std::vector<Rational> objective)
      : graph_(std::move(g)), kind_(kind), sense_(sense), vars_(std::move(vars)), rows_(std::move(rows)),
        objective_(std::move(objective)) {
    if (objective_.size() != vars_.size()) throw input_error("objective must give one coefficient per variable");
    std::set<std::string> names;
    std::set<std::size_t> node_owned, edge_owned;
    for (auto& v : vars_) {
      if (!names.insert(v.name).second) throw input_error("duplicate variable name '" + v.name + "'");
      if (v.owner.kind == Owner::Kind::node) {
        graph_.check_node(v.owner.id);
        if (kind_ == LpKind::edge_based) throw input_error("edge-based LP has a node variable");
        if (!node_owned.insert(v.owner.id).second) throw input_error("node owns two variables");
      } else {
        if (v.owner.id >= graph_.edge_count()) throw input_error("variable owned by unknown edge");
        if (kind_ == LpKind::node_based) throw input_error("node-based LP has an edge variable");
        if (!edge_owned.insert(v.owner.id).second) throw input_error("edge owns two variables");
      }
    }
    for (std::size_t j = 0; j < rows_.size(); ++j) {
      const auto& row = rows_[j];
      graph_.check_node(row.owner);
      for (auto& [i, c] : row.coefficients) {
        if (i >= vars_.size()) throw input_error("row " + std::to_string(j) + " names unknown variable");
        if (!owned_within_one(vars_[i].owner, row.owner))
          throw input_error("row " + std::to_string(j) + " uses variable '" + vars_[i].name + "' owned beyond radius 1");
      }
    }
  }

  const Graph& graph() const { return graph_; }
  LpKind kind() const { return kind_; }
  Sense sense() const { return sense_; }
  const std::vector<LpVariable>& variables() const { return vars_; }
  const std::vector<LpRow>& rows() const { return rows_; }
  const std::vector<Rational>& objective() const { return objective_; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].name == name) return i;
    return std::nullopt;
  }

 private:
  bool owned_within_one(const Owner& o, NodeId row_owner) const {
    if (o.kind == Owner::Kind::node) return o.id == row_owner || graph_.has_edge(o.id, row_owner);
    const Edge& e = graph_.edge(o.id);
    return e.u == row_owner || e.v == row_owner || graph_.has_edge(e.u, row_owner) || graph_.has_edge(e.v, row_owner);
  }

  Graph graph_;
  LpKind kind_ = LpKind::edge_based;
  Sense sense_ = Sense::maximize;
  std::vector<LpVariable> vars_;
  std::vector<LpRow> rows_;
  std::vector<Rational> objective_;
};

using LpPoint = std::map<std::string, Rational>;

/// Values aligned with the LP's variable list.
inline std::vector<Rational> point_values(const DistLP& p, const LpPoint& x) {
  std::vector<Rational> out;
  for (auto& v : p.variables()) {
    auto it = x.find(v.name);
    if (it == x.end()) throw input_error("point misses variable '" + v.name + "'");
    out.push_back(it->second);
  }
  for (auto& [name, val] : x)
    if (!p.index_of(name)) throw input_error("point names unknown variable '" + name + "'");
  return out;
}

struct FeasibilityVerdict {
  std::vector<std::size_t> violated_rows;
  std::vector<std::string> negative_variables;
  bool ok() const { return violated_rows.empty() && negative_variables.empty(); }
};

inline Rational row_value(const LpRow& row, const std::vector<Rational>& x) {
  Rational s = 0;
  for (auto& [i, c] : row.coefficients) s += c * x[i];
  return s;
}

inline bool row_holds(const LpRow& row, const Rational& lhs) {
  switch (row.relation) {
    case Relation::le: return lhs <= row.bound;
    case Relation::eq: return lhs == row.bound;
    case Relation::ge: return lhs >= row.bound;
  }
  return false;
}

inline FeasibilityVerdict check_feasible(const DistLP& p, const LpPoint& point) {
  auto x = point_values(p, point);
  FeasibilityVerdict v;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] < 0) v.negative_variables.push_back(p.variables()[i].name);
  for (std::size_t j = 0; j < p.rows().size(); ++j)
    if (!row_holds(p.rows()[j], row_value(p.rows()[j], x))) v.violated_rows.push_back(j);
  return v;
}

inline Rational objective_value(const DistLP& p, const LpPoint& point) {
  auto x = point_values(p, point);
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += p.objective()[i] * x[i];
  return s;
}

struct LpOptimum {
  enum class Status { optimal, unbounded, infeasible } status = Status::optimal;
  Rational value;
  std::vector<Rational> solution;  // aligned with variables when optimal
};

namespace detail {

/// Dense tableau simplex over exact rationals with Bland's rule. Maximizes
/// the objective row; columns past `usable` never enter the basis.
class Tableau {
 public:
  std::vector<std::vector<Rational>> a;  // rows x cols
  std::vector<Rational> rhs;
  std::vector<Rational> z;  // reduced costs, maximization: entering iff negative
  Rational z_rhs;
  std::vector<std::size_t> basis;

  void pivot(std::size_t r, std::size_t c) {
    const Rational piv = a[r][c];
    for (auto& v : a[r]) v /= piv;
    rhs[r] /= piv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j)
        if (a[r][j] != 0) a[i][j] -= f * a[r][j];
      rhs[i] -= f * rhs[r];
    }
    if (z[c] != 0) {
      const Rational f = z[c];
      for (std::size_t j = 0; j < z.size(); ++j)
        if (a[r][j] != 0) z[j] -= f * a[r][j];
      z_rhs -= f * rhs[r];
    }
    basis[r] = c;
  }

  /// Returns false when unbounded.
  bool optimize(std::size_t usable) {
    for (;;) {
      std::size_t enter = usable;
      for (std::size_t j = 0; j < usable; ++j)
        if (z[j] < 0) {
          enter = j;
          break;
        }
      if (enter == usable) return true;
      std::size_t leave = a.size();
      Rational best;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i][enter] <= 0) continue;
        Rational ratio = rhs[i] / a[i][enter];
        if (leave == a.size() || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == a.size()) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace detail

/// Exact two-phase simplex.
inline LpOptimum exact_opt(const DistLP& p) {
  const std::size_t n = p.variables().size();
  const std::size_t m = p.rows().size();
  // Column layout: structural | slack/surplus (one per row) | artificial (one per row).
  const std::size_t slack0 = n, art0 = n + m, cols = n + 2 * m;
  detail::Tableau t;
  t.a.assign(m, std::vector<Rational>(cols));
  t.rhs.assign(m, Rational(0));
  t.basis.assign(m, 0);
  std::vector<bool> has_art(m, false);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& row = p.rows()[j];
    Rational sign = row.bound < 0 ? -1 : 1;
    Relation rel = row.relation;
    if (sign < 0 && rel != Relation::eq) rel = rel == Relation::le ? Relation::ge : Relation::le;
    for (auto& [i, c] : row.coefficients) t.a[j][i] += sign * c;
    t.rhs[j] = sign * row.bound;
    if (rel == Relation::le) {
      t.a[j][slack0 + j] = 1;
      t.basis[j] = slack0 + j;
    } else {
      if (rel == Relation::ge) t.a[j][slack0 + j] = -1;
      t.a[j][art0 + j] = 1;
      t.basis[j] = art0 + j;
      has_art[j] = true;
    }
  }
  // Phase 1: maximize -sum(artificials).
  t.z.assign(cols, Rational(0));
  t.z_rhs = 0;
  for (std::size_t j = 0; j < m; ++j)
    if (has_art[j]) {
      t.z[art0 + j] = 1;
    }
  for (std::size_t j = 0; j < m; ++j)
    if (has_art[j]) {
      for (std::size_t c = 0; c < cols; ++c) t.z[c] -= t.a[j][c];
      t.z_rhs -= t.rhs[j];
    }
  t.optimize(art0);
  LpOptimum out;
  if (t.z_rhs != 0) {
    out.status = LpOptimum::Status::infeasible;
    return out;
  }
  // Drive remaining artificials out of the basis; drop redundant rows.
  for (std::size_t r = 0; r < t.a.size();) {
    if (t.basis[r] < art0) {
      ++r;
      continue;
    }
    std::size_t c = 0;
    while (c < art0 && t.a[r][c] == 0) ++c;
    if (c < art0) {
      t.pivot(r, c);
      ++r;
    } else {
      t.a.erase(t.a.begin() + static_cast<long>(r));
      t.rhs.erase(t.rhs.begin() + static_cast<long>(r));
      t.basis.erase(t.basis.begin() + static_cast<long>(r));
    }
  }
  // Phase 2.
  const Rational dir = p.sense() == Sense::maximize ? 1 : -1;
  t.z.assign(cols, Rational(0));
  t.z_rhs = 0;
  for (std::size_t i = 0; i < n; ++i) t.z[i] = -dir * p.objective()[i];
  for (std::size_t r = 0; r < t.a.size(); ++r) {
    const std::size_t b = t.basis[r];
    if (t.z[b] == 0) continue;
    const Rational f = t.z[b];
    for (std::size_t c = 0; c < cols; ++c) t.z[c] -= f * t.a[r][c];
    t.z_rhs -= f * t.rhs[r];
  }
  if (!t.optimize(art0)) {
    out.status = LpOptimum::Status::unbounded;
    return out;
  }
  out.solution.assign(n, Rational(0));
  for (std::size_t r = 0; r < t.a.size(); ++r)
    if (t.basis[r] < n) out.solution[t.basis[r]] = t.rhs[r];
  out.value = 0;
  for (std::size_t i = 0; i < n; ++i) out.value += p.objective()[i] * out.solution[i];
  return out;
}

/// OPT/value (maximize) or value/OPT (minimize); infinite when the point has
/// value 0 against a positive optimum.
struct Ratio {
  enum class Kind { finite, infinite, infeasible } kind = Kind::finite;
  Rational value;
  std::string str() const {
    switch (kind) {
      case Kind::finite: return to_string(value);
      case Kind::infinite: return "inf";
      case Kind::infeasible: return "infeasible";
    }
    return "?";
  }
  bool at_most(const Rational& bound) const { return kind == Kind::finite && value <= bound; }
};

inline Ratio approximation_ratio(const DistLP& p, const LpPoint& x, const LpOptimum& opt) {
  Ratio r;
  if (!check_feasible(p, x).ok()) {
    r.kind = Ratio::Kind::infeasible;
    return r;
  }
  if (opt.status == LpOptimum::Status::unbounded) {
    r.kind = Ratio::Kind::infinite;
    return r;
  }
  if (opt.status != LpOptimum::Status::optimal) throw std::logic_error("feasible point for an infeasible LP");
  const Rational v = objective_value(p, x);
  if (v < 0 || opt.value < 0) throw input_error("approximation ratio needs nonnegative objective values");
  const Rational& num = p.sense() == Sense::maximize ? opt.value : v;
  const Rational& den = p.sense() == Sense::maximize ? v : opt.value;
  if (den == 0) {
    if (num == 0)
      r.value = 1;
    else
      r.kind = Ratio::Kind::infinite;
    return r;
  }
  r.value = num / den;
  return r;
}

inline Ratio approximation_ratio(const DistLP& p, const LpPoint& x) { return approximation_ratio(p, x, exact_opt(p)); }

inline std::string edge_variable(EdgeId e) { return "x_e" + std::to_string(e); }

inline DistLP build_fractional_matching_lp(const Graph& g) {
  if (g.is_multi()) throw input_error("the matching LP is defined on simple graphs");
  std::vector<LpVariable> vars;
  for (EdgeId e = 0; e < g.edge_count(); ++e) vars.push_back({edge_variable(e), {Owner::Kind::edge, e}});
  std::vector<LpRow> rows;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    LpRow row;
    for (EdgeId e : g.incident(v)) row.coefficients.push_back({e, Rational(1)});
    row.relation = Relation::le;
    row.bound = 1;
    row.owner = v;
    rows.push_back(std::move(row));
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    rows.push_back({{{e, Rational(1)}}, Relation::le, Rational(1), std::min(g.edge(e).u, g.edge(e).v)});
  return DistLP(g, LpKind::edge_based, Sense::maximize, std::move(vars), std::move(rows),
                std::vector<Rational>(g.edge_count(), Rational(1)));
}

/// Outputs as labels: node variables on node labels, edge variables on
/// both half-edges; elements without a variable carry "0".
inline LpPoint point_from_labeling(const DistLP& p, const Labeling& l) {
  const Graph& g = p.graph();
  if (!l.fits(g)) throw input_error("labeling does not fit the LP graph");
  LpPoint x;
  for (auto& v : p.variables()) {
    if (v.owner.kind == Owner::Kind::node) {
      x[v.name] = parse_rational(l.nodes[v.owner.id]);
    } else {
      const auto& pair = l.half_edges[v.owner.id];
      Rational a = parse_rational(pair[0]), b = parse_rational(pair[1]);
      if (a != b) throw input_error("endpoints of edge " + std::to_string(v.owner.id) + " disagree on '" + v.name + "'");
      x[v.name] = a;
    }
  }
  return x;
}

inline Labeling labeling_from_point(const DistLP& p, const LpPoint& x) {
  auto values = point_values(p, x);
  Labeling l = Labeling::blank(p.graph());
  for (auto& s : l.nodes) s = "0";
  for (auto& pair : l.half_edges) pair = {"0", "0"};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& o = p.variables()[i].owner;
    if (o.kind == Owner::Kind::node)
      l.nodes[o.id] = to_string(values[i]);
    else
      l.half_edges[o.id] = {to_string(values[i]), to_string(values[i])};
  }
  return l;
}

inline bool same_structure(const Graph& a, const Graph& b) {
  return a.node_count() == b.node_count() && a.edges() == b.edges();
}

/// Coordinatewise expectation of an outcome whose support points are all
/// feasible for `p`.
inline LpPoint dequantize(const DistLP& p, const Outcome& o) {
  if (!same_structure(p.graph(), o.input().graph())) throw input_error("outcome and LP live on different graphs");
  for (std::size_t i = 0; i < o.support().size(); ++i)
    if (!check_feasible(p, point_from_labeling(p, o.support()[i].labeling)).ok())
      throw contract_error("support entry " + std::to_string(i) + " is infeasible");
  auto ex = expectation(o, rational_value);
  LpPoint x;
  for (auto& v : p.variables())
    x[v.name] = v.owner.kind == Owner::Kind::node ? ex.nodes[v.owner.id] : ex.half_edges[v.owner.id][0];
  return x;
}

using OutcomeOracle = std::function<Outcome(const LabeledGraph&)>;

/// A family member containing the view: `center` sees an isomorphic
/// radius-T view, and ports[i] is the edge of `graph` that plays the role of
/// the anchor's i-th port.
struct Completion {
  LabeledGraph graph;
  NodeId center = 0;
  std::vector<EdgeId> ports;
};

using CompletionRule = std::function<std::optional<Completion>(const View&)>;

/// Completion by the actual input graph.
inline CompletionRule whole_graph_completion(LabeledGraph g) {
  return [g = std::move(g)](const View& v) -> std::optional<Completion> {
    NodeId c = v.source_nodes[v.anchor()];
    if (c >= g.graph().node_count()) return std::nullopt;
    auto inc = g.graph().incident(c);
    return Completion{g, c, std::vector<EdgeId>(inc.begin(), inc.end())};
  };
}

/// Completion for anonymous cycles: a view that is a whole cycle completes
/// to itself; a path view of p nodes completes to a cycle on p + extra
/// nodes (at least 3).
inline CompletionRule cycle_completion(std::size_t extra) {
  return [extra](const View& v) -> std::optional<Completion> {
    const Graph& G = v.base.graph();
    const std::size_t p = G.node_count();
    const NodeId anchor = v.anchor();
    for (auto& port : v.ports[anchor])
      if (!port.local_edge && v.radius > 0) return std::nullopt;
    if (G.edge_count() == p && p >= 3) {
      for (NodeId u = 0; u < p; ++u)
        if (G.degree(u) != 2) return std::nullopt;
      if (!is_connected(G)) return std::nullopt;
      std::vector<EdgeId> ports;
      for (auto& port : v.ports[anchor]) ports.push_back(*port.local_edge);
      return Completion{v.base, anchor, ports};
    }
    if (G.edge_count() + 1 != p) return std::nullopt;
    // Walk the path from one end.
    std::vector<NodeId> ends;
    for (NodeId u = 0; u < p; ++u) {
      if (G.degree(u) > 2) return std::nullopt;
      if (G.degree(u) <= 1) ends.push_back(u);
    }
    if (p > 1 && ends.size() != 2) return std::nullopt;
    std::vector<NodeId> walk{ends.empty() ? anchor : ends[0]};
    std::vector<EdgeId> walk_edges;
    while (walk.size() < p) {
      NodeId cur = walk.back();
      bool moved = false;
      for (EdgeId e : G.incident(cur)) {
        if (!walk_edges.empty() && e == walk_edges.back()) continue;
        walk_edges.push_back(e);
        walk.push_back(G.other_end(e, cur));
        moved = true;
        break;
      }
      if (!moved) return std::nullopt;
    }
    const std::size_t total = std::max<std::size_t>(p + extra, 3);
    std::vector<Edge> edges;
    Labeling l;
    for (std::size_t i = 0; i < total; ++i) {
      edges.push_back({i, (i + 1) % total});
      l.nodes.push_back(i < p ? v.base.node_label(walk[i]) : std::string());
      l.half_edges.push_back({"", ""});
    }
    // Keep view half-edge labels on the path part.
    for (std::size_t i = 0; i + 1 < p; ++i)
      l.half_edges[i] = {v.base.half_edge_label(walk[i], walk_edges[i]), v.base.half_edge_label(walk[i + 1], walk_edges[i])};
    std::size_t center = static_cast<std::size_t>(std::find(walk.begin(), walk.end(), anchor) - walk.begin());
    // The anchor's ports, in its adjacency order, map to cycle edges.
    std::vector<EdgeId> ports;
    std::vector<EdgeId> center_edges{(center + total - 1) % total, center};
    std::vector<NodeId> center_nbrs{(center + total - 1) % total, (center + 1) % total};
    for (auto& port : v.ports[anchor]) {
      if (port.local_edge) {
        NodeId other = G.other_end(*port.local_edge, anchor);
        std::size_t pos = static_cast<std::size_t>(std::find(walk.begin(), walk.end(), other) - walk.begin());
        ports.push_back(pos == (center + 1) % total ? center : (center + total - 1) % total);
      } else {
        // Radius 0: ports outside the view, assigned in cycle order.
        if (center_edges.empty()) return std::nullopt;
        ports.push_back(center_edges.front());
        center_edges.erase(center_edges.begin());
      }
    }
    Graph cyc(total, std::move(edges));
    // Port labels of dangling half-edges carry over.
    for (std::size_t i = 0; i < ports.size(); ++i)
      if (!v.ports[anchor][i].local_edge) l.half_edges[ports[i]][cyc.slot(center, ports[i])] = v.ports[anchor][i].label;
    return Completion{LabeledGraph(std::move(cyc), std::move(l)), center, ports};
  };
}

/// The deterministic rule: complete the view, query the oracle on the
/// completion, and output the expected values of the center's marginal.
inline LocalAlgorithm local_expectation_algorithm(OutcomeOracle oracle, std::size_t radius, CompletionRule completion) {
  LocalAlgorithm a;
  a.locality = radius;
  a.rule = [oracle = std::move(oracle), radius, completion = std::move(completion)](const View& v) {
    auto c = completion(v);
    if (!c) throw contract_error("completion rule cannot embed the view");
    const NodeId anchor = v.anchor();
    if (c->ports.size() != v.ports[anchor].size()) throw contract_error("completion gives the wrong number of ports");
    auto check = extract_view(c->graph, c->center, radius);
    if (!views_isomorphic(v, check)) throw contract_error("completion does not reproduce the view");
    auto out = oracle(c->graph);
    const NodeId center[] = {c->center};
    auto local = expectation(restrict(out, center), rational_value).at(0);
    NodeOutput o{to_string(local.node), {}};
    for (EdgeId e : c->ports) o.ports.push_back(to_string(local.ports.at(c->graph.graph().port_of(c->center, e))));
    return o;
  };
  return a;
}

inline LpPoint maximal_matching_to_fractional(const Graph& g, std::span<const EdgeId> m) {
  auto verdict = is_maximal_matching(g, m);
  if (!verdict.ok()) throw input_error(verdict.describe());
  LpPoint x;
  for (EdgeId e = 0; e < g.edge_count(); ++e) x[edge_variable(e)] = 0;
  for (EdgeId e : m) x[edge_variable(e)] = 1;
  return x;
}

}  // namespace loclab
