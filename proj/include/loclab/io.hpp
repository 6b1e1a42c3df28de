#pragma once

#include "loclab/lift.hpp"
#include "loclab/lp.hpp"
#include "loclab/nonsignaling.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace loclab::io {

using json = nlohmann::ordered_json;

inline json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(std::string("malformed JSON: ") + e.what());
  }
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw input_error("failed writing '" + path + "'");
}

/// Typed field access that reports problems as input errors.
template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw input_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw input_error(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return field<T>(j, key);
}

inline std::string half_edge_key(NodeId v, EdgeId e) { return std::to_string(v) + ":" + std::to_string(e); }

// --- rationals ------------------------------------------------------------

inline json to_json(const Rational& q) { return fraction_string(q); }

inline Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw input_error("rationals must be strings \"num/den\" or integers");
}

// --- graphs ---------------------------------------------------------------

inline json labeling_to_json(const Graph& g, const Labeling& l) {
  json half = json::object();
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (std::size_t s = 0; s < 2; ++s) half[half_edge_key(s == 0 ? g.edge(e).u : g.edge(e).v, e)] = l.half_edges[e][s];
  return json{{"node_labels", l.nodes}, {"half_edge_labels", half}};
}

inline Labeling labeling_from_json(const Graph& g, const json& j) {
  Labeling l = Labeling::blank(g);
  if (j.contains("node_labels")) {
    auto nodes = field<std::vector<std::string>>(j, "node_labels");
    if (nodes.size() != g.node_count()) throw input_error("node_labels must list one label per node");
    l.nodes = std::move(nodes);
  }
  if (j.contains("half_edge_labels")) {
    const json& h = j.at("half_edge_labels");
    if (!h.is_object()) throw input_error("half_edge_labels must be an object keyed \"node:edge\"");
    for (auto it = h.begin(); it != h.end(); ++it) {
      const std::string& key = it.key();
      auto colon = key.find(':');
      if (colon == std::string::npos) throw input_error("half-edge key '" + key + "' is not \"node:edge\"");
      NodeId v;
      EdgeId e;
      try {
        v = std::stoul(key.substr(0, colon));
        e = std::stoul(key.substr(colon + 1));
      } catch (const std::exception&) {
        throw input_error("half-edge key '" + key + "' is not \"node:edge\"");
      }
      if (e >= g.edge_count() || (g.edge(e).u != v && g.edge(e).v != v))
        throw input_error("half-edge key '" + key + "' names no half-edge");
      if (!it.value().is_string()) throw input_error("half-edge labels must be strings");
      l.half_edges[e][g.slot(v, e)] = it.value().get<std::string>();
    }
  }
  return l;
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array(), adj = json::array();
  for (auto& e : g.edges()) edges.push_back({e.u, e.v});
  for (NodeId v = 0; v < g.node_count(); ++v) {
    auto inc = g.incident(v);
    adj.push_back(std::vector<EdgeId>(inc.begin(), inc.end()));
  }
  return json{{"n", g.node_count()}, {"multi", g.is_multi()}, {"edges", edges}, {"adjacency_order", adj}};
}

inline json to_json(const LabeledGraph& g) {
  json j = graph_to_json(g.graph());
  auto l = labeling_to_json(g.graph(), g.labels());
  j["node_labels"] = l["node_labels"];
  j["half_edge_labels"] = l["half_edge_labels"];
  if (g.node_alphabet()) j["node_alphabet"] = *g.node_alphabet();
  if (g.edge_alphabet()) j["edge_alphabet"] = *g.edge_alphabet();
  return j;
}

inline Graph graph_from_json(const json& j) {
  const auto n = field<std::size_t>(j, "n");
  const bool multi = field_or<bool>(j, "multi", false);
  std::vector<Edge> edges;
  for (auto& pair : field<std::vector<std::vector<std::size_t>>>(j, "edges")) {
    if (pair.size() != 2) throw input_error("every edge must be a pair [u, v]");
    edges.push_back({pair[0], pair[1]});
  }
  if (j.contains("adjacency_order"))
    return Graph(n, std::move(edges), field<std::vector<std::vector<EdgeId>>>(j, "adjacency_order"), multi);
  return Graph(n, std::move(edges), multi);
}

inline LabeledGraph labeled_graph_from_json(const json& j) {
  Graph g = graph_from_json(j);
  Labeling l = labeling_from_json(g, j);
  std::optional<Alphabet> na, ea;
  if (j.contains("node_alphabet")) na = field<Alphabet>(j, "node_alphabet");
  if (j.contains("edge_alphabet")) ea = field<Alphabet>(j, "edge_alphabet");
  return LabeledGraph(std::move(g), std::move(l), std::move(na), std::move(ea));
}

inline json to_json(const IncidenceGraph& g) {
  json j = graph_to_json(g.graph());
  json roles = json::array();
  for (auto r : g.roles()) roles.push_back(r == Role::white ? "white" : "black");
  j["role"] = roles;
  return j;
}

inline IncidenceGraph incidence_from_json(const json& j) {
  Graph g = graph_from_json(j);
  std::vector<Role> roles;
  for (auto& r : field<std::vector<std::string>>(j, "role")) {
    if (r == "white") roles.push_back(Role::white);
    else if (r == "black") roles.push_back(Role::black);
    else throw input_error("role entries must be \"white\" or \"black\"");
  }
  return IncidenceGraph(std::move(g), std::move(roles));
}

// --- constraint sets and LCL problems ---------------------------------------

inline json to_json(const ConstraintSet& c) {
  json members = json::array();
  for (auto& m : c.members()) members.push_back({{"graph", to_json(m.graph)}, {"center", m.center}});
  json j{{"radius", c.radius()}, {"max_degree", c.max_degree()}};
  if (c.node_alphabet()) j["node_alphabet"] = *c.node_alphabet();
  if (c.edge_alphabet()) j["edge_alphabet"] = *c.edge_alphabet();
  j["members"] = members;
  return j;
}

inline ConstraintSet constraint_set_from_json(const json& j) {
  std::optional<Alphabet> na, ea;
  if (j.contains("node_alphabet")) na = field<Alphabet>(j, "node_alphabet");
  if (j.contains("edge_alphabet")) ea = field<Alphabet>(j, "edge_alphabet");
  std::vector<CenteredGraph> members;
  for (auto& m : field<json>(j, "members")) members.push_back({labeled_graph_from_json(field<json>(m, "graph")), field<NodeId>(m, "center")});
  return ConstraintSet(field<std::size_t>(j, "radius"), field<std::size_t>(j, "max_degree"), na, ea, std::move(members));
}

inline json to_json(const LclProblem& p) {
  return json{{"node_in", p.node_in}, {"edge_in", p.edge_in}, {"node_out", p.node_out},
              {"edge_out", p.edge_out}, {"constraints", to_json(p.constraints)}};
}

inline LclProblem lcl_problem_from_json(const json& j) {
  return LclProblem{field<Alphabet>(j, "node_in"), field<Alphabet>(j, "edge_in"), field<Alphabet>(j, "node_out"),
                    field<Alphabet>(j, "edge_out"), constraint_set_from_json(field<json>(j, "constraints"))};
}

// --- outcomes ---------------------------------------------------------------

inline json to_json(const Outcome& o) {
  json support = json::array();
  for (auto& w : o.support())
    support.push_back({{"p", to_json(w.p)}, {"labels", labeling_to_json(o.input().graph(), w.labeling)}});
  return json{{"graph", to_json(o.input())}, {"support", support}};
}

inline Outcome outcome_from_json(const json& j) {
  LabeledGraph g = labeled_graph_from_json(field<json>(j, "graph"));
  std::vector<WeightedLabeling> support;
  for (auto& s : field<json>(j, "support"))
    support.push_back({labeling_from_json(g.graph(), field<json>(s, "labels")), rational_from_json(field<json>(s, "p"))});
  return Outcome(std::move(g), std::move(support));
}

// --- linear programs ----------------------------------------------------------

inline const char* to_token(LpKind k) {
  switch (k) {
    case LpKind::node_based: return "node";
    case LpKind::edge_based: return "edge";
    case LpKind::node_edge_based: return "node_edge";
  }
  return "?";
}

inline const char* to_token(Relation r) {
  switch (r) {
    case Relation::le: return "<=";
    case Relation::eq: return "=";
    case Relation::ge: return ">=";
  }
  return "?";
}

inline json to_json(const LpPoint& x) {
  json j = json::object();
  for (auto& [k, v] : x) j[k] = to_json(v);
  return j;
}

inline LpPoint point_from_json(const json& j) {
  if (!j.is_object()) throw input_error("LP point must be an object {\"var\": \"num/den\"}");
  LpPoint x;
  for (auto it = j.begin(); it != j.end(); ++it) x[it.key()] = rational_from_json(it.value());
  return x;
}

inline json to_json(const DistLP& p) {
  json vars = json::array(), rows = json::array(), obj = json::object();
  for (std::size_t i = 0; i < p.variables().size(); ++i) {
    const auto& v = p.variables()[i];
    vars.push_back({{"name", v.name},
                    {"owner", {{"kind", v.owner.kind == Owner::Kind::node ? "node" : "edge"}, {"id", v.owner.id}}}});
    obj[v.name] = to_json(p.objective()[i]);
  }
  for (auto& r : p.rows()) {
    json coeffs = json::object();
    for (auto& [i, c] : r.coefficients) coeffs[p.variables()[i].name] = to_json(c);
    rows.push_back({{"coefficients", coeffs}, {"relation", to_token(r.relation)}, {"bound", to_json(r.bound)}, {"owner", r.owner}});
  }
  return json{{"graph", graph_to_json(p.graph())}, {"kind", to_token(p.kind())},
              {"sense", p.sense() == Sense::maximize ? "max" : "min"}, {"variables", vars}, {"rows", rows},
              {"objective", obj}};
}

inline DistLP lp_from_json(const json& j) {
  Graph g = graph_from_json(field<json>(j, "graph"));
  const auto kind = field<std::string>(j, "kind");
  LpKind k = kind == "node" ? LpKind::node_based : kind == "edge" ? LpKind::edge_based : LpKind::node_edge_based;
  if (kind != "node" && kind != "edge" && kind != "node_edge") throw input_error("LP kind must be node, edge or node_edge");
  const auto sense = field<std::string>(j, "sense");
  if (sense != "max" && sense != "min") throw input_error("LP sense must be max or min");
  std::vector<LpVariable> vars;
  std::map<std::string, std::size_t> index;
  for (auto& v : field<json>(j, "variables")) {
    const auto& owner = field<json>(v, "owner");
    const auto ok = field<std::string>(owner, "kind");
    if (ok != "node" && ok != "edge") throw input_error("variable owner kind must be node or edge");
    index[field<std::string>(v, "name")] = vars.size();
    vars.push_back({field<std::string>(v, "name"), {ok == "node" ? Owner::Kind::node : Owner::Kind::edge, field<std::size_t>(owner, "id")}});
  }
  auto lookup = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw input_error("LP names unknown variable '" + name + "'");
    return it->second;
  };
  std::vector<LpRow> rows;
  for (auto& r : field<json>(j, "rows")) {
    LpRow row;
    const auto& coeffs = field<json>(r, "coefficients");
    if (!coeffs.is_object()) throw input_error("row coefficients must be an object");
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) row.coefficients.push_back({lookup(it.key()), rational_from_json(it.value())});
    const auto rel = field<std::string>(r, "relation");
    if (rel == "<=") row.relation = Relation::le;
    else if (rel == "=") row.relation = Relation::eq;
    else if (rel == ">=") row.relation = Relation::ge;
    else throw input_error("row relation must be <=, = or >=");
    row.bound = rational_from_json(field<json>(r, "bound"));
    row.owner = field<NodeId>(r, "owner");
    rows.push_back(std::move(row));
  }
  std::vector<Rational> objective(vars.size(), Rational(0));
  const auto& obj = field<json>(j, "objective");
  if (!obj.is_object()) throw input_error("objective must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) objective[lookup(it.key())] = rational_from_json(it.value());
  return DistLP(std::move(g), k, sense == "max" ? Sense::maximize : Sense::minimize, std::move(vars), std::move(rows),
                std::move(objective));
}

// --- linearizable problems ----------------------------------------------------

inline json to_json(const LinearizableProblem& p) {
  json pairs = json::array(), black = json::array();
  for (auto& [a, b] : p.pairs) pairs.push_back({a, b});
  for (auto& m : p.black) black.push_back(std::vector<std::string>(m.begin(), m.end()));
  return json{{"sigma", p.sigma}, {"first", p.first}, {"last", p.last}, {"pairs", pairs}, {"black", black}, {"rank", p.rank}};
}

inline LinearizableProblem linearizable_from_json(const json& j) {
  LinearizableProblem p;
  p.sigma = field<std::vector<std::string>>(j, "sigma");
  p.first = field<std::set<std::string>>(j, "first");
  p.last = field<std::set<std::string>>(j, "last");
  for (auto& pr : field<std::vector<std::vector<std::string>>>(j, "pairs")) {
    if (pr.size() != 2) throw input_error("pairs must be two-element arrays");
    p.pairs.insert({pr[0], pr[1]});
  }
  for (auto& m : field<std::vector<std::vector<std::string>>>(j, "black")) p.black.emplace_back(m.begin(), m.end());
  p.rank = field_or<std::size_t>(j, "rank", 2);
  p.validate();
  return p;
}

inline EdgeLabels edge_labels_from_json(const json& j) {
  if (j.is_array()) return j.get<EdgeLabels>();
  return field<EdgeLabels>(j, "edge_labels");
}

// --- gadgets --------------------------------------------------------------------

inline json to_json(const GadgetWitness& w) { return json{{"height", w.height}, {"nodes", w.nodes}}; }

inline GadgetWitness gadget_from_json(const json& j) {
  return GadgetWitness{field<std::size_t>(j, "height"), field<std::vector<NodeId>>(j, "nodes")};
}

inline json to_json(const OctopusWitness& w) {
  json ports = json::array();
  for (auto& p : w.ports) ports.push_back({{"i", p.i}, {"j", p.j}, {"height", p.gadget.height}, {"nodes", p.gadget.nodes}});
  return json{{"head", to_json(w.head)}, {"eta", w.eta}, {"ports", ports}};
}

inline OctopusWitness octopus_from_json(const json& j) {
  OctopusWitness w;
  w.head = gadget_from_json(field<json>(j, "head"));
  w.eta = field<std::vector<std::size_t>>(j, "eta");
  for (auto& p : field<json>(j, "ports"))
    w.ports.push_back({field<std::size_t>(p, "i"), field<std::size_t>(p, "j"), gadget_from_json(p)});
  return w;
}

inline json coords_to_json(const std::vector<Coord>& coords) {
  json c = json::array();
  for (auto& x : coords) c.push_back({x.layer, x.pos});
  return c;
}

inline json to_json(const TreeLikeGadget& t) {
  return json{{"height", t.height}, {"graph", graph_to_json(t.graph)}, {"coords", coords_to_json(t.coords)}};
}

inline json to_json(const OctopusGadget& o) {
  return json{{"graph", graph_to_json(o.graph)}, {"witness", to_json(o.witness)}};
}

inline json to_json(const ProperWitness& w) {
  json roles = json::array(), octopi = json::array();
  for (auto r : w.node_roles) roles.push_back(r == NodeRole::intra ? "intra" : "inter");
  for (auto& o : w.octopi) octopi.push_back(to_json(o));
  return json{{"lambda", roles}, {"octopi", octopi}};
}

inline ProperWitness witness_from_json(const json& j) {
  ProperWitness w;
  for (auto& r : field<std::vector<std::string>>(j, "lambda")) {
    if (r == "intra") w.node_roles.push_back(NodeRole::intra);
    else if (r == "inter") w.node_roles.push_back(NodeRole::inter);
    else throw input_error("lambda entries must be \"intra\" or \"inter\"");
  }
  for (auto& o : field<json>(j, "octopi")) w.octopi.push_back(octopus_from_json(o));
  return w;
}

/// Proper instance bundle: the family-labeled graph, the witness, the port
/// map and the source incidence graph it was built from.
inline json to_json(const ProperInstance& pi, const PortMap& f, const IncidenceGraph& source) {
  json j = to_json(pi.family);
  json w = to_json(pi.witness);
  j["lambda"] = w["lambda"];
  j["octopi"] = w["octopi"];
  j["port_height"] = pi.port_height;
  json pm = json::array();
  for (auto& [root, e] : f.edge_of_root) pm.push_back({{"root", root}, {"edge", e}});
  j["port_map"] = pm;
  j["source"] = to_json(source);
  return j;
}

struct ProperBundle {
  ProperInstance instance;
  PortMap ports;
  IncidenceGraph source;
};

inline ProperBundle proper_from_json(const json& j) {
  ProperBundle b;
  b.instance.graph = graph_from_json(j);
  b.instance.witness = witness_from_json(j);
  if (auto err = validate_proper_witness(b.instance.graph, b.instance.witness)) throw input_error("invalid witness: " + *err);
  b.instance.family = family_labeling(b.instance.graph, b.instance.witness);
  b.instance.port_height = field_or<std::size_t>(j, "port_height", 0);
  for (auto& e : field<json>(j, "port_map")) {
    NodeId root = field<NodeId>(e, "root");
    EdgeId edge = field<EdgeId>(e, "edge");
    b.ports.edge_of_root[root] = edge;
    b.ports.root_of_edge[edge] = root;
  }
  b.source = incidence_from_json(field<json>(j, "source"));
  if (b.ports.root_of_edge.size() != b.source.graph().edge_count() || b.ports.edge_of_root.size() != b.ports.root_of_edge.size())
    throw input_error("port map is not a bijection onto the source edges");
  return b;
}

// --- DOT ------------------------------------------------------------------------

// Result documents -----------------------------------------------------------

inline json to_json(const ConstraintVerdict& v) {
  json witness = json::array();
  for (auto& w : v.witness) witness.push_back(w ? json(*w) : json(nullptr));
  return json{{"ok", v.ok()}, {"violators", v.violators}, {"witness", witness}};
}

inline json to_json(const NsVerdict& v) {
  return json{{"status", to_string(v.status)},
              {"isomorphisms_checked", v.isomorphisms_checked},
              {"exhaustive", v.exhaustive},
              {"detail", v.detail}};
}

inline json to_json(const FeasibilityVerdict& v) {
  return json{{"ok", v.ok()}, {"violated_rows", v.violated_rows}, {"negative_variables", v.negative_variables}};
}

inline const char* to_token(LpOptimum::Status s) {
  switch (s) {
    case LpOptimum::Status::optimal: return "optimal";
    case LpOptimum::Status::unbounded: return "unbounded";
    case LpOptimum::Status::infeasible: return "infeasible";
  }
  return "?";
}

inline json to_json(const DistLP& lp, const LpOptimum& o) {
  json out{{"status", to_token(o.status)}};
  if (o.status != LpOptimum::Status::optimal) return out;
  out["value"] = to_json(o.value);
  json sol = json::object();
  for (std::size_t i = 0; i < o.solution.size(); ++i) sol[lp.variables()[i].name] = to_json(o.solution[i]);
  out["solution"] = sol;
  return out;
}

inline json to_json(const Ratio& r) { return r.str(); }

inline json to_json(const LinearizableVerdict& v) {
  return json{{"ok", v.ok()}, {"white_violations", v.white_violations}, {"black_violations", v.black_violations}};
}

inline json to_json(const MatchingVerdict& v) { return json{{"ok", v.ok()}, {"detail", v.describe()}}; }

inline json to_json(const PromiseVerdict& v) { return json{{"ok", v.ok()}, {"violations", v.violations}}; }

inline json to_json(const LiftRun& r) {
  return json{{"labels", r.labels},
              {"matched_inter", r.matched_inter},
              {"unit_locality", r.unit_locality},
              {"stretch", r.stretch},
              {"locality", r.locality},
              {"locality_bound", r.locality_bound}};
}

/// Lift labels from a `lift run` document or a bare array.
inline std::vector<std::string> lift_labels_from_json(const json& j) {
  if (j.is_array()) return j.get<std::vector<std::string>>();
  return field<std::vector<std::string>>(j, "labels");
}

inline json to_json(const GreedyRun& r) {
  return json{{"matched", r.matched}, {"units", r.units}, {"locality", r.locality}};
}

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

/// Node label "id|label"; half-edge labels as tail and head labels. An
/// optional fill colour per node.
inline std::string to_dot(const LabeledGraph& g, const std::vector<std::string>& fill = {}) {
  std::ostringstream out;
  out << "graph G {\n";
  const Graph& G = g.graph();
  for (NodeId v = 0; v < G.node_count(); ++v) {
    out << "  " << v << " [label=\"" << v << "|" << dot_escape(g.node_label(v)) << "\"";
    if (v < fill.size() && !fill[v].empty()) out << ", style=filled, fillcolor=\"" << fill[v] << "\"";
    out << "];\n";
  }
  for (EdgeId e = 0; e < G.edge_count(); ++e) {
    const auto& ed = G.edge(e);
    out << "  " << ed.u << " -- " << ed.v;
    const auto& l = g.labels().half_edges[e];
    if (!l[0].empty() || !l[1].empty())
      out << " [taillabel=\"" << dot_escape(l[0]) << "\", headlabel=\"" << dot_escape(l[1]) << "\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const ProperInstance& pi) {
  std::vector<std::string> fill(pi.graph.node_count());
  for (NodeId v = 0; v < fill.size(); ++v) {
    const auto& l = pi.family.node_label(v);
    fill[v] = l == family::head ? "lightblue" : l == family::port1 ? "palegreen" : l == family::port2 ? "darkseagreen" : "orange";
  }
  return to_dot(pi.family, fill);
}

inline std::string to_dot(const IncidenceGraph& g, const EdgeLabels& labels = {}) {
  Labeling l = Labeling::blank(g.graph());
  for (NodeId v = 0; v < g.graph().node_count(); ++v) l.nodes[v] = g.role(v) == Role::white ? "white" : "black";
  for (EdgeId e = 0; e < labels.size() && e < l.half_edges.size(); ++e) l.half_edges[e] = {labels[e], labels[e]};
  std::vector<std::string> fill;
  for (auto r : g.roles()) fill.push_back(r == Role::white ? "white" : "gray");
  return to_dot(LabeledGraph(g.graph(), std::move(l)), fill);
}

}  // namespace loclab::io
