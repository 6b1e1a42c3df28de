#pragma once

#include "loclab/graph.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace loclab {

/// Output of one node: its label and its port labels in adjacency order.
struct NodeOutput {
  std::string node;
  std::vector<std::string> ports;
  auto operator<=>(const NodeOutput&) const = default;
};

struct WeightedLabeling {
  Labeling labeling;
  Rational p;
  bool operator==(const WeightedLabeling&) const = default;
};

/// A finite distribution over output labelings of one input network.
class Outcome {
 public:
  Outcome() = default;

  Outcome(LabeledGraph input, std::vector<WeightedLabeling> support)
      : input_(std::move(input)), support_(std::move(support)) {
    if (support_.empty()) throw input_error("outcome support is empty");
    Rational total = 0;
    for (auto& w : support_) {
      if (w.p < 0) throw input_error("negative probability in outcome");
      if (!w.labeling.fits(input_.graph())) throw input_error("support labeling does not fit the input graph");
      total += w.p;
    }
    if (total != 1) throw input_error("outcome probabilities sum to " + to_string(total) + ", not 1");
  }

  static Outcome deterministic(LabeledGraph input, Labeling labeling) {
    std::vector<WeightedLabeling> s{{std::move(labeling), Rational(1)}};
    return Outcome(std::move(input), std::move(s));
  }

  static Outcome uniform(LabeledGraph input, std::vector<Labeling> labelings) {
    if (labelings.empty()) throw input_error("uniform outcome over no labelings");
    Rational p(1, static_cast<long>(labelings.size()));
    std::vector<WeightedLabeling> s;
    for (auto& l : labelings) s.push_back({std::move(l), p});
    return Outcome(std::move(input), std::move(s));
  }

  const LabeledGraph& input() const { return input_; }
  const std::vector<WeightedLabeling>& support() const { return support_; }

 private:
  LabeledGraph input_;
  std::vector<WeightedLabeling> support_;
};

using PartialLabeling = std::vector<NodeOutput>;  // aligned with a scope

inline NodeOutput output_at(const Graph& g, const Labeling& l, NodeId v) {
  NodeOutput o{l.nodes.at(v), {}};
  for (EdgeId e : g.incident(v)) o.ports.push_back(l.half_edge(g, v, e));
  return o;
}

/// Marginal of an outcome on a node set and the half-edges at those nodes.
struct RestrictedOutcome {
  LabeledGraph input;
  std::vector<NodeId> scope;  // sorted, unique
  std::vector<std::pair<PartialLabeling, Rational>> support;  // sorted by labeling
};

namespace detail {
inline std::vector<NodeId> normalize_scope(const Graph& g, std::span<const NodeId> s) {
  std::vector<NodeId> scope(s.begin(), s.end());
  for (NodeId v : scope) g.check_node(v);
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  return scope;
}
}  // namespace detail

inline RestrictedOutcome restrict(const Outcome& o, std::span<const NodeId> s) {
  const Graph& g = o.input().graph();
  RestrictedOutcome r{o.input(), detail::normalize_scope(g, s), {}};
  std::map<PartialLabeling, Rational> merged;
  for (auto& w : o.support()) {
    PartialLabeling part;
    for (NodeId v : r.scope) part.push_back(output_at(g, w.labeling, v));
    merged[std::move(part)] += w.p;
  }
  for (auto& [k, p] : merged) r.support.push_back({k, p});
  return r;
}

inline RestrictedOutcome restrict(const RestrictedOutcome& o, std::span<const NodeId> s) {
  RestrictedOutcome r{o.input, detail::normalize_scope(o.input.graph(), s), {}};
  std::vector<std::size_t> pos;
  for (NodeId v : r.scope) {
    auto it = std::lower_bound(o.scope.begin(), o.scope.end(), v);
    if (it == o.scope.end() || *it != v) throw input_error("restriction scope is not a subset of the current scope");
    pos.push_back(static_cast<std::size_t>(it - o.scope.begin()));
  }
  std::map<PartialLabeling, Rational> merged;
  for (auto& [part, p] : o.support) {
    PartialLabeling sub;
    for (std::size_t i : pos) sub.push_back(part[i]);
    merged[std::move(sub)] += p;
  }
  for (auto& [k, p] : merged) r.support.push_back({k, p});
  return r;
}

inline Rational success_probability(const Outcome& o, const std::function<bool(const Labeling&)>& verifier) {
  Rational total = 0;
  for (auto& w : o.support())
    if (verifier(w.labeling)) total += w.p;
  return total;
}

using LabelValue = std::function<Rational(const std::string&)>;

struct Expectation {
  std::vector<Rational> nodes;
  std::vector<std::array<Rational, 2>> half_edges;
  bool operator==(const Expectation&) const = default;
};

inline Expectation expectation(const Outcome& o, const LabelValue& value) {
  const Graph& g = o.input().graph();
  Expectation ex{std::vector<Rational>(g.node_count()), std::vector<std::array<Rational, 2>>(g.edge_count())};
  for (auto& w : o.support()) {
    for (NodeId v = 0; v < g.node_count(); ++v) ex.nodes[v] += w.p * value(w.labeling.nodes[v]);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      for (std::size_t s = 0; s < 2; ++s) ex.half_edges[e][s] += w.p * value(w.labeling.half_edges[e][s]);
  }
  return ex;
}

/// Expected value of one node label and its ports.
struct LocalExpectation {
  Rational node;
  std::vector<Rational> ports;
  bool operator==(const LocalExpectation&) const = default;
};

inline std::vector<LocalExpectation> expectation(const RestrictedOutcome& o, const LabelValue& value) {
  std::vector<LocalExpectation> out;
  for (NodeId v : o.scope) out.push_back({Rational(0), std::vector<Rational>(o.input.graph().degree(v))});
  for (auto& [part, p] : o.support)
    for (std::size_t i = 0; i < part.size(); ++i) {
      out[i].node += p * value(part[i].node);
      for (std::size_t j = 0; j < part[i].ports.size(); ++j) out[i].ports[j] += p * value(part[i].ports[j]);
    }
  return out;
}

inline Rational rational_value(const std::string& label) { return parse_rational(label); }

}  // namespace loclab
