#pragma once

#include "loclab/outcome.hpp"
#include "loclab/view.hpp"

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace loclab {

struct LocalAlgorithm {
  std::size_t locality = 0;
  std::function<NodeOutput(const View&)> rule;
  std::optional<Alphabet> node_alphabet;
  std::optional<Alphabet> edge_alphabet;
};

/// The rule additionally reads the seeds of every view node, indexed by
/// local view id.
struct RandomizedLocalAlgorithm {
  std::size_t locality = 0;
  std::vector<std::string> seeds;
  std::function<NodeOutput(const View&, std::span<const std::string>)> rule;
  std::optional<Alphabet> node_alphabet;
  std::optional<Alphabet> edge_alphabet;
};

namespace detail {

inline void place_output(const Graph& g, NodeId v, const NodeOutput& o, Labeling& out,
                         const std::optional<Alphabet>& node_alphabet, const std::optional<Alphabet>& edge_alphabet) {
  if (o.ports.size() != g.degree(v))
    throw contract_error("rule produced " + std::to_string(o.ports.size()) + " port labels for node " +
                         std::to_string(v) + " of degree " + std::to_string(g.degree(v)));
  if (node_alphabet && !node_alphabet->contains(o.node))
    throw contract_error("rule produced node label '" + o.node + "' outside the declared alphabet");
  out.nodes[v] = o.node;
  auto inc = g.incident(v);
  for (std::size_t i = 0; i < inc.size(); ++i) {
    if (edge_alphabet && !edge_alphabet->contains(o.ports[i]))
      throw contract_error("rule produced half-edge label '" + o.ports[i] + "' outside the declared alphabet");
    out.half_edges[inc[i]][g.slot(v, inc[i])] = o.ports[i];
  }
}

}  // namespace detail

inline Labeling run_local(const LocalAlgorithm& a, const LabeledGraph& g) {
  Labeling out = Labeling::blank(g.graph());
  for (NodeId v = 0; v < g.graph().node_count(); ++v)
    detail::place_output(g.graph(), v, a.rule(extract_view(g, v, a.locality)), out, a.node_alphabet, a.edge_alphabet);
  return out;
}

constexpr std::size_t kMaxSeedAssignments = std::size_t{1} << 24;

namespace detail {

inline Labeling run_with_seeds(const RandomizedLocalAlgorithm& a, const LabeledGraph& g, const std::vector<View>& views,
                               const std::vector<std::size_t>& seed_index) {
  Labeling out = Labeling::blank(g.graph());
  std::vector<std::string> local_seeds;
  for (NodeId v = 0; v < g.graph().node_count(); ++v) {
    const View& view = views[v];
    local_seeds.clear();
    for (NodeId s : view.source_nodes) local_seeds.push_back(a.seeds.empty() ? std::string() : a.seeds[seed_index[s]]);
    place_output(g.graph(), v, a.rule(view, local_seeds), out, a.node_alphabet, a.edge_alphabet);
  }
  return out;
}

inline Outcome aggregate(const LabeledGraph& g, const std::map<Labeling, std::size_t>& counts, std::size_t total) {
  std::vector<WeightedLabeling> support;
  for (auto& [l, c] : counts) support.push_back({l, Rational(static_cast<long>(c), static_cast<long>(total))});
  return Outcome(g, std::move(support));
}

}  // namespace detail

/// Exact output distribution: every seed assignment is enumerated.
inline Outcome run_rand_local(const RandomizedLocalAlgorithm& a, const LabeledGraph& g) {
  const std::size_t n = g.graph().node_count();
  const std::size_t k = std::max<std::size_t>(a.seeds.size(), 1);
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (total > kMaxSeedAssignments / k) throw input_error("seed space exceeds 2^24 assignments");
    total *= k;
  }
  std::vector<View> views;
  for (NodeId v = 0; v < n; ++v) views.push_back(extract_view(g, v, a.locality));
  std::map<Labeling, std::size_t> counts;
  std::vector<std::size_t> idx(n, 0);
  for (std::size_t step = 0; step < total; ++step) {
    ++counts[detail::run_with_seeds(a, g, views, idx)];
    for (std::size_t i = 0; i < n; ++i) {
      if (++idx[i] < k) break;
      idx[i] = 0;
    }
  }
  return detail::aggregate(g, counts, total);
}

/// Empirical distribution over `samples` uniformly drawn seed assignments.
inline Outcome sample_rand_local(const RandomizedLocalAlgorithm& a, const LabeledGraph& g, std::size_t samples,
                                 std::mt19937_64& rng) {
  if (samples == 0) throw input_error("sampling mode needs at least one sample");
  const std::size_t n = g.graph().node_count();
  const std::size_t k = std::max<std::size_t>(a.seeds.size(), 1);
  std::vector<View> views;
  for (NodeId v = 0; v < n; ++v) views.push_back(extract_view(g, v, a.locality));
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::map<Labeling, std::size_t> counts;
  std::vector<std::size_t> idx(n);
  for (std::size_t s = 0; s < samples; ++s) {
    for (auto& i : idx) i = pick(rng);
    ++counts[detail::run_with_seeds(a, g, views, idx)];
  }
  return detail::aggregate(g, counts, samples);
}

class SlocalContext;

struct SlocalAlgorithm {
  std::size_t locality = 0;
  std::function<void(SlocalContext&)> step;
};

/// What a step may touch: views around the current node, the states stored
/// at nodes of the last queried view, and the current node's output/state.
class SlocalContext {
 public:
  SlocalContext(const LabeledGraph& g, std::size_t locality, NodeId current,
                std::vector<std::optional<std::string>>& states)
      : g_(g), locality_(locality), current_(current), states_(states) {}

  const View& view(std::size_t radius) {
    if (radius > locality_)
      throw contract_error("step queried radius " + std::to_string(radius) + " beyond locality " +
                           std::to_string(locality_));
    observed_ = std::max(observed_, radius);
    view_ = extract_view(g_, current_, radius);
    return *view_;
  }

  /// State stored at a node of the last queried view (local id).
  const std::optional<std::string>& state(NodeId local) const {
    if (!view_) throw contract_error("state read before any view was queried");
    return states_[view_->source_nodes.at(local)];
  }

  NodeId current_local() const {
    if (!view_) throw contract_error("no view queried yet");
    return view_->anchor();
  }

  void set_output(NodeId local, NodeOutput out) {
    if (!view_ || view_->source_nodes.at(local) != current_)
      throw contract_error("step wrote the output of a node other than the current one");
    output_ = std::move(out);
  }

  void set_state(NodeId local, std::string s) {
    if (!view_ || view_->source_nodes.at(local) != current_)
      throw contract_error("step wrote the state of a node other than the current one");
    states_[current_] = std::move(s);
  }

  std::size_t observed() const { return observed_; }
  std::optional<NodeOutput>& output() { return output_; }

 private:
  const LabeledGraph& g_;
  std::size_t locality_;
  NodeId current_;
  std::vector<std::optional<std::string>>& states_;
  std::optional<View> view_;
  std::optional<NodeOutput> output_;
  std::size_t observed_ = 0;
};

struct SlocalRun {
  Labeling labeling;
  std::size_t locality = 0;
  std::vector<std::optional<std::string>> states;
};

inline SlocalRun run_slocal(const SlocalAlgorithm& a, const LabeledGraph& g, std::span<const NodeId> order) {
  const std::size_t n = g.graph().node_count();
  std::vector<bool> seen(n, false);
  if (order.size() != n) throw input_error("processing order is not a permutation of the nodes");
  for (NodeId v : order) {
    if (v >= n || seen[v]) throw input_error("processing order is not a permutation of the nodes");
    seen[v] = true;
  }
  SlocalRun run{Labeling::blank(g.graph()), 0, std::vector<std::optional<std::string>>(n)};
  for (NodeId v : order) {
    SlocalContext ctx(g, a.locality, v, run.states);
    a.step(ctx);
    if (!ctx.output()) throw contract_error("step produced no output for node " + std::to_string(v));
    detail::place_output(g.graph(), v, *ctx.output(), run.labeling, std::nullopt, std::nullopt);
    run.locality = std::max(run.locality, ctx.observed());
  }
  return run;
}

}  // namespace loclab
