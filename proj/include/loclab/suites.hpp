#pragma once

#include "loclab/algorithms.hpp"
#include "loclab/corpus.hpp"
#include "loclab/io.hpp"
#include "loclab/lift.hpp"
#include "loclab/lp.hpp"
#include "loclab/nonsignaling.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace loclab::suites {

inline constexpr const char* kVersion = "loclab 1.0.0";

struct CheckResult {
  CheckResult() = default;
  CheckResult(int check_id, std::string check_name) : id(check_id), name(std::move(check_name)) {}

  int id = 0;
  std::string name;
  bool passed = true;
  std::vector<std::pair<std::string, std::string>> quantities;
  std::vector<std::string> failures;  // first few, see failure_count
  std::size_t failure_count = 0;
  double seconds = 0;

  void fail(std::string what) {
    passed = false;
    if (failures.size() < 10) failures.push_back(std::move(what));
    ++failure_count;
  }
  void quantity(std::string key, std::string value) { quantities.push_back({std::move(key), std::move(value)}); }
  void quantity(std::string key, std::size_t value) { quantity(std::move(key), std::to_string(value)); }
};

/// Greedy localities observed by the matching and lift checks.
struct LocalityLog {
  std::size_t runs = 0;
  std::size_t skipped_empty = 0;  // runs with no processing unit
  std::map<std::size_t, std::size_t> histogram;

  void record(std::size_t units, std::size_t locality) {
    if (units == 0) {
      ++skipped_empty;
      return;
    }
    ++runs;
    ++histogram[locality];
  }
};

inline corpus::Rng rng_for(std::uint64_t seed, std::uint64_t salt) {
  return corpus::Rng(seed * 0x9E3779B97F4A7C15ULL + salt);
}

inline std::string describe_graph(const Graph& g) {
  std::string s = "n=" + std::to_string(g.node_count()) + " edges=[";
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    s += (e ? "," : "") + std::to_string(g.edge(e).u) + "-" + std::to_string(g.edge(e).v);
  return s + "]";
}

// ---------------------------------------------------------------------------

namespace detail {

inline LpPoint random_fractional_point(corpus::Rng& rng, const Graph& g) {
  const std::size_t D = 6;
  LpPoint x;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::size_t d = std::max(g.degree(g.edge(e).u), g.degree(g.edge(e).v));
    x[edge_variable(e)] = Rational(static_cast<long>(corpus::uniform_index(rng, 0, D)), static_cast<long>(D * d));
  }
  return x;
}

/// True when every support ratio is finite and the mixture ratio exceeds
/// the largest of them.
inline bool ratio_exceeds(const Ratio& mixture, const std::vector<Ratio>& support) {
  Rational worst = 0;
  for (auto& r : support) {
    if (r.kind != Ratio::Kind::finite) return false;
    worst = std::max(worst, r.value);
  }
  return !mixture.at_most(worst);
}

}  // namespace detail

inline CheckResult dequantization_soundness(std::uint64_t seed) {
  CheckResult r{1, "dequantization soundness"};
  auto rng = rng_for(seed, 1);
  std::size_t graphs = 0, mixtures = 0;
  Rational worst_ratio = 0;
  for (const Graph& g : corpus::graphs_up_to(6, true)) {
    ++graphs;
    const auto lp = build_fractional_matching_lp(g);
    const auto opt = exact_opt(lp);
    const auto matchings = all_maximal_matchings(g);
    for (std::size_t t = 0; t < 200; ++t) {
      const std::size_t k = corpus::uniform_index(rng, 1, 4);
      std::vector<LpPoint> points;
      std::vector<std::size_t> weights;
      std::size_t total = 0;
      for (std::size_t i = 0; i < k; ++i) {
        if (corpus::coin(rng, 1, 2))
          points.push_back(maximal_matching_to_fractional(g, matchings[corpus::uniform_index(rng, 0, matchings.size() - 1)]));
        else
          points.push_back(detail::random_fractional_point(rng, g));
        weights.push_back(corpus::uniform_index(rng, 1, 9));
        total += weights.back();
      }
      std::vector<WeightedLabeling> support;
      Rational expected = 0;
      std::vector<Ratio> ratios;
      for (std::size_t i = 0; i < k; ++i) {
        Rational p(static_cast<long>(weights[i]), static_cast<long>(total));
        support.push_back({labeling_from_point(lp, points[i]), p});
        expected += p * objective_value(lp, points[i]);
        ratios.push_back(approximation_ratio(lp, points[i], opt));
      }
      Outcome o(LabeledGraph(g), std::move(support));
      auto xhat = dequantize(lp, o);
      ++mixtures;
      if (!check_feasible(lp, xhat).ok()) r.fail("infeasible expectation on " + describe_graph(g));
      if (objective_value(lp, xhat) != expected) r.fail("objective mismatch on " + describe_graph(g));
      auto ratio = approximation_ratio(lp, xhat, opt);
      if (detail::ratio_exceeds(ratio, ratios)) r.fail("ratio " + ratio.str() + " beyond support on " + describe_graph(g));
      if (ratio.kind == Ratio::Kind::finite) worst_ratio = std::max(worst_ratio, ratio.value);
    }
  }
  r.quantity("graphs", graphs);
  r.quantity("mixtures", mixtures);
  r.quantity("largest_mixture_ratio", fraction_string(worst_ratio));
  return r;
}

// ---------------------------------------------------------------------------

inline Outcome uniform_maximal_matchings(const LabeledGraph& g) {
  const auto lp = build_fractional_matching_lp(g.graph());
  std::vector<Labeling> support;
  for (auto& m : all_maximal_matchings(g.graph()))
    support.push_back(labeling_from_point(lp, maximal_matching_to_fractional(g.graph(), m)));
  return Outcome::uniform(g, std::move(support));
}

inline Graph cycle(std::size_t m) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < m; ++i) e.push_back({i, (i + 1) % m});
  return Graph(m, std::move(e));
}

inline CheckResult local_expectation_equivalence(std::uint64_t) {
  CheckResult r{2, "local-expectation equivalence"};
  std::size_t graphs = 0, nodes = 0;
  for (const Graph& g : corpus::graphs_up_to(6, true)) {
    ++graphs;
    LabeledGraph lg(g);
    const auto lp = build_fractional_matching_lp(g);
    auto alg = local_expectation_algorithm(uniform_maximal_matchings, 1, whole_graph_completion(lg));
    auto out = run_local(alg, lg);
    nodes += g.node_count();
    if (point_from_labeling(lp, out) != dequantize(lp, uniform_maximal_matchings(lg)))
      r.fail("local expectation differs from the dequantized oracle on " + describe_graph(g));
  }
  std::size_t cycles = 0;
  for (std::size_t t : {1, 2}) {
    OutcomeOracle oracle = [t](const LabeledGraph& g) { return run_rand_local(algorithms::disagreement_edges(t), g); };
    for (std::size_t m = 3; m <= 8; ++m) {
      ++cycles;
      LabeledGraph c(cycle(m));
      auto near = run_local(local_expectation_algorithm(oracle, t, cycle_completion(0)), c);
      auto far = run_local(local_expectation_algorithm(oracle, t, cycle_completion(3)), c);
      if (near != far) r.fail("completions disagree on C" + std::to_string(m) + " at radius " + std::to_string(t));
      const auto lp = build_fractional_matching_lp(c.graph());
      if (point_from_labeling(lp, near) != dequantize(lp, oracle(c)))
        r.fail("cycle output differs from the dequantized oracle on C" + std::to_string(m));
    }
  }
  r.quantity("graphs", graphs);
  r.quantity("nodes_compared", nodes);
  r.quantity("cycle_runs", cycles);
  return r;
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::string view_key(const View& v) {
  std::vector<std::string> parts;
  const Graph& g = v.base.graph();
  for (NodeId u = 0; u < g.node_count(); ++u)
    parts.push_back(std::to_string(v.depth[u]) + "/" + std::to_string(g.degree(u)) + "/" + std::to_string(v.ports[u].size()));
  std::sort(parts.begin(), parts.end());
  std::string key = std::to_string(g.node_count()) + ":" + std::to_string(g.edge_count());
  for (auto& p : parts) key += " " + p;
  return key;
}

}  // namespace detail

inline CheckResult non_signaling_of_simulators(std::uint64_t) {
  CheckResult r{3, "non-signaling of simulators"};
  const auto graphs = corpus::graphs_up_to(7, false);
  std::size_t pairs = 0, isos = 0;
  for (std::size_t t : {0, 1, 2}) {
    const auto alg = algorithms::seed_census(t);
    std::vector<LabeledGraph> inputs;
    std::vector<Outcome> outcomes;
    for (auto& g : graphs) {
      inputs.emplace_back(g);
      outcomes.push_back(run_rand_local(alg, inputs.back()));
    }
    struct Rep {
      std::size_t graph;
      NodeId node;
      View view;
    };
    std::map<std::string, std::vector<Rep>> classes;
    std::size_t class_count = 0;
    for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
      for (NodeId v = 0; v < graphs[gi].node_count(); ++v) {
        View view = extract_view(inputs[gi], v, t);
        auto& bucket = classes[detail::view_key(view)];
        const Rep* rep = nullptr;
        for (auto& c : bucket)
          if (views_isomorphic(c.view, view)) {
            rep = &c;
            break;
          }
        if (!rep) {
          bucket.push_back({gi, v, std::move(view)});
          ++class_count;
          continue;
        }
        const NodeId a[] = {rep->node}, b[] = {v};
        auto verdict = verify_non_signaling(outcomes[rep->graph], outcomes[gi], a, b, t);
        ++pairs;
        isos += verdict.isomorphisms_checked;
        if (!verdict.ok() || !verdict.exhaustive)
          r.fail(std::string(to_string(verdict.status)) + " at radius " + std::to_string(t) + " between node " +
                 std::to_string(rep->node) + " of " + describe_graph(graphs[rep->graph]) + " and node " +
                 std::to_string(v) + " of " + describe_graph(graphs[gi]));
      }
    }
    r.quantity("view_classes_T" + std::to_string(t), class_count);
  }
  // Planted signaling outcome: every node outputs |V| mod 2.
  auto parity = [](std::size_t m) {
    LabeledGraph c(cycle(m));
    Labeling l = Labeling::blank(c.graph());
    for (auto& s : l.nodes) s = std::to_string(m % 2);
    return Outcome::deterministic(c, l);
  };
  const NodeId a[] = {0};
  auto planted = verify_non_signaling(parity(4), parity(5), a, a, 1);
  if (planted.status != NsStatus::violation) r.fail("planted parity outcome was not rejected");
  r.quantity("graphs", graphs.size());
  r.quantity("pairs_checked", pairs);
  r.quantity("isomorphisms_checked", isos);
  r.quantity("planted_verdict", std::string(to_string(planted.status)));
  return r;
}

// ---------------------------------------------------------------------------

/// Every labeling accepted by verify_linearizable. Assignments are pruned
/// as soon as a white node's string is complete and rejected, which never
/// discards an accepted labeling.
inline std::vector<EdgeLabels> accepted_labelings(const LinearizableProblem& p, const IncidenceGraph& g) {
  const Graph& G = g.graph();
  std::vector<EdgeId> order;
  std::vector<std::optional<NodeId>> completes(G.edge_count());
  for (NodeId w : g.whites()) {
    auto inc = G.incident(w);
    order.insert(order.end(), inc.begin(), inc.end());
    if (!inc.empty()) completes[inc.back()] = w;
  }
  std::vector<EdgeLabels> out;
  EdgeLabels lab(G.edge_count(), p.sigma.front());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == order.size()) {
      if (verify_linearizable(p, g, lab).ok()) out.push_back(lab);
      return;
    }
    for (auto& s : p.sigma) {
      lab[order[i]] = s;
      if (auto w = completes[order[i]]) {
        std::vector<std::string> str;
        for (EdgeId e : G.incident(*w)) str.push_back(lab[e]);
        if (!white_string_ok(p, str)) continue;
      }
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline std::vector<EdgeId> blacks_to_edges(const Graph& h, std::span<const NodeId> blacks) {
  std::vector<EdgeId> out;
  for (NodeId b : blacks) out.push_back(b - h.node_count());
  return out;
}

inline CheckResult matching_encoding_round_trip(std::uint64_t) {
  CheckResult r{4, "matching encoding round trip"};
  const auto p = matching_problem();
  std::size_t graphs = 0, matchings = 0;
  for (const Graph& h : corpus::graphs_up_to(6, false)) {
    ++graphs;
    auto ig = incidence_graph(h);
    for (auto& m : all_maximal_matchings(h)) {
      ++matchings;
      std::vector<NodeId> blacks;
      for (EdgeId e : m) blacks.push_back(h.node_count() + e);
      auto lab = encode_matching(ig, blacks);
      if (!verify_linearizable(p, ig, lab).ok()) r.fail("encoding rejected on " + describe_graph(h));
      if (decode_to_matching(ig, lab) != blacks) r.fail("decode(encode(M)) differs on " + describe_graph(h));
    }
  }
  std::size_t small = 0, accepted = 0;
  for (const Graph& h : corpus::graphs_up_to(4, false)) {
    ++small;
    auto ig = incidence_graph(h);
    for (auto& lab : accepted_labelings(p, ig)) {
      ++accepted;
      try {
        auto m = decode_to_matching(ig, lab);
        if (!is_maximal_matching(h, blacks_to_edges(h, m)).ok()) r.fail("decoded set is not maximal on " + describe_graph(h));
      } catch (const std::exception& e) {
        r.fail(std::string("decode failed on ") + describe_graph(h) + ": " + e.what());
      }
    }
  }
  r.quantity("graphs", graphs);
  r.quantity("maximal_matchings", matchings);
  r.quantity("small_graphs", small);
  r.quantity("accepted_labelings", accepted);
  return r;
}

// ---------------------------------------------------------------------------

inline std::size_t maximum_matching_size(const Graph& g) {
  std::size_t best = 0;
  for (auto& m : all_maximal_matchings(g)) best = std::max(best, m.size());
  return best;
}

inline CheckResult factor_three_bound(std::uint64_t seed, LocalityLog* log = nullptr) {
  CheckResult r{5, "factor-3 bound"};
  auto rng = rng_for(seed, 5);
  std::size_t runs = 0, bipartite = 0;
  Rational worst = 0;
  for (std::size_t i = 0; i < 500; ++i) {
    const Graph g = corpus::random_graph(rng, corpus::uniform_index(rng, 1, 8));
    const auto lp = build_fractional_matching_lp(g);
    const auto opt = exact_opt(lp);
    for (std::size_t t = 0; t < 20; ++t) {
      auto order = corpus::random_permutation(rng, g.node_count());
      auto run = run_greedy_matching(g, order);
      if (log) log->record(run.units, run.locality);
      ++runs;
      auto ratio = approximation_ratio(lp, maximal_matching_to_fractional(g, run.matched), opt);
      if (!ratio.at_most(3)) r.fail("ratio " + ratio.str() + " on " + describe_graph(g));
      else worst = std::max(worst, ratio.value);
    }
    if (corpus::is_bipartite(g)) {
      ++bipartite;
      if (opt.value != Rational(static_cast<long>(maximum_matching_size(g))))
        r.fail("LP optimum differs from the maximum matching on bipartite " + describe_graph(g));
    }
  }
  r.quantity("instances", 500);
  r.quantity("greedy_runs", runs);
  r.quantity("bipartite_instances", bipartite);
  r.quantity("largest_ratio", fraction_string(worst));
  return r;
}

// ---------------------------------------------------------------------------

/// Up to `count` distinct single-edge mutations (one deletion or one
/// addition each), all of them when fewer exist.
inline std::vector<Graph> single_edge_mutations(const Graph& g, std::size_t count, corpus::Rng& rng) {
  const std::size_t n = g.node_count();
  std::vector<Graph> out;
  auto with = [&](std::optional<EdgeId> drop, std::optional<Edge> add) {
    std::vector<Edge> edges;
    for (EdgeId e = 0; e < g.edge_count(); ++e)
      if (e != drop) edges.push_back(g.edge(e));
    if (add) edges.push_back(*add);
    return Graph(n, std::move(edges));
  };
  const std::size_t pairs = n * (n - (n > 0)) / 2;
  if (pairs <= count) {
    for (NodeId a = 0; a < n; ++a)
      for (NodeId b = a + 1; b < n; ++b) {
        auto e = g.find_edge(a, b);
        out.push_back(e ? with(*e, std::nullopt) : with(std::nullopt, Edge{a, b}));
      }
    return out;
  }
  std::set<std::pair<NodeId, NodeId>> used;
  while (out.size() < count) {
    NodeId a, b;
    if (g.edge_count() > 0 && corpus::coin(rng, 1, 2)) {
      const Edge& e = g.edge(corpus::uniform_index(rng, 0, g.edge_count() - 1));
      a = e.u;
      b = e.v;
    } else {
      a = corpus::uniform_index(rng, 0, n - 1);
      b = corpus::uniform_index(rng, 0, n - 1);
    }
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    if (!used.insert({a, b}).second) continue;
    auto e = g.find_edge(a, b);
    out.push_back(e ? with(*e, std::nullopt) : with(std::nullopt, Edge{a, b}));
  }
  return out;
}

inline bool size_law_holds(std::size_t n, std::size_t big_n) { return n <= big_n && big_n <= n * n * n; }

inline CheckResult gadget_laws(std::uint64_t seed) {
  CheckResult r{6, "gadget laws"};
  auto rng = rng_for(seed, 6);
  std::size_t mutations = 0, rejected = 0;
  for (std::size_t h = 1; h <= 5; ++h) {
    auto t = gen_tree_like(h);
    auto coords = recognize_tree_like(t.graph);
    if (!coords) r.fail("tree-like gadget of height " + std::to_string(h) + " not recognized");
    for (auto& m : single_edge_mutations(t.graph, 50, rng)) {
      ++mutations;
      if (recognize_tree_like(m)) r.fail("mutated tree-like gadget of height " + std::to_string(h) + " accepted");
      else ++rejected;
    }
  }
  std::size_t octopi = 0;
  for (std::size_t x = 1; x <= 3; ++x) {
    const std::size_t leaves = std::size_t{1} << (x - 1);
    for (std::size_t mask = 0; mask < (std::size_t{1} << leaves); ++mask) {
      std::vector<std::size_t> eta;
      for (std::size_t i = 0; i < leaves; ++i) eta.push_back(mask >> i & 1 ? 2 : 1);
      std::vector<std::size_t> heights;
      for (std::size_t k = 0; k < port_index_set(eta).size(); ++k) heights.push_back(corpus::uniform_index(rng, 1, 3));
      auto o = gen_octopus(x, eta, heights);
      ++octopi;
      auto w = recognize_octopus(o.graph);
      if (!w) r.fail("octopus x=" + std::to_string(x) + " mask=" + std::to_string(mask) + " not recognized");
      for (auto& m : single_edge_mutations(o.graph, 50, rng)) {
        ++mutations;
        if (recognize_octopus(m)) r.fail("mutated octopus x=" + std::to_string(x) + " mask=" + std::to_string(mask) + " accepted");
        else ++rejected;
      }
    }
  }
  std::size_t instances = 0;
  std::size_t largest = 0;
  const RecognizeOptions generated{.allow_inter = true, .generator_rank = 2};
  for (std::size_t i = 0; i < 50; ++i) {
    const Graph h = corpus::random_graph(rng, corpus::uniform_index(rng, 2, 6));
    auto ig = incidence_graph(h);
    auto [pi, f] = gen_proper_instance(ig);
    ++instances;
    largest = std::max(largest, pi.graph.node_count());
    const std::size_t n = ig.graph().node_count();
    if (!size_law_holds(n, pi.graph.node_count()))
      r.fail("size law fails: n=" + std::to_string(n) + " N=" + std::to_string(pi.graph.node_count()));
    if (!recognize_proper_instance(pi.graph, generated)) r.fail("proper instance of " + describe_graph(h) + " not recognized");
    if (!check_constraints(pi.family, proper_instance_constraints()).ok())
      r.fail("family labeling of " + describe_graph(h) + " breaks the constraint set");
    for (auto& m : single_edge_mutations(pi.graph, 50, rng)) {
      ++mutations;
      if (recognize_proper_instance(m, generated)) r.fail("mutated proper instance of " + describe_graph(h) + " accepted");
      else ++rejected;
    }
  }
  r.quantity("tree_like_heights", 5);
  r.quantity("octopi", octopi);
  r.quantity("proper_instances", instances);
  r.quantity("largest_instance", largest);
  r.quantity("mutations_rejected", rejected);
  r.quantity("mutations", mutations);
  return r;
}

// ---------------------------------------------------------------------------

/// Copy of `labels` with every node of one port gadget relabeled.
inline std::vector<std::string> relabel_port(const ProperInstance& pi, std::vector<std::string> labels, std::size_t octopus,
                                             std::size_t port, const std::string& to) {
  for (NodeId v : pi.witness.octopi[octopus].ports[port].gadget.nodes) labels[v] = to;
  return labels;
}

inline CheckResult lift_end_to_end(std::uint64_t, LocalityLog* log = nullptr) {
  CheckResult r{7, "lift end-to-end"};
  const auto p = matching_problem();
  std::size_t instances = 0, runs = 0, mixtures = 0;
  bool locality_within_bound = true;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const Graph& h : corpus::graphs_up_to_iso(n)) {
      ++instances;
      auto ig = incidence_graph(h);
      auto [pi, f] = gen_proper_instance(ig);
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<Labeling> outputs;
      do {
        ++runs;
        auto run = lift_slocal_algorithm(pi, order);
        if (log) log->record(h.edge_count(), run.unit_locality);
        if (run.locality > run.locality_bound) locality_within_bound = false;
        auto verdict = verify_pi_promise(pi, run.labels, p);
        if (!verdict.ok()) r.fail("promise check failed on " + describe_graph(h) + ": " + verdict.violations.front());
        auto labeling = node_output(pi.graph, run.labels);
        auto back = pullback_outcome(Outcome::deterministic(pi.family, labeling), f, ig);
        auto lab = edge_labels_of(back.support()[0].labeling);
        if (!verify_linearizable(p, ig, lab).ok()) {
          r.fail("pullback rejected on " + describe_graph(h));
          continue;
        }
        auto m = decode_to_matching(ig, lab);
        if (!is_maximal_matching(h, blacks_to_edges(h, m)).ok()) r.fail("decoded matching not maximal on " + describe_graph(h));
        if (outputs.size() < 3 && std::find(outputs.begin(), outputs.end(), labeling) == outputs.end())
          outputs.push_back(labeling);
      } while (std::next_permutation(order.begin(), order.end()));
      // Mixtures of valid outputs and port-uniform corruptions. Relabeling
      // an attached port changes exactly the edge it carries, so the passing
      // mass is unchanged; an unattached port is invisible to the pullback,
      // which can then only gain mass.
      std::optional<std::pair<std::size_t, std::size_t>> attached, loose;
      for (std::size_t o = 0; o < pi.witness.octopi.size(); ++o)
        for (std::size_t q = 0; q < pi.witness.octopi[o].ports.size(); ++q) {
          auto& slot = f.edge_of_root.count(pi.witness.octopi[o].ports[q].gadget.root()) ? attached : loose;
          if (!slot) slot = {o, q};
        }
      auto corrupt = [&](std::pair<std::size_t, std::size_t> at, const std::string& to) {
        return node_output(pi.graph, relabel_port(pi, outputs[0].nodes, at.first, at.second, to));
      };
      auto compare = [&](std::vector<Labeling> entries, bool equal) {
        long total = 0;
        std::vector<WeightedLabeling> support;
        for (std::size_t i = 0; i < entries.size(); ++i) total += static_cast<long>(i + 1);
        for (std::size_t i = 0; i < entries.size(); ++i) support.push_back({entries[i], Rational(static_cast<long>(i + 1), total)});
        Outcome mix(pi.family, std::move(support));
        auto before = success_probability(mix, [&](const Labeling& l) { return verify_pi_promise(pi, l.nodes, p).ok(); });
        auto after = success_probability(pullback_outcome(mix, f, ig),
                                         [&](const Labeling& l) { return verify_linearizable(p, ig, edge_labels_of(l)).ok(); });
        ++mixtures;
        if (equal ? before != after : after < before)
          r.fail("success probability " + fraction_string(before) + " became " + fraction_string(after) + " on " + describe_graph(h));
      };
      auto entries = outputs;
      if (attached) {
        entries.push_back(corrupt(*attached, labels::A));
        entries.push_back(corrupt(*attached, labels::Ptr));
      }
      compare(entries, true);
      if (loose) {
        entries.push_back(corrupt(*loose, labels::M));
        compare(entries, false);
      }
    }
  }
  if (!locality_within_bound) r.fail("lifted locality exceeded 2(k + x)");
  r.quantity("instances", instances);
  r.quantity("orders", runs);
  r.quantity("mixtures", mixtures);
  return r;
}

inline CheckResult greedy_locality(const LocalityLog& log) {
  CheckResult r{8, "SLOCAL greedy locality"};
  for (auto& [loc, count] : log.histogram)
    if (loc != 1) r.fail(std::to_string(count) + " runs observed locality " + std::to_string(loc));
  if (log.runs == 0) r.fail("no greedy runs recorded");
  r.quantity("runs", log.runs);
  r.quantity("runs_without_units", log.skipped_empty);
  r.quantity("locality_one_runs", log.histogram.count(1) ? log.histogram.at(1) : 0);
  return r;
}

// ---------------------------------------------------------------------------

struct RunReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"dequantize", "local-expectation", "non-signaling", "encoding",
                                              "factor3",    "gadgets",           "lift",          "locality",
                                              "all"};
  return names;
}

inline RunReport run_checks(const std::string& suite, std::uint64_t seed) {
  if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
    throw input_error("unknown suite '" + suite + "'");
  RunReport rep{suite, seed, {}};
  auto timed = [&](auto&& f) {
    auto start = std::chrono::steady_clock::now();
    CheckResult c = f();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.checks.push_back(std::move(c));
  };
  const bool all = suite == "all";
  LocalityLog log;
  if (all || suite == "dequantize") timed([&] { return dequantization_soundness(seed); });
  if (all || suite == "local-expectation") timed([&] { return local_expectation_equivalence(seed); });
  if (all || suite == "non-signaling") timed([&] { return non_signaling_of_simulators(seed); });
  if (all || suite == "encoding") timed([&] { return matching_encoding_round_trip(seed); });
  if (all || suite == "factor3" || suite == "locality") timed([&] { return factor_three_bound(seed, &log); });
  if (all || suite == "gadgets") timed([&] { return gadget_laws(seed); });
  if (all || suite == "lift" || suite == "locality") timed([&] { return lift_end_to_end(seed, &log); });
  if (all || suite == "locality") timed([&] { return greedy_locality(log); });
  return rep;
}

inline io::json report_json(const RunReport& rep) {
  io::json checks = io::json::array();
  std::size_t failures = 0;
  for (auto& c : rep.checks) {
    io::json q = io::json::object();
    for (auto& [k, v] : c.quantities) q[k] = v;
    checks.push_back({{"id", c.id},
                      {"name", c.name},
                      {"status", c.passed ? "pass" : "fail"},
                      {"quantities", q},
                      {"failure_count", c.failure_count},
                      {"failures", c.failures}});
    failures += c.passed ? 0 : 1;
  }
  return io::json{{"suite", rep.suite},
                  {"environment", {{"version", kVersion}, {"seed", rep.seed}}},
                  {"checks", checks},
                  {"failed_checks", failures}};
}

inline std::string report_text(const RunReport& rep) {
  std::string s = "suite " + rep.suite + " (" + kVersion + ", seed " + std::to_string(rep.seed) + ")\n";
  std::size_t failures = 0;
  for (auto& c : rep.checks) {
    s += (c.passed ? "PASS " : "FAIL ") + std::to_string(c.id) + " " + c.name + "\n";
    for (auto& [k, v] : c.quantities) s += "  " + k + " = " + v + "\n";
    if (!c.passed) s += "  failure_count = " + std::to_string(c.failure_count) + "\n";
    for (auto& f : c.failures) s += "  failure: " + f + "\n";
    failures += c.passed ? 0 : 1;
  }
  s += "failed_checks = " + std::to_string(failures) + "\n";
  return s;
}

inline io::json timings_json(const RunReport& rep) {
  io::json t = io::json::object();
  for (auto& c : rep.checks) t[std::to_string(c.id) + " " + c.name] = c.seconds;
  return t;
}

/// Runs a suite and writes report.json, report.txt (deterministic) and
/// timings.json (wall clock) into `out_dir`.
inline RunReport run_suite(const std::string& suite, std::uint64_t seed, const std::string& out_dir) {
  auto rep = run_checks(suite, seed);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw input_error("cannot create '" + out_dir + "': " + ec.message());
  io::write_text_file(out_dir + "/report.json", report_json(rep).dump(2) + "\n");
  io::write_text_file(out_dir + "/report.txt", report_text(rep));
  io::write_text_file(out_dir + "/timings.json", timings_json(rep).dump(2) + "\n");
  return rep;
}

}  // namespace loclab::suites
