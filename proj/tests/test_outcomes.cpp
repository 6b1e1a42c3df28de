#include "loclab/algorithms.hpp"
#include "loclab/corpus.hpp"
#include "loclab/lp.hpp"
#include "loclab/matching.hpp"
#include "loclab/nonsignaling.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace loclab;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

Graph ring(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return Graph(n, e);
}

/// Uniform over the three single-edge matchings of K3, half-edges "1" on
/// the matched edge and "0" elsewhere.
Outcome triangle_matchings() {
  Graph k3 = ring(3);
  std::vector<Labeling> support;
  for (EdgeId m = 0; m < 3; ++m) {
    Labeling l = Labeling::blank(k3);
    for (auto& s : l.nodes) s = "0";
    for (EdgeId e = 0; e < 3; ++e) l.half_edges[e] = e == m ? std::array<std::string, 2>{"1", "1"} : std::array<std::string, 2>{"0", "0"};
    support.push_back(l);
  }
  return Outcome::uniform(LabeledGraph(k3), support);
}

Outcome parity_outcome(std::size_t m) {
  LabeledGraph c(ring(m));
  Labeling l = Labeling::blank(c.graph());
  for (auto& s : l.nodes) s = std::to_string(m % 2);
  return Outcome::deterministic(c, l);
}

}  // namespace

TEST(Outcome, RejectsBadSupports) {
  LabeledGraph g(path(2));
  EXPECT_THROW(Outcome(g, {}), input_error);
  EXPECT_THROW(Outcome(g, {{Labeling::blank(path(2)), Rational(1, 2)}}), input_error);
  EXPECT_THROW(Outcome(g, {{Labeling::blank(path(3)), Rational(1)}}), input_error);
  EXPECT_THROW(Outcome(g, {{Labeling::blank(path(2)), Rational(3, 2)}, {Labeling::blank(path(2)), Rational(-1, 2)}}),
               input_error);
}

TEST(Restrict, DeterministicKeepsTheLabeling) {
  Labeling l = Labeling::blank(path(3));
  l.nodes = {"a", "b", "c"};
  const NodeId s[] = {1};
  auto r = restrict(Outcome::deterministic(LabeledGraph(path(3)), l), s);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0].first[0].node, "b");
  EXPECT_EQ(r.support[0].second, 1);
}

TEST(Restrict, AgreeingLabelingsMerge) {
  Labeling a = Labeling::blank(path(3)), b = Labeling::blank(path(3));
  a.nodes = {"x", "y", "0"};
  b.nodes = {"x", "y", "1"};
  const NodeId s[] = {0, 1};
  auto r = restrict(Outcome::uniform(LabeledGraph(path(3)), {a, b}), s);
  ASSERT_EQ(r.support.size(), 1u);
  EXPECT_EQ(r.support[0].second, 1);
}

TEST(Restrict, TriangleMatchingsAtOneNode) {
  const NodeId s[] = {0};
  auto r = restrict(triangle_matchings(), s);
  ASSERT_EQ(r.support.size(), 3u);
  std::multiset<std::vector<std::string>> seen;
  for (auto& [part, p] : r.support) {
    EXPECT_EQ(p, Rational(1, 3));
    seen.insert(part[0].ports);
  }
  // Node 0 touches edges 0 and 2: matched on one of them, or on neither.
  EXPECT_EQ(seen, (std::multiset<std::vector<std::string>>{{"0", "0"}, {"0", "1"}, {"1", "0"}}));
}

TEST(Restrict, NestedRestrictionEqualsDirect) {
  auto o = triangle_matchings();
  const NodeId big[] = {0, 2}, small[] = {2};
  auto twice = restrict(restrict(o, big), small);
  auto once = restrict(o, small);
  EXPECT_EQ(twice.support, once.support);
}

TEST(SuccessProbability, CountsPassingMass) {
  Labeling good = Labeling::blank(path(2)), bad = good;
  bad.nodes[0] = "bad";
  LabeledGraph g(path(2));
  auto ok = [](const Labeling& l) { return l.nodes[0] != "bad"; };
  EXPECT_EQ(success_probability(Outcome::deterministic(g, good), ok), 1);
  EXPECT_EQ(success_probability(Outcome::deterministic(g, bad), ok), 0);
  EXPECT_EQ(success_probability(Outcome::uniform(g, {good, bad}), ok), Rational(1, 2));
}

TEST(Expectation, TriangleEdgesAreOneThird) {
  auto ex = expectation(triangle_matchings(), rational_value);
  for (auto& h : ex.half_edges) EXPECT_EQ(h, (std::array<Rational, 2>{Rational(1, 3), Rational(1, 3)}));
}

TEST(Expectation, UniformOverZeroAndOne) {
  Graph g(1);
  Labeling a = Labeling::blank(g), b = a;
  a.nodes[0] = "0";
  b.nodes[0] = "1";
  EXPECT_EQ(expectation(Outcome::uniform(LabeledGraph(g), {a, b}), rational_value).nodes[0], Rational(1, 2));
}

TEST(RunLocal, ConstantRule) {
  LocalAlgorithm a{0, [](const View& v) { return NodeOutput{"0", std::vector<std::string>(v.ports[v.anchor()].size())}; }, {}, {}};
  auto out = run_local(a, LabeledGraph(ring(5)));
  for (auto& s : out.nodes) EXPECT_EQ(s, "0");
}

TEST(RunLocal, DegreeRuleOnPath) {
  LocalAlgorithm a{1, [](const View& v) {
                     return NodeOutput{std::to_string(v.ports[v.anchor()].size()),
                                       std::vector<std::string>(v.ports[v.anchor()].size())};
                   },
                   {}, {}};
  EXPECT_EQ(run_local(a, LabeledGraph(path(3))).nodes, (std::vector<std::string>{"1", "2", "1"}));
}

TEST(RunLocal, ExpectationRuleOnTriangle) {
  auto oracle = [](const LabeledGraph&) { return triangle_matchings(); };
  LabeledGraph k3(ring(3));
  auto out = run_local(local_expectation_algorithm(oracle, 1, whole_graph_completion(k3)), k3);
  for (auto& h : out.half_edges) EXPECT_EQ(h, (std::array<std::string, 2>{"1/3", "1/3"}));
}

TEST(RunLocal, ViewCensusCountsBall) {
  auto out = run_local(algorithms::view_census(1), LabeledGraph(path(4)));
  EXPECT_EQ(out.nodes, (std::vector<std::string>{"2", "3", "3", "2"}));
}

TEST(RunRandLocal, SeedlessIsDeterministic) {
  RandomizedLocalAlgorithm a;
  a.rule = [](const View& v, std::span<const std::string>) { return NodeOutput{"x", std::vector<std::string>(v.ports[v.anchor()].size())}; };
  EXPECT_EQ(run_rand_local(a, LabeledGraph(path(3))).support().size(), 1u);
}

TEST(RunRandLocal, OwnSeedOnOneNode) {
  RandomizedLocalAlgorithm a;
  a.seeds = {"0", "1"};
  a.rule = [](const View& v, std::span<const std::string> s) { return NodeOutput{s[v.anchor()], {}}; };
  auto o = run_rand_local(a, LabeledGraph(Graph(1)));
  ASSERT_EQ(o.support().size(), 2u);
  for (auto& w : o.support()) EXPECT_EQ(w.p, Rational(1, 2));
}

TEST(RunRandLocal, TwoNodesFourLabelings) {
  RandomizedLocalAlgorithm a;
  a.seeds = {"0", "1"};
  a.rule = [](const View& v, std::span<const std::string> s) { return NodeOutput{s[v.anchor()], {""}}; };
  auto o = run_rand_local(a, LabeledGraph(path(2)));
  ASSERT_EQ(o.support().size(), 4u);
  for (auto& w : o.support()) EXPECT_EQ(w.p, Rational(1, 4));
}

TEST(RunRandLocal, SamplingIsReproducible) {
  auto a = algorithms::seed_census(1);
  std::mt19937_64 r1(5), r2(5);
  LabeledGraph g(ring(6));
  EXPECT_EQ(sample_rand_local(a, g, 50, r1).support(), sample_rand_local(a, g, 50, r2).support());
}

TEST(RunSlocal, GreedyOnPath) {
  const NodeId order[] = {0, 1, 2};
  auto run = run_greedy_matching(path(3), order);
  EXPECT_EQ(run.matched, (std::vector<std::size_t>{0}));
  EXPECT_EQ(run.locality, 1u);
}

TEST(RunSlocal, SingleNode) {
  const NodeId order[] = {0};
  auto run = run_slocal(greedy_unit_algorithm(), LabeledGraph(Graph(1)), order);
  EXPECT_LE(run.locality, 1u);
  EXPECT_EQ(run.labeling.nodes[0], "1");
}

TEST(RunSlocal, RejectsBadOrders) {
  const NodeId twice[] = {0, 0};
  EXPECT_THROW(run_slocal(greedy_unit_algorithm(), LabeledGraph(path(2)), twice), input_error);
}

TEST(RunSlocal, StepMayNotExceedItsLocality) {
  SlocalAlgorithm a{0, [](SlocalContext& ctx) { ctx.view(1); }};
  const NodeId order[] = {0, 1};
  EXPECT_THROW(run_slocal(a, LabeledGraph(path(2)), order), contract_error);
}

TEST(RunSlocal, EveryOrderGivesAMaximalMatching) {
  for (std::size_t n = 1; n <= 5; ++n)
    for (auto& g : corpus::graphs_up_to_iso(n)) {
      std::vector<NodeId> order(n);
      std::iota(order.begin(), order.end(), 0);
      do {
        auto run = run_greedy_matching(g, order);
        std::uint64_t mask = 0;
        for (auto e : run.matched) mask |= std::uint64_t{1} << e;
        ASSERT_TRUE(oracle::is_maximal(g, mask));
      } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST(NonSignaling, IdenticalOutcomesPass) {
  auto o = triangle_matchings();
  const NodeId a[] = {1};
  EXPECT_TRUE(verify_non_signaling(o, o, a, a, 1).ok());
}

TEST(NonSignaling, ParityOnFourAndFiveCyclesIsCaught) {
  const NodeId a[] = {0};
  auto v = verify_non_signaling(parity_outcome(4), parity_outcome(5), a, a, 1);
  EXPECT_EQ(v.status, NsStatus::violation);
}

TEST(NonSignaling, NonIsomorphicViewsAreAPreconditionFailure) {
  const NodeId a[] = {0};
  auto v = verify_non_signaling(parity_outcome(4), Outcome::deterministic(LabeledGraph(path(3)), Labeling::blank(path(3))),
                                a, a, 1);
  EXPECT_EQ(v.status, NsStatus::precondition_unmet);
}

TEST(NonSignaling, RandomizedLocalOutcomesPassAndAgreeWithBruteForce) {
  auto graphs = corpus::graphs_up_to(5, false);
  for (std::size_t t : {0, 1, 2}) {
    auto alg = algorithms::seed_census(t);
    std::vector<Outcome> outs;
    for (auto& g : graphs) outs.push_back(run_rand_local(alg, LabeledGraph(g)));
    for (std::size_t i = 0; i < graphs.size(); i += 3)
      for (std::size_t j = i; j < graphs.size(); j += 5)
        for (NodeId a = 0; a < graphs[i].node_count(); ++a)
          for (NodeId b = 0; b < graphs[j].node_count(); ++b) {
            auto ref = oracle::naive_non_signaling(graphs[i], outs[i].support(), a, graphs[j], outs[j].support(), b, t);
            const NodeId aa[] = {a}, bb[] = {b};
            auto v = verify_non_signaling(outs[i], outs[j], aa, bb, t);
            if (!ref) {
              EXPECT_EQ(v.status, NsStatus::precondition_unmet);
            } else {
              EXPECT_TRUE(*ref);
              EXPECT_EQ(v.status, NsStatus::ok);
            }
          }
  }
}

TEST(NonSignaling, ArbitraryOutcomesAgreeWithBruteForce) {
  corpus::Rng rng(17);
  std::size_t violations = 0, passes = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto make = [&](const Graph& g) {
      std::vector<WeightedLabeling> support;
      std::size_t k = corpus::uniform_index(rng, 1, 2);
      for (std::size_t i = 0; i < k; ++i) {
        Labeling l = Labeling::blank(g);
        for (auto& s : l.nodes) s = corpus::coin(rng, 1, 4) ? "1" : "0";
        for (auto& h : l.half_edges) h = {corpus::coin(rng, 1, 4) ? "1" : "0", corpus::coin(rng, 1, 4) ? "1" : "0"};
        support.push_back({l, Rational(1, static_cast<long>(k))});
      }
      return Outcome(LabeledGraph(g), support);
    };
    Graph g = corpus::random_graph(rng, corpus::uniform_index(rng, 2, 5));
    Graph h = corpus::random_graph(rng, corpus::uniform_index(rng, 2, 5));
    auto og = make(g), oh = make(h);
    std::size_t t = corpus::uniform_index(rng, 0, 2);
    for (NodeId a = 0; a < g.node_count(); ++a)
      for (NodeId b = 0; b < h.node_count(); ++b) {
        auto ref = oracle::naive_non_signaling(g, og.support(), a, h, oh.support(), b, t);
        const NodeId aa[] = {a}, bb[] = {b};
        auto v = verify_non_signaling(og, oh, aa, bb, t);
        if (!ref) {
          EXPECT_EQ(v.status, NsStatus::precondition_unmet);
          continue;
        }
        EXPECT_EQ(v.ok(), *ref);
        (*ref ? passes : violations)++;
      }
  }
  EXPECT_GT(violations, 0u);
  EXPECT_GT(passes, 0u);
}
