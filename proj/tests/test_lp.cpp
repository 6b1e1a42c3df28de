#include "loclab/algorithms.hpp"
#include "loclab/corpus.hpp"
#include "loclab/lp.hpp"
#include "loclab/matching.hpp"
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

LpPoint uniform_point(const DistLP& p, Rational value) {
  LpPoint x;
  for (auto& v : p.variables()) x[v.name] = value;
  return x;
}

Labeling matching_labels(const Graph& g, std::span<const EdgeId> m) {
  Labeling l = Labeling::blank(g);
  for (auto& s : l.nodes) s = "0";
  for (auto& h : l.half_edges) h = {"0", "0"};
  for (EdgeId e : m) l.half_edges[e] = {"1", "1"};
  return l;
}

/// Node-based fractional vertex cover: minimize the sum, each edge covered.
DistLP vertex_cover_lp(const Graph& g) {
  std::vector<LpVariable> vars;
  for (NodeId v = 0; v < g.node_count(); ++v) vars.push_back({"y" + std::to_string(v), {Owner::Kind::node, v}});
  std::vector<LpRow> rows;
  for (auto& e : g.edges()) rows.push_back({{{e.u, Rational(1)}, {e.v, Rational(1)}}, Relation::ge, Rational(1), e.u});
  return DistLP(g, LpKind::node_based, Sense::minimize, vars, rows, std::vector<Rational>(g.node_count(), Rational(1)));
}

}  // namespace

TEST(MatchingLp, Shape) {
  auto p = build_fractional_matching_lp(path(2));
  EXPECT_EQ(p.variables().size(), 1u);
  EXPECT_EQ(p.kind(), LpKind::edge_based);
  EXPECT_EQ(p.sense(), Sense::maximize);
  EXPECT_THROW(build_fractional_matching_lp(Graph(2, {{0, 1}, {0, 1}}, true)), input_error);
}

TEST(MatchingLp, KnownOptima) {
  EXPECT_EQ(exact_opt(build_fractional_matching_lp(path(2))).value, 1);
  EXPECT_EQ(exact_opt(build_fractional_matching_lp(ring(3))).value, Rational(3, 2));
  EXPECT_EQ(exact_opt(build_fractional_matching_lp(path(3))).value, 1);
  EXPECT_EQ(exact_opt(build_fractional_matching_lp(Graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}))).value, 1);
  EXPECT_EQ(exact_opt(build_fractional_matching_lp(ring(6))).value, 3);
}

TEST(MatchingLp, OptimumAgreesWithHalfIntegralEnumeration) {
  for (auto& g : corpus::graphs_up_to(5, false)) {
    auto opt = exact_opt(build_fractional_matching_lp(g));
    ASSERT_EQ(opt.status, LpOptimum::Status::optimal);
    EXPECT_EQ(opt.value, oracle::fractional_matching_opt(g));
  }
}

TEST(MatchingLp, OptimalSolutionIsFeasible) {
  for (auto& g : corpus::graphs_up_to(5, true)) {
    auto p = build_fractional_matching_lp(g);
    auto opt = exact_opt(p);
    LpPoint x;
    for (std::size_t i = 0; i < p.variables().size(); ++i) x[p.variables()[i].name] = opt.solution[i];
    EXPECT_TRUE(check_feasible(p, x).ok());
    EXPECT_EQ(objective_value(p, x), opt.value);
  }
}

TEST(CheckFeasible, Examples) {
  auto p3 = build_fractional_matching_lp(path(3));
  EXPECT_TRUE(check_feasible(p3, uniform_point(p3, 0)).ok());
  auto both = check_feasible(p3, uniform_point(p3, 1));
  EXPECT_EQ(both.violated_rows, (std::vector<std::size_t>{1}));
  auto k3 = build_fractional_matching_lp(ring(3));
  EXPECT_TRUE(check_feasible(k3, uniform_point(k3, Rational(1, 2))).ok());
  EXPECT_EQ(check_feasible(k3, uniform_point(k3, Rational(-1, 2))).negative_variables.size(), 3u);
}

TEST(CheckFeasible, PointMustBeTotal) {
  auto p = build_fractional_matching_lp(path(3));
  EXPECT_THROW(check_feasible(p, LpPoint{{"x_e0", Rational(1)}}), input_error);
  EXPECT_THROW(check_feasible(p, LpPoint{{"x_e0", 0}, {"x_e1", 0}, {"x_e9", 0}}), input_error);
}

TEST(DistLp, RowsMustStayWithinRadiusOne) {
  Graph g = path(3);
  std::vector<LpVariable> vars{{"a", {Owner::Kind::node, 0}}, {"c", {Owner::Kind::node, 2}}};
  std::vector<LpRow> rows{{{{0, Rational(1)}, {1, Rational(1)}}, Relation::le, Rational(1), 0}};
  EXPECT_THROW(DistLP(g, LpKind::node_based, Sense::maximize, vars, rows, {Rational(1), Rational(1)}), input_error);
  rows[0].owner = 1;
  EXPECT_NO_THROW(DistLP(g, LpKind::node_based, Sense::maximize, vars, rows, {Rational(1), Rational(1)}));
}

TEST(DistLp, DuplicateNamesAndWrongOwnersAreRejected) {
  Graph g = path(2);
  std::vector<LpVariable> dup{{"a", {Owner::Kind::node, 0}}, {"a", {Owner::Kind::node, 1}}};
  EXPECT_THROW(DistLP(g, LpKind::node_based, Sense::maximize, dup, {}, {Rational(1), Rational(1)}), input_error);
  std::vector<LpVariable> edge{{"e", {Owner::Kind::edge, 0}}};
  EXPECT_THROW(DistLP(g, LpKind::node_based, Sense::maximize, edge, {}, {Rational(1)}), input_error);
}

TEST(ExactOpt, MinimizationVertexCover) {
  EXPECT_EQ(exact_opt(vertex_cover_lp(ring(3))).value, Rational(3, 2));
  EXPECT_EQ(exact_opt(vertex_cover_lp(path(3))).value, 1);
  EXPECT_EQ(exact_opt(vertex_cover_lp(ring(5))).value, Rational(5, 2));
}

TEST(ExactOpt, UnboundedAndInfeasible) {
  Graph g(1);
  std::vector<LpVariable> vars{{"a", {Owner::Kind::node, 0}}};
  DistLP open(g, LpKind::node_based, Sense::maximize, vars, {}, {Rational(1)});
  EXPECT_EQ(exact_opt(open).status, LpOptimum::Status::unbounded);
  std::vector<LpRow> rows{{{{0, Rational(1)}}, Relation::ge, Rational(2), 0}, {{{0, Rational(1)}}, Relation::le, Rational(1), 0}};
  DistLP none(g, LpKind::node_based, Sense::maximize, vars, rows, {Rational(1)});
  EXPECT_EQ(exact_opt(none).status, LpOptimum::Status::infeasible);
}

TEST(ExactOpt, EqualityRows) {
  Graph g(2, {{0, 1}});
  std::vector<LpVariable> vars{{"a", {Owner::Kind::node, 0}}, {"b", {Owner::Kind::node, 1}}};
  std::vector<LpRow> rows{{{{0, Rational(1)}, {1, Rational(1)}}, Relation::eq, Rational(3), 0},
                          {{{0, Rational(1)}}, Relation::le, Rational(1), 0}};
  auto opt = exact_opt(DistLP(g, LpKind::node_based, Sense::maximize, vars, rows, {Rational(0), Rational(2)}));
  EXPECT_EQ(opt.value, 6);
}

TEST(ApproximationRatio, Examples) {
  auto p3 = build_fractional_matching_lp(path(3));
  const EdgeId first[] = {0};
  EXPECT_EQ(approximation_ratio(p3, maximal_matching_to_fractional(path(3), first)).value, 1);
  auto k3 = build_fractional_matching_lp(ring(3));
  auto r = approximation_ratio(k3, maximal_matching_to_fractional(ring(3), first));
  EXPECT_EQ(r.value, Rational(3, 2));
  EXPECT_TRUE(r.at_most(3));
  EXPECT_EQ(approximation_ratio(k3, uniform_point(k3, Rational(1, 2))).value, 1);
  EXPECT_EQ(approximation_ratio(k3, uniform_point(k3, 1)).kind, Ratio::Kind::infeasible);
  EXPECT_EQ(approximation_ratio(k3, uniform_point(k3, 0)).kind, Ratio::Kind::infinite);
  EXPECT_EQ(approximation_ratio(k3, uniform_point(k3, 0)).str(), "inf");
}

TEST(ApproximationRatio, MinimizationIsValueOverOpt) {
  auto p = vertex_cover_lp(ring(3));
  EXPECT_EQ(approximation_ratio(p, uniform_point(p, 1)).value, 2);
}

TEST(ApproximationRatio, EmptyGraphIsOne) {
  auto p = build_fractional_matching_lp(Graph(3));
  EXPECT_EQ(approximation_ratio(p, LpPoint{}).str(), "1");
}

TEST(MaximalToFractional, RejectsNonMaximalOrOverlapping) {
  const EdgeId none[] = {0};
  EXPECT_THROW(maximal_matching_to_fractional(path(4), std::span<const EdgeId>(none, 0)), input_error);
  const EdgeId overlap[] = {0, 1};
  EXPECT_THROW(maximal_matching_to_fractional(path(3), overlap), input_error);
  const EdgeId perfect[] = {0, 2, 4};
  EXPECT_EQ(approximation_ratio(build_fractional_matching_lp(ring(6)), maximal_matching_to_fractional(ring(6), perfect)).value,
            1);
}

TEST(MaximalToFractional, EveryMaximalMatchingIsWithinThree) {
  for (auto& g : corpus::graphs_up_to(5, false)) {
    auto p = build_fractional_matching_lp(g);
    auto opt = exact_opt(p);
    for (auto& m : oracle::maximal_matchings(g)) EXPECT_TRUE(approximation_ratio(p, maximal_matching_to_fractional(g, m), opt).at_most(3));
  }
}

TEST(Dequantize, DeterministicIsItsPoint) {
  const EdgeId m[] = {1};
  Graph g = path(4);
  auto p = build_fractional_matching_lp(g);
  auto x = dequantize(p, Outcome::deterministic(LabeledGraph(g), matching_labels(g, m)));
  EXPECT_EQ(x, (LpPoint{{"x_e0", 0}, {"x_e1", 1}, {"x_e2", 0}}));
}

TEST(Dequantize, TriangleMatchingsGiveOneThird) {
  Graph k3 = ring(3);
  std::vector<Labeling> s;
  for (EdgeId e = 0; e < 3; ++e) s.push_back(matching_labels(k3, std::span<const EdgeId>(&e, 1)));
  auto p = build_fractional_matching_lp(k3);
  auto x = dequantize(p, Outcome::uniform(LabeledGraph(k3), s));
  EXPECT_EQ(x, uniform_point(p, Rational(1, 3)));
  EXPECT_TRUE(check_feasible(p, x).ok());
  EXPECT_EQ(objective_value(p, x), 1);
  EXPECT_EQ(approximation_ratio(p, x).value, Rational(3, 2));
}

TEST(Dequantize, MixtureOfOptimaStaysOptimal) {
  Graph c4 = ring(4);
  const EdgeId a[] = {0, 2}, b[] = {1, 3};
  auto p = build_fractional_matching_lp(c4);
  for (Rational q : {Rational(0), Rational(1, 4), Rational(1, 2)}) {
    std::vector<WeightedLabeling> support{{matching_labels(c4, a), q}, {matching_labels(c4, b), 1 - q}};
    auto x = dequantize(p, Outcome(LabeledGraph(c4), support));
    EXPECT_EQ(approximation_ratio(p, x).value, 1);
  }
}

TEST(Dequantize, InfeasibleEntryIsAContractError) {
  Graph g = path(3);
  const EdgeId both[] = {0, 1};
  EXPECT_THROW(dequantize(build_fractional_matching_lp(g), Outcome::deterministic(LabeledGraph(g), matching_labels(g, both))),
               contract_error);
}

TEST(LocalExpectation, DeterministicOracleIsReproduced) {
  Graph g = path(5);
  const EdgeId m[] = {0, 2};
  Labeling l = matching_labels(g, m);
  auto oracle = [&](const LabeledGraph&) { return Outcome::deterministic(LabeledGraph(g), l); };
  auto out = run_local(local_expectation_algorithm(oracle, 1, whole_graph_completion(LabeledGraph(g))), LabeledGraph(g));
  for (EdgeId e = 0; e < g.edge_count(); ++e)
    for (int s = 0; s < 2; ++s) EXPECT_EQ(parse_rational(out.half_edges[e][s]), parse_rational(l.half_edges[e][s]));
}

TEST(LocalExpectation, CycleCompletionsAgree) {
  auto oracle = [](const LabeledGraph& c) { return run_rand_local(algorithms::disagreement_edges(1), c); };
  for (std::size_t n = 3; n <= 7; ++n) {
    LabeledGraph c(ring(n));
    auto near = run_local(local_expectation_algorithm(oracle, 1, cycle_completion(0)), c);
    auto far = run_local(local_expectation_algorithm(oracle, 1, cycle_completion(3)), c);
    EXPECT_EQ(near, far);
    EXPECT_EQ(near.half_edges[0][0], "1/4");
  }
}

TEST(LocalExpectation, UnembeddableViewIsAContractError) {
  Graph star(4, {{0, 1}, {0, 2}, {0, 3}});
  auto oracle = [](const LabeledGraph& c) { return Outcome::deterministic(c, Labeling::blank(c.graph())); };
  EXPECT_THROW(run_local(local_expectation_algorithm(oracle, 1, cycle_completion(0)), LabeledGraph(star)), contract_error);
}

TEST(Dequantize, SoundOnRandomMixtures) {
  corpus::Rng rng(23);
  for (auto& g : corpus::graphs_up_to(5, true)) {
    auto p = build_fractional_matching_lp(g);
    auto ms = oracle::maximal_matchings(g);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<WeightedLabeling> support;
      long total = 0;
      std::vector<long> w;
      for (std::size_t i = 0; i < 3; ++i) total += w.emplace_back(static_cast<long>(corpus::uniform_index(rng, 1, 5)));
      Rational expected = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        auto& m = ms[corpus::uniform_index(rng, 0, ms.size() - 1)];
        support.push_back({matching_labels(g, m), Rational(w[i], total)});
        expected += Rational(w[i], total) * static_cast<long>(m.size());
      }
      auto x = dequantize(p, Outcome(LabeledGraph(g), support));
      EXPECT_TRUE(check_feasible(p, x).ok());
      EXPECT_EQ(objective_value(p, x), expected);
    }
  }
}

TEST(MatchingLp, BipartiteOptimumIsIntegral) {
  std::size_t checked = 0;
  for (std::size_t n = 1; n <= 8; ++n)
    for (auto& g : corpus::graphs_up_to_iso(n, corpus::is_bipartite)) {
      EXPECT_EQ(exact_opt(build_fractional_matching_lp(g)).value, static_cast<long>(oracle::maximum_matching(g)));
      ++checked;
    }
  EXPECT_GT(checked, 100u);
}
