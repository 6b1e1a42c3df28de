#include "loclab/algorithms.hpp"
#include "loclab/corpus.hpp"
#include "loclab/io.hpp"
#include "loclab/simulate.hpp"

#include <gtest/gtest.h>

using namespace loclab;
using io::json;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

}  // namespace

TEST(Rationals, Parsing) {
  EXPECT_EQ(io::rational_from_json("3/6"), Rational(1, 2));
  EXPECT_EQ(io::rational_from_json(4), Rational(4));
  EXPECT_EQ(io::rational_from_json("-2/3"), Rational(-2, 3));
  EXPECT_EQ(io::to_json(Rational(2)), "2/1");
  EXPECT_THROW(io::rational_from_json(0.5), input_error);
  EXPECT_THROW(io::rational_from_json("1/0"), input_error);
  EXPECT_THROW(io::rational_from_json("x"), input_error);
}

TEST(Json, MalformedTextIsAnInputError) {
  EXPECT_THROW(io::parse("{\"n\": "), input_error);
  EXPECT_THROW(io::read_json_file("/nonexistent/loclab.json"), input_error);
}

TEST(Json, GraphRoundTripKeepsAdjacencyOrder) {
  for (auto& g : corpus::graphs_up_to(5, false)) EXPECT_EQ(io::graph_from_json(io::graph_to_json(g)), g);
  Graph multi(2, {{0, 1}, {0, 1}}, true);
  EXPECT_EQ(io::graph_from_json(io::graph_to_json(multi)), multi);
  Graph reordered(3, {{0, 1}, {0, 2}}, {{1, 0}, {0}, {1}}, false);
  EXPECT_EQ(io::graph_from_json(io::graph_to_json(reordered)), reordered);
}

TEST(Json, GraphErrors) {
  EXPECT_THROW(io::graph_from_json(json{{"edges", json::array()}}), input_error);
  EXPECT_THROW(io::graph_from_json(json{{"n", 2}, {"edges", {{0, 1, 2}}}}), input_error);
  EXPECT_THROW(io::graph_from_json(json{{"n", 2}, {"edges", {{0, 0}}}}), input_error);
  EXPECT_THROW(io::graph_from_json(json{{"n", "two"}, {"edges", json::array()}}), input_error);
}

TEST(Json, LabeledGraphRoundTrip) {
  Graph g = path(3);
  Labeling l = Labeling::blank(g);
  l.nodes = {"a", "b", "c"};
  l.half_edges[0] = {"x", "y"};
  l.half_edges[1] = {"z", "w"};
  LabeledGraph lg(g, l);
  auto j = io::to_json(lg);
  EXPECT_EQ(j["half_edge_labels"]["0:0"], "x");
  EXPECT_EQ(j["half_edge_labels"]["1:0"], "y");
  EXPECT_EQ(io::labeled_graph_from_json(j), lg);
}

TEST(Json, HalfEdgeKeyMustNameAHalfEdge) {
  json j = io::graph_to_json(path(3));
  j["half_edge_labels"] = {{"0:1", "x"}};
  EXPECT_THROW(io::labeled_graph_from_json(j), input_error);
  j["half_edge_labels"] = {{"garbage", "x"}};
  EXPECT_THROW(io::labeled_graph_from_json(j), input_error);
}

TEST(Json, IncidenceRoundTrip) {
  auto ig = incidence_graph(Graph(4, {{0, 1}, {0, 2}, {0, 3}}));
  auto back = io::incidence_from_json(io::to_json(ig));
  EXPECT_EQ(back.graph(), ig.graph());
  EXPECT_EQ(back.roles(), ig.roles());
  json bad = io::to_json(ig);
  bad["role"][0] = "grey";
  EXPECT_THROW(io::incidence_from_json(bad), input_error);
}

TEST(Json, OutcomeRoundTrip) {
  Graph c(3, {{0, 1}, {1, 2}, {2, 0}});
  auto o = run_rand_local(algorithms::seed_census(1), LabeledGraph(c));
  auto back = io::outcome_from_json(io::to_json(o));
  EXPECT_EQ(back.input(), o.input());
  EXPECT_EQ(back.support(), o.support());
}

TEST(Json, OutcomeProbabilitiesMustSumToOne) {
  Graph g(1);
  auto o = Outcome::deterministic(LabeledGraph(g), Labeling::blank(g));
  json j = io::to_json(o);
  j["support"][0]["p"] = "1/2";
  EXPECT_THROW(io::outcome_from_json(j), input_error);
}

TEST(Json, LpRoundTripKeepsTheOptimum) {
  for (auto& g : corpus::graphs_up_to(5, true)) {
    auto lp = build_fractional_matching_lp(g);
    auto back = io::lp_from_json(io::to_json(lp));
    EXPECT_EQ(exact_opt(back).value, exact_opt(lp).value);
    EXPECT_EQ(io::to_json(back), io::to_json(lp));
  }
}

TEST(Json, LpErrors) {
  json j = io::to_json(build_fractional_matching_lp(path(3)));
  json bad = j;
  bad["kind"] = "face";
  EXPECT_THROW(io::lp_from_json(bad), input_error);
  bad = j;
  bad["rows"][0]["relation"] = "<";
  EXPECT_THROW(io::lp_from_json(bad), input_error);
  bad = j;
  bad["objective"]["nope"] = "1";
  EXPECT_THROW(io::lp_from_json(bad), input_error);
}

TEST(Json, PointRoundTrip) {
  LpPoint x{{"x0", Rational(1, 2)}, {"x1", Rational(0)}};
  EXPECT_EQ(io::point_from_json(io::to_json(x)), x);
  EXPECT_THROW(io::point_from_json(json::array()), input_error);
}

TEST(Json, LinearizableRoundTrip) {
  auto p = matching_problem();
  auto back = io::linearizable_from_json(io::to_json(p));
  EXPECT_EQ(back.sigma, p.sigma);
  EXPECT_EQ(back.first, p.first);
  EXPECT_EQ(back.last, p.last);
  EXPECT_EQ(back.pairs, p.pairs);
  EXPECT_EQ(back.black, p.black);
  json bad = io::to_json(p);
  bad["pairs"].push_back({"M"});
  EXPECT_THROW(io::linearizable_from_json(bad), input_error);
}

TEST(Json, EdgeLabelsAcceptBothShapes) {
  EXPECT_EQ(io::edge_labels_from_json(json{"M", "M"}), (EdgeLabels{"M", "M"}));
  EXPECT_EQ(io::edge_labels_from_json(json{{"edge_labels", {"A"}}}), (EdgeLabels{"A"}));
  EXPECT_THROW(io::edge_labels_from_json(json{{"labels", {"A"}}}), input_error);
}

TEST(Json, ProperInstanceRoundTrip) {
  auto ig = incidence_graph(path(3));
  auto [pi, f] = gen_proper_instance(ig, 2);
  auto b = io::proper_from_json(io::to_json(pi, f, ig));
  EXPECT_EQ(b.instance.graph, pi.graph);
  EXPECT_EQ(b.instance.family, pi.family);
  EXPECT_EQ(b.instance.port_height, pi.port_height);
  EXPECT_EQ(b.ports.edge_of_root, f.edge_of_root);
  EXPECT_EQ(b.source.graph(), ig.graph());
  EXPECT_EQ(io::to_json(b.instance, b.ports, b.source), io::to_json(pi, f, ig));
}

TEST(Json, ProperInstanceWithBrokenPortMapIsRejected) {
  auto ig = incidence_graph(path(3));
  auto [pi, f] = gen_proper_instance(ig, 1);
  json j = io::to_json(pi, f, ig);
  j["port_map"].erase(0);
  EXPECT_THROW(io::proper_from_json(j), input_error);
}

TEST(Dot, LabeledGraph) {
  Graph g = path(2);
  Labeling l = Labeling::blank(g);
  l.nodes = {"q\"", "r"};
  l.half_edges[0] = {"M", "A"};
  auto dot = io::to_dot(LabeledGraph(g, l));
  EXPECT_EQ(dot.rfind("graph G {", 0), 0u);
  EXPECT_NE(dot.find("0 [label=\"0|q\\\"\"]"), std::string::npos);
  EXPECT_NE(dot.find("0 -- 1 [taillabel=\"M\", headlabel=\"A\"]"), std::string::npos);
  EXPECT_EQ(dot.substr(dot.size() - 2), "}\n");
}

TEST(Dot, ProperInstanceAndIncidence) {
  auto ig = incidence_graph(path(3));
  auto [pi, f] = gen_proper_instance(ig, 1);
  auto dot = io::to_dot(pi);
  EXPECT_NE(dot.find("lightblue"), std::string::npos);
  std::size_t edges = 0;
  for (std::size_t pos = 0; (pos = dot.find(" -- ", pos)) != std::string::npos; ++pos) ++edges;
  EXPECT_EQ(edges, pi.graph.edge_count());
  auto idot = io::to_dot(ig, {"M", "M", "A", "P"});
  EXPECT_NE(idot.find("3 [label=\"3|black\""), std::string::npos);
  EXPECT_NE(idot.find("headlabel=\"P\""), std::string::npos);
}
