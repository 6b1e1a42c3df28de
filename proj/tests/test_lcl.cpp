#include "loclab/corpus.hpp"
#include "loclab/gadgets.hpp"
#include "loclab/lcl.hpp"

#include <gtest/gtest.h>

using namespace loclab;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

/// Proper 2-coloring of paths as a radius-1 LCL with empty inputs.
LclProblem two_coloring() {
  LclProblem p;
  p.node_in = {""};
  p.edge_in = {""};
  p.node_out = {"a", "b"};
  p.edge_out = {""};
  Graph g = path(6);
  ConstraintSet c(1, 2, product_alphabet(p.node_in, p.node_out), product_alphabet(p.edge_in, p.edge_out), {});
  for (int shift = 0; shift < 2; ++shift) {
    Labeling l = Labeling::blank(g);
    for (NodeId v = 0; v < 6; ++v) l.nodes[v] = product_label("", (v + shift) % 2 ? "b" : "a");
    for (auto& h : l.half_edges) h = {product_label("", ""), product_label("", "")};
    c.absorb(LabeledGraph(g, l));
  }
  Labeling single = Labeling::blank(Graph(1));
  for (std::string s : {"a", "b"}) {
    single.nodes[0] = product_label("", s);
    c.absorb(LabeledGraph(Graph(1), single));
  }
  p.constraints = std::move(c);
  return p;
}

}  // namespace

TEST(CenteredBall, PathMiddleRadiusOne) {
  auto b = centered_ball(LabeledGraph(path(3)), 1, 1);
  EXPECT_EQ(b.graph.graph().node_count(), 3u);
  EXPECT_EQ(b.graph.graph().edge_count(), 2u);
  EXPECT_EQ(b.center, 1u);
}

TEST(CenteredBall, RadiusZeroIsOneNode) {
  Labeling l = Labeling::blank(path(4));
  l.nodes[2] = "x";
  auto b = centered_ball(LabeledGraph(path(4), l), 2, 0);
  EXPECT_EQ(b.graph.graph().node_count(), 1u);
  EXPECT_EQ(b.graph.node_label(0), "x");
}

TEST(CenteredBall, FiveCycleRadiusTwoIsInducedWithWrapEdge) {
  // Radius 2 reaches every node of C5, and the ball is the induced subgraph.
  Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}});
  auto b = centered_ball(LabeledGraph(c5), 0, 2);
  EXPECT_EQ(b.graph.graph().node_count(), 5u);
  EXPECT_EQ(b.graph.graph().edge_count(), 5u);
}

TEST(Constraints, ClosureAcceptsItsOwnGraph) {
  corpus::Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    Graph g = corpus::random_graph(rng, 7);
    Labeling l = Labeling::blank(g);
    for (auto& s : l.nodes) s = corpus::coin(rng, 1, 2) ? "x" : "y";
    LabeledGraph lg(g, l);
    EXPECT_TRUE(check_constraints(lg, ConstraintSet::closure_of(lg, 1)).ok());
    EXPECT_TRUE(check_constraints(lg, ConstraintSet::closure_of(lg, 2)).ok());
  }
}

TEST(Constraints, EmptySetRejectsEveryNode) {
  ConstraintSet empty(1, 4, std::nullopt, std::nullopt, {});
  auto v = check_constraints(LabeledGraph(path(4)), empty);
  EXPECT_EQ(v.violators, (std::vector<NodeId>{0, 1, 2, 3}));
}

TEST(Constraints, IsomorphicMembersAreRejected) {
  CenteredGraph a{LabeledGraph(path(2)), 0}, b{LabeledGraph(path(2)), 1};
  EXPECT_THROW(ConstraintSet(1, 2, std::nullopt, std::nullopt, {a, b}), input_error);
}

TEST(Constraints, MemberBeyondRadiusIsRejected) {
  CenteredGraph far{LabeledGraph(path(3)), 0};
  EXPECT_THROW(ConstraintSet(1, 2, std::nullopt, std::nullopt, {far}), input_error);
}

TEST(Constraints, ProperInstanceFamilyLabelingIsAccepted) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& h : corpus::graphs_up_to_iso(n)) {
      auto [pi, f] = gen_proper_instance(incidence_graph(h));
      EXPECT_TRUE(check_constraints(pi.family, proper_instance_constraints()).ok());
    }
}

TEST(Lcl, TwoColoringMatchesDirectCheck) {
  auto p = two_coloring();
  corpus::Rng rng(9);
  for (int t = 0; t < 300; ++t) {
    std::size_t n = corpus::uniform_index(rng, 1, 9);
    Graph g = path(n);
    Labeling out = Labeling::blank(g);
    for (auto& s : out.nodes) s = corpus::coin(rng, 1, 2) ? "a" : "b";
    bool proper = true;
    for (auto& e : g.edges()) proper = proper && out.nodes[e.u] != out.nodes[e.v];
    EXPECT_EQ(verify_lcl_solution(p, LabeledGraph(g), out).ok(), proper);
  }
}

TEST(Lcl, PermissiveProblemAcceptsAnything) {
  LclProblem p;
  p.node_in = {""};
  p.edge_in = {""};
  p.node_out = {"0", "1"};
  p.edge_out = {""};
  Graph g = path(5);
  ConstraintSet c(1, 2, std::nullopt, std::nullopt, {});
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    Labeling l = Labeling::blank(g);
    for (NodeId v = 0; v < 5; ++v) l.nodes[v] = product_label("", mask >> v & 1 ? "1" : "0");
    for (auto& h : l.half_edges) h = {product_label("", ""), product_label("", "")};
    c.absorb(LabeledGraph(g, l));
  }
  p.constraints = std::move(c);
  Labeling out = Labeling::blank(g);
  for (std::uint32_t mask = 0; mask < 32; ++mask) {
    for (NodeId v = 0; v < 5; ++v) out.nodes[v] = mask >> v & 1 ? "1" : "0";
    EXPECT_TRUE(verify_lcl_solution(p, LabeledGraph(g), out).ok());
  }
}

TEST(Lcl, OutputOutsideAlphabetIsAnInputError) {
  auto p = two_coloring();
  Labeling out = Labeling::blank(path(2));
  out.nodes = {"a", "z"};
  EXPECT_THROW(verify_lcl_solution(p, LabeledGraph(path(2)), out), input_error);
}
