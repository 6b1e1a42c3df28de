#include "loclab/corpus.hpp"
#include "loclab/gadgets.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace loclab;

namespace {

Graph path(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
  return Graph(n, e);
}

std::set<std::pair<std::size_t, std::size_t>> edges_by_coordinate(const TreeLikeGadget& t) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  for (auto& e : t.graph.edges()) {
    auto a = coord_index(t.coords[e.u]), b = coord_index(t.coords[e.v]);
    out.insert({std::min(a, b), std::max(a, b)});
  }
  return out;
}

constexpr RecognizeOptions kGenerated{.allow_inter = true, .generator_rank = 2};

}  // namespace

TEST(TreeLike, SmallHeights) {
  EXPECT_EQ(gen_tree_like(1).graph.node_count(), 1u);
  EXPECT_EQ(gen_tree_like(1).graph.edge_count(), 0u);
  EXPECT_EQ(gen_tree_like(2).graph.edge_count(), 3u);
  EXPECT_EQ(gen_tree_like(3).graph.node_count(), 7u);
  EXPECT_EQ(gen_tree_like(3).graph.edge_count(), 10u);
  EXPECT_THROW(gen_tree_like(0), input_error);
}

TEST(TreeLike, EdgesMatchCoordinateRule) {
  for (std::size_t h = 1; h <= 7; ++h) {
    auto t = gen_tree_like(h);
    EXPECT_EQ(t.graph.node_count(), (std::size_t{1} << h) - 1);
    EXPECT_EQ(edges_by_coordinate(t), oracle::tree_like_edges(h)) << h;
    EXPECT_EQ(tree_like_edge_count(h), oracle::tree_like_edges(h).size());
  }
}

TEST(TreeLike, RecognizerRoundTrip) {
  for (std::size_t h = 1; h <= 6; ++h) {
    auto t = gen_tree_like(h);
    corpus::Rng rng(h);
    auto p = corpus::random_permutation(rng, t.graph.node_count());
    std::vector<Edge> moved;
    for (auto& e : t.graph.edges()) moved.push_back({p[e.u], p[e.v]});
    Graph shuffled(t.graph.node_count(), moved);
    auto coords = recognize_tree_like(shuffled);
    ASSERT_TRUE(coords) << h;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (auto& e : shuffled.edges()) {
      auto a = coord_index((*coords)[e.u]), b = coord_index((*coords)[e.v]);
      seen.insert({std::min(a, b), std::max(a, b)});
    }
    EXPECT_EQ(seen, oracle::tree_like_edges(h));
  }
}

TEST(TreeLike, RecognizerExamples) {
  EXPECT_FALSE(recognize_tree_like(path(4)));
  auto one = recognize_tree_like(Graph(1));
  ASSERT_TRUE(one);
  EXPECT_EQ((*one)[0], (Coord{0, 0}));
}

TEST(TreeLike, RecognizerAcceptsExactlyTheGadgets) {
  for (std::size_t n : {3, 7}) {
    auto target = corpus::canonical_code(gen_tree_like(n == 3 ? 2 : 3).graph);
    std::size_t accepted = 0;
    for (auto& g : corpus::graphs_up_to_iso(n)) {
      bool yes = recognize_tree_like(g).has_value();
      EXPECT_EQ(yes, corpus::canonical_code(g) == target);
      accepted += yes;
    }
    EXPECT_EQ(accepted, 1u);
  }
}

TEST(Octopus, Examples) {
  auto a = gen_octopus(1, {1}, {1});
  EXPECT_EQ(a.graph.node_count(), 2u);
  EXPECT_EQ(a.graph.edge_count(), 1u);
  auto b = gen_octopus(1, {2}, {1, 1});
  EXPECT_EQ(b.graph.node_count(), 3u);
  EXPECT_EQ(b.graph.edge_count(), 2u);
  auto c = gen_octopus(2, {1, 1}, {1, 1});
  EXPECT_EQ(c.graph.node_count(), 5u);
  EXPECT_EQ(c.graph.edge_count(), 5u);
}

TEST(Octopus, ShapeErrors) {
  EXPECT_THROW(gen_octopus(2, {1}, {1}), input_error);
  EXPECT_THROW(gen_octopus(1, {3}, {1, 1, 1}), input_error);
  EXPECT_THROW(gen_octopus(1, {2}, {1}), input_error);
  EXPECT_THROW(gen_octopus(1, {1}, {0}), input_error);
  EXPECT_THROW(gen_octopus(0, {}, {}), input_error);
}

TEST(Octopus, ConnectorsJoinPortRootsToHeadLeaves) {
  auto o = gen_octopus(3, {2, 1, 1, 2}, {2, 1, 3, 2, 1, 2});
  const auto& w = o.witness;
  ASSERT_EQ(w.ports.size(), 6u);
  std::vector<std::pair<std::size_t, std::size_t>> idx;
  for (auto& p : w.ports) {
    idx.push_back({p.i, p.j});
    EXPECT_TRUE(o.graph.has_edge(p.gadget.root(), w.head_leaf(p.i)));
  }
  EXPECT_EQ(idx, (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 1}, {2, 1}, {3, 1}, {3, 2}}));
  EXPECT_EQ(o.graph.node_count(), 7u + 3 + 1 + 7 + 3 + 1 + 3);
}

TEST(Octopus, RecognizerRoundTrip) {
  corpus::Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    std::size_t x = corpus::uniform_index(rng, 1, 3);
    std::vector<std::size_t> eta(std::size_t{1} << (x - 1));
    std::vector<std::size_t> heights;
    for (auto& e : eta) {
      e = corpus::uniform_index(rng, 1, 2);
      for (std::size_t j = 0; j < e; ++j) heights.push_back(corpus::uniform_index(rng, 1, 3));
    }
    auto o = gen_octopus(x, eta, heights);
    auto w = recognize_octopus(o.graph);
    ASSERT_TRUE(w);
    EXPECT_EQ(w->nodes().size(), o.graph.node_count());
  }
}

TEST(Octopus, LoneTreeIsNotAnOctopus) {
  EXPECT_FALSE(recognize_octopus(gen_tree_like(3).graph));
  EXPECT_FALSE(recognize_octopus(Graph(1)));
}

TEST(ProperInstance, PathExample) {
  auto [pi, f] = gen_proper_instance(incidence_graph(path(3)), 1);
  EXPECT_EQ(pi.graph.node_count(), 9u);
  EXPECT_EQ(pi.witness.octopi.size(), 3u);
  EXPECT_EQ(pi.witness.inter_nodes().size(), 2u);
  std::vector<std::size_t> sizes;
  for (auto& oc : pi.witness.octopi) sizes.push_back(oc.nodes().size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 3, 2}));
  EXPECT_EQ(f.root_of_edge.size(), 4u);
}

TEST(ProperInstance, SingleWhiteSingleBlack) {
  IncidenceGraph ig(Graph(2, {{0, 1}}), {Role::white, Role::black});
  auto [pi, f] = gen_proper_instance(ig, 1);
  EXPECT_EQ(pi.graph.node_count(), 3u);
  EXPECT_EQ(pi.graph.edge_count(), 2u);
}

TEST(ProperInstance, SizesMatchCountingOracle) {
  corpus::Rng rng(12);
  for (int t = 0; t < 60; ++t) {
    auto ig = corpus::random_incidence_graph(rng, 6);
    std::size_t k = corpus::uniform_index(rng, 1, 4);
    auto [pi, f] = gen_proper_instance(ig, k);
    std::vector<std::size_t> degrees;
    for (NodeId w : ig.whites()) degrees.push_back(ig.graph().degree(w));
    auto [nodes, edges] = oracle::proper_instance_size(degrees, ig.blacks().size(), k);
    EXPECT_EQ(pi.graph.node_count(), nodes);
    EXPECT_EQ(pi.graph.edge_count(), edges);
  }
}

TEST(ProperInstance, SizeLawWithDefaultHeight) {
  corpus::Rng rng(13);
  for (int t = 0; t < 100; ++t) {
    auto ig = corpus::random_incidence_graph(rng, 7);
    const std::size_t n = ig.graph().node_count();
    if (n < 2) continue;
    auto [pi, f] = gen_proper_instance(ig);
    EXPECT_EQ(pi.port_height, oracle::ceil_log2(n));
    EXPECT_GE(pi.graph.node_count(), n);
    EXPECT_LE(pi.graph.node_count(), n * n * n);
  }
}

TEST(ProperInstance, PortMapFollowsAdjacencyOrder) {
  auto ig = incidence_graph(Graph(4, {{0, 1}, {0, 2}, {0, 3}, {2, 3}}));
  auto [pi, f] = gen_proper_instance(ig, 2);
  for (NodeId v : ig.whites()) {
    const auto& oc = pi.witness.octopi[v];
    auto inc = ig.graph().incident(v);
    ASSERT_EQ(oc.ports.size(), inc.size());
    for (std::size_t i = 0; i < inc.size(); ++i) {
      EXPECT_EQ(f.root_of_edge.at(inc[i]), oc.ports[i].gadget.root());
      EXPECT_EQ(f.edge_of_root.at(oc.ports[i].gadget.root()), inc[i]);
    }
  }
}

TEST(ProperInstance, RecognizerRoundTrip) {
  for (std::size_t n = 1; n <= 4; ++n)
    for (auto& h : corpus::graphs_up_to_iso(n)) {
      auto [pi, f] = gen_proper_instance(incidence_graph(h));
      auto w = recognize_proper_instance(pi.graph, kGenerated);
      ASSERT_TRUE(w);
      EXPECT_FALSE(validate_proper_witness(pi.graph, *w));
      EXPECT_EQ(w->octopi.size(), n);
    }
}

TEST(ProperInstance, SingleOctopusHasNoInterNodes) {
  auto o = gen_octopus(2, {2, 1}, {2, 2, 2});
  auto w = recognize_proper_instance(o.graph);
  ASSERT_TRUE(w);
  EXPECT_TRUE(w->inter_nodes().empty());
}

TEST(ProperInstance, DeletingAHeadConnectorIsRejected) {
  auto [pi, f] = gen_proper_instance(incidence_graph(path(3)), 2);
  const auto& port = pi.witness.octopi[1].ports[0];
  NodeId leaf = pi.witness.octopi[1].head_leaf(port.i);
  std::vector<Edge> kept;
  for (auto& e : pi.graph.edges())
    if (!((e.u == leaf && e.v == port.gadget.root()) || (e.v == leaf && e.u == port.gadget.root()))) kept.push_back(e);
  ASSERT_EQ(kept.size() + 1, pi.graph.edge_count());
  Graph cut(pi.graph.node_count(), kept);
  // The cut graph still decomposes under the bare definition: an inter node
  // becomes a one-node head and the orphaned leaf becomes inter.
  EXPECT_TRUE(recognize_proper_instance(cut));
  EXPECT_FALSE(recognize_proper_instance(cut, kGenerated));
}

TEST(ProperInstance, SingleEdgeMutationsAreRejected) {
  corpus::Rng rng(21);
  std::size_t tried = 0;
  for (int t = 0; t < 12; ++t) {
    auto ig = corpus::random_incidence_graph(rng, 4);
    auto [pi, f] = gen_proper_instance(ig, corpus::uniform_index(rng, 1, 3));
    const Graph& g = pi.graph;
    for (int m = 0; m < 20; ++m) {
      std::vector<Edge> edges = g.edges();
      if (!edges.empty() && corpus::coin(rng, 1, 2)) {
        edges.erase(edges.begin() + static_cast<long>(corpus::uniform_index(rng, 0, edges.size() - 1)));
      } else {
        NodeId a = corpus::uniform_index(rng, 0, g.node_count() - 1), b = corpus::uniform_index(rng, 0, g.node_count() - 1);
        if (a == b || g.has_edge(a, b)) continue;
        edges.push_back({a, b});
      }
      ++tried;
      EXPECT_FALSE(recognize_proper_instance(Graph(g.node_count(), edges), kGenerated));
    }
  }
  EXPECT_GT(tried, 100u);
}

TEST(ProperInstance, WitnessValidationCatchesBrokenWitness) {
  auto [pi, f] = gen_proper_instance(incidence_graph(path(3)), 1);
  auto w = pi.witness;
  w.node_roles[0] = NodeRole::inter;
  EXPECT_TRUE(validate_proper_witness(pi.graph, w));
  w = pi.witness;
  std::swap(w.octopi[0].ports[0].gadget.nodes[0], w.octopi[1].ports[0].gadget.nodes[0]);
  EXPECT_TRUE(validate_proper_witness(pi.graph, w));
}
