#pragma once

#include "loclab/graph.hpp"
#include "loclab/linearizable.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <cstdint>
#include <functional>
#include <random>
#include <set>
#include <vector>

namespace loclab::corpus {

using Rng = std::mt19937_64;

/// Canonical upper-triangle code of a simple graph on at most 11 nodes:
/// colour refinement, then the smallest code over all orderings that keep
/// the refined classes in place.
inline std::uint64_t canonical_code(const Graph& g) {
  const std::size_t n = g.node_count();
  if (n > 11) throw input_error("canonical codes support at most 11 nodes");
  if (g.is_multi()) throw input_error("canonical codes support simple graphs only");
  std::vector<std::uint32_t> adj(n, 0);
  for (auto& e : g.edges()) {
    adj[e.u] |= 1u << e.v;
    adj[e.v] |= 1u << e.u;
  }
  std::vector<std::size_t> color(n);
  for (NodeId v = 0; v < n; ++v) color[v] = static_cast<std::size_t>(std::popcount(adj[v]));
  for (std::size_t classes = 0;;) {
    std::vector<std::vector<std::size_t>> sig(n);
    for (NodeId v = 0; v < n; ++v) {
      sig[v].push_back(color[v]);
      std::vector<std::size_t> nb;
      for (NodeId w = 0; w < n; ++w)
        if (adj[v] >> w & 1) nb.push_back(color[w]);
      std::sort(nb.begin(), nb.end());
      sig[v].insert(sig[v].end(), nb.begin(), nb.end());
    }
    auto uniq = sig;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (NodeId v = 0; v < n; ++v)
      color[v] = static_cast<std::size_t>(std::lower_bound(uniq.begin(), uniq.end(), sig[v]) - uniq.begin());
    if (uniq.size() == classes) break;
    classes = uniq.size();
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return color[a] < color[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && color[order[j]] == color[order[i]]) ++j;
    cells.push_back({i, j});
    i = j;
  }
  auto code_of = [&] {
    std::uint64_t code = 0;
    std::size_t bit = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j, ++bit)
        if (adj[order[i]] >> order[j] & 1) code |= std::uint64_t{1} << bit;
    return code;
  };
  std::uint64_t best = ~std::uint64_t{0};
  std::function<void(std::size_t)> rec = [&](std::size_t c) {
    if (c == cells.size()) {
      best = std::min(best, code_of());
      return;
    }
    auto first = order.begin() + static_cast<std::ptrdiff_t>(cells[c].first);
    auto last = order.begin() + static_cast<std::ptrdiff_t>(cells[c].second);
    std::sort(first, last);
    do rec(c + 1);
    while (std::next_permutation(first, last));
  };
  rec(0);
  return best;
}

inline Graph graph_from_code(std::size_t n, std::uint64_t code) {
  std::vector<Edge> edges;
  std::size_t bit = 0;
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j, ++bit)
      if (code >> bit & 1) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

/// One representative per isomorphism class of simple graphs on exactly n
/// nodes that satisfy `keep`. `keep` must be closed under deleting a node.
inline std::vector<Graph> graphs_up_to_iso(std::size_t n, const std::function<bool(const Graph&)>& keep = {}) {
  std::set<std::uint64_t> level{0};
  Graph empty(0);
  if (keep && !keep(empty)) level.clear();
  for (std::size_t m = 1; m <= n; ++m) {
    std::set<std::uint64_t> next;
    for (auto code : level) {
      Graph base = graph_from_code(m - 1, code);
      for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
        auto edges = base.edges();
        for (NodeId v = 0; v + 1 < m; ++v)
          if (mask >> v & 1) edges.push_back({v, m - 1});
        Graph cand(m, std::move(edges));
        if (keep && !keep(cand)) continue;
        next.insert(canonical_code(cand));
      }
    }
    level = std::move(next);
  }
  std::vector<Graph> out;
  for (auto code : level) out.push_back(graph_from_code(n, code));
  return out;
}

inline std::vector<Graph> graphs_up_to(std::size_t max_n, bool connected_only) {
  std::vector<Graph> out;
  for (std::size_t n = 1; n <= max_n; ++n)
    for (auto& g : graphs_up_to_iso(n))
      if (!connected_only || is_connected(g)) out.push_back(std::move(g));
  return out;
}

inline bool is_bipartite(const Graph& g) {
  std::vector<int> side(g.node_count(), -1);
  for (NodeId s = 0; s < g.node_count(); ++s) {
    if (side[s] != -1) continue;
    side[s] = 0;
    std::vector<NodeId> stack{s};
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (side[w] == -1) {
          side[w] = 1 - side[u];
          stack.push_back(w);
        } else if (side[w] == side[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

/// Coin with probability num/den, drawn from integers so every platform
/// sees the same sequence.
inline bool coin(Rng& rng, std::uint64_t num, std::uint64_t den) { return rng() % den < num; }

inline std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline Graph random_graph(Rng& rng, std::size_t n, std::uint64_t num = 1, std::uint64_t den = 2) {
  std::vector<Edge> edges;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (coin(rng, num, den)) edges.push_back({a, b});
  return Graph(n, std::move(edges));
}

template <class T>
void shuffle(Rng& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, 0, i - 1)]);
}

inline std::vector<NodeId> random_permutation(Rng& rng, std::size_t n) {
  std::vector<NodeId> p(n);
  std::iota(p.begin(), p.end(), 0);
  shuffle(rng, p);
  return p;
}

/// Incidence graph of a random graph on 1..max_whites nodes.
inline IncidenceGraph random_incidence_graph(Rng& rng, std::size_t max_whites) {
  return incidence_graph(random_graph(rng, uniform_index(rng, 1, max_whites)));
}

}  // namespace loclab::corpus
