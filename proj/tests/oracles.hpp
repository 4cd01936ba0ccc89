#pragma once

// Test-only reference computations. Nothing here calls into the library's
// numeric paths: spanning trees are enumerated, determinants expanded by
// cofactors and series-parallel resistances evaluated from the circuit's
// construction tree.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "resgeom/resgeom.hpp"

namespace oracle {

using resgeom::Index;
using resgeom::Link;
using resgeom::Matrix;
using resgeom::WeightedGraph;

inline std::vector<std::string> index_labels(Index n) {
  std::vector<std::string> out;
  for (Index i = 0; i < n; ++i) out.push_back(std::to_string(i));
  return out;
}

inline WeightedGraph complete_graph(Index n, double w = 1.0) {
  std::vector<Link> links;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) links.push_back({i, j, w});
  return WeightedGraph(index_labels(n), links);
}

inline WeightedGraph path_graph(Index n, double w = 1.0) {
  std::vector<Link> links;
  for (Index i = 0; i + 1 < n; ++i) links.push_back({i, i + 1, w});
  return WeightedGraph(index_labels(n), links);
}

// Node 0 is the center.
inline WeightedGraph star_graph(Index n, double w = 1.0) {
  std::vector<Link> links;
  for (Index i = 1; i < n; ++i) links.push_back({0, i, w});
  return WeightedGraph(index_labels(n), links);
}

/// Random spanning tree plus extra links with probability `density`;
/// weights uniform in (0.1, 10).
inline WeightedGraph random_connected_graph(std::mt19937_64& rng, Index n, double density = 0.3) {
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Link> links;
  for (Index k = 1; k < n; ++k) {
    std::uniform_int_distribution<Index> pick(0, k - 1);
    links.push_back({perm[static_cast<std::size_t>(pick(rng))], perm[static_cast<std::size_t>(k)], weight(rng)});
  }
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (coin(rng) < density) links.push_back({i, j, weight(rng)});
  return WeightedGraph(index_labels(n), links);
}

inline std::vector<Index> random_subset(std::mt19937_64& rng, Index n, Index k) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

// ---------------------------------------------------------------------------
// Spanning trees by enumeration

struct Edge {
  Index i, j;
  double w;
};

/// Sum over all spanning trees of the product of their edge weights,
/// enumerating every (n-1)-subset of the edges.
inline double enumerate_spanning_trees(Index n, const std::vector<Edge>& edges) {
  const auto m = static_cast<Index>(edges.size());
  if (m < n - 1) return 0.0;
  std::vector<Index> pick(static_cast<std::size_t>(n - 1));
  std::iota(pick.begin(), pick.end(), Index{0});
  double total = 0.0;
  std::vector<Index> parent(static_cast<std::size_t>(n));
  const std::function<Index(Index)> find = [&](Index x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  while (true) {
    std::iota(parent.begin(), parent.end(), Index{0});
    bool acyclic = true;
    double product = 1.0;
    for (Index e : pick) {
      const Edge& ed = edges[static_cast<std::size_t>(e)];
      const Index a = find(ed.i), b = find(ed.j);
      if (a == b) {
        acyclic = false;
        break;
      }
      parent[static_cast<std::size_t>(a)] = b;
      product *= ed.w;
    }
    if (acyclic) total += product;

    // next combination
    Index k = n - 2;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == m - (n - 1) + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (Index r = k + 1; r < n - 1; ++r) pick[static_cast<std::size_t>(r)] = pick[static_cast<std::size_t>(r - 1)] + 1;
  }
  return total;
}

inline std::vector<Edge> edges_of(const WeightedGraph& g) {
  std::vector<Edge> out;
  for (const Link& l : g.links()) out.push_back({l.i, l.j, l.weight});
  return out;
}

// ---------------------------------------------------------------------------
// Determinant by cofactor expansion along the first row

inline double cofactor_determinant(const Matrix& a) {
  const Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  double total = 0.0;
  for (Index c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (Index i = 1; i < n; ++i)
      for (Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = a(i, j);
    total += (c % 2 == 0 ? 1.0 : -1.0) * a(0, c) * cofactor_determinant(minor);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Series-parallel networks with their terminal resistance from the
// construction tree (series: resistances add; parallel: conductances add).

struct SeriesParallelNetwork {
  Index nodes = 2;  // 0 = source, 1 = sink
  std::vector<Link> links;
  double resistance = 0.0;  // between the terminals

  WeightedGraph graph() const { return WeightedGraph(index_labels(nodes), links); }
};

namespace detail {

inline double build_sp(std::mt19937_64& rng, SeriesParallelNetwork& net, Index a, Index b, int depth) {
  std::uniform_real_distribution<double> weight(0.1, 10.0);
  std::uniform_int_distribution<int> kind(0, 2);
  const int k = depth <= 0 ? 0 : kind(rng);
  if (k == 0) {
    const double w = weight(rng);
    net.links.push_back({a, b, w});
    return 1.0 / w;
  }
  if (k == 1) {
    const Index mid = net.nodes++;
    return build_sp(rng, net, a, mid, depth - 1) + build_sp(rng, net, mid, b, depth - 1);
  }
  const double r1 = build_sp(rng, net, a, b, depth - 1);
  const double r2 = build_sp(rng, net, a, b, depth - 1);
  return 1.0 / (1.0 / r1 + 1.0 / r2);
}

}  // namespace detail

inline SeriesParallelNetwork random_series_parallel(std::mt19937_64& rng, int depth) {
  SeriesParallelNetwork net;
  net.resistance = detail::build_sp(rng, net, 0, 1, depth);
  return net;
}

}  // namespace oracle
