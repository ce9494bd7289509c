#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace resilnet {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

/// Hop distance to a node that cannot be reached from the source.
inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// Undirected edge stored with u < v.
struct Edge {
  NodeId u;
  NodeId v;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple undirected graph on nodes 0..n-1, immutable after construction.
///
/// Edges are kept sorted in canonical (min, max) order; an edge's position in
/// that order is its EdgeId, which is what EdgeWeights and the cascade
/// engine index by. Adjacency is stored in CSR form so that neighbors(u) and
/// incident_edges(u) are parallel spans.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from arbitrary pairs, collapsing duplicates and (v,u)
  /// reversals. Throws std::invalid_argument naming the offending pair on a
  /// self-loop or an endpoint >= n.
  Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs);
  Graph(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs)
      : Graph(n, std::span<const std::pair<NodeId, NodeId>>(pairs.begin(), pairs.size())) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const NodeId> neighbors(NodeId u) const {
    return {adjacency_.data() + offsets_[u], adjacency_.data() + offsets_[u + 1]};
  }
  std::span<const EdgeId> incident_edges(NodeId u) const {
    return {incident_.data() + offsets_[u], incident_.data() + offsets_[u + 1]};
  }
  std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }

  /// Index of edge {u,v} or kNoEdge.
  EdgeId find_edge(NodeId u, NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) != kNoEdge; }

  /// Copy with the extra edge {u,v} (no-op copy if already present).
  Graph with_edge(NodeId u, NodeId v) const;

  double average_degree() const {
    return n_ == 0 ? 0.0 : 2.0 * static_cast<double>(edges_.size()) / static_cast<double>(n_);
  }

  static constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  void build_adjacency();

  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
  std::vector<EdgeId> incident_;
};

/// Strictly positive distance weights D(u,v), one per edge of a companion
/// graph, indexed by EdgeId.
class EdgeWeights {
 public:
  EdgeWeights() = default;
  /// Throws std::invalid_argument if the size does not match the graph or a
  /// value is not a finite positive number.
  EdgeWeights(const Graph& g, std::vector<double> distances);

  /// All distances equal to `value`.
  static EdgeWeights uniform(const Graph& g, double value);

  std::size_t size() const { return d_.size(); }
  double operator[](EdgeId e) const { return d_[e]; }
  std::span<const double> values() const { return d_; }
  double at(const Graph& g, NodeId u, NodeId v) const;

  /// True if these weights were built for a graph with the same edge count.
  bool matches(const Graph& g) const { return d_.size() == g.num_edges(); }

 private:
  std::vector<double> d_;
};

/// BFS hop distances from `source`; kUnreachable marks other components.
std::vector<std::uint32_t> shortest_path_lengths(const Graph& g, NodeId source);

/// Dijkstra distances under D; +infinity marks other components.
std::vector<double> weighted_shortest_path_lengths(const Graph& g, const EdgeWeights& d,
                                                   NodeId source);

/// Connected components, each sorted ascending, ordered by smallest member.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

/// Sizes of the connected components, in the order connected_components uses.
std::vector<std::size_t> component_sizes(const Graph& g);

/// H(G) = |E| / sum_e (1/D_e)^g_exp. Throws std::invalid_argument on an
/// empty edge set.
double harmonic_mean_weight(const Graph& g, const EdgeWeights& d, double g_exp);

}  // namespace resilnet
