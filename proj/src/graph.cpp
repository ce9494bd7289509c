#include "resilnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>

namespace resilnet {

namespace {

std::string pair_text(NodeId u, NodeId v) {
  std::ostringstream os;
  os << "(" << u << "," << v << ")";
  return os.str();
}

}  // namespace

Graph::Graph(std::size_t n, std::span<const std::pair<NodeId, NodeId>> pairs) : n_(n) {
  if (n > std::numeric_limits<NodeId>::max()) {
    throw std::invalid_argument("node count too large");
  }
  edges_.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a >= n || b >= n) {
      throw std::invalid_argument("edge " + pair_text(a, b) + ": endpoint out of range for n=" +
                                  std::to_string(n));
    }
    if (a == b) {
      throw std::invalid_argument("edge " + pair_text(a, b) + ": self-loop");
    }
    edges_.push_back(a < b ? Edge{a, b} : Edge{b, a});
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  if (edges_.size() >= kNoEdge) {
    throw std::invalid_argument("too many edges");
  }
  build_adjacency();
}

void Graph::build_adjacency() {
  offsets_.assign(n_ + 1, 0);
  for (const Edge& e : edges_) {
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) offsets_[i + 1] += offsets_[i];
  adjacency_.resize(2 * edges_.size());
  incident_.resize(2 * edges_.size());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const Edge& e = edges_[id];
    adjacency_[cursor[e.u]] = e.v;
    incident_[cursor[e.u]++] = id;
    adjacency_[cursor[e.v]] = e.u;
    incident_[cursor[e.v]++] = id;
  }
}

EdgeId Graph::find_edge(NodeId u, NodeId v) const {
  if (u == v || u >= n_ || v >= n_) return kNoEdge;
  const Edge key = u < v ? Edge{u, v} : Edge{v, u};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) return kNoEdge;
  return static_cast<EdgeId>(it - edges_.begin());
}

Graph Graph::with_edge(NodeId u, NodeId v) const {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  pairs.reserve(edges_.size() + 1);
  for (const Edge& e : edges_) pairs.emplace_back(e.u, e.v);
  pairs.emplace_back(u, v);
  return Graph(n_, pairs);
}

EdgeWeights::EdgeWeights(const Graph& g, std::vector<double> distances) : d_(std::move(distances)) {
  if (d_.size() != g.num_edges()) {
    throw std::invalid_argument("edge weights: expected " + std::to_string(g.num_edges()) +
                                " values, got " + std::to_string(d_.size()));
  }
  for (EdgeId e = 0; e < d_.size(); ++e) {
    if (!(d_[e] > 0.0) || !std::isfinite(d_[e])) {
      const Edge& ed = g.edge(e);
      throw std::invalid_argument("edge " + pair_text(ed.u, ed.v) +
                                  ": distance weight must be positive and finite");
    }
  }
}

EdgeWeights EdgeWeights::uniform(const Graph& g, double value) {
  return EdgeWeights(g, std::vector<double>(g.num_edges(), value));
}

double EdgeWeights::at(const Graph& g, NodeId u, NodeId v) const {
  const EdgeId e = g.find_edge(u, v);
  if (e == Graph::kNoEdge) throw std::out_of_range("no edge " + pair_text(u, v));
  return d_[e];
}

std::vector<std::uint32_t> shortest_path_lengths(const Graph& g, NodeId source) {
  if (source >= g.num_nodes()) throw std::out_of_range("source node out of range");
  std::vector<std::uint32_t> dist(g.num_nodes(), kUnreachable);
  std::vector<NodeId> frontier{source};
  frontier.reserve(g.num_nodes());
  dist[source] = 0;
  for (std::size_t head = 0; head < frontier.size(); ++head) {
    const NodeId u = frontier[head];
    for (NodeId v : g.neighbors(u)) {
      if (dist[v] == kUnreachable) {
        dist[v] = dist[u] + 1;
        frontier.push_back(v);
      }
    }
  }
  return dist;
}

std::vector<double> weighted_shortest_path_lengths(const Graph& g, const EdgeWeights& d,
                                                   NodeId source) {
  if (source >= g.num_nodes()) throw std::out_of_range("source node out of range");
  if (!d.matches(g)) throw std::invalid_argument("edge weights do not belong to this graph");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.num_nodes(), kInf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    auto nbrs = g.neighbors(u);
    auto ids = g.incident_edges(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const double cand = du + d[ids[i]];
      if (cand < dist[nbrs[i]]) {
        dist[nbrs[i]] = cand;
        heap.emplace(cand, nbrs[i]);
      }
    }
  }
  return dist;
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<NodeId>> parts;
  for (NodeId s = 0; s < n; ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> part{s};
    seen[s] = true;
    for (std::size_t head = 0; head < part.size(); ++head) {
      for (NodeId v : g.neighbors(part[head])) {
        if (!seen[v]) {
          seen[v] = true;
          part.push_back(v);
        }
      }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

std::vector<std::size_t> component_sizes(const Graph& g) {
  std::vector<std::size_t> sizes;
  for (const auto& part : connected_components(g)) sizes.push_back(part.size());
  return sizes;
}

double harmonic_mean_weight(const Graph& g, const EdgeWeights& d, double g_exp) {
  if (g.num_edges() == 0) throw std::invalid_argument("harmonic mean of an empty edge set");
  if (!d.matches(g)) throw std::invalid_argument("edge weights do not belong to this graph");
  double denom = 0.0;
  for (double w : d.values()) denom += std::pow(1.0 / w, g_exp);
  return static_cast<double>(g.num_edges()) / denom;
}

}  // namespace resilnet
