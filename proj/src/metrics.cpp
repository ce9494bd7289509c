#include "resilnet/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <vector>

namespace resilnet {

namespace {

// Per-distance attenuation d^-g_exp for d in [0, n), with index 0 unused.
std::vector<double> attenuation_table(std::size_t n, double g_exp) {
  std::vector<double> att(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    att[d] = g_exp == 1.0 ? 1.0 / static_cast<double>(d) : std::pow(static_cast<double>(d), -g_exp);
  }
  return att;
}

double reach_by_queue(const Graph& g, const std::vector<double>& att) {
  double total = 0.0;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    for (std::uint32_t d : shortest_path_lengths(g, s)) {
      if (d != 0 && d != kUnreachable) total += att[d];
    }
  }
  return total;
}

// Level-synchronous BFS on adjacency bitsets; cheaper than the queue BFS
// once the graph is dense.
double reach_by_bitsets(const Graph& g, const std::vector<double>& att) {
  const std::size_t n = g.num_nodes();
  const std::size_t words = (n + 63) / 64;
  std::vector<std::uint64_t> rows(n * words, 0);
  for (const Edge& e : g.edges()) {
    rows[e.u * words + e.v / 64] |= std::uint64_t{1} << (e.v % 64);
    rows[e.v * words + e.u / 64] |= std::uint64_t{1} << (e.u % 64);
  }
  std::vector<std::uint64_t> visited(words), frontier(words), next(words);
  double total = 0.0;
  for (NodeId s = 0; s < n; ++s) {
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    visited[s / 64] = frontier[s / 64] = std::uint64_t{1} << (s % 64);
    for (std::size_t d = 1;; ++d) {
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t w = 0; w < words; ++w) {
        for (std::uint64_t bits = frontier[w]; bits != 0; bits &= bits - 1) {
          const std::size_t u = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          const std::uint64_t* row = rows.data() + u * words;
          for (std::size_t x = 0; x < words; ++x) next[x] |= row[x];
        }
      }
      std::size_t reached = 0;
      for (std::size_t w = 0; w < words; ++w) {
        next[w] &= ~visited[w];
        visited[w] |= next[w];
        reached += static_cast<std::size_t>(std::popcount(next[w]));
      }
      if (reached == 0) break;
      total += static_cast<double>(reached) * att[d];
      frontier.swap(next);
    }
  }
  return total;
}

}  // namespace

double efficiency(const Graph& g, double g_exp) {
  const std::size_t n = g.num_nodes();
  if (n < 2) return 0.0;
  const auto att = attenuation_table(n, g_exp);
  const double queue_cost = static_cast<double>(n) * static_cast<double>(n + 2 * g.num_edges());
  const double bitset_cost = static_cast<double>(n) * static_cast<double>(n) *
                             static_cast<double>((n + 63) / 64);
  const double total = bitset_cost < queue_cost ? reach_by_bitsets(g, att) : reach_by_queue(g, att);
  return total / (static_cast<double>(n) * static_cast<double>(n - 1));
}

WeightedEfficiency weighted_efficiency(const Graph& g, const EdgeWeights& d, double g_exp) {
  const std::size_t n = g.num_nodes();
  WeightedEfficiency out;
  if (n < 2 || g.num_edges() == 0) return out;
  const double h = harmonic_mean_weight(g, d, g_exp);
  double total = 0.0;
  for (NodeId s = 0; s < n; ++s) {
    const auto dist = weighted_shortest_path_lengths(g, d, s);
    for (NodeId v = 0; v < n; ++v) {
      if (v != s && std::isfinite(dist[v])) total += std::pow(dist[v], -g_exp);
    }
  }
  out.value = h * total / (static_cast<double>(n) * static_cast<double>(n - 1));
  out.exceeds_unity = out.value > 1.0 + 1e-12;
  return out;
}

MetricEstimate extent_to_resilience(const MetricEstimate& extent, std::size_t n) {
  MetricEstimate r = extent;
  if (n < 2) {
    r.mean = 1.0;
    r.sample_sd = 0.0;
    r.half_width_95 = 0.0;
    return r;
  }
  const double scale = 1.0 / static_cast<double>(n - 1);
  r.mean = 1.0 - extent.mean * scale;
  r.sample_sd = extent.sample_sd * scale;
  r.half_width_95 = extent.half_width_95 * scale;
  return r;
}

MetricEstimate resilience(const Graph& g, const CascadeParams& params, RunSeed rng,
                          const EstimatorOptions& options) {
  if (g.num_nodes() < 2) {
    params.validate();
    return extent_to_resilience(MetricEstimate{}, g.num_nodes());
  }
  return extent_to_resilience(estimate_expected_extent(g, params, rng, options), g.num_nodes());
}

double resilience_exact(const Graph& g, const CascadeParams& params) {
  const std::size_t n = g.num_nodes();
  if (n < 2) return 1.0;
  return 1.0 - expected_extent_exact(g, params) / static_cast<double>(n - 1);
}

}  // namespace resilnet
