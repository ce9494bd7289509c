#pragma once

#include "resilnet/cascade.hpp"
#include "resilnet/graph.hpp"

namespace resilnet {

/// Distance-attenuated reach:
///   W = 1/(n(n-1)) * sum_{u != v} d(u,v)^-g_exp
/// with unreachable pairs contributing 0. W = 0 for n < 2.
double efficiency(const Graph& g, double g_exp = 1.0);

struct WeightedEfficiency {
  double value = 0.0;
  /// Set when value > 1, which happens if some edge is longer than the
  /// shortest path between its endpoints. The value is never clamped.
  bool exceeds_unity = false;
};

/// Efficiency on Dijkstra distances, scaled by the harmonic mean edge
/// weight H(G). Zero for an empty edge set or n < 2.
WeightedEfficiency weighted_efficiency(const Graph& g, const EdgeWeights& d, double g_exp = 1.0);

/// R = 1 - E[extent]/(n-1), estimated by Monte Carlo. The returned mean,
/// sd and half-width are on the R scale. R = 1 exactly for n < 2.
MetricEstimate resilience(const Graph& g, const CascadeParams& params, RunSeed rng,
                          const EstimatorOptions& options = {});

/// R from the exact enumeration oracle (small graphs only).
double resilience_exact(const Graph& g, const CascadeParams& params);

/// Converts an extent estimate to the resilience scale for an n-node graph.
MetricEstimate extent_to_resilience(const MetricEstimate& extent, std::size_t n);

/// F = r R + (1 - r) W.
constexpr double fitness(double resilience, double efficiency, double r) {
  return r * resilience + (1.0 - r) * efficiency;
}

}  // namespace resilnet
