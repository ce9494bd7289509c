#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "resilnet/cascade.hpp"
#include "resilnet/graph.hpp"
#include "resilnet/rng.hpp"

namespace resilnet {

/// Binary and (optionally) weighted metrics of one network at one tau.
struct NetworkRow {
  double tau = 0.0;
  double r = 0.5;
  MetricEstimate R;
  double W = 0.0;
  double F = 0.0;

  std::optional<MetricEstimate> R_weighted;
  std::optional<double> W_weighted;
  std::optional<double> F_weighted;
  bool W_weighted_exceeds_unity = false;

  double fitness_gap() const { return F_weighted ? std::abs(F - *F_weighted) : 0.0; }
  double efficiency_gap() const { return W_weighted ? std::abs(W - *W_weighted) : 0.0; }
};

/// Resilience, efficiency and fitness of `g` at each tau. When `weights` is
/// given the weighted variants are computed alongside, with transmission
/// min(tau/D, 1) and harmonic-mean-normalized efficiency. W is computed once
/// and shared across rows.
std::vector<NetworkRow> analyze_network(const Graph& g, const EdgeWeights* weights,
                                        std::span<const double> taus, double r, double g_exp,
                                        RunSeed rng, const EstimatorOptions& options = {});

}  // namespace resilnet
