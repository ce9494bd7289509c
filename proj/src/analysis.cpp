#include "resilnet/analysis.hpp"

#include <bit>
#include <stdexcept>

#include "resilnet/metrics.hpp"

namespace resilnet {

std::vector<NetworkRow> analyze_network(const Graph& g, const EdgeWeights* weights,
                                        std::span<const double> taus, double r, double g_exp,
                                        RunSeed rng, const EstimatorOptions& options) {
  if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0,1]");
  if (weights != nullptr && !weights->matches(g)) {
    throw std::invalid_argument("edge weights do not belong to this graph");
  }
  const double w_binary = efficiency(g, g_exp);
  std::optional<WeightedEfficiency> w_weighted;
  if (weights != nullptr) w_weighted = weighted_efficiency(g, *weights, g_exp);

  std::vector<MetricEstimate> extent_binary;
  std::vector<MetricEstimate> extent_weighted;
  if (options.seeding == SeedSampling::kAllSeeds) {
    extent_binary = estimate_extent_sweep(g, nullptr, taus, rng.child(0), options);
    if (weights != nullptr) {
      extent_weighted = estimate_extent_sweep(g, weights, taus, rng.child(1), options);
    }
  } else {
    for (double tau : taus) {
      const RunSeed seed = rng.child(std::bit_cast<std::uint64_t>(tau));
      extent_binary.push_back(estimate_expected_extent(g, CascadeParams{tau}, seed.child(0), options));
      if (weights != nullptr) {
        extent_weighted.push_back(
            estimate_expected_extent(g, CascadeParams{tau, weights}, seed.child(1), options));
      }
    }
  }

  std::vector<NetworkRow> rows;
  for (std::size_t t = 0; t < taus.size(); ++t) {
    NetworkRow row;
    row.tau = taus[t];
    row.r = r;
    row.R = extent_to_resilience(extent_binary[t], g.num_nodes());
    row.W = w_binary;
    row.F = fitness(row.R.mean, row.W, r);
    if (weights != nullptr) {
      row.R_weighted = extent_to_resilience(extent_weighted[t], g.num_nodes());
      row.W_weighted = w_weighted->value;
      row.W_weighted_exceeds_unity = w_weighted->exceeds_unity;
      row.F_weighted = fitness(row.R_weighted->mean, w_weighted->value, r);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace resilnet
