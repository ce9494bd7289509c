#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "resilnet/graph.hpp"
#include "resilnet/rng.hpp"

namespace resilnet {

/// Transmission settings for a cascade. With weights attached, edge (u,v)
/// transmits with probability min(tau / D(u,v), 1); otherwise with tau.
struct CascadeParams {
  double tau = 0.0;
  const EdgeWeights* weights = nullptr;

  /// Throws std::invalid_argument if tau is outside [0,1].
  void validate() const;
};

/// min(tau / d_uv, 1). Throws std::invalid_argument if d_uv <= 0.
double edge_transmission_prob(double tau, double d_uv);

/// Per-edge transmission probabilities for `g` under `params`.
std::vector<double> transmission_probs(const Graph& g, const CascadeParams& params);

/// Monte Carlo mean of a cascade quantity with its normal-approximation CI.
struct MetricEstimate {
  double mean = 0.0;
  double sample_sd = 0.0;
  std::size_t reps = 0;
  double half_width_95 = 0.0;
  /// False when the replication cap was hit before the CI target.
  bool tolerance_met = true;
};

enum class SimulationMethod {
  /// Flip each edge at most once while exploring the seed's open cluster.
  kPercolation,
  /// Discrete-time S -> I -> R evolution, one step at a time.
  kStepwise,
};

/// One cascade from `seed_node`; returns the number of new failures (the
/// seed itself is not counted), in [0, n-1].
std::size_t simulate_cascade(const Graph& g, const CascadeParams& params, NodeId seed_node,
                             RunSeed rng, SimulationMethod method = SimulationMethod::kPercolation);

/// Largest edge count expected_extent_exact will enumerate.
inline constexpr std::size_t kExactEdgeCap = 20;

/// Exact expected extent with a uniformly random seed, by enumerating all
/// 2^|E| open-edge subsets. Throws std::invalid_argument above kExactEdgeCap.
double expected_extent_exact(const Graph& g, const CascadeParams& params);

/// How a replication picks where the cascade starts.
enum class SeedSampling {
  /// One uniformly random seed node per replication.
  kUniformSeed,
  /// Sample one open-edge configuration and average the extent over every
  /// possible seed: sum_c s_c^2 / n - 1 over open clusters c. Pendant
  /// (degree-1) edges are averaged out exactly rather than sampled. Same
  /// expectation, far lower per-replication variance.
  kAllSeeds,
};

struct EstimatorOptions {
  std::size_t min_reps = 40;
  double target_half_width = 0.5;
  std::size_t max_reps = 200'000;
  double z = 1.96;
  unsigned workers = 1;
  SimulationMethod method = SimulationMethod::kPercolation;
  SeedSampling seeding = SeedSampling::kUniformSeed;
  /// Average exactly over some edges of graphs with at most
  /// kSmallGraphEdges edges (see estimate_expected_extent).
  bool average_small_graphs = true;
};

/// Expected cascade extent with a uniformly random seed node. Runs
/// options.min_reps replications, then continues one at a time until the
/// z-based half-width is within target or max_reps is reached. Replication i
/// uses rng.at(i), and results are merged in index order, so the estimate is
/// identical for any worker count.
/// With the percolation method on a graph of at most kSmallGraphEdges edges,
/// each replication averages exactly over the edges chosen by
/// small_graph_integration (weighted or not for uniform seeds, unweighted for
/// all seeds). The expectation is unchanged and rare outcomes stop producing
/// zero-variance runs.
MetricEstimate estimate_expected_extent(const Graph& g, const CascadeParams& params, RunSeed rng,
                                        const EstimatorOptions& options = {});

/// Most edges `integrated` may name; see estimate_extent_sweep.
inline constexpr std::size_t kMaxIntegratedEdges = 6;

/// Graphs with at most this many edges get exact averaging over some edges
/// in estimate_expected_extent.
inline constexpr std::size_t kSmallGraphEdges = 12;

/// Up to kMaxIntegratedEdges edges to average over exactly when g has at
/// most kSmallGraphEdges edges (none otherwise). Edges between nodes of
/// degree 2 or more come first.
std::vector<EdgeId> small_graph_integration(const Graph& g);

/// Extent estimates at several tau values from shared samples. Each
/// replication draws one uniform u_e per edge; edge e is open at tau when
/// u_e * D_e < tau (D_e = 1 without weights), which is the
/// min(tau/D_e, 1) transmission rule. Edges are merged in threshold order,
/// so one replication yields the all-seeds extent at every tau. Each tau
/// stops on its own once past min_reps with its half-width within target;
/// replications continue until every tau has stopped or max_reps is hit.
/// Results are returned in the order of `taus`.
///
/// Without weights, the edges in `integrated` are not sampled: each
/// replication averages exactly over their 2^|integrated| open/closed
/// states. Useful for a few sparse links between dense parts, which would
/// otherwise dominate the variance. Throws std::invalid_argument if
/// `integrated` is non-empty with weights or exceeds kMaxIntegratedEdges.
std::vector<MetricEstimate> estimate_extent_sweep(const Graph& g, const EdgeWeights* weights,
                                                  std::span<const double> taus, RunSeed rng,
                                                  const EstimatorOptions& options = {},
                                                  std::span<const EdgeId> integrated = {});

/// Coupled bond-percolation sampler behind estimate_extent_sweep.
class PercolationSweep {
 public:
  /// `sorted_taus` must be ascending.
  PercolationSweep(const Graph& g, const EdgeWeights* weights, std::vector<double> sorted_taus,
                   std::span<const EdgeId> integrated = {});

  /// Writes the all-seeds extent at each tau into `extent`. When `active`
  /// is nonempty only levels with active[j] != 0 are computed (others are
  /// left at 0); those values do not depend on `active`, and the stream is
  /// consumed the same way either way.
  void sample(Stream& stream, std::span<double> extent, std::span<const char> active = {});

 private:
  struct Sums {
    double ss = 0.0;  // sum of s^2 over core clusters
    double sl = 0.0;  // sum of s * l
    double ll = 0.0;  // sum of l^2
  };

  static constexpr std::size_t kLookupCells = 1024;

  /// Index of the first tau strictly above t.
  std::uint32_t bucket_of(double t) const;
  NodeId find(NodeId x);
  void reset_forest();
  void unite(EdgeId e);
  double extent_at(double tau, const Sums& sums) const;
  /// Extent at tau for the current forest, averaged over integrated edges.
  double level_extent(double tau);
  // Nested binomial open-edge counts per tau and a random edge order.
  void sample_ordered(Stream& stream, std::span<double> extent, std::span<const char> active);
  // Per-edge thresholds u_e * D_e bucketed by tau.
  void sample_bucketed(Stream& stream, std::span<double> extent, std::span<const char> active);
  // Levels past the last active one need no merging.
  static std::size_t active_end(std::span<const char> active, std::size_t levels);

  const Graph& g_;
  const EdgeWeights* weights_;
  std::vector<double> taus_;
  std::vector<EdgeId> core_;
  std::vector<EdgeId> integrated_;
  std::vector<std::uint32_t> base_pendants_;
  std::vector<std::uint32_t> pendants_;
  std::vector<std::uint32_t> lookup_;
  std::vector<std::uint32_t> bucket_;
  std::vector<std::uint32_t> bucket_start_;
  std::vector<std::uint32_t> cursor_;
  std::vector<EdgeId> order_;
  std::vector<NodeId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::size_t> open_count_;
  Sums base_;
  Sums sums_;
  double pendant_total_ = 0.0;
  std::size_t merges_ = 0;
  std::size_t full_merges_ = 0;
};

/// Reusable scratch state for repeated cascades on one graph.
class CascadeSampler {
 public:
  CascadeSampler(const Graph& g, const CascadeParams& params, bool average_small_graphs = true);

  /// Extent of a cascade from `seed_node` drawing randomness from `stream`.
  std::size_t percolation(NodeId seed_node, Stream& stream);
  std::size_t stepwise(NodeId seed_node, Stream& stream);

  /// Replication i of the estimator: uniform seed node, then one cascade.
  /// On small graphs the percolation method samples only the edges outside
  /// small_graph_integration(g) and returns the extent averaged exactly over
  /// the states of the rest.
  double replicate(RunSeed rng, SimulationMethod method);

 private:
  bool mark(NodeId v);
  NodeId find(NodeId x);
  double conditional(NodeId seed_node, Stream& stream);

  const Graph& g_;
  std::vector<double> prob_;
  double uniform_prob_ = -1.0;
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<NodeId> queue_;
  std::vector<NodeId> next_;
  std::vector<EdgeId> integrated_;
  std::vector<bool> skip_;
  std::vector<NodeId> parent_;
};

}  // namespace resilnet
