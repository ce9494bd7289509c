#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include "resilnet/cascade.hpp"

using namespace resilnet;

namespace {

// Reference expected extent: every open-edge subset, BFS from every seed.
double oracle_extent(const Graph& g, const std::vector<double>& prob) {
  const std::size_t m = g.num_edges();
  const std::size_t n = g.num_nodes();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double weight = 1.0;
    for (std::size_t e = 0; e < m; ++e) weight *= (mask >> e & 1) ? prob[e] : 1.0 - prob[e];
    if (weight == 0.0) continue;
    double reached = 0.0;
    for (NodeId s = 0; s < n; ++s) {
      std::vector<bool> seen(n, false);
      std::queue<NodeId> q;
      q.push(s);
      seen[s] = true;
      while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (std::size_t e = 0; e < m; ++e) {
          if (!(mask >> e & 1)) continue;
          const Edge& ed = g.edge(static_cast<EdgeId>(e));
          const NodeId other = ed.u == u ? ed.v : ed.v == u ? ed.u : u;
          if (other != u && !seen[other]) {
            seen[other] = true;
            reached += 1.0;
            q.push(other);
          }
        }
      }
    }
    total += weight * reached / static_cast<double>(n);
  }
  return total;
}

Graph from_mask(std::size_t n, std::uint32_t mask) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::uint32_t bit = 0;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v, ++bit) {
      if (mask >> bit & 1) pairs.emplace_back(u, v);
    }
  }
  return Graph(n, pairs);
}

Graph random_graph(std::size_t n, std::size_t max_edges, std::mt19937_64& gen) {
  std::vector<std::pair<NodeId, NodeId>> all;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) all.emplace_back(u, v);
  }
  std::shuffle(all.begin(), all.end(), gen);
  std::uniform_int_distribution<std::size_t> count(1, std::min(max_edges, all.size()));
  all.resize(count(gen));
  return Graph(n, all);
}

const Graph kK2(2, {{0, 1}});
const Graph kK3(3, {{0, 1}, {0, 2}, {1, 2}});

}  // namespace

TEST_CASE("transmission probability") {
  CHECK(edge_transmission_prob(0.5, 2.0) == 0.25);
  CHECK(edge_transmission_prob(0.5, 0.25) == 1.0);
  CHECK(edge_transmission_prob(0.37, 1.0) == 0.37);
  CHECK_THROWS_AS(edge_transmission_prob(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(CascadeParams{1.5}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(CascadeParams{-0.1}.validate(), std::invalid_argument);
}

TEST_CASE("exact extent on small graphs") {
  CHECK(expected_extent_exact(kK2, {0.5}) == doctest::Approx(0.5));
  CHECK(expected_extent_exact(kK3, {0.5}) == doctest::Approx(1.25));
  CHECK(expected_extent_exact(kK3, {0.0}) == 0.0);
  CHECK(expected_extent_exact(kK3, {1.0}) == doctest::Approx(2.0));

  std::vector<std::pair<NodeId, NodeId>> many;
  for (NodeId u = 0; u < 8; ++u) {
    for (NodeId v = u + 1; v < 8; ++v) many.emplace_back(u, v);
  }
  CHECK_THROWS_AS(expected_extent_exact(Graph(8, many), {0.5}), std::invalid_argument);
}

TEST_CASE("exact extent matches the subset-BFS oracle") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 60; ++trial) {
    const Graph g = random_graph(2 + trial % 5, 8, gen);
    for (double tau : {0.1, 0.5, 0.85}) {
      const CascadeParams params{tau};
      CHECK(expected_extent_exact(g, params) ==
            doctest::Approx(oracle_extent(g, transmission_probs(g, params))).epsilon(1e-12));
    }
    std::uniform_real_distribution<double> dist(0.2, 3.0);
    std::vector<double> d(g.num_edges());
    for (double& x : d) x = dist(gen);
    const EdgeWeights w(g, d);
    const CascadeParams weighted{0.6, &w};
    CHECK(expected_extent_exact(g, weighted) ==
          doctest::Approx(oracle_extent(g, transmission_probs(g, weighted))).epsilon(1e-12));
  }
}

TEST_CASE("single cascades at the boundaries") {
  const Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
  for (auto method : {SimulationMethod::kPercolation, SimulationMethod::kStepwise}) {
    for (std::uint64_t i = 0; i < 20; ++i) {
      CHECK(simulate_cascade(path, {0.0}, static_cast<NodeId>(i % 4), {5, i}, method) == 0);
      CHECK(simulate_cascade(path, {1.0}, static_cast<NodeId>(i % 4), {5, i}, method) == 3);
    }
  }
  const Graph split(4, {{0, 1}});
  CHECK(simulate_cascade(split, {1.0}, 0, {1, 0}) == 1);
  CHECK(simulate_cascade(split, {1.0}, 3, {1, 0}) == 0);
}

TEST_CASE("stopping-rule estimator boundaries") {
  for (auto seeding : {SeedSampling::kUniformSeed, SeedSampling::kAllSeeds}) {
    EstimatorOptions opts;
    opts.seeding = seeding;
    const MetricEstimate zero = estimate_expected_extent(kK3, {0.0}, {3, 0}, opts);
    CHECK(zero.mean == 0.0);
    CHECK(zero.sample_sd == 0.0);
    CHECK(zero.reps == 40);
    CHECK(zero.tolerance_met);

    const Graph path(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
    const MetricEstimate full = estimate_expected_extent(path, {1.0}, {3, 0}, opts);
    CHECK(full.mean == 4.0);
    CHECK(full.sample_sd == 0.0);
    CHECK(full.reps == 40);
  }
}

TEST_CASE("K3 at tau 0.5 is estimated within tolerance") {
  for (auto seeding : {SeedSampling::kUniformSeed, SeedSampling::kAllSeeds}) {
    EstimatorOptions opts;
    opts.seeding = seeding;
    const MetricEstimate est = estimate_expected_extent(kK3, {0.5}, {42, 0}, opts);
    CHECK(est.reps >= 40);
    CHECK(est.half_width_95 <= 0.5);
    CHECK(est.half_width_95 == doctest::Approx(1.96 * est.sample_sd / std::sqrt(double(est.reps))));
    CHECK(std::abs(est.mean - 1.25) <= 0.5);
  }
}

TEST_CASE("Monte Carlo covers the exact value in at least 93% of trials") {
  std::mt19937_64 gen(22);
  for (auto seeding : {SeedSampling::kUniformSeed, SeedSampling::kAllSeeds}) {
    EstimatorOptions opts;
    opts.seeding = seeding;
    std::size_t covered = 0;
    std::size_t trials = 0;
    for (int t = 0; t < 60; ++t) {
      const Graph g = random_graph(2 + t % 6, 12, gen);
      for (int j = 1; j <= 9; ++j) {
        const CascadeParams params{0.1 * j};
        const double exact = expected_extent_exact(g, params);
        const MetricEstimate est =
            estimate_expected_extent(g, params, {1000 + static_cast<std::uint64_t>(t), std::uint64_t(j)}, opts);
        ++trials;
        if (std::abs(est.mean - exact) <= est.half_width_95 + 1e-12) ++covered;
      }
    }
    CHECK(static_cast<double>(covered) >= 0.93 * static_cast<double>(trials));
  }
}

TEST_CASE("exact extent is monotone in tau and in edges on all graphs up to 5 nodes") {
  for (std::size_t n = 2; n <= 5; ++n) {
    const std::uint32_t pairs = static_cast<std::uint32_t>(n * (n - 1) / 2);
    for (std::uint32_t mask = 0; mask < (1U << pairs); ++mask) {
      const Graph g = from_mask(n, mask);
      double prev = -1.0;
      for (double tau : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
        const double x = expected_extent_exact(g, {tau});
        CHECK(x >= prev - 1e-12);
        prev = x;
      }
      for (std::uint32_t bit = 0; bit < pairs; ++bit) {
        if (mask >> bit & 1) continue;
        const Graph h = from_mask(n, mask | (1U << bit));
        for (double tau : {0.3, 0.7}) {
          CHECK(expected_extent_exact(h, {tau}) >= expected_extent_exact(g, {tau}) - 1e-12);
        }
      }
    }
  }
}

TEST_CASE("estimates do not depend on the worker count") {
  const Graph g(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}, {0, 3}});
  for (auto seeding : {SeedSampling::kUniformSeed, SeedSampling::kAllSeeds}) {
    for (auto method : {SimulationMethod::kPercolation, SimulationMethod::kStepwise}) {
      EstimatorOptions one;
      one.seeding = seeding;
      one.method = method;
      one.target_half_width = 0.05;
      EstimatorOptions four = one;
      four.workers = 4;
      const MetricEstimate a = estimate_expected_extent(g, {0.4}, {77, 0}, one);
      const MetricEstimate b = estimate_expected_extent(g, {0.4}, {77, 0}, four);
      CHECK(a.mean == b.mean);
      CHECK(a.sample_sd == b.sample_sd);
      CHECK(a.reps == b.reps);
    }
  }
  const double taus[] = {0.9, 0.2, 0.5};
  EstimatorOptions one;
  EstimatorOptions four;
  four.workers = 4;
  const auto a = estimate_extent_sweep(g, nullptr, taus, {9, 0}, one);
  const auto b = estimate_extent_sweep(g, nullptr, taus, {9, 0}, four);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].mean == b[i].mean);
    CHECK(a[i].reps == b[i].reps);
  }
}

TEST_CASE("stepwise and percolation simulations agree") {
  const Graph g(6, {{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}});
  for (double tau : {0.2, 0.5, 0.8}) {
    EstimatorOptions perc;
    perc.target_half_width = 0.05;
    EstimatorOptions step = perc;
    step.method = SimulationMethod::kStepwise;
    const MetricEstimate a = estimate_expected_extent(g, {tau}, {1, 0}, perc);
    const MetricEstimate b = estimate_expected_extent(g, {tau}, {2, 0}, step);
    CHECK(std::abs(a.mean - b.mean) <= 1.5 * std::hypot(a.half_width_95, b.half_width_95));
  }
}

TEST_CASE("sweep estimates match the exact extent") {
  std::mt19937_64 gen(23);
  const double taus[] = {0.0, 0.15, 0.4, 0.65, 0.9, 1.0};
  std::size_t covered = 0;
  std::size_t trials = 0;
  for (int t = 0; t < 40; ++t) {
    const Graph g = random_graph(3 + t % 5, 10, gen);
    std::uniform_real_distribution<double> dist(0.3, 2.5);
    std::vector<double> d(g.num_edges());
    for (double& x : d) x = dist(gen);
    const EdgeWeights w(g, d);
    for (const EdgeWeights* weights : {static_cast<const EdgeWeights*>(nullptr), &w}) {
      const auto est = estimate_extent_sweep(g, weights, taus, {500, std::uint64_t(t)});
      REQUIRE(est.size() == std::size(taus));
      for (std::size_t j = 0; j < std::size(taus); ++j) {
        const double exact = expected_extent_exact(g, {taus[j], weights});
        ++trials;
        if (std::abs(est[j].mean - exact) <= est[j].half_width_95 + 1e-9) ++covered;
      }
    }
  }
  CHECK(static_cast<double>(covered) >= 0.93 * static_cast<double>(trials));
}

TEST_CASE("pendant edges are averaged out exactly") {
  // A star is all pendants around one hub: zero variance, exact mean.
  std::vector<std::pair<NodeId, NodeId>> spokes;
  for (NodeId v = 1; v < 9; ++v) spokes.emplace_back(0, v);
  const Graph star(9, spokes);
  const double taus[] = {0.3, 0.7};
  const auto est = estimate_extent_sweep(star, nullptr, taus, {1, 0});
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(est[j].sample_sd == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(est[j].reps == 40);
  }
  // 8 spokes: too many for the exact oracle, so use the star's own form.
  for (std::size_t j = 0; j < 2; ++j) {
    const double t = taus[j];
    const double hub = 8 * t;
    const double leaf = t * (1 + 7 * t);
    CHECK(est[j].mean == doctest::Approx((hub + 8 * leaf) / 9.0));
  }
}

TEST_CASE("integrated edges give the same expectation") {
  // Two triangles joined by two links.
  const Graph g(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {0, 3}, {2, 5}});
  const EdgeId links[] = {g.find_edge(0, 3), g.find_edge(2, 5)};
  const double taus[] = {0.2, 0.5, 0.8, 1.0};
  EstimatorOptions tight;
  tight.target_half_width = 0.02;
  const auto sampled = estimate_extent_sweep(g, nullptr, taus, {4, 0}, tight);
  const auto averaged = estimate_extent_sweep(g, nullptr, taus, {4, 0}, tight, links);
  for (std::size_t j = 0; j < std::size(taus); ++j) {
    const double exact = expected_extent_exact(g, {taus[j]});
    CHECK(std::abs(averaged[j].mean - exact) <= averaged[j].half_width_95 + 1e-9);
    CHECK(averaged[j].sample_sd <= 1.05 * sampled[j].sample_sd + 1e-12);
  }
  // All edges integrated: no randomness left.
  const Graph path(4, {{0, 1}, {1, 2}, {2, 3}});
  const EdgeId all[] = {0, 1, 2};
  const auto exact_path = estimate_extent_sweep(path, nullptr, taus, {4, 0}, {}, all);
  for (std::size_t j = 0; j < std::size(taus); ++j) {
    CHECK(exact_path[j].mean == doctest::Approx(expected_extent_exact(path, {taus[j]})));
    CHECK(exact_path[j].sample_sd == doctest::Approx(0.0).epsilon(1e-9));
  }

  const EdgeWeights w = EdgeWeights::uniform(path, 1.0);
  CHECK_THROWS_AS(estimate_extent_sweep(path, &w, taus, {4, 0}, {}, all), std::invalid_argument);
  const EdgeId too_many[kMaxIntegratedEdges + 1] = {};
  CHECK_THROWS_AS(estimate_extent_sweep(g, nullptr, taus, {4, 0}, {}, too_many),
                  std::invalid_argument);
}

TEST_CASE("sweep results follow the caller's tau order") {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const double up[] = {0.0, 1.0};
  const double down[] = {1.0, 0.0};
  const auto a = estimate_extent_sweep(g, nullptr, up, {2, 0});
  const auto b = estimate_extent_sweep(g, nullptr, down, {2, 0});
  CHECK(a[0].mean == 0.0);
  CHECK(a[1].mean == 3.0);
  CHECK(b[0].mean == 3.0);
  CHECK(b[1].mean == 0.0);
}

TEST_CASE("random streams are reproducible and distinct") {
  Stream a = RunSeed{1, 2}.stream();
  Stream b = RunSeed{1, 2}.stream();
  Stream c = RunSeed{1, 3}.stream();
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(RunSeed{1, 2}.child(5).master != RunSeed{1, 2}.child(6).master);
  Stream u = RunSeed{9, 9}.stream();
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK((v >= 0.0 && v < 1.0));
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("small graphs average over inner edges first") {
  const Graph paw(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}});
  const auto chosen = small_graph_integration(paw);
  REQUIRE(chosen.size() == 4);
  CHECK(paw.edge(chosen.back()) == Edge{2, 3});

  std::mt19937_64 gen(41);
  CHECK(small_graph_integration(random_graph(9, 12, gen)).size() <= kMaxIntegratedEdges);
  std::vector<std::pair<NodeId, NodeId>> ring;
  for (NodeId i = 0; i < 13; ++i) ring.emplace_back(i, static_cast<NodeId>((i + 1) % 13));
  CHECK(small_graph_integration(Graph(13, ring)).empty());

  // With every edge averaged the only randomness left is the seed.
  const MetricEstimate est = estimate_expected_extent(kK3, {0.5}, {5, 0});
  CHECK(est.sample_sd == 0.0);
  CHECK(est.mean == doctest::Approx(1.25));
}

TEST_CASE("inactive sweep levels do not change active ones") {
  std::mt19937_64 gen(43);
  const std::vector<double> taus = {0.1, 0.3, 0.5, 0.7, 0.9};
  for (int trial = 0; trial < 20; ++trial) {
    // Dense graphs take the ordered path, sparse ones the bucketed path.
    const Graph g = random_graph(12, trial % 2 == 0 ? 66 : 15, gen);
    PercolationSweep full(g, nullptr, taus);
    PercolationSweep part(g, nullptr, taus);
    const std::vector<char> active = {0, 1, 0, 1, 0};
    std::vector<double> a(5), b(5);
    Stream s1 = RunSeed{44, std::uint64_t(trial)}.stream();
    Stream s2 = RunSeed{44, std::uint64_t(trial)}.stream();
    full.sample(s1, a);
    part.sample(s2, b, active);
    CHECK(b[1] == a[1]);
    CHECK(b[3] == a[3]);
    CHECK(b[4] == 0.0);
  }
}
