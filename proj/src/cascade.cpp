#include "resilnet/cascade.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>

namespace resilnet {

void CascadeParams::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in [0,1], got " + std::to_string(tau));
  }
}

double edge_transmission_prob(double tau, double d_uv) {
  if (!(d_uv > 0.0)) {
    throw std::invalid_argument("distance weight must be positive, got " + std::to_string(d_uv));
  }
  return std::min(tau / d_uv, 1.0);
}

std::vector<double> transmission_probs(const Graph& g, const CascadeParams& params) {
  params.validate();
  std::vector<double> prob(g.num_edges(), params.tau);
  if (params.weights != nullptr) {
    if (!params.weights->matches(g)) {
      throw std::invalid_argument("edge weights do not belong to this graph");
    }
    for (EdgeId e = 0; e < prob.size(); ++e) {
      prob[e] = edge_transmission_prob(params.tau, (*params.weights)[e]);
    }
  }
  return prob;
}

std::vector<EdgeId> small_graph_integration(const Graph& g) {
  std::vector<EdgeId> out;
  if (g.num_edges() > kSmallGraphEdges) return out;
  for (int pass = 0; pass < 2; ++pass) {
    for (EdgeId e = 0; e < g.num_edges() && out.size() < kMaxIntegratedEdges; ++e) {
      const Edge& ed = g.edge(e);
      const bool inner = g.degree(ed.u) > 1 && g.degree(ed.v) > 1;
      if (inner == (pass == 0)) out.push_back(e);
    }
  }
  return out;
}

CascadeSampler::CascadeSampler(const Graph& g, const CascadeParams& params, bool average_small_graphs)
    : g_(g), prob_(transmission_probs(g, params)), stamp_(g.num_nodes(), 0) {
  if (params.weights == nullptr) uniform_prob_ = params.tau;
  queue_.reserve(g.num_nodes());
  next_.reserve(g.num_nodes());
  if (average_small_graphs) integrated_ = small_graph_integration(g);
  if (!integrated_.empty()) {
    skip_.assign(g.num_edges(), false);
    for (EdgeId e : integrated_) skip_[e] = true;
    parent_.resize(g.num_nodes());
  }
}

NodeId CascadeSampler::find(NodeId x) {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

double CascadeSampler::conditional(NodeId seed_node, Stream& stream) {
  const std::size_t n = g_.num_nodes();
  std::iota(parent_.begin(), parent_.end(), NodeId{0});
  for (EdgeId e = 0; e < g_.num_edges(); ++e) {
    if (skip_[e] || !(stream.uniform() < prob_[e])) continue;
    const NodeId a = find(g_.edge(e).u);
    const NodeId b = find(g_.edge(e).v);
    if (a != b) parent_[b] = a;
  }
  // Sampled clusters become the nodes of a small graph on the integrated
  // edges; the seed's extent is averaged over all 2^B states of those edges.
  const std::size_t b = integrated_.size();
  NodeId roots[2 * kMaxIntegratedEdges];
  double weight[2 * kMaxIntegratedEdges];
  std::size_t ends[kMaxIntegratedEdges][2];
  std::size_t local = 0;
  auto local_of = [&](NodeId r) {
    for (std::size_t i = 0; i < local; ++i) {
      if (roots[i] == r) return i;
    }
    roots[local] = r;
    weight[local] = 0.0;
    return local++;
  };
  for (std::size_t i = 0; i < b; ++i) {
    ends[i][0] = local_of(find(g_.edge(integrated_[i]).u));
    ends[i][1] = local_of(find(g_.edge(integrated_[i]).v));
  }
  const NodeId seed_root = find(seed_node);
  std::size_t seed_size = 0;
  for (NodeId v = 0; v < n; ++v) {
    const NodeId r = find(v);
    if (r == seed_root) ++seed_size;
    for (std::size_t i = 0; i < local; ++i) {
      if (roots[i] == r) weight[i] += 1.0;
    }
  }
  std::size_t seed_local = local;
  for (std::size_t i = 0; i < local; ++i) {
    if (roots[i] == seed_root) seed_local = i;
  }
  if (seed_local == local) return static_cast<double>(seed_size - 1);

  double total = 0.0;
  std::size_t up[2 * kMaxIntegratedEdges];
  for (std::uint32_t mask = 0; mask < (1U << b); ++mask) {
    double w = 1.0;
    for (std::size_t i = 0; i < b; ++i) w *= (mask >> i & 1U) ? prob_[integrated_[i]] : 1.0 - prob_[integrated_[i]];
    if (w == 0.0) continue;
    std::iota(up, up + local, std::size_t{0});
    auto top = [&](std::size_t x) {
      while (up[x] != x) x = up[x];
      return x;
    };
    for (std::size_t i = 0; i < b; ++i) {
      if (mask >> i & 1U) up[top(ends[i][0])] = top(ends[i][1]);
    }
    const std::size_t s = top(seed_local);
    double size = 0.0;
    for (std::size_t i = 0; i < local; ++i) {
      if (top(i) == s) size += weight[i];
    }
    total += w * (size - 1.0);
  }
  return total;
}

bool CascadeSampler::mark(NodeId v) {
  if (stamp_[v] == epoch_) return false;
  stamp_[v] = epoch_;
  return true;
}

std::size_t CascadeSampler::percolation(NodeId seed_node, Stream& stream) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  queue_.clear();
  queue_.push_back(seed_node);
  mark(seed_node);
  // An edge is only sampled when it leads to an unreached node, so each edge
  // is decided at most once and the cluster grown is the seed's open cluster.
  for (std::size_t head = 0; head < queue_.size(); ++head) {
    const NodeId u = queue_[head];
    auto nbrs = g_.neighbors(u);
    auto ids = g_.incident_edges(u);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const NodeId v = nbrs[i];
      if (stamp_[v] == epoch_) continue;
      const double p = uniform_prob_ >= 0.0 ? uniform_prob_ : prob_[ids[i]];
      if (stream.uniform() < p) {
        stamp_[v] = epoch_;
        queue_.push_back(v);
      }
    }
  }
  return queue_.size() - 1;
}

std::size_t CascadeSampler::stepwise(NodeId seed_node, Stream& stream) {
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  // stamp == epoch means the node has left S (it is I or R).
  std::vector<NodeId>& infected = queue_;
  infected.clear();
  infected.push_back(seed_node);
  mark(seed_node);
  std::size_t new_cases = 0;
  while (!infected.empty()) {
    next_.clear();
    for (NodeId u : infected) {
      auto nbrs = g_.neighbors(u);
      auto ids = g_.incident_edges(u);
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const NodeId v = nbrs[i];
        if (stamp_[v] == epoch_) continue;
        if (stream.uniform() < prob_[ids[i]]) {
          stamp_[v] = epoch_;
          next_.push_back(v);
        }
      }
    }
    new_cases += next_.size();
    infected.swap(next_);
  }
  return new_cases;
}

double CascadeSampler::replicate(RunSeed rng, SimulationMethod method) {
  Stream stream = rng.stream();
  const auto seed_node = static_cast<NodeId>(stream.below(g_.num_nodes()));
  if (method == SimulationMethod::kStepwise) return static_cast<double>(stepwise(seed_node, stream));
  if (!integrated_.empty()) return conditional(seed_node, stream);
  return static_cast<double>(percolation(seed_node, stream));
}

std::size_t simulate_cascade(const Graph& g, const CascadeParams& params, NodeId seed_node,
                             RunSeed rng, SimulationMethod method) {
  if (seed_node >= g.num_nodes()) throw std::out_of_range("seed node out of range");
  CascadeSampler sampler(g, params, false);
  Stream stream = rng.stream();
  return method == SimulationMethod::kPercolation ? sampler.percolation(seed_node, stream)
                                                  : sampler.stepwise(seed_node, stream);
}

double expected_extent_exact(const Graph& g, const CascadeParams& params) {
  const std::size_t m = g.num_edges();
  if (m > kExactEdgeCap) {
    throw std::invalid_argument("graph has " + std::to_string(m) +
                                " edges; exact enumeration is capped at " +
                                std::to_string(kExactEdgeCap) + ", use the Monte Carlo estimator");
  }
  const std::size_t n = g.num_nodes();
  if (n == 0) return 0.0;
  const std::vector<double> prob = transmission_probs(g, params);
  std::vector<NodeId> parent(n);
  std::vector<std::size_t> size(n);
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double weight = 1.0;
    for (std::size_t e = 0; e < m && weight > 0.0; ++e) {
      weight *= (mask >> e & 1U) ? prob[e] : 1.0 - prob[e];
    }
    if (weight == 0.0) continue;
    std::iota(parent.begin(), parent.end(), NodeId{0});
    std::fill(size.begin(), size.end(), 1);
    for (std::size_t e = 0; e < m; ++e) {
      if (!(mask >> e & 1U)) continue;
      NodeId a = find(g.edge(static_cast<EdgeId>(e)).u);
      NodeId b = find(g.edge(static_cast<EdgeId>(e)).v);
      if (a == b) continue;
      if (size[a] < size[b]) std::swap(a, b);
      parent[b] = a;
      size[a] += size[b];
    }
    // A uniform seed lands in a cluster of size s with probability s/n and
    // then infects the other s-1 members.
    double extent = 0.0;
    for (NodeId v = 0; v < n; ++v) {
      if (find(v) == v) extent += static_cast<double>(size[v]) * static_cast<double>(size[v] - 1);
    }
    total += weight * extent / static_cast<double>(n);
  }
  return total;
}

namespace {

void run_block(const Graph& g, const CascadeParams& params, RunSeed rng, const EstimatorOptions& options,
               std::size_t begin, std::size_t end, std::vector<double>& out) {
  const SimulationMethod method = options.method;
  const unsigned workers = options.workers;
  const std::size_t count = end - begin;
  if (workers <= 1 || count < 2 * workers) {
    CascadeSampler sampler(g, params, options.average_small_graphs);
    for (std::size_t i = begin; i < end; ++i) {
      out[i - begin] = sampler.replicate(rng.at(i), method);
    }
    return;
  }
  std::vector<std::jthread> threads;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = begin + w * chunk;
    const std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi] {
      CascadeSampler sampler(g, params, options.average_small_graphs);
      for (std::size_t i = lo; i < hi; ++i) {
        out[i - begin] = sampler.replicate(rng.at(i), method);
      }
    });
  }
}

}  // namespace

MetricEstimate estimate_expected_extent(const Graph& g, const CascadeParams& params, RunSeed rng,
                                        const EstimatorOptions& options) {
  params.validate();
  if (g.num_nodes() == 0) throw std::invalid_argument("cascade estimate on an empty graph");
  if (options.seeding == SeedSampling::kAllSeeds) {
    const double taus[] = {params.tau};
    const std::vector<EdgeId> integrated =
        params.weights == nullptr && options.average_small_graphs ? small_graph_integration(g)
                                                                  : std::vector<EdgeId>{};
    return estimate_extent_sweep(g, params.weights, taus, rng, options, integrated)[0];
  }
  const std::size_t min_reps = std::max<std::size_t>(options.min_reps, 2);
  const std::size_t max_reps = std::max(options.max_reps, min_reps);

  // Welford accumulation in replication-index order.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t reps = 0;
  auto half_width = [&] {
    const double var = reps > 1 ? m2 / static_cast<double>(reps - 1) : 0.0;
    return options.z * std::sqrt(var / static_cast<double>(reps));
  };

  auto accumulate = [&](double x) {
    ++reps;
    const double delta = x - mean;
    mean += delta / static_cast<double>(reps);
    m2 += delta * (x - mean);
    return reps >= min_reps && half_width() <= options.target_half_width;
  };

  if (options.workers <= 1) {
    CascadeSampler sampler(g, params, options.average_small_graphs);
    for (std::size_t i = 0; i < max_reps; ++i) {
      if (accumulate(sampler.replicate(rng.at(i), options.method))) break;
    }
  } else {
    // Workers fill fixed index ranges; replications past the stopping point
    // are computed and discarded, which keeps the result worker-independent.
    std::vector<double> block;
    std::size_t next = 0;
    std::size_t block_size = min_reps;
    bool done = false;
    while (!done && next < max_reps) {
      const std::size_t end = std::min(max_reps, next + block_size);
      block.assign(end - next, 0.0);
      run_block(g, params, rng, options, next, end, block);
      for (std::size_t i = next; i < end && !done; ++i) done = accumulate(block[i - next]);
      next = end;
      block_size = std::min<std::size_t>(std::max<std::size_t>(block_size * 2, 256), 1 << 16);
    }
  }

  MetricEstimate est;
  est.mean = mean;
  est.reps = reps;
  est.sample_sd = reps > 1 ? std::sqrt(m2 / static_cast<double>(reps - 1)) : 0.0;
  est.half_width_95 = half_width();
  est.tolerance_met = est.half_width_95 <= options.target_half_width;
  return est;
}

PercolationSweep::PercolationSweep(const Graph& g, const EdgeWeights* weights,
                                   std::vector<double> sorted_taus,
                                   std::span<const EdgeId> integrated)
    : g_(g),
      weights_(weights),
      taus_(std::move(sorted_taus)),
      pendants_(g.num_nodes(), 0),
      parent_(g.num_nodes()),
      size_(g.num_nodes()),
      open_count_(taus_.size()) {
  if (weights_ != nullptr && !weights_->matches(g)) {
    throw std::invalid_argument("edge weights do not belong to this graph");
  }
  if (!std::is_sorted(taus_.begin(), taus_.end())) {
    throw std::invalid_argument("sweep taus must be ascending");
  }
  if (!integrated.empty() && weights_ != nullptr) {
    throw std::invalid_argument("integrated edges are only supported without weights");
  }
  if (integrated.size() > kMaxIntegratedEdges) {
    throw std::invalid_argument("at most " + std::to_string(kMaxIntegratedEdges) +
                                " edges can be integrated");
  }
  for (EdgeId e : integrated) {
    if (e >= g.num_edges()) throw std::invalid_argument("integrated edge id out of range");
  }
  const std::size_t n = g.num_nodes();
  // A degree-1 node whose neighbour has other edges is peeled off and
  // integrated out: given the rest, it joins its neighbour's cluster with
  // probability tau independently of everything else. Only done without
  // weights, where that probability is the same for every pendant edge.
  std::vector<bool> peeled(n, false);
  if (weights_ == nullptr) {
    for (NodeId v = 0; v < n; ++v) {
      if (g.degree(v) != 1) continue;
      const NodeId hub = g.neighbors(v)[0];
      if (g.degree(hub) > 1) {
        peeled[v] = true;
        ++pendants_[hub];
      }
    }
  }
  std::vector<bool> skip(g.num_edges(), false);
  for (EdgeId e : integrated) skip[e] = true;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edge(e);
    if (peeled[ed.u] || peeled[ed.v]) continue;  // already averaged out
    if (skip[e]) {
      if (std::find(integrated_.begin(), integrated_.end(), e) == integrated_.end()) {
        integrated_.push_back(e);
      }
    } else {
      core_.push_back(e);
    }
  }
  bucket_.resize(core_.size());
  // lookup_[c] = first tau index above the left edge of cell c of [0,1).
  lookup_.resize(kLookupCells);
  for (std::size_t c = 0; c < kLookupCells; ++c) {
    const double left = static_cast<double>(c) / kLookupCells;
    lookup_[c] = static_cast<std::uint32_t>(
        std::upper_bound(taus_.begin(), taus_.end(), left) - taus_.begin());
  }
  bucket_start_.resize(taus_.size() + 2);
  order_ = core_;

  for (NodeId v = 0; v < n; ++v) {
    if (peeled[v]) continue;
    const double l = pendants_[v];
    base_.ss += 1.0;
    base_.sl += l;
    base_.ll += l * l;
    pendant_total_ += l;
  }
  base_pendants_ = pendants_;
  // Number of successful unions once every core edge is open.
  reset_forest();
  for (EdgeId e : core_) unite(e);
  full_merges_ = merges_;
}

std::uint32_t PercolationSweep::bucket_of(double t) const {
  if (t >= 1.0) {
    return static_cast<std::uint32_t>(std::upper_bound(taus_.begin(), taus_.end(), t) - taus_.begin());
  }
  std::uint32_t b = lookup_[static_cast<std::size_t>(t * kLookupCells)];
  while (b < taus_.size() && taus_[b] <= t) ++b;
  return b;
}

NodeId PercolationSweep::find(NodeId x) {
  while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
  return x;
}

void PercolationSweep::reset_forest() {
  std::fill(size_.begin(), size_.end(), 1);
  std::iota(parent_.begin(), parent_.end(), NodeId{0});
  std::copy(base_pendants_.begin(), base_pendants_.end(), pendants_.begin());
  sums_ = base_;
  merges_ = 0;
}

void PercolationSweep::unite(EdgeId e) {
  // Pendant counts live on roots and are merged with them.
  const Edge& ed = g_.edge(e);
  NodeId a = find(ed.u);
  NodeId b = find(ed.v);
  if (a == b) return;
  if (size_[a] < size_[b]) std::swap(a, b);
  const double sa = size_[a];
  const double sb = size_[b];
  const double la = pendants_[a];
  const double lb = pendants_[b];
  sums_.ss += 2.0 * sa * sb;
  sums_.sl += sa * lb + sb * la;
  sums_.ll += 2.0 * la * lb;
  parent_[b] = a;
  size_[a] += size_[b];
  pendants_[a] += pendants_[b];
  ++merges_;
}

double PercolationSweep::extent_at(double tau, const Sums& sums) const {
  // E[sum of squared cluster sizes] over the pendant edges, given the core
  // clusters: a cluster with s core nodes and l pendants attaches
  // X ~ Bin(l, tau) of them, and each unattached pendant is a singleton.
  const double t = std::min(tau, 1.0);
  const double sum_sq =
      sums.ss + 2.0 * t * sums.sl + t * t * sums.ll + pendant_total_ * (1.0 - t * t);
  return sum_sq / static_cast<double>(g_.num_nodes()) - 1.0;
}

double PercolationSweep::level_extent(double tau) {
  const std::size_t b = integrated_.size();
  if (b == 0) return extent_at(tau, sums_);
  // Clusters touched by integrated edges, as local indices.
  NodeId roots[2 * kMaxIntegratedEdges];
  std::size_t ends[kMaxIntegratedEdges][2];
  std::size_t count = 0;
  auto local = [&](NodeId v) {
    const NodeId r = find(v);
    for (std::size_t i = 0; i < count; ++i) {
      if (roots[i] == r) return i;
    }
    roots[count] = r;
    return count++;
  };
  for (std::size_t i = 0; i < b; ++i) {
    const Edge& ed = g_.edge(integrated_[i]);
    ends[i][0] = local(ed.u);
    ends[i][1] = local(ed.v);
  }
  const double t = std::min(tau, 1.0);
  Sums expected = sums_;
  for (std::uint32_t mask = 0; mask < (1U << b); ++mask) {
    const int open = std::popcount(mask);
    const double w = std::pow(t, open) * std::pow(1.0 - t, static_cast<int>(b) - open);
    if (w == 0.0) continue;
    std::size_t up[2 * kMaxIntegratedEdges];
    double s[2 * kMaxIntegratedEdges];
    double l[2 * kMaxIntegratedEdges];
    for (std::size_t i = 0; i < count; ++i) {
      up[i] = i;
      s[i] = size_[roots[i]];
      l[i] = pendants_[roots[i]];
    }
    auto top = [&](std::size_t x) {
      while (up[x] != x) x = up[x];
      return x;
    };
    Sums delta;
    for (std::size_t i = 0; i < b; ++i) {
      if (!(mask >> i & 1U)) continue;
      const std::size_t x = top(ends[i][0]);
      const std::size_t y = top(ends[i][1]);
      if (x == y) continue;
      delta.ss += 2.0 * s[x] * s[y];
      delta.sl += s[x] * l[y] + s[y] * l[x];
      delta.ll += 2.0 * l[x] * l[y];
      up[y] = x;
      s[x] += s[y];
      l[x] += l[y];
    }
    expected.ss += w * delta.ss;
    expected.sl += w * delta.sl;
    expected.ll += w * delta.ll;
  }
  return extent_at(tau, expected);
}

void PercolationSweep::sample(Stream& stream, std::span<double> extent, std::span<const char> active) {
  // The ordered sampler pays a binomial draw per tau and only wins when the
  // early stop skips many edges, which needs edges well beyond a spanning forest.
  if (weights_ == nullptr && core_.size() > 4 * g_.num_nodes()) {
    sample_ordered(stream, extent, active);
  } else {
    sample_bucketed(stream, extent, active);
  }
}

std::size_t PercolationSweep::active_end(std::span<const char> active, std::size_t levels) {
  if (active.empty()) return levels;
  std::size_t end = levels;
  while (end > 0 && active[end - 1] == 0) --end;
  return end;
}

void PercolationSweep::sample_ordered(Stream& stream, std::span<double> extent,
                                      std::span<const char> active) {
  const std::size_t m = core_.size();
  const std::size_t levels = taus_.size();
  // Open edges at successive taus are nested: the increment is binomial over
  // the edges still closed, with the conditional probability of opening.
  std::size_t opened = 0;
  double prev = 0.0;
  for (std::size_t j = 0; j < levels; ++j) {
    const double tau = taus_[j];
    if (tau >= 1.0) {
      opened = m;
    } else if (tau > prev && opened < m) {
      const double q = std::min(1.0, (tau - prev) / (1.0 - prev));
      std::binomial_distribution<std::size_t> step(m - opened, q);
      opened += step(stream);
    }
    prev = std::max(prev, tau);
    open_count_[j] = opened;
  }

  reset_forest();
  std::size_t added = 0;
  const std::size_t end = active_end(active, levels);
  std::fill(extent.begin() + static_cast<std::ptrdiff_t>(end), extent.end(), 0.0);
  for (std::size_t j = 0; j < end; ++j) {
    // Partial Fisher-Yates: position `added` gets a uniformly chosen edge
    // from those not yet placed. Once the forest is as connected as the
    // core graph, further edges only close cycles.
    for (; added < open_count_[j] && merges_ < full_merges_; ++added) {
      const std::size_t pick = added + static_cast<std::size_t>(stream.below(m - added));
      std::swap(order_[added], order_[pick]);
      unite(order_[added]);
    }
    extent[j] = active.empty() || active[j] ? level_extent(taus_[j]) : 0.0;
  }
}

void PercolationSweep::sample_bucketed(Stream& stream, std::span<double> extent,
                                       std::span<const char> active) {
  const std::size_t m = core_.size();
  const std::size_t levels = taus_.size();
  // bucket = index of the first tau at which the edge is open; `levels`
  // means never open.
  std::fill(bucket_start_.begin(), bucket_start_.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const EdgeId e = core_[i];
    const double t = weights_ == nullptr ? stream.uniform() : stream.uniform() * (*weights_)[e];
    bucket_[i] = bucket_of(t);
    const std::uint32_t b = bucket_[i];
    ++bucket_start_[b + 1];
  }
  for (std::size_t j = 1; j < bucket_start_.size(); ++j) bucket_start_[j] += bucket_start_[j - 1];
  const std::size_t end = active_end(active, levels);
  cursor_.assign(bucket_start_.begin(), bucket_start_.end());
  for (std::size_t i = 0; i < m; ++i) {
    if (bucket_[i] < end) order_[cursor_[bucket_[i]]++] = core_[i];
  }

  reset_forest();
  std::fill(extent.begin() + static_cast<std::ptrdiff_t>(end), extent.end(), 0.0);
  for (std::size_t j = 0; j < end; ++j) {
    for (std::uint32_t i = bucket_start_[j]; i < bucket_start_[j + 1]; ++i) unite(order_[i]);
    extent[j] = active.empty() || active[j] ? level_extent(taus_[j]) : 0.0;
  }
}

std::vector<MetricEstimate> estimate_extent_sweep(const Graph& g, const EdgeWeights* weights,
                                                  std::span<const double> taus, RunSeed rng,
                                                  const EstimatorOptions& options,
                                                  std::span<const EdgeId> integrated) {
  if (g.num_nodes() == 0) throw std::invalid_argument("cascade estimate on an empty graph");
  for (double tau : taus) CascadeParams{tau}.validate();
  const std::size_t levels = taus.size();
  std::vector<std::size_t> order(levels);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return taus[a] < taus[b]; });
  std::vector<double> sorted(levels);
  for (std::size_t j = 0; j < levels; ++j) sorted[j] = taus[order[j]];

  const std::size_t min_reps = std::max<std::size_t>(options.min_reps, 2);
  const std::size_t max_reps = std::max(options.max_reps, min_reps);

  struct Acc {
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t reps = 0;
    bool stopped = false;
    double half_width(double z) const {
      const double var = reps > 1 ? m2 / static_cast<double>(reps - 1) : 0.0;
      return z * std::sqrt(var / static_cast<double>(reps));
    }
  };
  std::vector<Acc> acc(levels);
  std::vector<char> active(levels, 1);
  std::size_t open = levels;
  auto accumulate = [&](std::span<const double> values) {
    for (std::size_t j = 0; j < levels; ++j) {
      Acc& a = acc[j];
      if (a.stopped) continue;
      ++a.reps;
      const double delta = values[j] - a.mean;
      a.mean += delta / static_cast<double>(a.reps);
      a.m2 += delta * (values[j] - a.mean);
      if (a.reps >= min_reps && a.half_width(options.z) <= options.target_half_width) {
        a.stopped = true;
        active[j] = 0;
        --open;
      }
    }
  };

  if (options.workers <= 1) {
    PercolationSweep sweep(g, weights, sorted, integrated);
    std::vector<double> values(levels);
    for (std::size_t i = 0; i < max_reps && open > 0; ++i) {
      Stream stream = rng.at(i).stream();
      sweep.sample(stream, values, active);
      accumulate(values);
    }
  } else {
    std::size_t next = 0;
    std::size_t block_size = min_reps;
    std::vector<double> block;
    while (open > 0 && next < max_reps) {
      const std::size_t end = std::min(max_reps, next + block_size);
      const std::size_t count = end - next;
      block.assign(count * levels, 0.0);
      const std::vector<char> block_active = active;
      const unsigned workers = options.workers;
      const std::size_t chunk = (count + workers - 1) / workers;
      {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) {
          const std::size_t lo = next + w * chunk;
          const std::size_t hi = std::min(end, lo + chunk);
          if (lo >= hi) break;
          threads.emplace_back([&, lo, hi] {
            PercolationSweep sweep(g, weights, sorted, integrated);
            for (std::size_t i = lo; i < hi; ++i) {
              Stream stream = rng.at(i).stream();
              sweep.sample(stream, std::span<double>(block).subspan((i - next) * levels, levels),
                           block_active);
            }
          });
        }
      }
      for (std::size_t i = 0; i < count && open > 0; ++i) {
        accumulate(std::span<const double>(block).subspan(i * levels, levels));
      }
      next = end;
      block_size = std::min<std::size_t>(std::max<std::size_t>(block_size * 2, 256), 1 << 14);
    }
  }

  std::vector<MetricEstimate> out(levels);
  for (std::size_t j = 0; j < levels; ++j) {
    const Acc& a = acc[j];
    MetricEstimate& est = out[order[j]];
    est.mean = a.mean;
    est.reps = a.reps;
    est.sample_sd = a.reps > 1 ? std::sqrt(a.m2 / static_cast<double>(a.reps - 1)) : 0.0;
    est.half_width_95 = a.half_width(options.z);
    est.tolerance_met = est.half_width_95 <= options.target_half_width;
  }
  return out;
}

}  // namespace resilnet
