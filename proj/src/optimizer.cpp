#include "resilnet/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "resilnet/metrics.hpp"

namespace resilnet {

double SurfacePoint::fitness_at(double r) const { return fitness(R_mean, W_mean, r); }

double SurfacePoint::cv_fitness(double r) const {
  const std::size_t m = member_R.size();
  if (m < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t i = 0; i < m; ++i) mean += fitness(member_R[i], member_W[i], r);
  mean /= static_cast<double>(m);
  if (mean <= 0.0) return 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = fitness(member_R[i], member_W[i], r) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(m - 1)) / mean;
}

std::vector<double> multiples(double step, double lo, double hi) {
  if (!(step > 0.0)) throw std::invalid_argument("grid step must be positive");
  std::vector<double> out;
  const auto first = static_cast<long>(std::ceil(lo / step - 1e-9));
  const auto last = static_cast<long>(std::floor(hi / step + 1e-9));
  for (long i = first; i <= last; ++i) out.push_back(static_cast<double>(i) * step);
  return out;
}

namespace {

std::vector<double> default_p_values() {
  std::vector<double> ps = multiples(0.05);
  ps.insert(ps.end(), std::begin(kSmallConnectivity), std::end(kSmallConnectivity));
  std::sort(ps.begin(), ps.end());
  return ps;
}

std::uint64_t tau_tag(double tau) { return std::bit_cast<std::uint64_t>(tau); }

RunSeed member_seed(RunSeed rng, const DesignConfig& config, std::size_t member) {
  return {derive_seed(rng.master, {rng.index, config.key(), member}), 0};
}

DesignConfig with_options(DesignConfig config, const EvaluationOptions& options) {
  if (options.ensemble_size != 0) config.ensemble_size = options.ensemble_size;
  config.wiring = options.wiring;
  return config;
}

std::vector<SurfacePoint> evaluate_analytic(const DesignConfig& config,
                                            std::span<const double> taus,
                                            const EvaluationOptions& options) {
  const Graph g = generate(config, RunSeed{});
  std::vector<SurfacePoint> out;
  for (double tau : taus) {
    const AnalyticMetrics m = exact_cell_design(config.design, config.n, config.k, tau, options.g_exp);
    SurfacePoint pt;
    pt.config = config;
    pt.config.ensemble_size = 1;
    pt.tau = tau;
    pt.R_mean = m.resilience;
    pt.W_mean = m.efficiency;
    pt.avg_degree = g.average_degree();
    pt.member_R = {m.resilience};
    pt.member_W = {m.efficiency};
    pt.cv_threshold = options.cv_threshold;
    out.push_back(std::move(pt));
  }
  return out;
}

std::vector<MetricEstimate> member_extents(const DesignConfig& config, const Graph& g,
                                          std::span<const double> taus, RunSeed rng,
                                          const EvaluationOptions& options) {
  if (options.estimator.seeding == SeedSampling::kAllSeeds) {
    // A few links between cells are averaged over exactly rather than sampled.
    std::vector<EdgeId> links;
    if (has_cell_size(config.design) && has_connectivity(config.design)) {
      links = inter_cell_edges(g, config.k);
      if (links.size() > kMaxIntegratedEdges) links.clear();
    }
    return estimate_extent_sweep(g, nullptr, taus, rng, options.estimator, links);
  }
  std::vector<MetricEstimate> out;
  for (double tau : taus) {
    out.push_back(estimate_expected_extent(g, CascadeParams{tau}, rng.child(tau_tag(tau)),
                                           options.estimator));
  }
  return out;
}

}  // namespace

std::vector<SurfacePoint> evaluate_configuration(const DesignConfig& config_in,
                                                 std::span<const double> taus, RunSeed rng,
                                                 const EvaluationOptions& options) {
  const DesignConfig config = config_in;
  config.validate();
  for (double tau : taus) CascadeParams{tau}.validate();

  if (options.mode == EvaluationMode::kAnalytic) {
    if (config.design != Design::kStars && config.design != Design::kCycles) {
      throw std::invalid_argument("analytic evaluation is available for Stars and Cycles only, not " +
                                  std::string(design_name(config.design)));
    }
    return evaluate_analytic(config, taus, options);
  }

  const std::size_t m = config.ensemble_size;
  std::vector<SurfacePoint> out(taus.size());
  std::vector<double> ci_sq(taus.size(), 0.0);
  for (std::size_t t = 0; t < taus.size(); ++t) {
    out[t].config = config;
    out[t].tau = taus[t];
    out[t].R_mean = 0.0;
    out[t].cv_threshold = options.cv_threshold;
  }
  double degree_sum = 0.0;
  for (std::size_t member = 0; member < m; ++member) {
    const RunSeed seed = member_seed(rng, config, member);
    const Graph g = generate(config, seed.child(0));
    const double w = efficiency(g, options.g_exp);
    degree_sum += g.average_degree();
    const std::vector<MetricEstimate> extents = member_extents(config, g, taus, seed.child(1), options);
    for (std::size_t t = 0; t < taus.size(); ++t) {
      const MetricEstimate r = extent_to_resilience(extents[t], g.num_nodes());
      SurfacePoint& pt = out[t];
      pt.member_R.push_back(r.mean);
      pt.member_W.push_back(w);
      pt.tolerance_met = pt.tolerance_met && r.tolerance_met;
      ci_sq[t] += r.half_width_95 * r.half_width_95;
    }
  }
  const double md = static_cast<double>(m);
  for (std::size_t t = 0; t < taus.size(); ++t) {
    SurfacePoint& pt = out[t];
    double rs = 0.0;
    double ws = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      rs += pt.member_R[i];
      ws += pt.member_W[i];
    }
    pt.R_mean = rs / md;
    pt.W_mean = ws / md;
    // Members are independent, so the half-width of their mean adds in quadrature.
    pt.R_ci = std::sqrt(ci_sq[t]) / md;
    pt.avg_degree = degree_sum / md;
  }
  return out;
}

SurfacePoint evaluate_configuration(const DesignConfig& config, double tau, RunSeed rng,
                                    const EvaluationOptions& options) {
  const double taus[] = {tau};
  return std::move(evaluate_configuration(config, std::span<const double>(taus), rng, options)[0]);
}

std::vector<DesignConfig> configuration_grid(Design design, const GridSpec& grid,
                                             const EvaluationOptions& options) {
  std::vector<std::size_t> ks = grid.k_values;
  if (ks.empty()) {
    for (std::size_t k = 1; k <= grid.n; ++k) ks.push_back(k);
  }
  std::vector<double> ps = grid.p_values.empty() ? default_p_values() : grid.p_values;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  if (!has_cell_size(design)) ks = {1};
  if (!has_connectivity(design)) ps = {0.0};

  std::vector<DesignConfig> configs;
  for (std::size_t k : ks) {
    for (double p : ps) {
      DesignConfig c = with_options(DesignConfig::make(design, grid.n, k, p), options);
      c.validate();
      configs.push_back(c);
    }
  }
  return configs;
}

namespace {

// Evaluates configs at all taus; result[i][t] is config i at taus[t].
std::vector<std::vector<SurfacePoint>> evaluate_all(const std::vector<DesignConfig>& configs,
                                                    std::span<const double> taus, RunSeed rng,
                                                    const EvaluationOptions& options) {
  std::vector<std::vector<SurfacePoint>> results(configs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      results[i] = evaluate_configuration(configs[i], taus, rng, options);
    }
  };
  const unsigned workers = std::max(1U, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  return results;
}

bool differs(const SurfacePoint& a, const SurfacePoint& b, double threshold) {
  return std::abs(a.R_mean - b.R_mean) > threshold || std::abs(a.W_mean - b.W_mean) > threshold;
}

}  // namespace

std::vector<Surface> build_surfaces(Design design, std::span<const double> taus, RunSeed rng,
                                    const EvaluationOptions& options, const GridSpec& grid) {
  std::vector<DesignConfig> configs = configuration_grid(design, grid, options);
  auto results = evaluate_all(configs, taus, rng, options);

  if (grid.refine && has_connectivity(design) && options.mode == EvaluationMode::kMonteCarlo) {
    // Group by k, then look at p-neighbours (configs are generated k-major,
    // p ascending).
    std::vector<DesignConfig> extra;
    for (std::size_t i = 0; i + 1 < configs.size(); ++i) {
      if (configs[i].k != configs[i + 1].k) continue;
      bool split = false;
      for (std::size_t t = 0; t < taus.size() && !split; ++t) {
        split = differs(results[i][t], results[i + 1][t], grid.refine_threshold);
      }
      if (split) {
        DesignConfig mid = configs[i];
        mid.p = 0.5 * (configs[i].p + configs[i + 1].p);
        extra.push_back(mid);
      }
    }
    auto extra_results = evaluate_all(extra, taus, rng, options);
    configs.insert(configs.end(), extra.begin(), extra.end());
    for (auto& r : extra_results) results.push_back(std::move(r));
  }

  // Canonical order: k, then p.
  std::vector<std::size_t> order(configs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (configs[a].k != configs[b].k) return configs[a].k < configs[b].k;
    return configs[a].p < configs[b].p;
  });

  std::vector<Surface> surfaces(taus.size());
  for (std::size_t t = 0; t < taus.size(); ++t) {
    surfaces[t].design = design;
    surfaces[t].tau = taus[t];
    surfaces[t].points.reserve(order.size());
    for (std::size_t i : order) surfaces[t].points.push_back(results[i][t]);
  }
  return surfaces;
}

std::size_t best_index(std::span<const SurfacePoint> points, double r) {
  if (points.empty()) throw std::invalid_argument("best configuration of an empty surface");
  std::size_t best = 0;
  double best_f = points[0].fitness_at(r);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double f = points[i].fitness_at(r);
    const DesignConfig& a = points[i].config;
    const DesignConfig& b = points[best].config;
    const bool tie_wins = f == best_f && (a.k < b.k || (a.k == b.k && a.p < b.p));
    if (f > best_f || tie_wins) {
      best = i;
      best_f = f;
    }
  }
  return best;
}

GridResult grid_search(Design design, double tau, double r, RunSeed rng,
                       const EvaluationOptions& options, const GridSpec& grid) {
  const double taus[] = {tau};
  auto surfaces = build_surfaces(design, taus, rng, options, grid);
  GridResult out;
  out.surface = std::move(surfaces[0]);
  out.best = out.surface.points[best_index(out.surface.points, r)];
  return out;
}

std::vector<CurvePoint> curve_from_surfaces(std::span<const Surface> surfaces, double r) {
  std::vector<CurvePoint> curve;
  for (const Surface& s : surfaces) {
    const SurfacePoint& best = s.points[best_index(s.points, r)];
    curve.push_back({s.tau, best.fitness_at(r), best.fitness_ci(r), best});
  }
  return curve;
}

std::vector<CurvePoint> fitness_curve(Design design, std::span<const double> taus, double r,
                                      RunSeed rng, const EvaluationOptions& options,
                                      const GridSpec& grid) {
  for (double tau : taus) CascadeParams{tau}.validate();
  const auto surfaces = build_surfaces(design, taus, rng, options, grid);
  return curve_from_surfaces(surfaces, r);
}

}  // namespace resilnet
