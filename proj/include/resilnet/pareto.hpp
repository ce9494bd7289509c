#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "resilnet/designs.hpp"
#include "resilnet/optimizer.hpp"

namespace resilnet {

/// A (resilience, efficiency) outcome of a configuration; both maximized.
struct ParetoPoint {
  double R = 0.0;
  double W = 0.0;
  DesignConfig config;
};

/// epsilon-box Pareto archive. Objectives are bucketed into boxes of side
/// epsilon; only points in boxes not dominated by another occupied box are
/// kept, one per box (the dominating point if there is one, else the point
/// nearest the box's best corner). Every input is then within epsilon of a
/// kept point in both objectives, and kept points are mutually
/// non-dominated. The result is sorted by R descending and does not depend
/// on input order. Throws std::invalid_argument if epsilon <= 0.
std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points, double epsilon = 0.01);
std::vector<ParetoPoint> pareto_frontier(std::span<const SurfacePoint> surface,
                                         double epsilon = 0.01);

/// True if a is at least as good as b in both objectives and better in one.
constexpr bool dominates(const ParetoPoint& a, const ParetoPoint& b) {
  return a.R >= b.R && a.W >= b.W && (a.R > b.R || a.W > b.W);
}

/// Spread of parameters and metrics over the near-optimal set
/// { fitness >= fraction * max fitness }.
struct Sensitivity {
  std::size_t count = 0;
  double best_fitness = 0.0;
  /// Absent when the design has no such parameter.
  std::optional<double> sd_k;
  std::optional<double> sd_p;
  double sd_R = 0.0;
  double sd_W = 0.0;
  /// Only one configuration qualified; all deviations are reported as 0.
  bool singleton = false;
};

/// Unbiased (n-1) standard deviations over the near-optimal set. Throws
/// std::invalid_argument on an empty surface.
Sensitivity sensitivity(std::span<const SurfacePoint> surface, double r, double fraction = 0.95);

/// Unbiased sample standard deviation; 0 for fewer than two values.
double sample_sd(std::span<const double> values);

}  // namespace resilnet
