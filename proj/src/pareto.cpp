#include "resilnet/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace resilnet {

namespace {

using Box = std::pair<long, long>;

// Small slack so that values sitting on a box edge (0.90 / 0.01) are not
// pushed into the box below by rounding.
long box_of(double x, double epsilon) { return static_cast<long>(std::floor(x / epsilon + 1e-9)); }

bool box_dominates(const Box& a, const Box& b) {
  return a.first >= b.first && a.second >= b.second && a != b;
}

// Total order used to pick a box representative; independent of input order.
bool better_representative(const ParetoPoint& a, const ParetoPoint& b, const Box& box,
                           double epsilon) {
  if (dominates(a, b)) return true;
  if (dominates(b, a)) return false;
  const double cr = static_cast<double>(box.first + 1) * epsilon;
  const double cw = static_cast<double>(box.second + 1) * epsilon;
  const double da = std::hypot(cr - a.R, cw - a.W);
  const double db = std::hypot(cr - b.R, cw - b.W);
  if (da != db) return da < db;
  return std::tuple(-a.R, -a.W, static_cast<int>(a.config.design), a.config.k, a.config.p) <
         std::tuple(-b.R, -b.W, static_cast<int>(b.config.design), b.config.k, b.config.p);
}

}  // namespace

std::vector<ParetoPoint> pareto_frontier(std::span<const ParetoPoint> points, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  std::map<Box, ParetoPoint> occupied;
  for (const ParetoPoint& p : points) {
    const Box b{box_of(p.R, epsilon), box_of(p.W, epsilon)};
    auto it = occupied.find(b);
    if (it == occupied.end()) {
      occupied.emplace(b, p);
    } else if (better_representative(p, it->second, b, epsilon)) {
      it->second = p;
    }
  }

  std::vector<ParetoPoint> frontier;
  for (const auto& [box, point] : occupied) {
    bool dominated = false;
    for (const auto& [other, unused] : occupied) {
      if (box_dominates(other, box)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) frontier.push_back(point);
  }
  std::sort(frontier.begin(), frontier.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return std::tuple(-a.R, a.W) < std::tuple(-b.R, b.W);
  });
  return frontier;
}

std::vector<ParetoPoint> pareto_frontier(std::span<const SurfacePoint> surface, double epsilon) {
  std::vector<ParetoPoint> pts;
  pts.reserve(surface.size());
  for (const SurfacePoint& s : surface) pts.push_back({s.R_mean, s.W_mean, s.config});
  return pareto_frontier(std::span<const ParetoPoint>(pts), epsilon);
}

double sample_sd(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

Sensitivity sensitivity(std::span<const SurfacePoint> surface, double r, double fraction) {
  if (surface.empty()) throw std::invalid_argument("sensitivity of an empty surface");
  Sensitivity out;
  out.best_fitness = surface[best_index(surface, r)].fitness_at(r);
  const double cutoff = fraction * out.best_fitness;

  std::vector<double> ks, ps, rs, ws;
  for (const SurfacePoint& s : surface) {
    if (s.fitness_at(r) < cutoff) continue;
    ks.push_back(static_cast<double>(s.config.k));
    ps.push_back(s.config.p);
    rs.push_back(s.R_mean);
    ws.push_back(s.W_mean);
  }
  out.count = rs.size();
  out.singleton = out.count == 1;
  const Design design = surface.front().config.design;
  if (has_cell_size(design)) out.sd_k = sample_sd(ks);
  if (has_connectivity(design)) out.sd_p = sample_sd(ps);
  out.sd_R = sample_sd(rs);
  out.sd_W = sample_sd(ws);
  return out;
}

}  // namespace resilnet
