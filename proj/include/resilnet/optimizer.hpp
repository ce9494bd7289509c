#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "resilnet/cascade.hpp"
#include "resilnet/designs.hpp"
#include "resilnet/rng.hpp"

namespace resilnet {

enum class EvaluationMode {
  /// Generate the ensemble, estimate R by simulation and compute W exactly.
  kMonteCarlo,
  /// Closed forms; Stars and Cycles only.
  kAnalytic,
};

struct EvaluationOptions {
  double g_exp = 1.0;
  /// With kAllSeeds (the default here) every tau of a call shares the same
  /// coupled percolation samples; kUniformSeed runs the one-seed estimator
  /// separately at each tau.
  EstimatorOptions estimator{.seeding = SeedSampling::kAllSeeds};
  EvaluationMode mode = EvaluationMode::kMonteCarlo;
  /// Configurations evaluated concurrently.
  unsigned workers = 1;
  /// Overrides the design's default ensemble size when nonzero.
  std::size_t ensemble_size = 0;
  InterCellWiring wiring = InterCellWiring::kRandomMembers;
  /// CV of member fitness at or above this marks a point as near a transition.
  double cv_threshold = 0.2;
};

/// One evaluated configuration at one tau. R and W are ensemble means;
/// member values are kept so fitness statistics can be taken at any r
/// without re-simulating.
struct SurfacePoint {
  DesignConfig config;
  double tau = 0.0;
  double R_mean = 1.0;
  double W_mean = 0.0;
  /// 95% half-width of R_mean (0 for closed-form points).
  double R_ci = 0.0;
  double avg_degree = 0.0;
  std::vector<double> member_R;
  std::vector<double> member_W;
  bool tolerance_met = true;
  double cv_threshold = 0.2;

  double fitness_at(double r) const;
  double fitness_ci(double r) const { return r * R_ci; }
  /// Coefficient of variation of member fitness (0 for one member or zero mean).
  double cv_fitness(double r) const;
  bool near_transition(double r) const { return cv_fitness(r) >= cv_threshold; }
};

/// Every configuration of one design evaluated at one tau.
struct Surface {
  Design design = Design::kCliques;
  double tau = 0.0;
  std::vector<SurfacePoint> points;
};

/// Parameter grid for a design. Empty lists mean the defaults: k over
/// 1..n, and p over multiples of 0.05 plus kSmallConnectivity.
struct GridSpec {
  std::size_t n = kDefaultNodes;
  std::vector<std::size_t> k_values;
  std::vector<double> p_values;
  /// Insert p midpoints where neighbouring points differ by more than
  /// refine_threshold in R or W.
  bool refine = true;
  double refine_threshold = 0.05;
};

inline constexpr double kSmallConnectivity[] = {0.005, 0.01, 0.02};

/// Multiples of `step` in [lo, hi], computed as i*step to avoid drift.
std::vector<double> multiples(double step, double lo = 0.0, double hi = 1.0);

std::vector<DesignConfig> configuration_grid(Design design, const GridSpec& grid,
                                             const EvaluationOptions& options = {});

SurfacePoint evaluate_configuration(const DesignConfig& config, double tau, RunSeed rng,
                                    const EvaluationOptions& options = {});

/// Evaluates one configuration at several tau values on the same ensemble
/// (graphs and W are shared; R is estimated per tau).
std::vector<SurfacePoint> evaluate_configuration(const DesignConfig& config,
                                                 std::span<const double> taus, RunSeed rng,
                                                 const EvaluationOptions& options = {});

/// Surfaces of one design, one per tau, over a common configuration set.
std::vector<Surface> build_surfaces(Design design, std::span<const double> taus, RunSeed rng,
                                    const EvaluationOptions& options = {},
                                    const GridSpec& grid = {});

/// Index of the fittest point at weight r. Ties go to lowest k, then
/// lowest p. Throws std::invalid_argument on an empty surface.
std::size_t best_index(std::span<const SurfacePoint> points, double r);

struct GridResult {
  SurfacePoint best;
  Surface surface;
};

GridResult grid_search(Design design, double tau, double r, RunSeed rng,
                       const EvaluationOptions& options = {}, const GridSpec& grid = {});

struct CurvePoint {
  double tau = 0.0;
  double fitness = 0.0;
  /// r * R half-width of the winning configuration.
  double ci = 0.0;
  SurfacePoint best;
};

/// Best fitness per surface at weight r.
std::vector<CurvePoint> curve_from_surfaces(std::span<const Surface> surfaces, double r);

std::vector<CurvePoint> fitness_curve(Design design, std::span<const double> taus, double r,
                                      RunSeed rng, const EvaluationOptions& options = {},
                                      const GridSpec& grid = {});

}  // namespace resilnet
