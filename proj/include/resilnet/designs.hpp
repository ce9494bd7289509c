#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "resilnet/graph.hpp"
#include "resilnet/rng.hpp"

namespace resilnet {

enum class Design { kCliques, kStars, kCycles, kConnectedCliques, kConnectedStars, kER };

inline constexpr Design kAllDesigns[] = {Design::kCliques,          Design::kStars,
                                         Design::kCycles,           Design::kConnectedCliques,
                                         Design::kConnectedStars,   Design::kER};

std::string_view design_name(Design d);
/// Accepts the names design_name produces, case-insensitively, plus
/// "connected-cliques"/"connected-stars"/"erdos-renyi" spellings.
std::optional<Design> parse_design(std::string_view name);

/// Whether the design is parameterized by cell size k / connectivity p.
constexpr bool has_cell_size(Design d) { return d != Design::kER; }
constexpr bool has_connectivity(Design d) {
  return d == Design::kConnectedCliques || d == Design::kConnectedStars || d == Design::kER;
}

/// Endpoints of inter-cell edges in the Connected designs.
enum class InterCellWiring {
  kRandomMembers,  // uniformly random node of each cell
  kLeaders,        // first node of each cell (the star center for Stars cells)
};

inline constexpr std::size_t kDefaultNodes = 180;

struct DesignConfig {
  Design design = Design::kCliques;
  std::size_t n = kDefaultNodes;
  std::size_t k = 1;
  double p = 0.0;
  std::size_t ensemble_size = 1;
  InterCellWiring wiring = InterCellWiring::kRandomMembers;

  /// Config with the default ensemble size: 10 when the design has p, else 1.
  static DesignConfig make(Design design, std::size_t n, std::size_t k, double p = 0.0);

  /// Throws std::invalid_argument unless 1 <= k <= n, 0 <= p <= 1, n >= 1
  /// and ensemble_size >= 1.
  void validate() const;

  /// Stable 64-bit key of (design, n, k, p, wiring); seeds derive from it.
  std::uint64_t key() const;

  friend bool operator==(const DesignConfig&, const DesignConfig&) = default;
};

/// Cell sizes of the partition used by the cell designs: floor(n/k) cells of
/// size k, then one cell of size n mod k if that is nonzero.
std::vector<std::size_t> cell_sizes(std::size_t n, std::size_t k);

/// Edges of a generated cell-design graph whose endpoints lie in different
/// cells (cells are contiguous index ranges of size k).
std::vector<EdgeId> inter_cell_edges(const Graph& g, std::size_t k);

/// One network of the design. `rng` only matters for designs with p.
Graph generate(const DesignConfig& config, RunSeed rng);

/// Closed-form (R, W) for a design of identical cells.
struct AnalyticMetrics {
  double resilience;
  double efficiency;
};

/// Stars design with k | n. k = 1 gives (1, 0). Throws std::invalid_argument
/// if k does not divide n.
AnalyticMetrics analytic_stars(std::size_t n, std::size_t k, double tau, double g_exp = 1.0);

/// Cycles design with k | n, evaluated at its tau -> 1 limit when tau = 1.
/// Cells of size 2 are a single edge. Throws std::invalid_argument if k
/// does not divide n.
AnalyticMetrics analytic_cycles(std::size_t n, std::size_t k, double tau, double g_exp = 1.0);

/// Exact (R, W) of the Stars or Cycles design for any k, summing per-cell
/// closed forms over the cell partition (remainder cell included). Agrees
/// with analytic_stars/analytic_cycles when k | n.
AnalyticMetrics exact_cell_design(Design design, std::size_t n, std::size_t k, double tau,
                                  double g_exp = 1.0);

/// tau at which growing a single star stops paying off at r = 1/2:
/// 2^(-g_exp/2).
double stars_single_cell_threshold(double g_exp);

}  // namespace resilnet
