#include "resilnet/designs.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace resilnet {

std::string_view design_name(Design d) {
  switch (d) {
    case Design::kCliques: return "Cliques";
    case Design::kStars: return "Stars";
    case Design::kCycles: return "Cycles";
    case Design::kConnectedCliques: return "ConnectedCliques";
    case Design::kConnectedStars: return "ConnectedStars";
    case Design::kER: return "ER";
  }
  return "?";
}

std::optional<Design> parse_design(std::string_view name) {
  std::string key;
  for (char c : name) {
    if (c == '-' || c == '_' || c == ' ') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  for (Design d : kAllDesigns) {
    std::string canon;
    for (char c : design_name(d)) canon.push_back(static_cast<char>(std::tolower(c)));
    if (key == canon) return d;
  }
  if (key == "erdosrenyi" || key == "random") return Design::kER;
  return std::nullopt;
}

DesignConfig DesignConfig::make(Design design, std::size_t n, std::size_t k, double p) {
  DesignConfig c;
  c.design = design;
  c.n = n;
  c.k = has_cell_size(design) ? k : 1;
  c.p = has_connectivity(design) ? p : 0.0;
  c.ensemble_size = has_connectivity(design) ? 10 : 1;
  return c;
}

void DesignConfig::validate() const {
  if (n < 1) throw std::invalid_argument("design needs at least one node");
  if (k < 1 || k > n) {
    throw std::invalid_argument("cell size k=" + std::to_string(k) + " outside [1," +
                                std::to_string(n) + "]");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("connectivity p=" + std::to_string(p) + " outside [0,1]");
  }
  if (ensemble_size < 1) throw std::invalid_argument("ensemble size must be at least 1");
}

std::uint64_t DesignConfig::key() const {
  return derive_seed(0x5eed'ce11ULL, {static_cast<std::uint64_t>(design), n, k,
                                      std::bit_cast<std::uint64_t>(p),
                                      static_cast<std::uint64_t>(wiring)});
}

std::vector<std::size_t> cell_sizes(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw std::invalid_argument("cell size outside [1,n]");
  std::vector<std::size_t> sizes(n / k, k);
  if (n % k != 0) sizes.push_back(n % k);
  return sizes;
}

namespace {

using Pairs = std::vector<std::pair<NodeId, NodeId>>;

void add_cell(Design design, NodeId first, std::size_t size, Pairs& out) {
  const auto last = static_cast<NodeId>(first + size);
  switch (design) {
    case Design::kCliques:
    case Design::kConnectedCliques:
      for (NodeId u = first; u < last; ++u)
        for (NodeId v = u + 1; v < last; ++v) out.emplace_back(u, v);
      break;
    case Design::kStars:
    case Design::kConnectedStars:
      for (NodeId v = first + 1; v < last; ++v) out.emplace_back(first, v);
      break;
    case Design::kCycles:
      for (NodeId v = first + 1; v < last; ++v) out.emplace_back(v - 1, v);
      if (size >= 3) out.emplace_back(first, last - 1);
      break;
    case Design::kER:
      break;
  }
}

}  // namespace

std::vector<EdgeId> inter_cell_edges(const Graph& g, std::size_t k) {
  if (k == 0) throw std::invalid_argument("cell size must be positive");
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (g.edge(e).u / k != g.edge(e).v / k) out.push_back(e);
  }
  return out;
}

Graph generate(const DesignConfig& config, RunSeed rng) {
  config.validate();
  const std::size_t n = config.n;
  Pairs pairs;
  Stream stream = rng.stream();

  if (config.design == Design::kER) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (stream.bernoulli(config.p)) pairs.emplace_back(u, v);
    return Graph(n, pairs);
  }

  std::vector<NodeId> first;
  std::vector<std::size_t> sizes = cell_sizes(n, config.k);
  NodeId next = 0;
  for (std::size_t s : sizes) {
    first.push_back(next);
    add_cell(config.design, next, s, pairs);
    next += static_cast<NodeId>(s);
  }

  if (config.design == Design::kConnectedCliques || config.design == Design::kConnectedStars) {
    const bool leaders = config.wiring == InterCellWiring::kLeaders;
    for (std::size_t a = 0; a < sizes.size(); ++a) {
      for (std::size_t b = a + 1; b < sizes.size(); ++b) {
        if (!stream.bernoulli(config.p)) continue;
        const NodeId u = first[a] + (leaders ? 0 : static_cast<NodeId>(stream.below(sizes[a])));
        const NodeId v = first[b] + (leaders ? 0 : static_cast<NodeId>(stream.below(sizes[b])));
        pairs.emplace_back(u, v);
      }
    }
  }
  return Graph(n, pairs);
}

namespace {

void require_divides(std::size_t n, std::size_t k) {
  if (n < 2) throw std::invalid_argument("closed forms need n >= 2");
  if (k < 1 || k > n || n % k != 0) {
    throw std::invalid_argument("closed form needs k | n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
}

double attenuate(double d, double g_exp) { return std::pow(d, -g_exp); }

// Sum over ordered pairs inside one cycle cell of size s of d^-g, divided by s.
double cycle_reach_per_node(std::size_t s, double g_exp) {
  if (s < 2) return 0.0;
  if (s == 2) return 1.0;
  double sum = 0.0;
  if (s % 2 == 0) {
    sum = attenuate(static_cast<double>(s / 2), g_exp);
    for (std::size_t j = 1; j < s / 2; ++j) sum += 2.0 * attenuate(static_cast<double>(j), g_exp);
  } else {
    for (std::size_t j = 1; j <= (s - 1) / 2; ++j) sum += 2.0 * attenuate(static_cast<double>(j), g_exp);
  }
  return sum;
}

// Expected new cases from a uniformly chosen seed inside one cycle cell.
double cycle_extent_per_seed(std::size_t s, double tau) {
  if (s < 2) return 0.0;
  if (s == 2) return tau;
  const double k = static_cast<double>(s);
  if (tau == 1.0) return k - 1.0;
  return 2.0 * tau * (1.0 - std::pow(tau, k - 1.0)) / (1.0 - tau) - (k - 1.0) * std::pow(tau, k);
}

double star_extent_per_seed(std::size_t s, double tau) {
  if (s < 2) return 0.0;
  const double k = static_cast<double>(s);
  return (1.0 - 1.0 / k) * (2.0 + tau * (k - 2.0)) * tau;
}

double star_reach_per_node(std::size_t s, double g_exp) {
  if (s < 2) return 0.0;
  const double k = static_cast<double>(s);
  return (1.0 - 1.0 / k) * (2.0 + std::pow(2.0, -g_exp) * (k - 2.0));
}

}  // namespace

AnalyticMetrics analytic_stars(std::size_t n, std::size_t k, double tau, double g_exp) {
  require_divides(n, k);
  if (k == 1) return {1.0, 0.0};
  const double scale = 1.0 / static_cast<double>(n - 1);
  return {1.0 - scale * star_extent_per_seed(k, tau), scale * star_reach_per_node(k, g_exp)};
}

AnalyticMetrics analytic_cycles(std::size_t n, std::size_t k, double tau, double g_exp) {
  require_divides(n, k);
  if (k == 1) return {1.0, 0.0};
  const double scale = 1.0 / static_cast<double>(n - 1);
  return {1.0 - scale * cycle_extent_per_seed(k, tau), scale * cycle_reach_per_node(k, g_exp)};
}

AnalyticMetrics exact_cell_design(Design design, std::size_t n, std::size_t k, double tau,
                                  double g_exp) {
  if (design != Design::kStars && design != Design::kCycles) {
    throw std::invalid_argument("exact evaluation is available for Stars and Cycles only");
  }
  if (n < 2) return {1.0, 0.0};
  // Each cell contributes (cell size) * (per-node quantity); a uniform seed
  // falls in a cell with probability proportional to its size.
  double extent = 0.0;
  double reach = 0.0;
  for (std::size_t s : cell_sizes(n, k)) {
    const double w = static_cast<double>(s);
    if (design == Design::kStars) {
      extent += w * star_extent_per_seed(s, tau);
      reach += w * star_reach_per_node(s, g_exp);
    } else {
      extent += w * cycle_extent_per_seed(s, tau);
      reach += w * cycle_reach_per_node(s, g_exp);
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
  return {1.0 - extent / pairs, reach / pairs};
}

double stars_single_cell_threshold(double g_exp) { return std::pow(2.0, -g_exp / 2.0); }

}  // namespace resilnet
