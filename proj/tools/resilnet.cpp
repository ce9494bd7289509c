#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "resilnet/analysis.hpp"
#include "resilnet/edge_list.hpp"
#include "resilnet/metrics.hpp"
#include "resilnet/optimizer.hpp"
#include "resilnet/pareto.hpp"
#include "resilnet/report.hpp"

namespace fs = std::filesystem;
using namespace resilnet;

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string tau_grid = "0:0.05:1";
  std::vector<double> r_values = {0.25, 0.49, 0.51, 0.75};
  double g_exp = 1.0;
  double epsilon = 0.01;
  std::string out = ".";
  unsigned workers = 1;
  bool plot = false;
};

struct SweepArgs {
  std::vector<std::string> designs;
  std::size_t n = kDefaultNodes;
  std::size_t ensemble = 0;
  std::string mode = "mc";
  std::string wiring = "members";
  std::vector<std::size_t> k_values;
  std::vector<double> p_values;
  bool no_refine = false;
};

struct NetworkArgs {
  std::string edges;
  std::string roles;
  bool multiplicity = false;
};

// "a:step:b" or a comma-separated list.
std::vector<double> parse_tau_grid(const std::string& text) {
  std::vector<double> taus;
  if (std::count(text.begin(), text.end(), ':') == 2) {
    double lo = 0, step = 0, hi = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(text);
    if (!(ss >> lo >> c1 >> step >> c2 >> hi) || !ss.eof()) {
      throw std::invalid_argument("bad tau grid '" + text + "' (expected lo:step:hi)");
    }
    taus = multiples(step, lo, hi);
  } else {
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != item.size()) throw std::invalid_argument("bad tau value '" + item + "'");
      taus.push_back(v);
    }
  }
  if (taus.empty()) throw std::invalid_argument("empty tau grid");
  for (double t : taus) CascadeParams{t}.validate();
  return taus;
}

std::vector<Design> parse_designs(const std::vector<std::string>& names) {
  if (names.empty()) return {std::begin(kAllDesigns), std::end(kAllDesigns)};
  std::vector<Design> out;
  for (const std::string& name : names) {
    auto d = parse_design(name);
    if (!d) throw std::invalid_argument("unknown design '" + name + "'");
    out.push_back(*d);
  }
  return out;
}

void check_common(const Common& c) {
  for (double r : c.r_values) {
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("r must lie in [0,1]");
  }
  if (!(c.g_exp >= 0.0)) throw std::invalid_argument("g must be non-negative");
  if (!(c.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  fs::create_directories(c.out);
}

EvaluationOptions evaluation_options(const Common& c, const SweepArgs& s) {
  EvaluationOptions opts;
  opts.g_exp = c.g_exp;
  opts.workers = std::max(1U, c.workers);
  opts.ensemble_size = s.ensemble;
  if (s.mode == "analytic") {
    opts.mode = EvaluationMode::kAnalytic;
  } else if (s.mode != "mc") {
    throw std::invalid_argument("mode must be analytic or mc, not '" + s.mode + "'");
  }
  if (s.wiring == "leaders") {
    opts.wiring = InterCellWiring::kLeaders;
  } else if (s.wiring != "members") {
    throw std::invalid_argument("wiring must be members or leaders, not '" + s.wiring + "'");
  }
  return opts;
}

GridSpec grid_spec(const SweepArgs& s) {
  GridSpec grid;
  grid.n = s.n;
  grid.k_values = s.k_values;
  grid.p_values = s.p_values;
  grid.refine = !s.no_refine;
  return grid;
}

std::string tag(double x) { return format_number(x); }

fs::path output(const Common& c, const std::string& name) { return fs::path(c.out) / name; }

void write_plot(const fs::path& path, std::span<const PlotSeries> series, const std::string& title) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_svg_plot(out, series, title, "tau");
}

std::vector<Surface> surfaces_for(Design d, const std::vector<double>& taus, const Common& c,
                                  const SweepArgs& s) {
  auto surfaces = build_surfaces(d, taus, RunSeed{c.seed, 0}, evaluation_options(c, s), grid_spec(s));
  std::size_t capped = 0;
  for (const Surface& surface : surfaces) {
    for (const SurfacePoint& pt : surface.points) capped += pt.tolerance_met ? 0 : 1;
  }
  if (capped > 0) {
    std::cerr << "warning: " << design_name(d) << ": " << capped
              << " points hit the replication cap before the 0.5-node tolerance\n";
  }
  return surfaces;
}

int run_design_sweep(const Common& c, const SweepArgs& s, const RunInfo& info) {
  check_common(c);
  const auto taus = parse_tau_grid(c.tau_grid);
  for (Design d : parse_designs(s.designs)) {
    const auto surfaces = surfaces_for(d, taus, c, s);
    std::vector<PlotSeries> series;
    for (double r : c.r_values) {
      const auto curve = curve_from_surfaces(surfaces, r);
      const auto path = output(c, "fitness_" + std::string(design_name(d)) + "_r" + tag(r) + ".csv");
      emit_csv<CurvePoint>(path, curve, info, write_fitness_curve_csv);
      std::cout << path.string() << '\n';
      PlotSeries ps{"r=" + tag(r), {}, {}};
      for (const CurvePoint& p : curve) {
        ps.x.push_back(p.tau);
        ps.y.push_back(p.fitness);
      }
      series.push_back(std::move(ps));
    }
    if (c.plot) {
      const auto path = output(c, "fitness_" + std::string(design_name(d)) + ".svg");
      write_plot(path, series, "best fitness, " + std::string(design_name(d)));
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

int run_pareto(const Common& c, const SweepArgs& s, const RunInfo& info) {
  check_common(c);
  const auto taus = parse_tau_grid(c.tau_grid);
  std::vector<std::vector<SurfacePoint>> by_tau(taus.size());
  for (Design d : parse_designs(s.designs)) {
    auto surfaces = surfaces_for(d, taus, c, s);
    for (std::size_t t = 0; t < taus.size(); ++t) {
      auto& pts = surfaces[t].points;
      by_tau[t].insert(by_tau[t].end(), pts.begin(), pts.end());
    }
  }
  for (std::size_t t = 0; t < taus.size(); ++t) {
    const auto frontier = pareto_frontier(std::span<const SurfacePoint>(by_tau[t]), c.epsilon);
    const auto path = output(c, "pareto_tau" + tag(taus[t]) + ".csv");
    emit_csv<ParetoPoint>(path, frontier, info, write_pareto_csv);
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_sensitivity(const Common& c, const SweepArgs& s, const RunInfo& info) {
  check_common(c);
  const auto taus = parse_tau_grid(c.tau_grid);
  std::vector<SensitivityRow> rows;
  for (Design d : parse_designs(s.designs)) {
    for (const Surface& surface : surfaces_for(d, taus, c, s)) {
      for (double r : c.r_values) rows.push_back({d, surface.tau, r, sensitivity(surface.points, r)});
    }
  }
  const auto path = output(c, "sensitivity.csv");
  emit_csv<SensitivityRow>(path, rows, info, write_sensitivity_csv);
  std::cout << path.string() << '\n';
  return 0;
}

struct LoadedNetwork {
  LabeledNetwork net;
  std::optional<EdgeWeights> weights;
};

LoadedNetwork load_network(const NetworkArgs& a) {
  LoadedNetwork out{read_edge_list(a.edges), std::nullopt};
  const LabeledNetwork& net = out.net;
  std::cerr << a.edges << ": " << net.num_nodes() << " nodes, " << net.num_edges() << " edges";
  if (net.duplicate_edges > 0) std::cerr << " (" << net.duplicate_edges << " duplicate lines merged)";
  std::cerr << '\n';
  if (auto known = match_published_size(net.num_nodes(), net.num_edges())) {
    std::cerr << "counts match the published " << known->name << " network\n";
  }
  if (!a.roles.empty()) {
    if (a.multiplicity) throw std::invalid_argument("--roles and --multiplicity are exclusive");
    std::ifstream in(a.roles);
    if (!in) throw std::runtime_error("cannot read " + a.roles);
    out.weights = map_hijacker_weights(net, parse_roles(in));
  } else if (a.multiplicity) {
    if (!net.weights) throw std::invalid_argument("--multiplicity needs a third column with Z");
    out.weights = map_multiplicity_weights(net.graph, net.weights->values());
  } else if (net.weights) {
    out.weights = net.weights;
  }
  return out;
}

std::vector<NetworkRow> with_r(std::vector<NetworkRow> rows, double r) {
  for (NetworkRow& row : rows) {
    row.r = r;
    row.F = fitness(row.R.mean, row.W, r);
    if (row.R_weighted) row.F_weighted = fitness(row.R_weighted->mean, *row.W_weighted, r);
  }
  return rows;
}

std::vector<NetworkRow> analyze(const Common& c, const LoadedNetwork& ln) {
  EstimatorOptions est;
  est.seeding = SeedSampling::kAllSeeds;
  est.workers = std::max(1U, c.workers);
  const auto taus = parse_tau_grid(c.tau_grid);
  const EdgeWeights* w = ln.weights ? &*ln.weights : nullptr;
  auto rows = analyze_network(ln.net.graph, w, taus, c.r_values.front(), c.g_exp, RunSeed{c.seed, 0}, est);
  for (const NetworkRow& row : rows) {
    if (row.W_weighted_exceeds_unity) {
      std::cerr << "warning: weighted efficiency exceeds 1 (" << *row.W_weighted << ")\n";
      break;
    }
  }
  return rows;
}

int run_analyze(const Common& c, const NetworkArgs& a, const RunInfo& info) {
  check_common(c);
  const LoadedNetwork ln = load_network(a);
  const auto base = analyze(c, ln);
  const std::string stem = fs::path(a.edges).stem().string();
  for (double r : c.r_values) {
    const auto rows = with_r(base, r);
    const auto path = output(c, "network_" + stem + "_r" + tag(r) + ".csv");
    emit_csv<NetworkRow>(path, rows, info, write_network_csv);
    std::cout << path.string() << '\n';
    if (c.plot) {
      PlotSeries f{"F", {}, {}}, rr{"R", {}, {}}, ww{"W", {}, {}};
      for (const NetworkRow& row : rows) {
        f.x.push_back(row.tau), f.y.push_back(row.F);
        rr.x.push_back(row.tau), rr.y.push_back(row.R.mean);
        ww.x.push_back(row.tau), ww.y.push_back(row.W);
      }
      const PlotSeries series[] = {f, rr, ww};
      const auto svg = output(c, "network_" + stem + "_r" + tag(r) + ".svg");
      write_plot(svg, series, stem + ", r=" + tag(r));
      std::cout << svg.string() << '\n';
    }
  }
  return 0;
}

int run_compare(const Common& c, const NetworkArgs& a, const RunInfo& info) {
  check_common(c);
  const LoadedNetwork ln = load_network(a);
  if (!ln.weights) {
    throw std::invalid_argument("compare-weighted needs weights (third column, --roles or --multiplicity)");
  }
  const auto base = analyze(c, ln);
  const std::string stem = fs::path(a.edges).stem().string();
  for (double r : c.r_values) {
    const auto rows = with_r(base, r);
    const auto path = output(c, "compare_" + stem + "_r" + tag(r) + ".csv");
    emit_csv<NetworkRow>(path, rows, info, write_comparison_csv);
    double f_gap = 0.0, w_gap = 0.0;
    for (const NetworkRow& row : rows) {
      f_gap = std::max(f_gap, std::abs(row.fitness_gap()));
      w_gap = std::max(w_gap, std::abs(row.efficiency_gap()));
    }
    std::cout << path.string() << " max|F gap|=" << f_gap << " max|W gap|=" << w_gap << '\n';
  }
  return 0;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed (recorded in every output)")->required();
  cmd->add_option("--tau-grid", c.tau_grid, "lo:step:hi or comma list")->capture_default_str();
  cmd->add_option("--r", c.r_values, "Resilience weights")->delimiter(',')->capture_default_str();
  cmd->add_option("--g", c.g_exp, "Distance attenuation exponent")->capture_default_str();
  cmd->add_option("--epsilon", c.epsilon, "Pareto box size")->capture_default_str();
  cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
  cmd->add_option("--workers", c.workers, "Worker threads")->capture_default_str();
  cmd->add_flag("--plot", c.plot, "Also write SVG plots");
}

void add_sweep(CLI::App* cmd, SweepArgs& s) {
  cmd->add_option("--design", s.designs, "Design name (repeatable; default all)")->delimiter(',');
  cmd->add_option("--n", s.n, "Nodes per network")->capture_default_str();
  cmd->add_option("--ensemble", s.ensemble, "Networks per configuration (0 = design default)");
  cmd->add_option("--mode", s.mode, "mc or analytic (Stars/Cycles)")->capture_default_str();
  cmd->add_option("--wiring", s.wiring, "Inter-cell edges between random members or leaders")
      ->capture_default_str();
  cmd->add_option("--k", s.k_values, "Cell sizes to search (default 1..n)")->delimiter(',');
  cmd->add_option("--p", s.p_values, "Connectivities to search")->delimiter(',');
  cmd->add_flag("--no-refine", s.no_refine, "Skip midpoint refinement in p");
}

void add_network(CLI::App* cmd, NetworkArgs& a) {
  cmd->add_option("edges", a.edges, "Edge list: 'u v' or 'u v w' per line")->required();
  cmd->add_option("--roles", a.roles, "File of 'label hijacker|facilitator' lines");
  cmd->add_flag("--multiplicity", a.multiplicity, "Third column is a multiplicity Z; use D=2/Z");
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience/efficiency trade-offs of network designs"};
  app.require_subcommand(1);

  Common common;
  SweepArgs sweep;
  NetworkArgs network;

  auto* design_sweep = app.add_subcommand("design-sweep", "Best fitness per tau for each design");
  auto* pareto = app.add_subcommand("pareto", "Epsilon-Pareto frontier of (R, W) per tau");
  auto* sens = app.add_subcommand("sensitivity", "Spread of near-optimal configurations");
  auto* analyze_cmd = app.add_subcommand("analyze", "R, W and F of an edge-list network");
  auto* compare = app.add_subcommand("compare-weighted", "Binary vs weighted fitness of a network");
  for (auto* cmd : {design_sweep, pareto, sens}) {
    add_common(cmd, common);
    add_sweep(cmd, sweep);
  }
  for (auto* cmd : {analyze_cmd, compare}) {
    add_common(cmd, common);
    add_network(cmd, network);
  }

  CLI11_PARSE(app, argc, argv);
  const RunInfo info{common.seed, command_line(argc, argv)};
  try {
    if (*design_sweep) return run_design_sweep(common, sweep, info);
    if (*pareto) return run_pareto(common, sweep, info);
    if (*sens) return run_sensitivity(common, sweep, info);
    if (*analyze_cmd) return run_analyze(common, network, info);
    if (*compare) return run_compare(common, network, info);
  } catch (const std::exception& e) {
    std::cerr << "resilnet: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
