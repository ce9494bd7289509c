#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "resilnet/analysis.hpp"
#include "resilnet/optimizer.hpp"
#include "resilnet/pareto.hpp"

namespace resilnet {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// Provenance written as the leading '#' comment of every CSV.
struct RunInfo {
  std::uint64_t seed = 0;
  std::string command;
};

// Column layouts:
//   fitness curve: tau,fitness,k,p,R,W,avg_degree,ci
//   pareto:        R,W,design,k,p
//   sensitivity:   design,tau,r,count,best_fitness,std_k,std_p,std_R,std_W,singleton
//   network:       tau,R,R_ci,W,F[,R_weighted,R_weighted_ci,W_weighted,F_weighted]
//   comparison:    tau,F_binary,F_weighted,F_gap,R_binary,R_weighted,W_binary,W_weighted,W_gap
// Parameters a design lacks (k for ER, p for unconnected designs) are left empty.

struct SensitivityRow {
  Design design;
  double tau;
  double r;
  Sensitivity result;
};

/// Each writer throws std::invalid_argument on empty input (before touching
/// the stream or file) and std::runtime_error if the file cannot be written.
void write_fitness_curve_csv(std::ostream& out, std::span<const CurvePoint> curve, const RunInfo& info);
void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> frontier, const RunInfo& info);
void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const RunInfo& info);
void write_network_csv(std::ostream& out, std::span<const NetworkRow> rows, const RunInfo& info);
void write_comparison_csv(std::ostream& out, std::span<const NetworkRow> rows, const RunInfo& info);

/// Opens `path` and runs `write` on it. Empty `rows` are refused before the
/// file is created.
template <class Row, class Writer>
void emit_csv(const std::filesystem::path& path, std::span<const Row> rows, const RunInfo& info,
              Writer write) {
  if (rows.empty()) throw std::invalid_argument("no results to write to " + path.string());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write(out, rows, info);
  if (!out) throw std::runtime_error("error while writing " + path.string());
}

/// A named series for the line plot.
struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal SVG line chart (x and y axes on [0,1] unless data exceed it).
void write_svg_plot(std::ostream& out, std::span<const PlotSeries> series, const std::string& title,
                    const std::string& x_label);

/// Comment lines, header, and rows of a CSV emitted by the writers above.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
};

CsvTable parse_csv(std::istream& in);

}  // namespace resilnet
