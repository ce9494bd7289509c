#include "resilnet/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace resilnet {

std::string format_number(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

template <class Rows>
void require_rows(const Rows& rows) {
  if (rows.empty()) throw std::invalid_argument("no results to write");
}

void write_preamble(std::ostream& out, const RunInfo& info) {
  out << "# resilnet seed=" << info.seed;
  if (!info.command.empty()) out << " command=" << info.command;
  out << '\n';
}

std::string k_field(const DesignConfig& c) {
  return has_cell_size(c.design) ? std::to_string(c.k) : std::string();
}

std::string p_field(const DesignConfig& c) {
  return has_connectivity(c.design) ? format_number(c.p) : std::string();
}

std::string opt_field(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

}  // namespace

void write_fitness_curve_csv(std::ostream& out, std::span<const CurvePoint> curve, const RunInfo& info) {
  require_rows(curve);
  write_preamble(out, info);
  out << "tau,fitness,k,p,R,W,avg_degree,ci\n";
  for (const CurvePoint& c : curve) {
    out << format_number(c.tau) << ',' << format_number(c.fitness) << ',' << k_field(c.best.config)
        << ',' << p_field(c.best.config) << ',' << format_number(c.best.R_mean) << ','
        << format_number(c.best.W_mean) << ',' << format_number(c.best.avg_degree) << ','
        << format_number(c.ci) << '\n';
  }
}

void write_pareto_csv(std::ostream& out, std::span<const ParetoPoint> frontier, const RunInfo& info) {
  require_rows(frontier);
  write_preamble(out, info);
  out << "R,W,design,k,p\n";
  for (const ParetoPoint& p : frontier) {
    out << format_number(p.R) << ',' << format_number(p.W) << ',' << design_name(p.config.design)
        << ',' << k_field(p.config) << ',' << p_field(p.config) << '\n';
  }
}

void write_sensitivity_csv(std::ostream& out, std::span<const SensitivityRow> rows,
                           const RunInfo& info) {
  require_rows(rows);
  write_preamble(out, info);
  out << "design,tau,r,count,best_fitness,std_k,std_p,std_R,std_W,singleton\n";
  for (const SensitivityRow& row : rows) {
    const Sensitivity& s = row.result;
    out << design_name(row.design) << ',' << format_number(row.tau) << ',' << format_number(row.r)
        << ',' << s.count << ',' << format_number(s.best_fitness) << ',' << opt_field(s.sd_k) << ','
        << opt_field(s.sd_p) << ',' << format_number(s.sd_R) << ',' << format_number(s.sd_W) << ','
        << (s.singleton ? 1 : 0) << '\n';
  }
}

void write_network_csv(std::ostream& out, std::span<const NetworkRow> rows, const RunInfo& info) {
  require_rows(rows);
  const bool weighted = rows.front().F_weighted.has_value();
  write_preamble(out, info);
  out << "tau,R,R_ci,W,F";
  if (weighted) out << ",R_weighted,R_weighted_ci,W_weighted,F_weighted";
  out << '\n';
  for (const NetworkRow& row : rows) {
    out << format_number(row.tau) << ',' << format_number(row.R.mean) << ','
        << format_number(row.R.half_width_95) << ',' << format_number(row.W) << ','
        << format_number(row.F);
    if (weighted) {
      out << ',' << format_number(row.R_weighted->mean) << ','
          << format_number(row.R_weighted->half_width_95) << ',' << format_number(*row.W_weighted)
          << ',' << format_number(*row.F_weighted);
    }
    out << '\n';
  }
}

void write_comparison_csv(std::ostream& out, std::span<const NetworkRow> rows, const RunInfo& info) {
  require_rows(rows);
  if (!rows.front().F_weighted) {
    throw std::invalid_argument("binary/weighted comparison needs edge weights");
  }
  write_preamble(out, info);
  out << "tau,F_binary,F_weighted,F_gap,R_binary,R_weighted,W_binary,W_weighted,W_gap\n";
  for (const NetworkRow& row : rows) {
    out << format_number(row.tau) << ',' << format_number(row.F) << ','
        << format_number(*row.F_weighted) << ',' << format_number(row.fitness_gap()) << ','
        << format_number(row.R.mean) << ',' << format_number(row.R_weighted->mean) << ','
        << format_number(row.W) << ',' << format_number(*row.W_weighted) << ','
        << format_number(row.efficiency_gap()) << '\n';
  }
}

void write_svg_plot(std::ostream& out, std::span<const PlotSeries> series, const std::string& title,
                    const std::string& x_label) {
  if (series.empty()) throw std::invalid_argument("nothing to plot");
  constexpr double kWidth = 640, kHeight = 420, kLeft = 60, kRight = 150, kTop = 40, kBottom = 50;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  for (const PlotSeries& s : series) {
    for (double x : s.x) x_lo = std::min(x_lo, x), x_hi = std::max(x_hi, x);
    for (double y : s.y) y_lo = std::min(y_lo, y), y_hi = std::max(y_hi, y);
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - y_lo) / (y_hi - y_lo) * ph; };
  static constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#17becf"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\">" << title << "</text>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_lo + (x_hi - x_lo) * i / 4.0;
    const double fy = y_lo + (y_hi - y_lo) * i / 4.0;
    out << "<text x=\"" << sx(fx) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
        << format_number(std::round(fx * 100) / 100) << "</text>\n";
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">"
        << format_number(std::round(fy * 100) / 100) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 10 << "\" text-anchor=\"middle\">"
      << x_label << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const PlotSeries& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t j = 0; j < std::min(s.x.size(), s.y.size()); ++j) {
      out << sx(s.x[j]) << ',' << sy(s.y[j]) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    out << "<line x1=\"" << kWidth - kRight + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kWidth - kRight + 30 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kWidth - kRight + 36 << "\" y=\"" << ly + 4 << "\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
}

std::size_t CsvTable::column(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw std::out_of_range("no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

CsvTable parse_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(text);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!text.empty() && text.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      table.comments.push_back(line);
    } else if (table.header.empty()) {
      table.header = split(line);
    } else {
      table.rows.push_back(split(line));
    }
  }
  return table;
}

}  // namespace resilnet
