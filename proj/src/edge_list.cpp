#include "resilnet/edge_list.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "resilnet/report.hpp"

namespace resilnet {

NodeId LabeledNetwork::node(const std::string& label) const {
  auto it = index.find(label);
  if (it == index.end()) throw std::out_of_range("unknown node label '" + label + "'");
  return it->second;
}

namespace {

std::vector<std::string> fields_of(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream ss(body);
  std::vector<std::string> out;
  for (std::string f; ss >> f;) out.push_back(std::move(f));
  return out;
}

std::optional<double> to_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

LabeledNetwork parse_edge_list(std::istream& in) {
  LabeledNetwork net;
  struct Entry {
    NodeId u, v;
    double w;
    std::size_t line;
  };
  std::vector<Entry> entries;
  std::optional<bool> weighted;
  auto intern = [&](const std::string& label) {
    auto [it, inserted] = net.index.emplace(label, static_cast<NodeId>(net.labels.size()));
    if (inserted) net.labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields_of(line);
    if (f.empty()) continue;
    if (f.size() != 2 && f.size() != 3) {
      throw ParseError(line_no, "expected 'u v' or 'u v w', got " + std::to_string(f.size()) +
                                    " fields");
    }
    const bool has_w = f.size() == 3;
    if (weighted && *weighted != has_w) {
      throw ParseError(line_no, "mixed weighted and unweighted edge lines");
    }
    weighted = has_w;
    if (f[0] == f[1]) throw ParseError(line_no, "self-loop on node '" + f[0] + "'");
    double w = 1.0;
    if (has_w) {
      auto parsed = to_number(f[2]);
      if (!parsed || !std::isfinite(*parsed)) {
        throw ParseError(line_no, "weight '" + f[2] + "' is not a number");
      }
      if (*parsed <= 0.0) throw ParseError(line_no, "weight must be positive, got " + f[2]);
      w = *parsed;
    }
    const NodeId u = intern(f[0]);
    const NodeId v = intern(f[1]);
    entries.push_back({std::min(u, v), std::max(u, v), w, line_no});
  }

  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  std::vector<std::pair<NodeId, NodeId>> pairs;
  std::vector<double> w;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].u == entries[i - 1].u && entries[i].v == entries[i - 1].v) {
      if (entries[i].w != entries[i - 1].w) {
        throw ParseError(entries[i].line, "edge " + net.labels[entries[i].u] + " " +
                                              net.labels[entries[i].v] +
                                              " repeated with a different weight");
      }
      ++net.duplicate_edges;
      continue;
    }
    pairs.emplace_back(entries[i].u, entries[i].v);
    w.push_back(entries[i].w);
  }
  // Pairs are already canonical and sorted, so EdgeIds follow this order.
  net.graph = Graph(net.labels.size(), pairs);
  if (weighted.value_or(false)) net.weights = EdgeWeights(net.graph, std::move(w));
  return net;
}

LabeledNetwork read_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const LabeledNetwork& net) {
  // Listing isolated nodes is impossible in this format; they are dropped.
  for (EdgeId e = 0; e < net.graph.num_edges(); ++e) {
    const Edge& ed = net.graph.edge(e);
    out << net.labels[ed.u] << ' ' << net.labels[ed.v];
    if (net.weights) out << ' ' << format_number((*net.weights)[e]);
    out << '\n';
  }
}

std::map<std::string, Role> parse_roles(std::istream& in) {
  std::map<std::string, Role> roles;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto f = fields_of(line);
    if (f.empty()) continue;
    if (f.size() != 2) throw ParseError(line_no, "expected 'label role'");
    std::string role = f[1];
    std::transform(role.begin(), role.end(), role.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (role == "hijacker") {
      roles[f[0]] = Role::kHijacker;
    } else if (role == "facilitator") {
      roles[f[0]] = Role::kFacilitator;
    } else {
      throw ParseError(line_no, "unknown role '" + f[1] + "'");
    }
  }
  return roles;
}

EdgeWeights map_hijacker_weights(const LabeledNetwork& net, const std::map<std::string, Role>& roles) {
  std::vector<bool> hijacker(net.num_nodes(), false);
  for (NodeId v = 0; v < net.num_nodes(); ++v) {
    auto it = roles.find(net.labels[v]);
    if (it == roles.end()) {
      throw std::invalid_argument("node '" + net.labels[v] + "' has no hijacker/facilitator tag");
    }
    hijacker[v] = it->second == Role::kHijacker;
  }
  std::vector<double> d;
  d.reserve(net.num_edges());
  for (const Edge& e : net.graph.edges()) {
    const int count = static_cast<int>(hijacker[e.u]) + static_cast<int>(hijacker[e.v]);
    d.push_back(count == 0 ? 2.0 : count == 1 ? 1.0 : 0.5);
  }
  return EdgeWeights(net.graph, std::move(d));
}

EdgeWeights map_multiplicity_weights(const Graph& g, std::span<const double> multiplicity) {
  if (multiplicity.size() != g.num_edges()) {
    throw std::invalid_argument("expected one multiplicity per edge");
  }
  std::vector<double> d;
  d.reserve(multiplicity.size());
  for (double z : multiplicity) {
    if (!(z >= 1.0) || z != std::floor(z)) {
      throw std::invalid_argument("multiplicity must be an integer >= 1, got " + format_number(z));
    }
    d.push_back(2.0 / z);
  }
  return EdgeWeights(g, std::move(d));
}

std::optional<PublishedSize> match_published_size(std::size_t nodes, std::size_t edges) {
  for (const PublishedSize& p : kPublishedSizes) {
    if (p.nodes == nodes && p.edges == edges) return p;
  }
  return std::nullopt;
}

}  // namespace resilnet
