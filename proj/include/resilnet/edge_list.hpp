#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "resilnet/graph.hpp"

namespace resilnet {

/// Rejected input, with the 1-based line it came from (0 if not line-bound).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A graph read from a file, with the original node labels.
struct LabeledNetwork {
  Graph graph;
  /// Third-column values, when the file has them.
  std::optional<EdgeWeights> weights;
  /// Dense index -> label, in order of first appearance.
  std::vector<std::string> labels;
  std::unordered_map<std::string, NodeId> index;
  std::size_t duplicate_edges = 0;

  std::size_t num_nodes() const { return graph.num_nodes(); }
  std::size_t num_edges() const { return graph.num_edges(); }
  NodeId node(const std::string& label) const;
};

/// Reads "u v" or "u v w" lines. Labels are arbitrary whitespace-free
/// strings; '#' starts a comment; blank lines are skipped. Either every edge
/// line has a weight or none does. Repeated edges are collapsed (a repeat
/// with a different weight is rejected). Throws ParseError on a self-loop,
/// a non-positive or malformed weight, mixed weighted/unweighted lines, or a
/// line with the wrong number of fields.
LabeledNetwork parse_edge_list(std::istream& in);
LabeledNetwork read_edge_list(const std::filesystem::path& path);

/// Writes the network back in the format parse_edge_list reads.
void write_edge_list(std::ostream& out, const LabeledNetwork& net);

enum class Role { kFacilitator, kHijacker };

/// Reads "label role" lines (role: hijacker or facilitator).
std::map<std::string, Role> parse_roles(std::istream& in);

/// D = 2, 1, 0.5 for edges touching zero, one, two hijackers. Throws
/// std::invalid_argument naming the first node without a role.
EdgeWeights map_hijacker_weights(const LabeledNetwork& net, const std::map<std::string, Role>& roles);

/// D = 2 / Z for integer multiplicities Z >= 1, indexed by EdgeId. Throws
/// std::invalid_argument on Z < 1 or a non-integer Z.
EdgeWeights map_multiplicity_weights(const Graph& g, std::span<const double> multiplicity);

/// Node and edge counts of the empirical networks in the original study.
struct PublishedSize {
  std::string_view name;
  std::size_t nodes;
  std::size_t edges;
};

inline constexpr PublishedSize kPublishedSizes[] = {
    {"11M", 70, 240},          {"9/11", 62, 152},          {"CollabNet", 1589, 2742},
    {"E-Mail", 1133, 5452},    {"FTP", 174, 300},          {"Gnutella", 6301, 20777},
    {"Internet AS", 26475, 53381},
};

/// The published network with exactly these counts, if any.
std::optional<PublishedSize> match_published_size(std::size_t nodes, std::size_t edges);

}  // namespace resilnet
