#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "fieldmap/country_network.hpp"

namespace fieldmap {

struct NetEdge {
  std::size_t from = 0;  // 1-based, from < to
  std::size_t to = 0;
  double weight = 0.0;

  friend bool operator==(const NetEdge&, const NetEdge&) = default;
};

// Undirected Pajek network: `*Vertices N`, `i "LABEL"` lines, `*Edges`,
// `i j w` lines. Vertex ids are 1-based and contiguous.
struct NetFile {
  std::vector<std::string> labels;  // labels[i - 1] is vertex i
  std::vector<NetEdge> edges;

  friend bool operator==(const NetFile&, const NetFile&) = default;
};

// Vertices in lexicographic label order, edges with positive weight sorted by
// (from, to).
NetFile to_net(const CountryGraph& graph);

// Throws Error{Format} for a label containing a double quote or a line break,
// or for an edge that breaks the 1-based, from < to layout.
std::string write_net(const NetFile& net);
std::string write_net(const CountryGraph& graph);

// Throws Error{Parse} with the offending line number.
NetFile read_net(std::string_view text);

// Two-mode UCINET DL, full matrix: countries as rows, articles as columns.
std::string write_dl(const AffiliationMatrix& aff);

}  // namespace fieldmap
