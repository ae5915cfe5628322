#include "fieldmap/exchange_formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "fieldmap/csv.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {
namespace {

void check_label(std::string_view label) {
  if (label.find_first_of("\"\n\r") != std::string_view::npos) {
    throw Error(ErrorKind::Format, "label cannot be written: " + std::string(label));
  }
}

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": " + what);
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  for (auto& l : lines)
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
  return lines;
}

std::vector<std::string_view> split_spaces(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

std::string dl_label(std::string_view label) {
  check_label(label);
  if (label.find_first_of(" ,") != std::string_view::npos) return "\"" + std::string(label) + "\"";
  return std::string(label);
}

}  // namespace

NetFile to_net(const CountryGraph& graph) {
  const std::size_t n = graph.countries.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return graph.countries[a] < graph.countries[b]; });
  NetFile net;
  for (auto i : order) net.labels.push_back(graph.countries[i]);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double w = graph.weights(order[a], order[b]);
      if (w > 0.0) net.edges.push_back({a + 1, b + 1, w});
    }
  return net;
}

std::string write_net(const NetFile& net) {
  if (net.labels.empty()) throw Error(ErrorKind::Format, "network has no vertices");
  std::string out = "*Vertices " + std::to_string(net.labels.size()) + "\n";
  for (std::size_t i = 0; i < net.labels.size(); ++i) {
    check_label(net.labels[i]);
    out += std::to_string(i + 1) + " \"" + net.labels[i] + "\"\n";
  }
  out += "*Edges\n";
  for (const auto& e : net.edges) {
    if (e.from < 1 || e.from >= e.to || e.to > net.labels.size() || !std::isfinite(e.weight)) {
      throw Error(ErrorKind::Format, "edge " + std::to_string(e.from) + " " + std::to_string(e.to) +
                                         " is not a valid undirected edge");
    }
    out += std::to_string(e.from) + " " + std::to_string(e.to) + " " + csv::format_number(e.weight) + "\n";
  }
  return out;
}

std::string write_net(const CountryGraph& graph) { return write_net(to_net(graph)); }

NetFile read_net(std::string_view text) {
  const auto lines = split_lines(text);
  if (lines.empty() || !lines[0].starts_with("*Vertices ")) parse_error(1, "missing *Vertices");
  std::size_t n = 0;
  if (!parse_number(lines[0].substr(10), n)) parse_error(1, "bad vertex count");

  NetFile net;
  std::size_t line = 1;
  for (std::size_t i = 1; i <= n; ++i, ++line) {
    if (line >= lines.size()) parse_error(line + 1, "missing vertex " + std::to_string(i));
    const auto l = lines[line];
    const auto space = l.find(' ');
    std::size_t id = 0;
    if (space == std::string_view::npos || !parse_number(l.substr(0, space), id) || id != i) {
      parse_error(line + 1, "expected vertex " + std::to_string(i));
    }
    const auto label = l.substr(space + 1);
    if (label.size() < 2 || label.front() != '"' || label.back() != '"' ||
        label.substr(1, label.size() - 2).find('"') != std::string_view::npos) {
      parse_error(line + 1, "vertex label must be a single quoted string");
    }
    net.labels.emplace_back(label.substr(1, label.size() - 2));
  }
  if (line >= lines.size() || lines[line] != "*Edges") parse_error(line + 1, "missing *Edges");
  ++line;
  for (; line < lines.size(); ++line) {
    const auto parts = split_spaces(lines[line]);
    if (parts.empty() && line + 1 == lines.size()) break;
    NetEdge e;
    if (parts.size() != 3 || !parse_number(parts[0], e.from) || !parse_number(parts[1], e.to) ||
        !parse_number(parts[2], e.weight)) {
      parse_error(line + 1, "malformed edge");
    }
    if (e.from < 1 || e.from > n || e.to < 1 || e.to > n) {
      parse_error(line + 1, "edge references a vertex outside 1.." + std::to_string(n));
    }
    if (e.from >= e.to) parse_error(line + 1, "undirected edge must list the smaller id first");
    net.edges.push_back(e);
  }
  return net;
}

std::string write_dl(const AffiliationMatrix& aff) {
  const std::size_t rows = aff.countries.size();
  const std::size_t cols = aff.articles.size();
  std::string out = "dl nr=" + std::to_string(rows) + ", nc=" + std::to_string(cols) +
                    ", format=fullmatrix\n";
  out += "row labels:\n";
  for (const auto& c : aff.countries) out += dl_label(c) + "\n";
  out += "column labels:\n";
  for (const auto& a : aff.articles) out += dl_label(a) + "\n";
  out += "data:\n";
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ' ';
      out += aff.incidence(r, c) ? '1' : '0';
    }
    out += '\n';
  }
  return out;
}

}  // namespace fieldmap
