#include "fieldmap/country_network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>

#include "fieldmap/csv.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {

std::vector<std::string> record_countries(const BiblioRecord& record, const CountryOptions& options) {
  std::set<std::string> found;
  for (const auto& a : record.addresses) {
    auto c = extract_country(a, options);
    if (c != kUnknownCountry) found.insert(std::move(c));
  }
  return {found.begin(), found.end()};
}

std::string InternationalShare::percent_text() const {
  return std::to_string(percent_tenths / 10) + "." + std::to_string(percent_tenths % 10);
}

InternationalShare share_from_counts(std::int64_t total, std::int64_t international) {
  if (total <= 0 || international < 0 || international > total) {
    throw Error(ErrorKind::OutOfRange, "international count must lie in [0, total] with total > 0");
  }
  InternationalShare s{total, international, 0};
  // floor(1000 * i / t + 1/2) in integers.
  s.percent_tenths = (2000 * international + total) / (2 * total);
  return s;
}

InternationalShare international_share(std::span<const BiblioRecord> records,
                                       const CountryOptions& options) {
  if (records.empty()) throw Error(ErrorKind::EmptyMatrix, "no records for international share");
  std::int64_t international = 0;
  for (const auto& r : records) {
    if (record_countries(r, options).size() >= 2) ++international;
  }
  return share_from_counts(static_cast<std::int64_t>(records.size()), international);
}

AffiliationMatrix build_affiliation(std::span<const BiblioRecord> records,
                                    const CountryOptions& options) {
  AffiliationMatrix aff;
  std::vector<std::vector<std::string>> per_article;
  std::set<std::string> all;
  for (const auto& r : records) {
    auto countries = record_countries(r, options);
    if (countries.empty()) {
      ++aff.excluded;
      continue;
    }
    all.insert(countries.begin(), countries.end());
    aff.articles.push_back(r.record_id);
    per_article.push_back(std::move(countries));
  }
  if (aff.articles.empty()) {
    throw Error(ErrorKind::EmptyMatrix, "no article has an address with a resolvable country");
  }
  aff.countries.assign(all.begin(), all.end());
  aff.incidence = DenseMatrix<std::uint8_t>(aff.countries.size(), aff.articles.size());
  for (std::size_t a = 0; a < per_article.size(); ++a) {
    for (const auto& c : per_article[a]) {
      const auto row = std::lower_bound(aff.countries.begin(), aff.countries.end(), c) - aff.countries.begin();
      aff.incidence(static_cast<std::size_t>(row), a) = 1;
    }
  }
  return aff;
}

std::size_t CountryGraph::edge_count() const {
  std::size_t e = 0;
  for (std::size_t i = 0; i < countries.size(); ++i)
    for (std::size_t j = i + 1; j < countries.size(); ++j) e += weights(i, j) > 0.0;
  return e;
}

std::vector<std::size_t> CountryGraph::degrees() const {
  std::vector<std::size_t> d(countries.size(), 0);
  for (std::size_t i = 0; i < countries.size(); ++i)
    for (std::size_t j = 0; j < countries.size(); ++j) d[i] += (i != j && weights(i, j) > 0.0);
  return d;
}

CountryGraph project(const AffiliationMatrix& aff, CoauthorCounting counting) {
  const std::size_t n = aff.countries.size();
  CountryGraph g{aff.countries, Matrix(n, n)};
  std::vector<std::size_t> present;
  for (std::size_t a = 0; a < aff.articles.size(); ++a) {
    present.clear();
    for (std::size_t c = 0; c < n; ++c)
      if (aff.incidence(c, a)) present.push_back(c);
    const std::size_t k = present.size();
    if (k < 2) continue;
    const double w = counting == CoauthorCounting::Whole
                         ? 1.0
                         : 2.0 / static_cast<double>(k * (k - 1));
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = x + 1; y < k; ++y) {
        g.weights(present[x], present[y]) += w;
        g.weights(present[y], present[x]) += w;
      }
  }
  return g;
}

CoreDecomposition k_core(const CountryGraph& graph) {
  const std::size_t n = graph.countries.size();
  CoreDecomposition out;
  out.countries = graph.countries;
  out.coreness.assign(n, 0);
  if (n == 0) throw Error(ErrorKind::EmptyMatrix, "core analysis of an empty graph");

  std::vector<std::size_t> degree = graph.degrees();
  std::vector<bool> removed(n, false);
  int k = 0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!removed[i] && (pick == n || degree[i] < degree[pick])) pick = i;
    k = std::max(k, static_cast<int>(degree[pick]));
    out.coreness[pick] = k;
    removed[pick] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (!removed[j] && graph.weights(pick, j) > 0.0) --degree[j];
  }
  out.max_coreness = *std::max_element(out.coreness.begin(), out.coreness.end());
  for (std::size_t i = 0; i < n; ++i)
    if (out.coreness[i] == out.max_coreness) out.max_core.push_back(graph.countries[i]);
  out.degenerate = graph.edge_count() == 0;
  return out;
}

double salton_cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    dot += a[k] * b[k];
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

CosineMatrix cosine_normalize(const CountryGraph& graph) {
  const std::size_t n = graph.countries.size();
  CosineMatrix out{graph.countries, Matrix(n, n), std::vector<bool>(n, false)};
  std::vector<double> norm(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      if (k != i) s += graph.weights(i, k) * graph.weights(i, k);
    norm[i] = std::sqrt(s);
    out.isolated[i] = s == 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (out.isolated[i]) continue;
    out.values(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (out.isolated[j]) continue;
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double a = k == i ? 0.0 : graph.weights(i, k);
        const double b = k == j ? 0.0 : graph.weights(j, k);
        dot += a * b;
      }
      out.values(i, j) = out.values(j, i) = std::clamp(dot / (norm[i] * norm[j]), 0.0, 1.0);
    }
  }
  return out;
}

ThresholdedNetwork threshold_network(const CosineMatrix& cosine, double cutoff) {
  const std::size_t n = cosine.countries.size();
  ThresholdedNetwork out;
  out.graph = CountryGraph{cosine.countries, Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cosine.values(i, j) > cutoff) {
        out.graph.weights(i, j) = out.graph.weights(j, i) = cosine.values(i, j);
      }
  const auto deg = out.graph.degrees();
  for (std::size_t i = 0; i < n; ++i)
    if (deg[i] == 0) out.isolated.push_back(cosine.countries[i]);
  out.degenerate = out.graph.edge_count() == 0;
  return out;
}

void write_share_csv_header(std::ostream& out) {
  csv::write_row(out, {"group", "year", "articles", "international", "percent"});
}

void write_share_csv_row(std::ostream& out, const std::string& group, int year,
                         const InternationalShare& share) {
  csv::write_row(out, {group, std::to_string(year), std::to_string(share.total),
                       std::to_string(share.international), share.percent_text()});
}

void write_core_csv_header(std::ostream& out) {
  csv::write_row(out, {"group", "year", "countries", "participating", "core_group", "max_coreness"});
}

void write_core_csv_row(std::ostream& out, const std::string& group, int year,
                        const CountryGraph& graph, const CoreDecomposition& cores) {
  const auto deg = graph.degrees();
  const auto participating = std::count_if(deg.begin(), deg.end(), [](auto d) { return d > 0; });
  csv::write_row(out, {group, std::to_string(year), std::to_string(graph.countries.size()),
                       std::to_string(participating), std::to_string(cores.max_core.size()),
                       std::to_string(cores.max_coreness)});
}

void write_affiliation_csv(std::ostream& out, const AffiliationMatrix& aff) {
  std::vector<std::string> header{std::string(kAffiliationSchema) + " excluded=" +
                                  std::to_string(aff.excluded)};
  header.insert(header.end(), aff.articles.begin(), aff.articles.end());
  csv::write_row(out, header);
  for (std::size_t c = 0; c < aff.countries.size(); ++c) {
    std::vector<std::string> row{aff.countries[c]};
    for (auto v : aff.incidence.row(c)) row.push_back(v ? "1" : "0");
    csv::write_row(out, row);
  }
}

AffiliationMatrix read_affiliation_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto header_line = csv::next_line(in, line_no);
  const auto header = header_line ? csv::split_line(*header_line) : std::vector<std::string>{};
  const std::string prefix = std::string(kAffiliationSchema) + " excluded=";
  if (header.empty() || !header[0].starts_with(prefix)) {
    throw Error(ErrorKind::Schema,
                "affiliation CSV must start with schema " + std::string(kAffiliationSchema));
  }
  AffiliationMatrix aff;
  const std::string ex = header[0].substr(prefix.size());
  auto [p, ec] = std::from_chars(ex.data(), ex.data() + ex.size(), aff.excluded);
  if (ec != std::errc{} || p != ex.data() + ex.size()) {
    throw Error(ErrorKind::Parse, "affiliation CSV line 1: bad excluded count");
  }
  aff.articles.assign(header.begin() + 1, header.end());
  std::vector<std::vector<std::uint8_t>> rows;
  while (auto line = csv::next_line(in, line_no)) {
    const auto fields = csv::split_line(*line);
    if (fields.size() != aff.articles.size() + 1) {
      throw Error(ErrorKind::Parse, "affiliation CSV line " + std::to_string(line_no) + ": wrong field count");
    }
    aff.countries.push_back(fields[0]);
    std::vector<std::uint8_t> row;
    for (std::size_t a = 1; a < fields.size(); ++a) {
      if (fields[a] != "0" && fields[a] != "1") {
        throw Error(ErrorKind::Parse, "affiliation CSV line " + std::to_string(line_no) + ": cells must be 0 or 1");
      }
      row.push_back(fields[a] == "1");
    }
    rows.push_back(std::move(row));
  }
  if (aff.countries.empty() || aff.articles.empty()) {
    throw Error(ErrorKind::EmptyMatrix, "affiliation matrix is empty");
  }
  if (!std::is_sorted(aff.countries.begin(), aff.countries.end()) ||
      std::adjacent_find(aff.countries.begin(), aff.countries.end()) != aff.countries.end()) {
    throw Error(ErrorKind::Parse, "affiliation CSV: countries must be sorted and unique");
  }
  aff.incidence = DenseMatrix<std::uint8_t>(aff.countries.size(), aff.articles.size());
  for (std::size_t c = 0; c < rows.size(); ++c)
    for (std::size_t a = 0; a < aff.articles.size(); ++a) aff.incidence(c, a) = rows[c][a];
  for (std::size_t a = 0; a < aff.articles.size(); ++a) {
    bool any = false;
    for (std::size_t c = 0; c < aff.countries.size(); ++c) any = any || aff.incidence(c, a);
    if (!any) throw Error(ErrorKind::Parse, "affiliation CSV: article " + aff.articles[a] + " has no country");
  }
  return aff;
}

}  // namespace fieldmap
