#include "fieldmap/journal_citation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

#include "fieldmap/csv.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {
namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x80) c = static_cast<char>(std::toupper(uc));
  }
  return out;
}

}  // namespace

std::string_view to_string(EnvironmentDirection d) {
  switch (d) {
    case EnvironmentDirection::Citing: return "citing";
    case EnvironmentDirection::Cited: return "cited";
    case EnvironmentDirection::Union: return "union";
  }
  return "?";
}

std::optional<EnvironmentDirection> parse_direction(std::string_view text) {
  if (text == "citing") return EnvironmentDirection::Citing;
  if (text == "cited") return EnvironmentDirection::Cited;
  if (text == "union") return EnvironmentDirection::Union;
  return std::nullopt;
}

std::optional<std::size_t> JournalCitationMatrix::index_of(std::string_view journal) const {
  auto it = std::lower_bound(journals.begin(), journals.end(), journal);
  if (it == journals.end() || *it != journal) return std::nullopt;
  return static_cast<std::size_t>(it - journals.begin());
}

std::int64_t JournalCitationMatrix::total() const {
  std::int64_t t = 0;
  for (auto v : counts.data()) t += v;
  return t;
}

std::int64_t JournalCitationMatrix::row_sum(std::size_t i) const {
  std::int64_t t = 0;
  for (auto v : counts.row(i)) t += v;
  return t;
}

std::int64_t JournalCitationMatrix::column_sum(std::size_t j) const {
  std::int64_t t = 0;
  for (std::size_t i = 0; i < counts.rows(); ++i) t += counts(i, j);
  return t;
}

JournalCitationMatrix build_matrix(std::span<const BiblioRecord> records, int year,
                                   CitationCounting counting) {
  std::set<std::string> names;
  bool any = false;
  for (const auto& r : records) {
    if (r.pub_year != year) continue;
    any = true;
    names.insert(r.journal);
    for (const auto& ref : r.cited_refs) names.insert(ref.cited_journal);
  }
  if (!any) {
    throw Error(ErrorKind::EmptyMatrix, "no records published in " + std::to_string(year));
  }

  JournalCitationMatrix m;
  m.year = year;
  m.journals.assign(names.begin(), names.end());
  m.counts = CountMatrix(m.journals.size(), m.journals.size());
  for (const auto& r : records) {
    if (r.pub_year != year) continue;
    const std::size_t i = *m.index_of(r.journal);
    std::set<std::size_t> seen;
    for (const auto& ref : r.cited_refs) {
      const std::size_t j = *m.index_of(ref.cited_journal);
      if (counting == CitationCounting::Binary && !seen.insert(j).second) continue;
      ++m.counts(i, j);
    }
  }
  return m;
}

std::vector<std::string> find_seed_journals(std::span<const std::string> journals,
                                            std::span<const std::string> keywords) {
  std::vector<std::string> needles;
  for (const auto& k : keywords) {
    if (!k.empty()) needles.push_back(upper(k));
  }
  std::vector<std::string> out;
  for (const auto& j : journals) {
    const std::string name = upper(j);
    if (std::any_of(needles.begin(), needles.end(),
                    [&](const std::string& n) { return name.find(n) != std::string::npos; })) {
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

CitationEnvironment citation_environment(const JournalCitationMatrix& matrix,
                                         std::string_view seed, double threshold,
                                         EnvironmentDirection direction) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error(ErrorKind::OutOfRange, "environment threshold must lie in (0, 1)");
  }
  const auto s = matrix.index_of(seed);
  if (!s) throw Error(ErrorKind::NotFound, "seed journal not in matrix: " + std::string(seed));

  const std::size_t n = matrix.journals.size();
  const std::int64_t received = matrix.column_sum(*s);
  const std::int64_t given = matrix.row_sum(*s);
  const bool use_citing = direction != EnvironmentDirection::Cited;
  const bool use_cited = direction != EnvironmentDirection::Citing;
  if ((use_citing && received == 0 && !use_cited) || (use_cited && given == 0 && !use_citing) ||
      (received == 0 && given == 0)) {
    throw Error(ErrorKind::NoEnvironment,
                "seed journal has no citations in that direction: " + std::string(seed));
  }

  // count / total is compared rather than count against threshold * total:
  // the quotient is correctly rounded, so a share that equals the threshold
  // exactly compares equal.
  auto qualifies = [&](std::int64_t count, std::int64_t total) {
    return total > 0 && count > 0 &&
           static_cast<double>(count) / static_cast<double>(total) >= threshold;
  };

  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == *s) {
      idx.push_back(j);
      continue;
    }
    const bool citing = use_citing && qualifies(matrix.counts(j, *s), received);
    const bool cited = use_cited && qualifies(matrix.counts(*s, j), given);
    if (citing || cited) idx.push_back(j);
  }

  CitationEnvironment env;
  env.seed = std::string(seed);
  env.year = matrix.year;
  env.threshold = threshold;
  env.direction = direction;
  env.profile_journals = matrix.journals;
  env.submatrix = CountMatrix(idx.size(), idx.size());
  env.citing_profiles = CountMatrix(idx.size(), n);
  env.cited_profiles = CountMatrix(idx.size(), n);
  for (std::size_t a = 0; a < idx.size(); ++a) {
    env.members.push_back(matrix.journals[idx[a]]);
    for (std::size_t b = 0; b < idx.size(); ++b) env.submatrix(a, b) = matrix.counts(idx[a], idx[b]);
    for (std::size_t k = 0; k < n; ++k) {
      env.citing_profiles(a, k) = matrix.counts(idx[a], k);
      env.cited_profiles(a, k) = matrix.counts(k, idx[a]);
    }
  }
  return env;
}

std::string pick_seed(const JournalCitationMatrix& matrix, std::span<const std::string> keywords) {
  const auto candidates = find_seed_journals(matrix.journals, keywords);
  if (candidates.empty()) {
    throw Error(ErrorKind::NotFound, "no journal matches the seed keywords");
  }
  const std::string* best = nullptr;
  std::int64_t best_count = -1;
  for (const auto& c : candidates) {
    const auto received = matrix.column_sum(*matrix.index_of(c));
    if (received > best_count) {
      best = &c;
      best_count = received;
    }
  }
  return *best;
}

void write_matrix_csv(std::ostream& out, const JournalCitationMatrix& matrix) {
  std::vector<std::string> header{std::string(kMatrixSchema) + " year=" + std::to_string(matrix.year)};
  header.insert(header.end(), matrix.journals.begin(), matrix.journals.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < matrix.journals.size(); ++i) {
    std::vector<std::string> row{matrix.journals[i]};
    for (auto v : matrix.counts.row(i)) row.push_back(std::to_string(v));
    csv::write_row(out, row);
  }
}

JournalCitationMatrix read_matrix_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto header_line = csv::next_line(in, line_no);
  if (!header_line) throw Error(ErrorKind::Schema, "empty matrix file; expected " + std::string(kMatrixSchema));
  const auto header = csv::split_line(*header_line);
  const std::string prefix = std::string(kMatrixSchema) + " year=";
  if (header.empty() || !header[0].starts_with(prefix)) {
    throw Error(ErrorKind::Schema, "matrix CSV must start with schema " + std::string(kMatrixSchema));
  }
  JournalCitationMatrix m;
  const std::string year_text = header[0].substr(prefix.size());
  auto [p, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), m.year);
  if (ec != std::errc{} || p != year_text.data() + year_text.size()) {
    throw Error(ErrorKind::Parse, "matrix CSV line 1: bad year");
  }
  m.journals.assign(header.begin() + 1, header.end());
  if (!std::is_sorted(m.journals.begin(), m.journals.end()) ||
      std::adjacent_find(m.journals.begin(), m.journals.end()) != m.journals.end()) {
    throw Error(ErrorKind::Parse, "matrix CSV line 1: journal index must be sorted and unique");
  }
  const std::size_t n = m.journals.size();
  m.counts = CountMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto line = csv::next_line(in, line_no);
    if (!line) throw Error(ErrorKind::Parse, "matrix CSV: missing row for " + m.journals[i]);
    const auto fields = csv::split_line(*line);
    if (fields.size() != n + 1 || fields[0] != m.journals[i]) {
      throw Error(ErrorKind::Parse, "matrix CSV line " + std::to_string(line_no) + ": malformed row");
    }
    for (std::size_t j = 0; j < n; ++j) {
      const auto& f = fields[j + 1];
      std::int64_t v = 0;
      auto [ptr, err] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (err != std::errc{} || ptr != f.data() + f.size() || v < 0) {
        throw Error(ErrorKind::Parse,
                    "matrix CSV line " + std::to_string(line_no) + ": bad count '" + f + "'");
      }
      m.counts(i, j) = v;
    }
  }
  if (csv::next_line(in, line_no)) {
    throw Error(ErrorKind::Parse, "matrix CSV line " + std::to_string(line_no) + ": trailing data");
  }
  return m;
}

}  // namespace fieldmap
