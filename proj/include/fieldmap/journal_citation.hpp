#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldmap/matrix.hpp"
#include "fieldmap/records.hpp"

namespace fieldmap {

// counts(i, j) = citations given by articles published in journal i to
// journal j. Rows and columns share one lexicographically sorted index.
struct JournalCitationMatrix {
  std::vector<std::string> journals;
  CountMatrix counts;
  int year = 0;

  std::optional<std::size_t> index_of(std::string_view journal) const;
  std::int64_t total() const;
  std::int64_t row_sum(std::size_t i) const;
  std::int64_t column_sum(std::size_t j) const;

  friend bool operator==(const JournalCitationMatrix&, const JournalCitationMatrix&) = default;
};

enum class CitationCounting {
  Multiset,  // every cited-reference occurrence counts
  Binary,    // a cited journal counts at most once per citing article
};

JournalCitationMatrix build_matrix(std::span<const BiblioRecord> records, int year,
                                   CitationCounting counting = CitationCounting::Multiset);

// Journals whose name contains any keyword, case-insensitively. Sorted.
std::vector<std::string> find_seed_journals(std::span<const std::string> journals,
                                            std::span<const std::string> keywords);

enum class EnvironmentDirection {
  Citing,  // journals that cite the seed
  Cited,   // journals the seed cites
  Union,
};

std::string_view to_string(EnvironmentDirection direction);
std::optional<EnvironmentDirection> parse_direction(std::string_view text);

struct CitationEnvironment {
  std::string seed;
  int year = 0;
  double threshold = 0.0;
  EnvironmentDirection direction = EnvironmentDirection::Citing;
  std::vector<std::string> members;  // sorted, includes the seed
  CountMatrix submatrix;             // members x members
  // Full citation rows and columns of every member against the parent
  // matrix's index; correlation analysis runs over these.
  std::vector<std::string> profile_journals;
  CountMatrix citing_profiles;  // members x profile_journals
  CountMatrix cited_profiles;   // members x profile_journals

  friend bool operator==(const CitationEnvironment&, const CitationEnvironment&) = default;
};

inline constexpr double kDefaultEnvironmentThreshold = 0.01;

CitationEnvironment citation_environment(
    const JournalCitationMatrix& matrix, std::string_view seed,
    double threshold = kDefaultEnvironmentThreshold,
    EnvironmentDirection direction = EnvironmentDirection::Citing);

// Most-cited keyword match in the matrix; ties go to the lexicographically
// first name. Throws Error{NotFound} when nothing matches.
std::string pick_seed(const JournalCitationMatrix& matrix, std::span<const std::string> keywords);

inline constexpr std::string_view kMatrixSchema = "fieldmap.matrix/1";

// Header row: schema tag, then cited journal names. One row per citing journal.
void write_matrix_csv(std::ostream& out, const JournalCitationMatrix& matrix);
JournalCitationMatrix read_matrix_csv(std::istream& in);

}  // namespace fieldmap
