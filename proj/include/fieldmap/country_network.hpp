#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fieldmap/country.hpp"
#include "fieldmap/matrix.hpp"
#include "fieldmap/records.hpp"

namespace fieldmap {

// Distinct known countries of a record's addresses, sorted. UNKNOWN is dropped.
std::vector<std::string> record_countries(const BiblioRecord& record,
                                          const CountryOptions& options = {});

struct InternationalShare {
  std::int64_t total = 0;
  std::int64_t international = 0;
  std::int64_t percent_tenths = 0;  // percentage x 10, rounded half up

  double percent() const { return static_cast<double>(percent_tenths) / 10.0; }
  std::string percent_text() const;  // "34.1"
};

// Rounds 100 * international / total half up to one decimal, exactly.
InternationalShare share_from_counts(std::int64_t total, std::int64_t international);

// An article is international when its addresses resolve to two or more
// distinct countries.
InternationalShare international_share(std::span<const BiblioRecord> records,
                                       const CountryOptions& options = {});

// Country x article incidence. Articles without any resolvable country are
// left out and counted in `excluded`.
struct AffiliationMatrix {
  std::vector<std::string> countries;  // sorted
  std::vector<std::string> articles;   // record ids, input order
  DenseMatrix<std::uint8_t> incidence;
  std::size_t excluded = 0;

  friend bool operator==(const AffiliationMatrix&, const AffiliationMatrix&) = default;
};

// Throws Error{EmptyMatrix} when every article is excluded.
AffiliationMatrix build_affiliation(std::span<const BiblioRecord> records,
                                    const CountryOptions& options = {});

enum class CoauthorCounting {
  Whole,       // each shared article adds 1 to a country pair
  Fractional,  // each article spreads a unit weight over its country pairs
};

// Undirected weighted country graph with a zero diagonal.
struct CountryGraph {
  std::vector<std::string> countries;
  Matrix weights;

  std::size_t edge_count() const;
  std::vector<std::size_t> degrees() const;  // neighbours with weight > 0
};

CountryGraph project(const AffiliationMatrix& aff, CoauthorCounting counting = CoauthorCounting::Whole);

struct CoreDecomposition {
  std::vector<std::string> countries;
  std::vector<int> coreness;
  int max_coreness = 0;
  std::vector<std::string> max_core;  // sorted
  bool degenerate = false;            // no edges at all
};

// Binary k-core peeling; edge weights only matter through weight > 0.
CoreDecomposition k_core(const CountryGraph& graph);

struct CosineMatrix {
  std::vector<std::string> countries;
  Matrix values;
  std::vector<bool> isolated;  // all-zero rows
};

// Salton's cosine of two count vectors; 0 when either is all zeros.
double salton_cosine(std::span<const double> a, std::span<const double> b);

// Cosine between the zero-diagonal weight rows of every country pair.
CosineMatrix cosine_normalize(const CountryGraph& graph);

inline constexpr double kDefaultCosineCutoff = 0.1;

struct ThresholdedNetwork {
  CountryGraph graph;                 // cosine-weighted edges above the cutoff
  std::vector<std::string> isolated;  // countries left without edges
  bool degenerate = false;            // no edge survived
};

// Keeps edges with value strictly greater than `cutoff`.
ThresholdedNetwork threshold_network(const CosineMatrix& cosine, double cutoff = kDefaultCosineCutoff);

// group,year,articles,international,percent
void write_share_csv_header(std::ostream& out);
void write_share_csv_row(std::ostream& out, const std::string& group, int year,
                         const InternationalShare& share);

// group,year,countries,participating,core_group,max_coreness
void write_core_csv_header(std::ostream& out);
void write_core_csv_row(std::ostream& out, const std::string& group, int year,
                        const CountryGraph& graph, const CoreDecomposition& cores);

inline constexpr std::string_view kAffiliationSchema = "fieldmap.affiliation/1";

// Header: schema tag, then article ids; one row per country of 0/1 cells.
void write_affiliation_csv(std::ostream& out, const AffiliationMatrix& aff);
AffiliationMatrix read_affiliation_csv(std::istream& in);

}  // namespace fieldmap
