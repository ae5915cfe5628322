#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fieldmap/journal_citation.hpp"
#include "fieldmap/matrix.hpp"

namespace fieldmap {

// Which side of the citation matrix a journal's pattern is taken from.
enum class PatternSide {
  Citing,  // the journal's row: what it cites
  Cited,   // the journal's column: who cites it
};

// Pearson correlations between the citation patterns of the environment's
// members. Throws Error{DegenerateVariable} naming a journal whose pattern
// has zero variance, Error{OutOfRange} with fewer than 3 members.
Matrix correlation_matrix(const CitationEnvironment& env, PatternSide side = PatternSide::Citing);

// Pearson correlation of two equally long vectors.
double pearson(std::span<const double> x, std::span<const double> y);

enum class Rotation { None, Varimax };

struct FitOptions {
  std::optional<std::size_t> n_factors;  // Kaiser criterion when absent
  Rotation rotation = Rotation::Varimax;
  double varimax_tolerance = 1e-10;  // stop once a sweep's largest angle is below this
  int varimax_max_sweeps = 500;
};

struct FactorModel {
  std::vector<std::string> variables;
  Matrix correlation;
  std::vector<double> eigenvalues;  // all of them, descending
  Matrix unrotated;                 // variables x n_factors
  Matrix loadings;                  // variables x n_factors, after rotation
  Matrix rotation;                  // n_factors x n_factors, loadings = unrotated * rotation
  std::size_t n_factors = 0;
  int varimax_sweeps = 0;

  // Variance explained by each factor after rotation.
  std::vector<double> explained_variance() const;
  // Row sums of squared loadings.
  std::vector<double> communalities() const;

  // A model carrying only loadings, e.g. a published loading table.
  static FactorModel from_loadings(std::vector<std::string> variables, Matrix loadings);
};

// Throws Error{InvalidCorrelation} for a non-square, non-symmetric, non-unit
// diagonal or clearly indefinite matrix.
void validate_correlation(const Matrix& correlation);

FactorModel fit(const Matrix& correlation, std::vector<std::string> variables,
                const FitOptions& options = {});

struct VarimaxResult {
  Matrix loadings;
  Matrix rotation;
  int sweeps = 0;
};

// Kaiser-normalized varimax by successive pairwise planar rotations.
VarimaxResult varimax(const Matrix& loadings, double tolerance = 1e-10, int max_sweeps = 500);

inline constexpr double kDefaultLoadingThreshold = 0.5;

struct ClusterMap {
  double threshold = kDefaultLoadingThreshold;
  // Per variable: factor of its largest absolute loading, when that loading
  // reaches the threshold in magnitude.
  std::vector<std::optional<std::size_t>> factor_of;
  // Per variable: loads at or above the threshold on two or more factors.
  std::vector<bool> complex;
  // Per factor: member variable indices, ascending.
  std::vector<std::vector<std::size_t>> members;

  std::vector<std::string> member_names(const FactorModel& model, std::size_t factor) const;
};

ClusterMap assign_clusters(const FactorModel& model, double threshold = kDefaultLoadingThreshold);

// Cluster member with the highest loading on `factor`; lexicographically
// first on ties; nullopt for an empty cluster. Throws Error{OutOfRange}.
std::optional<std::string> central_tendency_journal(const FactorModel& model,
                                                    const ClusterMap& clusters,
                                                    std::size_t factor);

// One year's clustered solution, as compared across years.
struct YearSnapshot {
  int year = 0;
  std::vector<std::vector<std::string>> clusters;  // non-empty, members sorted
  std::vector<std::optional<std::string>> ctj;     // parallel to clusters
};

YearSnapshot make_snapshot(int year, const FactorModel& model, const ClusterMap& clusters);

enum class TimelineEventKind { Emerged, Merged, Receded, CtjGained, CtjLost };

std::string_view to_string(TimelineEventKind kind);

struct TimelineEvent {
  int year = 0;
  TimelineEventKind kind = TimelineEventKind::Emerged;
  std::string detail;

  friend bool operator==(const TimelineEvent&, const TimelineEvent&) = default;
};

struct ClusterTimeline {
  std::vector<int> years;
  std::vector<YearSnapshot> snapshots;
  std::vector<TimelineEvent> events;
};

inline constexpr double kMatchJaccard = 0.3;

double jaccard(std::span<const std::string> a, std::span<const std::string> b);

// Snapshots are sorted by year; events are emitted for each adjacent pair
// and carry the later year.
ClusterTimeline compare_years(std::vector<YearSnapshot> snapshots, std::string_view seed);

inline constexpr std::string_view kCorrelationSchema = "fieldmap.correlation/1";

void write_correlation_csv(std::ostream& out, std::span<const std::string> names,
                           const Matrix& correlation);
struct NamedMatrix {
  std::vector<std::string> names;
  Matrix values;
};
NamedMatrix read_correlation_csv(std::istream& in);

// journal,factor1..factorK, rows in variable order.
void write_loadings_csv(std::ostream& out, const FactorModel& model);
// journal,factor,loading,complex,ctj
void write_clusters_csv(std::ostream& out, const FactorModel& model, const ClusterMap& clusters);
void write_timeline_csv(std::ostream& out, const ClusterTimeline& timeline);

inline constexpr std::string_view kClustersSchema = "fieldmap.clusters/1";

// Cluster membership as read back from write_clusters_csv output. Factors
// are numbered from 1.
struct ClusterTable {
  std::map<std::size_t, std::vector<std::string>> members;  // sorted names
  std::map<std::size_t, std::string> ctj;
};
ClusterTable read_clusters_csv(std::istream& in);

}  // namespace fieldmap
