#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fieldmap/country.hpp"
#include "fieldmap/country_network.hpp"
#include "fieldmap/factor_model.hpp"
#include "fieldmap/journal_citation.hpp"
#include "fieldmap/stimulus_space.hpp"

namespace fieldmap {

namespace fs = std::filesystem;

struct AnalysisSettings {
  std::optional<std::string> seed;
  std::vector<std::string> seed_keywords;
  double env_threshold = kDefaultEnvironmentThreshold;
  double loading_threshold = kDefaultLoadingThreshold;
  double cosine_cutoff = kDefaultCosineCutoff;
  bool merge_uk = false;
  std::optional<std::size_t> n_factors;
  EnvironmentDirection env_direction = EnvironmentDirection::Citing;
  PatternSide pattern_side = PatternSide::Citing;
  CitationCounting citation_counting = CitationCounting::Multiset;
  CoauthorCounting coauthor_counting = CoauthorCounting::Whole;
  Rotation rotation = Rotation::Varimax;
  Dissimilarity dissimilarity = Dissimilarity::Linear;
};

// Flat key = value text; `[year N]` opens a per-year section holding
// `corpus = path[, path...]`. `#` starts a comment line.
struct RunConfig {
  AnalysisSettings settings;
  std::map<int, std::vector<std::string>> corpora;  // year -> corpus paths as written
  std::optional<std::string> out_dir;
  fs::path base_dir;  // relative corpus paths resolve against this

  std::vector<fs::path> corpus_paths(int year) const;
};

// Throws Error{Config} naming the offending key or line.
RunConfig parse_config(std::istream& in, const fs::path& base_dir = {});
RunConfig load_config(const fs::path& path);

// Setting values as they appear in config files and the run manifest.
std::string to_string(PatternSide side);
std::string to_string(CitationCounting counting);
std::string to_string(CoauthorCounting counting);
std::string to_string(Rotation rotation);
std::string to_string(Dissimilarity dissimilarity);

// Applies one `key = value` setting. Throws Error{Config} for an unknown key
// or a bad value.
void apply_setting(AnalysisSettings& settings, const std::string& key, const std::string& value);

// Every setting as sorted `key=value` lines.
std::string manifest_lines(const AnalysisSettings& settings);

// Standalone pipeline stages. Each reads the previous stage's files and
// writes its own into `out`; `run` chains them, so a staged run produces the
// same bytes as a full one.
namespace stage {

void parse(const std::vector<fs::path>& corpora, const fs::path& out);
void matrix(const fs::path& records, int year, const AnalysisSettings& s, const fs::path& out);
void environment(const fs::path& matrix_csv, const AnalysisSettings& s, const fs::path& out);
void factors(const fs::path& correlation_csv, const AnalysisSettings& s, const fs::path& out);
void map(const fs::path& correlation_csv, const std::optional<fs::path>& clusters_csv,
         const AnalysisSettings& s, const fs::path& out);
// Writes share and core tables plus one `<group>_affiliation.csv` per group:
// "all", and "factorK" for each cluster when a clusters file is given.
void countries(const fs::path& records, int year, const std::optional<fs::path>& clusters_csv,
               const AnalysisSettings& s, const fs::path& out);
// For each `<group>_affiliation.csv`: `<group>.dl`, `<group>_coauthorship.net`
// and `<group>_cosine.net`.
void exchange(const std::vector<fs::path>& affiliation_csvs, const AnalysisSettings& s,
              const fs::path& out);

}  // namespace stage

// Full run: per-year directories under `out`, then timeline.csv across
// years and manifest.txt.
void run(const RunConfig& config, const fs::path& out, std::optional<int> only_year = {});

}  // namespace fieldmap
