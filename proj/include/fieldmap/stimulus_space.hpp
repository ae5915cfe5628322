#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fieldmap/matrix.hpp"

namespace fieldmap {

enum class Dissimilarity {
  Linear,     // d = 1 - r
  Euclidean,  // d = sqrt(2 (1 - r))
};

struct StimulusPoint {
  std::string key;      // plot letter: A, B, ..., Z, AA, AB, ...
  std::string journal;
  double x = 0.0;
  double y = 0.0;
};

struct StimulusMap {
  std::vector<StimulusPoint> points;  // input order
  double stress = 0.0;                // Kruskal stress-1, ratio disparities
  // Only one positive eigenvalue: points lie on dimension 1, y is 0.
  bool one_dimensional = false;
};

// Plot letters in alphabetical order of journal name, the way the figure
// legends assign them.
std::vector<std::string> plot_keys(std::span<const std::string> journals);

Matrix dissimilarities(const Matrix& correlation, Dissimilarity transform = Dissimilarity::Linear);

// Classical (Torgerson) scaling of a dissimilarity matrix into the plane.
// Throws Error{DegenerateEmbedding} when no eigenvalue is positive.
StimulusMap embed_dissimilarities(const Matrix& dissimilarity, std::span<const std::string> labels);

StimulusMap embed(const Matrix& correlation, std::span<const std::string> labels,
                  Dissimilarity transform = Dissimilarity::Linear);

// label,journal,x,y
void write_stimulus_csv(std::ostream& out, const StimulusMap& map);

struct LegendGroup {
  std::string title;
  std::vector<std::string> journals;
};

// Scatter of the plot letters with a legend table, one block per group.
// Journals missing from every group are listed under the fallback title.
void write_stimulus_svg(std::ostream& out, const StimulusMap& map, const std::string& title,
                        std::span<const LegendGroup> groups = {});

}  // namespace fieldmap
