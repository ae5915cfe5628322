#include "fieldmap/stimulus_space.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "fieldmap/csv.hpp"
#include "fieldmap/eigen_jacobi.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {
namespace {

std::string key_for(std::size_t index) {
  std::string key;
  std::size_t n = index + 1;
  while (n > 0) {
    --n;
    key.insert(key.begin(), static_cast<char>('A' + n % 26));
    n /= 26;
  }
  return key;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> plot_keys(std::span<const std::string> journals) {
  std::vector<std::size_t> order(journals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return journals[a] < journals[b]; });
  std::vector<std::string> keys(journals.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) keys[order[rank]] = key_for(rank);
  return keys;
}

Matrix dissimilarities(const Matrix& correlation, Dissimilarity transform) {
  const std::size_t n = correlation.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gap = std::max(0.0, 1.0 - correlation(i, j));
      d(i, j) = transform == Dissimilarity::Linear ? gap : std::sqrt(2.0 * gap);
    }
  return d;
}

StimulusMap embed_dissimilarities(const Matrix& dissimilarity, std::span<const std::string> labels) {
  const std::size_t n = dissimilarity.rows();
  if (n < 2 || dissimilarity.cols() != n || labels.size() != n) {
    throw Error(ErrorKind::OutOfRange, "embedding needs at least 2 labelled journals");
  }

  // B = -1/2 J D^2 J
  Matrix sq(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double d = 0.5 * (dissimilarity(i, j) + dissimilarity(j, i));
      sq(i, j) = d * d;
    }
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += sq(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = -0.5 * (sq(i, j) - row_mean[i] - row_mean[j] + grand);

  const auto eig = jacobi_eigen(b);
  const double scale = std::max(std::abs(eig.values.front()), 1.0);
  const double positive = 1e-10 * scale;
  if (!(eig.values[0] > positive)) {
    throw Error(ErrorKind::DegenerateEmbedding,
                "no positive eigenvalue: all journals coincide in the stimulus space");
  }

  StimulusMap map;
  map.one_dimensional = n < 2 || !(eig.values[1] > positive);
  const auto keys = plot_keys(labels);
  std::vector<double> xs(n, 0.0);
  std::vector<double> ys(n, 0.0);
  const double sx = std::sqrt(eig.values[0]);
  const double sy = map.one_dimensional ? 0.0 : std::sqrt(eig.values[1]);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = eig.vectors(i, 0) * sx;
    ys[i] = map.one_dimensional ? 0.0 : eig.vectors(i, 1) * sy;
  }
  // Remove rounding drift from the centring, then orient by the first label.
  for (auto* v : {&xs, &ys}) {
    const double mean = std::accumulate(v->begin(), v->end(), 0.0) / static_cast<double>(n);
    for (double& x : *v) x -= mean;
  }
  if (xs[0] < 0.0)
    for (double& x : xs) x = -x;
  if (ys[0] < 0.0)
    for (double& y : ys) y = -y;
  for (double& y : ys)
    if (y == 0.0) y = 0.0;  // no negative zeros in the output

  // Stress-1 against the input dissimilarities after their optimal rescaling
  // b = sum(d delta) / sum(delta^2); this equals
  // sqrt(1 - (sum d delta)^2 / (sum d^2 sum delta^2)) and so lies in [0, 1].
  // The residual form avoids cancellation for near-exact fits.
  std::vector<std::pair<double, double>> pairs;  // (embedded, input)
  double num = 0.0;
  double embedded_sq = 0.0;
  double input_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
      const double delta = 0.5 * (dissimilarity(i, j) + dissimilarity(j, i));
      pairs.emplace_back(d, delta);
      num += d * delta;
      embedded_sq += d * d;
      input_sq += delta * delta;
    }
  if (embedded_sq > 0.0 && input_sq > 0.0) {
    const double b = num / input_sq;
    double residual = 0.0;
    for (const auto& [d, delta] : pairs) residual += (d - b * delta) * (d - b * delta);
    map.stress = std::min(1.0, std::sqrt(residual / embedded_sq));
  }

  for (std::size_t i = 0; i < n; ++i) map.points.push_back({keys[i], labels[i], xs[i], ys[i]});
  return map;
}

StimulusMap embed(const Matrix& correlation, std::span<const std::string> labels,
                  Dissimilarity transform) {
  return embed_dissimilarities(dissimilarities(correlation, transform), labels);
}

void write_stimulus_csv(std::ostream& out, const StimulusMap& map) {
  csv::write_row(out, {"label", "journal", "x", "y"});
  for (const auto& p : map.points) {
    csv::write_row(out, {p.key, p.journal, csv::format_fixed(p.x, 6), csv::format_fixed(p.y, 6)});
  }
}

void write_stimulus_svg(std::ostream& out, const StimulusMap& map, const std::string& title,
                        std::span<const LegendGroup> groups) {
  constexpr double kPlot = 480.0;
  constexpr double kMargin = 40.0;
  constexpr double kLegendX = kPlot + 2 * kMargin;
  constexpr double kLineHeight = 16.0;

  double extent = 1e-9;
  for (const auto& p : map.points) extent = std::max({extent, std::abs(p.x), std::abs(p.y)});
  extent *= 1.1;
  auto px = [&](double x) { return kMargin + (x / extent + 1.0) * 0.5 * kPlot; };
  auto py = [&](double y) { return kMargin + (1.0 - (y / extent + 1.0) * 0.5) * kPlot; };

  // Legend blocks: given groups in order, then everything left over.
  std::vector<LegendGroup> blocks(groups.begin(), groups.end());
  std::set<std::string> placed;
  for (const auto& g : blocks) placed.insert(g.journals.begin(), g.journals.end());
  LegendGroup rest{"Related but not clustered", {}};
  for (const auto& p : map.points)
    if (!placed.count(p.journal)) rest.journals.push_back(p.journal);
  if (!rest.journals.empty()) blocks.push_back(std::move(rest));

  std::size_t legend_lines = 1;
  for (const auto& g : blocks) legend_lines += 1 + g.journals.size();
  const double height = std::max(kPlot + 2 * kMargin, kMargin + kLineHeight * static_cast<double>(legend_lines + 1));
  const double width = kLegendX + 360.0;

  auto f2 = [](double v) { return csv::format_fixed(v, 2); };
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(width) << "\" height=\""
      << f2(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<title>" << xml_escape(title) << "</title>\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << f2(width) << "\" height=\"" << f2(height)
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << f2(kMargin) << "\" y=\"24\" font-size=\"14\">" << xml_escape(title)
      << "</text>\n";
  out << "<rect x=\"" << f2(kMargin) << "\" y=\"" << f2(kMargin) << "\" width=\"" << f2(kPlot)
      << "\" height=\"" << f2(kPlot) << "\" fill=\"none\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << f2(px(0)) << "\" y1=\"" << f2(kMargin) << "\" x2=\"" << f2(px(0))
      << "\" y2=\"" << f2(kMargin + kPlot) << "\" stroke=\"#bbbbbb\"/>\n";
  out << "<line x1=\"" << f2(kMargin) << "\" y1=\"" << f2(py(0)) << "\" x2=\"" << f2(kMargin + kPlot)
      << "\" y2=\"" << f2(py(0)) << "\" stroke=\"#bbbbbb\"/>\n";
  out << "<text x=\"" << f2(kMargin) << "\" y=\"" << f2(kMargin + kPlot + 24)
      << "\">X = DIMENSION 1 Y = DIMENSION 2</text>\n";
  for (const auto& p : map.points) {
    out << "<text x=\"" << f2(px(p.x)) << "\" y=\"" << f2(py(p.y))
        << "\" text-anchor=\"middle\" dominant-baseline=\"central\" font-weight=\"bold\">"
        << xml_escape(p.key) << "</text>\n";
  }

  std::map<std::string, std::string> key_of;
  for (const auto& p : map.points) key_of[p.journal] = p.key;
  double y = kMargin;
  out << "<text x=\"" << f2(kLegendX) << "\" y=\"" << f2(y) << "\" font-weight=\"bold\">Legend</text>\n";
  for (const auto& g : blocks) {
    y += kLineHeight;
    out << "<text x=\"" << f2(kLegendX) << "\" y=\"" << f2(y) << "\" font-style=\"italic\">"
        << xml_escape(g.title) << "</text>\n";
    for (const auto& j : g.journals) {
      y += kLineHeight;
      const auto it = key_of.find(j);
      out << "<text x=\"" << f2(kLegendX) << "\" y=\"" << f2(y) << "\">"
          << xml_escape(it == key_of.end() ? "?" : it->second) << "  " << xml_escape(j)
          << "</text>\n";
    }
  }
  out << "</svg>\n";
}

}  // namespace fieldmap
