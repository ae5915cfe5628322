#include "fieldmap/factor_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "fieldmap/csv.hpp"
#include "fieldmap/eigen_jacobi.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {
namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kKaiserSlack = 1e-12;

std::string join(std::span<const std::string> names, std::string_view sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += sep;
    out += names[i];
  }
  return out;
}

void rotate_columns(Matrix& m, std::size_t j, std::size_t l, double c, double s) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double a = m(i, j);
    const double b = m(i, l);
    m(i, j) = c * a + s * b;
    m(i, l) = -s * a + c * b;
  }
}

double parse_double(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size()) {
    throw Error(ErrorKind::Parse,
                "line " + std::to_string(line_no) + ": bad number '" + text + "'");
  }
  return v;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Matrix correlation_matrix(const CitationEnvironment& env, PatternSide side) {
  const std::size_t n = env.members.size();
  if (n < 3) {
    throw Error(ErrorKind::OutOfRange, "citation environment of " + env.seed + " has " +
                                           std::to_string(n) + " members; at least 3 needed");
  }
  const CountMatrix& profiles = side == PatternSide::Citing ? env.citing_profiles : env.cited_profiles;
  std::vector<std::vector<double>> vectors(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto row = profiles.row(a);
    vectors[a].assign(row.begin(), row.end());
    const bool constant = std::all_of(row.begin(), row.end(), [&](auto v) { return v == row[0]; });
    if (constant) {
      throw Error(ErrorKind::DegenerateVariable,
                  "citation pattern of " + env.members[a] + " has zero variance");
    }
  }
  Matrix r(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    r(a, a) = 1.0;
    for (std::size_t b = a + 1; b < n; ++b) r(a, b) = r(b, a) = pearson(vectors[a], vectors[b]);
  }
  return r;
}

std::vector<double> FactorModel::explained_variance() const {
  std::vector<double> out(loadings.cols(), 0.0);
  for (std::size_t i = 0; i < loadings.rows(); ++i)
    for (std::size_t j = 0; j < loadings.cols(); ++j) out[j] += loadings(i, j) * loadings(i, j);
  return out;
}

std::vector<double> FactorModel::communalities() const {
  std::vector<double> out(loadings.rows(), 0.0);
  for (std::size_t i = 0; i < loadings.rows(); ++i)
    for (double x : loadings.row(i)) out[i] += x * x;
  return out;
}

FactorModel FactorModel::from_loadings(std::vector<std::string> variables, Matrix loadings) {
  if (variables.size() != loadings.rows()) {
    throw Error(ErrorKind::OutOfRange, "loading table rows do not match variable names");
  }
  FactorModel m;
  m.variables = std::move(variables);
  m.n_factors = loadings.cols();
  m.unrotated = loadings;
  m.loadings = std::move(loadings);
  m.rotation = Matrix::identity(m.n_factors);
  return m;
}

void validate_correlation(const Matrix& c) {
  const std::size_t n = c.rows();
  if (n == 0 || c.cols() != n) throw Error(ErrorKind::InvalidCorrelation, "correlation matrix must be square and non-empty");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(c(i, i)) || std::abs(c(i, i) - 1.0) > kSymmetryTolerance) {
      throw Error(ErrorKind::InvalidCorrelation, "correlation diagonal must be 1");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!std::isfinite(c(i, j)) || std::abs(c(i, j) - c(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorKind::InvalidCorrelation, "correlation matrix is not symmetric");
      }
      if (std::abs(c(i, j)) > 1.0 + kSymmetryTolerance) {
        throw Error(ErrorKind::InvalidCorrelation, "correlation entry outside [-1, 1]");
      }
    }
  }
  const auto eig = jacobi_eigen(c);
  if (eig.values.back() < -1e-8 * static_cast<double>(n)) {
    throw Error(ErrorKind::InvalidCorrelation, "correlation matrix is not positive semidefinite");
  }
}

VarimaxResult varimax(const Matrix& loadings, double tolerance, int max_sweeps) {
  const std::size_t p = loadings.rows();
  const std::size_t k = loadings.cols();
  VarimaxResult out;
  out.rotation = Matrix::identity(k);
  if (k < 2) {
    out.loadings = loadings;
    return out;
  }

  Matrix x = loadings;
  for (std::size_t i = 0; i < p; ++i) {
    double h = 0.0;
    for (double v : x.row(i)) h += v * v;
    h = std::sqrt(h);
    if (h > 0.0)
      for (double& v : x.row(i)) v /= h;
  }

  const double n = static_cast<double>(p);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double largest_angle = 0.0;
    for (std::size_t j = 0; j + 1 < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
        for (std::size_t i = 0; i < p; ++i) {
          const double u = x(i, j) * x(i, j) - x(i, l) * x(i, l);
          const double v = 2.0 * x(i, j) * x(i, l);
          a += u;
          b += v;
          c += u * u - v * v;
          d += 2.0 * u * v;
        }
        const double phi = std::atan2(d - 2.0 * a * b / n, c - (a * a - b * b) / n) / 4.0;
        if (std::abs(phi) < 1e-15) continue;
        largest_angle = std::max(largest_angle, std::abs(phi));
        const double cs = std::cos(phi);
        const double sn = std::sin(phi);
        rotate_columns(x, j, l, cs, sn);
        rotate_columns(out.rotation, j, l, cs, sn);
      }
    }
    out.sweeps = sweep + 1;
    if (largest_angle < tolerance) break;
  }
  out.loadings = multiply(loadings, out.rotation);
  return out;
}

FactorModel fit(const Matrix& correlation, std::vector<std::string> variables,
                const FitOptions& options) {
  validate_correlation(correlation);
  const std::size_t n = correlation.rows();
  if (variables.size() != n) {
    throw Error(ErrorKind::OutOfRange, "variable names do not match correlation size");
  }

  const auto eig = jacobi_eigen(correlation);
  std::size_t k = 0;
  if (options.n_factors) {
    k = *options.n_factors;
    if (k == 0 || k > n) {
      throw Error(ErrorKind::OutOfRange, "n_factors must lie in [1, " + std::to_string(n) + "]");
    }
  } else {
    k = static_cast<std::size_t>(std::count_if(
        eig.values.begin(), eig.values.end(), [](double v) { return v >= 1.0 - kKaiserSlack; }));
    k = std::max<std::size_t>(k, 1);
  }

  FactorModel m;
  m.variables = std::move(variables);
  m.correlation = correlation;
  m.eigenvalues = eig.values;
  m.n_factors = k;
  m.unrotated = Matrix(n, k);
  for (std::size_t f = 0; f < k; ++f) {
    const double s = std::sqrt(std::max(eig.values[f], 0.0));
    for (std::size_t i = 0; i < n; ++i) m.unrotated(i, f) = eig.vectors(i, f) * s;
  }

  if (options.rotation == Rotation::Varimax) {
    auto vm = varimax(m.unrotated, options.varimax_tolerance, options.varimax_max_sweeps);
    m.rotation = std::move(vm.rotation);
    m.varimax_sweeps = vm.sweeps;
  } else {
    m.rotation = Matrix::identity(k);
  }

  // Each factor's largest-magnitude loading is made positive.
  Matrix rotated = multiply(m.unrotated, m.rotation);
  for (std::size_t f = 0; f < k; ++f) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (std::abs(rotated(i, f)) > std::abs(rotated(big, f)) + 1e-12) big = i;
    if (rotated(big, f) < 0.0) {
      for (std::size_t r = 0; r < k; ++r) m.rotation(r, f) = -m.rotation(r, f);
    }
  }

  // Factors ordered by variance explained after rotation.
  rotated = multiply(m.unrotated, m.rotation);
  std::vector<double> variance(k, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t f = 0; f < k; ++f) variance[f] += rotated(i, f) * rotated(i, f);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return variance[a] > variance[b] + 1e-12; });
  Matrix ordered(k, k);
  for (std::size_t f = 0; f < k; ++f)
    for (std::size_t r = 0; r < k; ++r) ordered(r, f) = m.rotation(r, order[f]);
  m.rotation = std::move(ordered);
  m.loadings = multiply(m.unrotated, m.rotation);
  return m;
}

std::vector<std::string> ClusterMap::member_names(const FactorModel& model, std::size_t factor) const {
  std::vector<std::string> out;
  for (auto i : members.at(factor)) out.push_back(model.variables[i]);
  std::sort(out.begin(), out.end());
  return out;
}

ClusterMap assign_clusters(const FactorModel& model, double threshold) {
  const std::size_t n = model.loadings.rows();
  const std::size_t k = model.loadings.cols();
  ClusterMap out;
  out.threshold = threshold;
  out.factor_of.resize(n);
  out.complex.resize(n, false);
  out.members.resize(k);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = 0;
    std::size_t above = 0;
    for (std::size_t f = 0; f < k; ++f) {
      const double a = std::abs(model.loadings(i, f));
      if (a >= threshold) ++above;
      if (a > std::abs(model.loadings(i, best))) best = f;
    }
    out.complex[i] = above >= 2;
    if (k > 0 && std::abs(model.loadings(i, best)) >= threshold) {
      out.factor_of[i] = best;
      out.members[best].push_back(i);
    }
  }
  return out;
}

std::optional<std::string> central_tendency_journal(const FactorModel& model,
                                                    const ClusterMap& clusters,
                                                    std::size_t factor) {
  if (factor >= clusters.members.size()) {
    throw Error(ErrorKind::OutOfRange, "factor index " + std::to_string(factor) + " out of range");
  }
  std::optional<std::size_t> best;
  for (auto i : clusters.members[factor]) {
    if (!best) {
      best = i;
      continue;
    }
    const double li = model.loadings(i, factor);
    const double lb = model.loadings(*best, factor);
    if (li > lb || (li == lb && model.variables[i] < model.variables[*best])) best = i;
  }
  if (!best) return std::nullopt;
  return model.variables[*best];
}

YearSnapshot make_snapshot(int year, const FactorModel& model, const ClusterMap& clusters) {
  YearSnapshot s;
  s.year = year;
  for (std::size_t f = 0; f < clusters.members.size(); ++f) {
    if (clusters.members[f].empty()) continue;
    s.clusters.push_back(clusters.member_names(model, f));
    s.ctj.push_back(central_tendency_journal(model, clusters, f));
  }
  return s;
}

std::string_view to_string(TimelineEventKind kind) {
  switch (kind) {
    case TimelineEventKind::Emerged: return "EMERGED";
    case TimelineEventKind::Merged: return "MERGED";
    case TimelineEventKind::Receded: return "RECEDED";
    case TimelineEventKind::CtjGained: return "CTJ_GAINED";
    case TimelineEventKind::CtjLost: return "CTJ_LOST";
  }
  return "?";
}

double jaccard(std::span<const std::string> a, std::span<const std::string> b) {
  std::set<std::string> sa(a.begin(), a.end());
  std::set<std::string> sb(b.begin(), b.end());
  std::size_t common = 0;
  for (const auto& x : sa) common += sb.count(x);
  const std::size_t uni = sa.size() + sb.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

ClusterTimeline compare_years(std::vector<YearSnapshot> snapshots, std::string_view seed) {
  if (snapshots.size() < 2) {
    throw Error(ErrorKind::OutOfRange, "year comparison needs at least two snapshots");
  }
  std::stable_sort(snapshots.begin(), snapshots.end(),
                   [](const YearSnapshot& a, const YearSnapshot& b) { return a.year < b.year; });

  ClusterTimeline t;
  for (const auto& s : snapshots) t.years.push_back(s.year);

  auto braced = [](const std::vector<std::string>& c) { return "{" + join(c) + "}"; };
  auto is_ctj = [&](const YearSnapshot& s) {
    return std::any_of(s.ctj.begin(), s.ctj.end(),
                       [&](const auto& c) { return c && *c == seed; });
  };

  for (std::size_t y = 1; y < snapshots.size(); ++y) {
    const auto& prev = snapshots[y - 1];
    const auto& next = snapshots[y];
    const int year = next.year;

    for (const auto& c : next.clusters) {
      double best = 0.0;
      for (const auto& p : prev.clusters) best = std::max(best, jaccard(c, p));
      if (best < kMatchJaccard) t.events.push_back({year, TimelineEventKind::Emerged, braced(c)});
    }

    std::vector<std::optional<std::size_t>> successor(prev.clusters.size());
    for (std::size_t p = 0; p < prev.clusters.size(); ++p) {
      double best = -1.0;
      for (std::size_t c = 0; c < next.clusters.size(); ++c) {
        const double j = jaccard(prev.clusters[p], next.clusters[c]);
        if (j > best) {
          best = j;
          successor[p] = c;
        }
      }
      if (best < kMatchJaccard) successor[p].reset();
    }
    for (std::size_t c = 0; c < next.clusters.size(); ++c) {
      std::vector<std::string> parts;
      for (std::size_t p = 0; p < prev.clusters.size(); ++p)
        if (successor[p] == c) parts.push_back(braced(prev.clusters[p]));
      if (parts.size() >= 2) {
        t.events.push_back({year, TimelineEventKind::Merged,
                            join(parts, " + ") + " -> " + braced(next.clusters[c])});
      }
    }
    for (std::size_t p = 0; p < prev.clusters.size(); ++p) {
      if (!successor[p]) {
        t.events.push_back({year, TimelineEventKind::Receded, braced(prev.clusters[p])});
      }
    }

    const bool before = is_ctj(prev);
    const bool after = is_ctj(next);
    if (!before && after) t.events.push_back({year, TimelineEventKind::CtjGained, std::string(seed)});
    if (before && !after) t.events.push_back({year, TimelineEventKind::CtjLost, std::string(seed)});
  }
  t.snapshots = std::move(snapshots);
  return t;
}

void write_correlation_csv(std::ostream& out, std::span<const std::string> names,
                           const Matrix& correlation) {
  std::vector<std::string> header{std::string(kCorrelationSchema)};
  header.insert(header.end(), names.begin(), names.end());
  csv::write_row(out, header);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<std::string> row{names[i]};
    for (double v : correlation.row(i)) row.push_back(csv::format_number(v));
    csv::write_row(out, row);
  }
}

NamedMatrix read_correlation_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto header_line = csv::next_line(in, line_no);
  const auto header = header_line ? csv::split_line(*header_line) : std::vector<std::string>{};
  if (header.empty() || header[0] != kCorrelationSchema) {
    throw Error(ErrorKind::Schema,
                "correlation CSV must start with schema " + std::string(kCorrelationSchema));
  }
  NamedMatrix m;
  m.names.assign(header.begin() + 1, header.end());
  const std::size_t n = m.names.size();
  m.values = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto line = csv::next_line(in, line_no);
    if (!line) throw Error(ErrorKind::Parse, "correlation CSV: missing row for " + m.names[i]);
    const auto fields = csv::split_line(*line);
    if (fields.size() != n + 1 || fields[0] != m.names[i]) {
      throw Error(ErrorKind::Parse,
                  "correlation CSV line " + std::to_string(line_no) + ": malformed row");
    }
    for (std::size_t j = 0; j < n; ++j) m.values(i, j) = parse_double(fields[j + 1], line_no);
  }
  return m;
}

void write_loadings_csv(std::ostream& out, const FactorModel& model) {
  std::vector<std::string> header{"journal"};
  for (std::size_t f = 0; f < model.n_factors; ++f) header.push_back("factor" + std::to_string(f + 1));
  csv::write_row(out, header);
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    std::vector<std::string> row{model.variables[i]};
    for (double v : model.loadings.row(i)) row.push_back(csv::format_fixed(v, 5));
    csv::write_row(out, row);
  }
}

void write_clusters_csv(std::ostream& out, const FactorModel& model, const ClusterMap& clusters) {
  out << "#schema " << kClustersSchema << '\n';
  csv::write_row(out, {"journal", "factor", "loading", "complex", "ctj"});
  std::vector<std::optional<std::string>> ctj(clusters.members.size());
  for (std::size_t f = 0; f < clusters.members.size(); ++f) {
    ctj[f] = central_tendency_journal(model, clusters, f);
  }
  for (std::size_t i = 0; i < model.variables.size(); ++i) {
    const auto& f = clusters.factor_of[i];
    const std::string factor = f ? std::to_string(*f + 1) : "";
    const std::string loading = f ? csv::format_fixed(model.loadings(i, *f), 5) : "";
    const bool is_ctj = f && ctj[*f] == model.variables[i];
    csv::write_row(out, {model.variables[i], factor, loading, clusters.complex[i] ? "1" : "0",
                         is_ctj ? "1" : "0"});
  }
}

ClusterTable read_clusters_csv(std::istream& in) {
  std::size_t line_no = 0;
  const auto schema = csv::next_line(in, line_no);
  if (!schema || *schema != "#schema " + std::string(kClustersSchema)) {
    throw Error(ErrorKind::Schema, "clusters CSV must start with '#schema " +
                                       std::string(kClustersSchema) + "'");
  }
  const auto header = csv::next_line(in, line_no);
  if (!header || csv::split_line(*header).size() != 5) {
    throw Error(ErrorKind::Parse, "clusters CSV: missing header");
  }
  ClusterTable out;
  while (auto line = csv::next_line(in, line_no)) {
    const auto fields = csv::split_line(*line);
    if (fields.size() != 5) {
      throw Error(ErrorKind::Parse, "clusters CSV line " + std::to_string(line_no) + ": expected 5 fields");
    }
    if (fields[1].empty()) continue;
    std::size_t factor = 0;
    auto [p, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), factor);
    if (ec != std::errc{} || factor == 0) {
      throw Error(ErrorKind::Parse, "clusters CSV line " + std::to_string(line_no) + ": bad factor");
    }
    out.members[factor].push_back(fields[0]);
    if (fields[4] == "1") out.ctj[factor] = fields[0];
  }
  for (auto& [f, names] : out.members) std::sort(names.begin(), names.end());
  return out;
}

void write_timeline_csv(std::ostream& out, const ClusterTimeline& timeline) {
  csv::write_row(out, {"year", "event", "detail"});
  for (const auto& e : timeline.events) {
    csv::write_row(out, {std::to_string(e.year), std::string(to_string(e.kind)), e.detail});
  }
}

}  // namespace fieldmap
