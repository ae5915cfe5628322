#include "fieldmap/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "fieldmap/csv.hpp"
#include "fieldmap/error.hpp"
#include "fieldmap/exchange_formats.hpp"
#include "fieldmap/records_io.hpp"

namespace fieldmap {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::Config, "invalid value for " + key + ": '" + value + "'");
}

double parse_fraction(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size()) bad_value(key, value);
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

template <class F>
void write_with(const fs::path& path, F&& fill) {
  std::ostringstream os;
  fill(os);
  write_file(path, os.str());
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::vector<BiblioRecord> load_records(const fs::path& path) {
  auto in = open_input(path);
  return read_records_jsonl(in);
}

std::vector<BiblioRecord> records_of_year(std::vector<BiblioRecord> records, int year) {
  std::erase_if(records, [&](const BiblioRecord& r) { return r.pub_year != year; });
  return records;
}

CountryOptions country_options(const AnalysisSettings& s) { return CountryOptions{s.merge_uk}; }

YearSnapshot snapshot_from_table(int year, const ClusterTable& table) {
  YearSnapshot s;
  s.year = year;
  for (const auto& [factor, members] : table.members) {
    s.clusters.push_back(members);
    const auto it = table.ctj.find(factor);
    s.ctj.push_back(it == table.ctj.end() ? std::nullopt : std::optional<std::string>(it->second));
  }
  return s;
}

ClusterTable load_clusters(const fs::path& path) {
  auto in = open_input(path);
  return read_clusters_csv(in);
}

}  // namespace

std::string to_string(PatternSide side) { return side == PatternSide::Citing ? "citing" : "cited"; }
std::string to_string(CitationCounting c) {
  return c == CitationCounting::Multiset ? "multiset" : "binary";
}
std::string to_string(CoauthorCounting c) {
  return c == CoauthorCounting::Whole ? "whole" : "fractional";
}
std::string to_string(Rotation r) { return r == Rotation::Varimax ? "varimax" : "none"; }
std::string to_string(Dissimilarity d) {
  return d == Dissimilarity::Linear ? "linear" : "euclidean";
}

void apply_setting(AnalysisSettings& s, const std::string& key, const std::string& value) {
  if (key == "seed") {
    if (value.empty()) bad_value(key, value);
    s.seed = normalize_journal(value);
  } else if (key == "seed_keywords") {
    s.seed_keywords = split_list(value);
  } else if (key == "env_threshold") {
    s.env_threshold = parse_fraction(key, value);
    if (!(s.env_threshold > 0.0 && s.env_threshold < 1.0)) bad_value(key, value);
  } else if (key == "loading_threshold") {
    s.loading_threshold = parse_fraction(key, value);
    if (!(s.loading_threshold > 0.0 && s.loading_threshold <= 1.0)) bad_value(key, value);
  } else if (key == "cosine_cutoff") {
    s.cosine_cutoff = parse_fraction(key, value);
    if (!(s.cosine_cutoff >= 0.0 && s.cosine_cutoff < 1.0)) bad_value(key, value);
  } else if (key == "merge_uk") {
    s.merge_uk = parse_bool(key, value);
  } else if (key == "n_factors") {
    if (value == "auto") {
      s.n_factors.reset();
    } else {
      std::size_t n = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc{} || p != value.data() + value.size() || n == 0) bad_value(key, value);
      s.n_factors = n;
    }
  } else if (key == "env_direction") {
    const auto d = parse_direction(value);
    if (!d) bad_value(key, value);
    s.env_direction = *d;
  } else if (key == "pattern_side") {
    if (value == "citing") s.pattern_side = PatternSide::Citing;
    else if (value == "cited") s.pattern_side = PatternSide::Cited;
    else bad_value(key, value);
  } else if (key == "citation_counting") {
    if (value == "multiset") s.citation_counting = CitationCounting::Multiset;
    else if (value == "binary") s.citation_counting = CitationCounting::Binary;
    else bad_value(key, value);
  } else if (key == "coauthor_counting") {
    if (value == "whole") s.coauthor_counting = CoauthorCounting::Whole;
    else if (value == "fractional") s.coauthor_counting = CoauthorCounting::Fractional;
    else bad_value(key, value);
  } else if (key == "rotation") {
    if (value == "varimax") s.rotation = Rotation::Varimax;
    else if (value == "none") s.rotation = Rotation::None;
    else bad_value(key, value);
  } else if (key == "dissimilarity") {
    if (value == "linear") s.dissimilarity = Dissimilarity::Linear;
    else if (value == "euclidean") s.dissimilarity = Dissimilarity::Euclidean;
    else bad_value(key, value);
  } else {
    throw Error(ErrorKind::Config, "unknown config key: " + key);
  }
}

std::string manifest_lines(const AnalysisSettings& s) {
  std::map<std::string, std::string> kv{
      {"citation_counting", to_string(s.citation_counting)},
      {"coauthor_counting", to_string(s.coauthor_counting)},
      {"cosine_cutoff", csv::format_number(s.cosine_cutoff)},
      {"dissimilarity", to_string(s.dissimilarity)},
      {"env_direction", std::string(to_string(s.env_direction))},
      {"env_threshold", csv::format_number(s.env_threshold)},
      {"loading_threshold", csv::format_number(s.loading_threshold)},
      {"merge_uk", s.merge_uk ? "true" : "false"},
      {"n_factors", s.n_factors ? std::to_string(*s.n_factors) : "auto"},
      {"pattern_side", to_string(s.pattern_side)},
      {"rotation", to_string(s.rotation)},
      {"seed", s.seed.value_or("")},
  };
  std::string keywords;
  for (const auto& k : s.seed_keywords) keywords += (keywords.empty() ? "" : ",") + k;
  kv["seed_keywords"] = keywords;
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::vector<fs::path> RunConfig::corpus_paths(int year) const {
  std::vector<fs::path> out;
  const auto it = corpora.find(year);
  if (it == corpora.end()) return out;
  for (const auto& p : it->second) {
    const fs::path path(p);
    out.push_back(path.is_absolute() ? path : base_dir / path);
  }
  return out;
}

RunConfig parse_config(std::istream& in, const fs::path& base_dir) {
  RunConfig config;
  config.base_dir = base_dir;
  std::optional<int> section;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::Config, where + "unterminated section header");
      const std::string body = trim(std::string_view(line).substr(1, line.size() - 2));
      int year = 0;
      if (!body.starts_with("year ")) throw Error(ErrorKind::Config, where + "unknown section [" + body + "]");
      const std::string y = trim(std::string_view(body).substr(5));
      auto [p, ec] = std::from_chars(y.data(), y.data() + y.size(), year);
      if (ec != std::errc{} || p != y.data() + y.size() || year < kMinYear || year > kMaxYear) {
        throw Error(ErrorKind::Config, where + "bad year in section header");
      }
      section = year;
      config.corpora[year];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::Config, where + "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section) {
      if (key != "corpus") throw Error(ErrorKind::Config, "unknown config key: " + key);
      for (auto& p : split_list(value)) config.corpora[*section].push_back(std::move(p));
    } else if (key == "out") {
      config.out_dir = value;
    } else {
      apply_setting(config.settings, key, value);
    }
  }
  if (config.corpora.empty()) throw Error(ErrorKind::Config, "config names no [year N] section");
  for (const auto& [year, paths] : config.corpora) {
    if (paths.empty()) throw Error(ErrorKind::Config, "year " + std::to_string(year) + " has no corpus");
  }
  if (!config.settings.seed && config.settings.seed_keywords.empty()) {
    throw Error(ErrorKind::Config, "config needs seed or seed_keywords");
  }
  return config;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read config file: " + path.string());
  return parse_config(in, path.parent_path());
}

namespace stage {

void parse(const std::vector<fs::path>& corpora, const fs::path& out) {
  fs::create_directories(out);
  std::vector<BiblioRecord> records;
  std::vector<ParseWarning> warnings;
  std::set<std::string> ids;
  for (const auto& path : corpora) {
    auto result = parse_corpus_file(path.string());
    warnings.insert(warnings.end(), result.warnings.begin(), result.warnings.end());
    for (auto& r : result.records) {
      if (!ids.insert(r.record_id).second) {
        warnings.push_back({0, r.record_id, "duplicate record id across corpus files"});
        continue;
      }
      records.push_back(std::move(r));
    }
  }
  write_with(out / "records.jsonl", [&](std::ostream& os) { write_records_jsonl(os, records); });
  write_with(out / "parse_warnings.csv", [&](std::ostream& os) { write_warnings_csv(os, warnings); });
}

void matrix(const fs::path& records, int year, const AnalysisSettings& s, const fs::path& out) {
  fs::create_directories(out);
  const auto recs = load_records(records);
  const auto m = build_matrix(recs, year, s.citation_counting);
  write_with(out / "citation_matrix.csv", [&](std::ostream& os) { write_matrix_csv(os, m); });
}

void environment(const fs::path& matrix_csv, const AnalysisSettings& s, const fs::path& out) {
  fs::create_directories(out);
  auto in = open_input(matrix_csv);
  const auto m = read_matrix_csv(in);
  const std::string seed = s.seed ? *s.seed : pick_seed(m, s.seed_keywords);
  const auto env = citation_environment(m, seed, s.env_threshold, s.env_direction);

  const auto seed_index = *m.index_of(seed);
  const auto received = m.column_sum(seed_index);
  write_with(out / "environment.csv", [&](std::ostream& os) {
    csv::write_row(os, {"journal", "role", "cites_seed", "cited_by_seed", "share_of_seed_citations"});
    for (const auto& j : env.members) {
      const auto idx = *m.index_of(j);
      const auto to_seed = m.counts(idx, seed_index);
      const auto from_seed = m.counts(seed_index, idx);
      const double share = received > 0 ? static_cast<double>(to_seed) / static_cast<double>(received) : 0.0;
      csv::write_row(os, {j, j == seed ? "seed" : "member", std::to_string(to_seed),
                          std::to_string(from_seed), csv::format_fixed(share, 6)});
    }
  });
  const auto r = correlation_matrix(env, s.pattern_side);
  write_with(out / "correlation.csv",
             [&](std::ostream& os) { write_correlation_csv(os, env.members, r); });
}

void factors(const fs::path& correlation_csv, const AnalysisSettings& s, const fs::path& out) {
  fs::create_directories(out);
  auto in = open_input(correlation_csv);
  const auto corr = read_correlation_csv(in);
  FitOptions options;
  options.n_factors = s.n_factors;
  options.rotation = s.rotation;
  const auto model = fit(corr.values, corr.names, options);
  const auto clusters = assign_clusters(model, s.loading_threshold);
  write_with(out / "loadings.csv", [&](std::ostream& os) { write_loadings_csv(os, model); });
  write_with(out / "clusters.csv", [&](std::ostream& os) { write_clusters_csv(os, model, clusters); });
  write_with(out / "eigenvalues.csv", [&](std::ostream& os) {
    csv::write_row(os, {"component", "eigenvalue", "retained"});
    for (std::size_t k = 0; k < model.eigenvalues.size(); ++k) {
      csv::write_row(os, {std::to_string(k + 1), csv::format_fixed(model.eigenvalues[k], 6),
                          k < model.n_factors ? "1" : "0"});
    }
  });
}

void map(const fs::path& correlation_csv, const std::optional<fs::path>& clusters_csv,
         const AnalysisSettings& s, const fs::path& out) {
  fs::create_directories(out);
  auto in = open_input(correlation_csv);
  const auto corr = read_correlation_csv(in);
  const auto stimulus = embed(corr.values, corr.names, s.dissimilarity);

  std::vector<LegendGroup> groups;
  if (clusters_csv) {
    const auto table = load_clusters(*clusters_csv);
    for (const auto& [factor, members] : table.members) {
      std::string title = "Factor " + std::to_string(factor) + " cluster";
      if (const auto it = table.ctj.find(factor); it != table.ctj.end()) {
        title += " (central tendency: " + it->second + ")";
      }
      groups.push_back({std::move(title), members});
    }
  }
  std::string title = "Stimulus space";
  if (stimulus.one_dimensional) title += " (one-dimensional: second eigenvalue not positive)";
  write_with(out / "stimulus.csv", [&](std::ostream& os) { write_stimulus_csv(os, stimulus); });
  write_with(out / "stimulus.svg",
             [&](std::ostream& os) { write_stimulus_svg(os, stimulus, title, groups); });
}

void countries(const fs::path& records, int year, const std::optional<fs::path>& clusters_csv,
               const AnalysisSettings& s, const fs::path& out) {
  fs::create_directories(out);
  const auto recs = records_of_year(load_records(records), year);
  if (recs.empty()) {
    throw Error(ErrorKind::EmptyMatrix, "no records published in " + std::to_string(year));
  }

  std::vector<std::pair<std::string, std::vector<BiblioRecord>>> groups;
  groups.emplace_back("all", recs);
  if (clusters_csv) {
    const auto table = load_clusters(*clusters_csv);
    for (const auto& [factor, members] : table.members) {
      std::vector<BiblioRecord> subset;
      for (const auto& r : recs)
        if (std::binary_search(members.begin(), members.end(), r.journal)) subset.push_back(r);
      if (!subset.empty()) groups.emplace_back("factor" + std::to_string(factor), std::move(subset));
    }
  }

  const auto options = country_options(s);
  std::ostringstream shares;
  std::ostringstream cores;
  write_share_csv_header(shares);
  write_core_csv_header(cores);
  for (const auto& [name, subset] : groups) {
    write_share_csv_row(shares, name, year, international_share(subset, options));
    const auto aff = build_affiliation(subset, options);
    const auto graph = project(aff, s.coauthor_counting);
    write_core_csv_row(cores, name, year, graph, k_core(graph));
    write_with(out / (name + "_affiliation.csv"),
               [&](std::ostream& os) { write_affiliation_csv(os, aff); });
  }
  write_file(out / "international_share.csv", shares.str());
  write_file(out / "core_groups.csv", cores.str());
}

void exchange(const std::vector<fs::path>& affiliation_csvs, const AnalysisSettings& s,
              const fs::path& out) {
  fs::create_directories(out);
  for (const auto& path : affiliation_csvs) {
    std::string group = path.stem().string();
    constexpr std::string_view suffix = "_affiliation";
    if (group.ends_with(suffix)) group.resize(group.size() - suffix.size());
    auto in = open_input(path);
    const auto aff = read_affiliation_csv(in);
    const auto graph = project(aff, s.coauthor_counting);
    write_file(out / (group + ".dl"), write_dl(aff));
    write_file(out / (group + "_coauthorship.net"), write_net(graph));
    const auto thresholded = threshold_network(cosine_normalize(graph), s.cosine_cutoff);
    write_file(out / (group + "_cosine.net"), write_net(thresholded.graph));
  }
}

}  // namespace stage

void run(const RunConfig& config, const fs::path& out, std::optional<int> only_year) {
  const auto& s = config.settings;
  if (only_year && !config.corpora.count(*only_year)) {
    throw Error(ErrorKind::Config, "year " + std::to_string(*only_year) + " is not in the config");
  }
  fs::create_directories(out);

  std::vector<YearSnapshot> snapshots;
  std::string tracked_seed = s.seed.value_or("");
  for (const auto& [year, paths] : config.corpora) {
    if (only_year && year != *only_year) continue;
    const fs::path dir = out / std::to_string(year);
    try {
      for (const auto& p : config.corpus_paths(year)) {
        if (!fs::exists(p)) throw Error(ErrorKind::Io, "missing corpus file: " + p.string());
      }
      stage::parse(config.corpus_paths(year), dir);
      stage::matrix(dir / "records.jsonl", year, s, dir);
      stage::environment(dir / "citation_matrix.csv", s, dir);
      stage::factors(dir / "correlation.csv", s, dir);
      stage::map(dir / "correlation.csv", dir / "clusters.csv", s, dir);
      stage::countries(dir / "records.jsonl", year, dir / "clusters.csv", s, dir);

      std::vector<fs::path> affiliations;
      for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name.ends_with("_affiliation.csv")) affiliations.push_back(entry.path());
      }
      std::sort(affiliations.begin(), affiliations.end());
      stage::exchange(affiliations, s, dir);

      snapshots.push_back(snapshot_from_table(year, load_clusters(dir / "clusters.csv")));
      if (!s.seed) {
        auto in = open_input(dir / "environment.csv");
        std::size_t line_no = 0;
        while (auto line = csv::next_line(in, line_no)) {
          const auto fields = csv::split_line(*line);
          if (fields.size() > 1 && fields[1] == "seed") tracked_seed = fields[0];
        }
      }
    } catch (const Error& e) {
      throw Error(e.kind(), "year " + std::to_string(year) + ": " + e.what());
    }
  }

  write_with(out / "timeline.csv", [&](std::ostream& os) {
    if (snapshots.size() >= 2) {
      write_timeline_csv(os, compare_years(snapshots, tracked_seed));
    } else {
      write_timeline_csv(os, ClusterTimeline{});
    }
  });

  std::string manifest = "schema=fieldmap.manifest/1\n" + manifest_lines(s);
  for (const auto& [year, paths] : config.corpora) {
    if (only_year && year != *only_year) continue;
    std::string joined;
    for (const auto& p : paths) joined += (joined.empty() ? "" : ",") + p;
    manifest += "year." + std::to_string(year) + ".corpus=" + joined + "\n";
  }
  write_file(out / "manifest.txt", manifest);
}

}  // namespace fieldmap
