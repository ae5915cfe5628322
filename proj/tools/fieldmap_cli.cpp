// fieldmap: journal citation clusters and country co-authorship networks
// from field-tagged bibliographic exports.

#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "fieldmap/error.hpp"
#include "fieldmap/pipeline.hpp"

namespace {

using fieldmap::AnalysisSettings;
namespace fs = std::filesystem;

int report(fieldmap::ErrorKind kind, const std::string& message) {
  const int code = fieldmap::exit_code(kind);
  nlohmann::ordered_json j{{"error", std::string(fieldmap::to_string(kind))},
                           {"message", message},
                           {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

// Options shared by the stage subcommands; unset flags keep the defaults.
struct StageFlags {
  std::optional<std::string> seed;
  std::optional<std::string> keywords;
  std::optional<std::string> env_threshold;
  std::optional<std::string> loading_threshold;
  std::optional<std::string> cosine_cutoff;
  std::optional<std::string> merge_uk;
  std::optional<std::string> n_factors;
  std::optional<std::string> env_direction;
  std::optional<std::string> pattern_side;
  std::optional<std::string> citation_counting;
  std::optional<std::string> coauthor_counting;
  std::optional<std::string> rotation;
  std::optional<std::string> dissimilarity;

  void apply(AnalysisSettings& s) const {
    const std::pair<const char*, const std::optional<std::string>*> all[] = {
        {"seed", &seed},
        {"seed_keywords", &keywords},
        {"env_threshold", &env_threshold},
        {"loading_threshold", &loading_threshold},
        {"cosine_cutoff", &cosine_cutoff},
        {"merge_uk", &merge_uk},
        {"n_factors", &n_factors},
        {"env_direction", &env_direction},
        {"pattern_side", &pattern_side},
        {"citation_counting", &citation_counting},
        {"coauthor_counting", &coauthor_counting},
        {"rotation", &rotation},
        {"dissimilarity", &dissimilarity},
    };
    for (const auto& [key, value] : all)
      if (*value) fieldmap::apply_setting(s, key, **value);
  }
};

void add_flags(CLI::App* app, StageFlags& f, std::initializer_list<std::string_view> which) {
  auto want = [&](std::string_view n) {
    return std::find(which.begin(), which.end(), n) != which.end();
  };
  if (want("seed")) app->add_option("--seed", f.seed, "Seed journal (normalized name)");
  if (want("keywords")) app->add_option("--keywords", f.keywords, "Comma-separated seed title keywords");
  if (want("env-threshold")) app->add_option("--env-threshold", f.env_threshold, "Citation environment threshold");
  if (want("direction")) app->add_option("--env-direction", f.env_direction, "citing | cited | union");
  if (want("pattern-side")) app->add_option("--pattern-side", f.pattern_side, "citing | cited");
  if (want("citation-counting")) app->add_option("--citation-counting", f.citation_counting, "multiset | binary");
  if (want("n-factors")) app->add_option("--n-factors", f.n_factors, "Number of factors or 'auto'");
  if (want("loading-threshold")) app->add_option("--loading-threshold", f.loading_threshold, "Cluster loading threshold");
  if (want("rotation")) app->add_option("--rotation", f.rotation, "varimax | none");
  if (want("dissimilarity")) app->add_option("--dissimilarity", f.dissimilarity, "linear | euclidean");
  if (want("merge-uk")) app->add_option("--merge-uk", f.merge_uk, "Fold UK constituent countries into UK");
  if (want("coauthor-counting")) app->add_option("--coauthor-counting", f.coauthor_counting, "whole | fractional");
  if (want("cosine-cutoff")) app->add_option("--cosine-cutoff", f.cosine_cutoff, "Cosine edge cutoff");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Journal citation clusters and country co-authorship networks"};
  app.require_subcommand(0, 1);

  // Full run: either `fieldmap --config PATH` or `fieldmap run --config PATH`.
  std::string config_path;
  std::optional<int> year;
  std::optional<std::string> out_dir;
  StageFlags run_flags;
  auto add_run_options = [&](CLI::App* a) {
    a->add_option("--config", config_path, "Run configuration file");
    a->add_option("--year", year, "Only process this year");
    a->add_option("--out", out_dir, "Output directory (overrides config)");
    add_flags(a, run_flags, {"seed", "env-threshold", "cosine-cutoff", "merge-uk"});
  };
  add_run_options(&app);
  auto* run_cmd = app.add_subcommand("run", "Run the whole pipeline from a config file");
  add_run_options(run_cmd);

  StageFlags flags;
  std::vector<std::string> inputs;
  std::string input;
  std::optional<std::string> clusters;
  std::string out = ".";
  int stage_year = 0;

  auto* parse_cmd = app.add_subcommand("parse", "Parse corpus files into records.jsonl");
  parse_cmd->add_option("--corpus", inputs, "Field-tagged corpus file(s)")->required();
  parse_cmd->add_option("--out", out, "Output directory");

  auto* matrix_cmd = app.add_subcommand("matrix", "Build the journal citation matrix");
  matrix_cmd->add_option("--records", input, "records.jsonl")->required();
  matrix_cmd->add_option("--year", stage_year, "Publication year")->required();
  matrix_cmd->add_option("--out", out, "Output directory");
  add_flags(matrix_cmd, flags, {"citation-counting"});

  auto* env_cmd = app.add_subcommand("env", "Extract a seed journal's citation environment");
  env_cmd->add_option("--matrix", input, "citation_matrix.csv")->required();
  env_cmd->add_option("--out", out, "Output directory");
  add_flags(env_cmd, flags, {"seed", "keywords", "env-threshold", "direction", "pattern-side"});

  auto* factors_cmd = app.add_subcommand("factors", "Factor-analyse a correlation matrix");
  factors_cmd->add_option("--correlation", input, "correlation.csv")->required();
  factors_cmd->add_option("--out", out, "Output directory");
  add_flags(factors_cmd, flags, {"n-factors", "loading-threshold", "rotation"});

  auto* map_cmd = app.add_subcommand("map", "Draw the stimulus space of a correlation matrix");
  map_cmd->add_option("--correlation", input, "correlation.csv")->required();
  map_cmd->add_option("--clusters", clusters, "clusters.csv for the legend");
  map_cmd->add_option("--out", out, "Output directory");
  add_flags(map_cmd, flags, {"dissimilarity"});

  auto* countries_cmd = app.add_subcommand("countries", "Country co-authorship tables");
  countries_cmd->add_option("--records", input, "records.jsonl")->required();
  countries_cmd->add_option("--year", stage_year, "Publication year")->required();
  countries_cmd->add_option("--clusters", clusters, "clusters.csv: add one group per cluster");
  countries_cmd->add_option("--out", out, "Output directory");
  add_flags(countries_cmd, flags, {"merge-uk", "coauthor-counting"});

  auto* export_cmd = app.add_subcommand("export", "Write .dl and .net files from affiliation CSVs");
  export_cmd->add_option("--affiliation", inputs, "<group>_affiliation.csv file(s)")->required();
  export_cmd->add_option("--out", out, "Output directory");
  add_flags(export_cmd, flags, {"coauthor-counting", "cosine-cutoff"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report(fieldmap::ErrorKind::Config, e.what());
  }

  try {
    AnalysisSettings settings;
    flags.apply(settings);

    if (app.got_subcommand(parse_cmd)) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      fieldmap::stage::parse(paths, out);
    } else if (app.got_subcommand(matrix_cmd)) {
      fieldmap::stage::matrix(input, stage_year, settings, out);
    } else if (app.got_subcommand(env_cmd)) {
      if (!settings.seed && settings.seed_keywords.empty()) {
        return report(fieldmap::ErrorKind::Config, "env needs --seed or --keywords");
      }
      fieldmap::stage::environment(input, settings, out);
    } else if (app.got_subcommand(factors_cmd)) {
      fieldmap::stage::factors(input, settings, out);
    } else if (app.got_subcommand(map_cmd)) {
      std::optional<fs::path> c;
      if (clusters) c = *clusters;
      fieldmap::stage::map(input, c, settings, out);
    } else if (app.got_subcommand(countries_cmd)) {
      std::optional<fs::path> c;
      if (clusters) c = *clusters;
      fieldmap::stage::countries(input, stage_year, c, settings, out);
    } else if (app.got_subcommand(export_cmd)) {
      std::vector<fs::path> paths(inputs.begin(), inputs.end());
      fieldmap::stage::exchange(paths, settings, out);
    } else {
      if (config_path.empty()) {
        return report(fieldmap::ErrorKind::Config, "--config is required for a full run");
      }
      auto config = fieldmap::load_config(config_path);
      run_flags.apply(config.settings);
      if (out_dir) config.out_dir = *out_dir;
      if (!config.out_dir) return report(fieldmap::ErrorKind::Config, "no output directory: set out or --out");
      fs::path target(*config.out_dir);
      if (!out_dir && target.is_relative()) target = config.base_dir / target;
      fieldmap::run(config, target, year);
    }
  } catch (const fieldmap::Error& e) {
    return report(e.kind(), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return report(fieldmap::ErrorKind::Io, e.what());
  }
  return 0;
}
