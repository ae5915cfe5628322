#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fieldmap::synthetic {

// A synthetic field-tagged corpus for one year in which the citing journals
// fall into planted blocks. Each journal cites its own block's targets and a
// shared set of "general" targets at `high` intensity and everything else at
// `low` intensity, with multiplicative noise in [1 - noise, 1 + noise].
// With at least two target groups the expected citing patterns of different
// blocks are uncorrelated and those within a block identical, so the noise
// level sets the within-block correlation.
struct PlantedCorpusSpec {
  int year = 2000;
  std::vector<std::vector<std::string>> blocks;  // citing journals per block
  std::size_t records_per_journal = 8;
  double high = 24.0;
  double low = 6.0;
  double noise = 0.3;
  std::string target_prefix = "SYN REF";  // names of cited-only journals
  std::string id_prefix = "SYN";
  std::vector<std::string> countries = {"USA",   "JAPAN",  "ITALY",       "GERMANY",
                                        "FRANCE", "RUSSIA", "SWITZERLAND", "ENGLAND"};
  double international_rate = 0.35;
};

std::string planted_corpus(const PlantedCorpusSpec& spec, std::uint64_t seed);

}  // namespace fieldmap::synthetic
