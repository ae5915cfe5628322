// Regenerates the bundled synthetic corpus under data/fixture/.
// Usage: make_fixture OUTDIR

#include <filesystem>
#include <fstream>
#include <iostream>

#include "fieldmap/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixture OUTDIR\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);

  const std::vector<std::string> geophysics = {"GEOPHYS J INT", "GEOPHYS RES LETT",
                                               "J GEOPHYS RES", "PHYS EARTH PLANET IN"};
  using fieldmap::synthetic::PlantedCorpusSpec;

  // 1998: the seismology bulletin still cites like a geophysics journal.
  PlantedCorpusSpec early;
  early.year = 1998;
  early.blocks = {geophysics};
  early.blocks[0].push_back("BULL SEISMOL SOC AM");
  early.id_prefix = "FIX";

  // 2000: it anchors a separate cluster with three newer titles.
  PlantedCorpusSpec late;
  late.year = 2000;
  late.blocks = {geophysics,
                 {"BULL SEISMOL SOC AM", "J SEISMOL", "NAT HAZARDS", "SOIL DYN EARTHQ ENG"}};
  late.id_prefix = "FIX";
  late.countries = {"USA", "ITALY", "GERMANY", "SWITZERLAND", "RUSSIA", "JAPAN", "ENGLAND", "GREECE"};

  for (const auto& [spec, seed] : {std::pair{early, 1998ULL}, std::pair{late, 2000ULL}}) {
    std::ofstream out(dir / (std::to_string(spec.year) + ".txt"), std::ios::binary);
    out << fieldmap::synthetic::planted_corpus(spec, seed);
  }
  return 0;
}
