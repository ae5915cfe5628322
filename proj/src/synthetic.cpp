#include "fieldmap/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

namespace fieldmap::synthetic {
namespace {

std::string two_digit(std::size_t n) {
  std::ostringstream os;
  os << std::setw(2) << std::setfill('0') << n;
  return os.str();
}

std::string address_for(const std::string& country, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> inst(1, 40);
  const std::string institute = "Inst " + std::to_string(inst(rng));
  if (country == "USA") {
    static const char* states[] = {"CA 94305", "NY 10027", "MA 02139", "WA 98195", "CO 80309"};
    std::uniform_int_distribution<int> pick(0, 4);
    return institute + ", Dept Geophys, City, " + states[pick(rng)] + " USA";
  }
  std::string name = country;
  std::transform(name.begin() + 1, name.end(), name.begin() + 1,
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return institute + ", Dept Earth Sci, City, " + name;
}

}  // namespace

std::string planted_corpus(const PlantedCorpusSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(1.0 - spec.noise, 1.0 + spec.noise);

  std::size_t widest = 0;
  for (const auto& b : spec.blocks) widest = std::max(widest, b.size());
  const std::size_t group_size = widest + 2;
  const std::size_t n_groups = std::max<std::size_t>(spec.blocks.size(), 2);

  // Target groups: one per block (its journals, padded with cited-only
  // titles), plus a shared high group and a shared low group.
  std::vector<std::vector<std::string>> groups(n_groups);
  for (std::size_t g = 0; g < n_groups; ++g) {
    if (g < spec.blocks.size()) groups[g] = spec.blocks[g];
    for (std::size_t k = groups[g].size(); k < group_size; ++k) {
      groups[g].push_back(spec.target_prefix + " " + static_cast<char>('A' + g) + two_digit(k + 1));
    }
  }
  std::vector<std::string> shared_high;
  std::vector<std::string> shared_low;
  for (std::size_t k = 0; k < group_size; ++k) {
    shared_high.push_back(spec.target_prefix + " GENERAL " + two_digit(k + 1));
    shared_low.push_back(spec.target_prefix + " MISC " + two_digit(k + 1));
  }

  std::ostringstream out;
  out << "FN Synthetic planted corpus\nVR 1.0\n";
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick_country(0, spec.countries.size() - 1);
  std::uniform_int_distribution<int> author_count(1, 3);
  std::uniform_int_distribution<int> ref_year(spec.year - 12, spec.year - 1);
  std::uniform_int_distribution<int> volume(1, 120);

  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    for (std::size_t j = 0; j < spec.blocks[b].size(); ++j) {
      const std::string& journal = spec.blocks[b][j];
      std::vector<std::string> refs;
      auto emit = [&](const std::string& target, double weight) {
        const auto count = static_cast<std::size_t>(std::lround(weight * jitter(rng)));
        refs.insert(refs.end(), count, target);
      };
      for (std::size_t g = 0; g < n_groups; ++g)
        for (const auto& t : groups[g]) emit(t, g == b ? spec.high : spec.low);
      for (const auto& t : shared_high) emit(t, spec.high);
      for (const auto& t : shared_low) emit(t, spec.low);
      std::shuffle(refs.begin(), refs.end(), rng);

      const std::size_t n_rec = std::max<std::size_t>(spec.records_per_journal, 1);
      for (std::size_t r = 0; r < n_rec; ++r) {
        out << "PT J\n";
        const int n_auth = author_count(rng);
        for (int a = 0; a < n_auth; ++a) {
          out << (a == 0 ? "AU " : "   ") << "Author" << b << j << r << a << ", "
              << static_cast<char>('A' + a) << "\n";
        }
        out << "TI Planted article " << r + 1 << " of " << journal << "\n";
        out << "SO " << journal << "\n";
        out << "PY " << spec.year << "\n";

        const std::string home = spec.countries[pick_country(rng)];
        std::vector<std::string> addresses{address_for(home, rng)};
        if (spec.countries.size() > 1 && unit(rng) < spec.international_rate) {
          std::string other = home;
          while (other == home) other = spec.countries[pick_country(rng)];
          addresses.push_back(address_for(other, rng));
        }
        if (unit(rng) < 0.25) addresses.push_back(address_for(home, rng));
        for (std::size_t a = 0; a < addresses.size(); ++a) {
          out << (a == 0 ? "C1 " : "   ") << addresses[a] << "\n";
        }

        bool first = true;
        for (std::size_t k = r; k < refs.size(); k += n_rec) {
          out << (first ? "CR " : "   ") << "Cited A, " << ref_year(rng) << ", " << refs[k]
              << ", V" << volume(rng) << ", P" << volume(rng) << "\n";
          first = false;
        }
        out << "UT " << spec.id_prefix << spec.year << "-" << b << two_digit(j) << "-"
            << two_digit(r) << "\n";
        out << "ER\n\n";
      }
    }
  }
  out << "EF\n";
  return out.str();
}

}  // namespace fieldmap::synthetic
