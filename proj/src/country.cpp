#include "fieldmap/country.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>

namespace fieldmap {
namespace {

// Country names as they appear in the last segment of Web-of-Science-style
// addresses, with spaces turned into hyphens.
constexpr std::array kCountries = {
    "AFGHANISTAN", "ALBANIA", "ALGERIA", "ANDORRA", "ANGOLA", "ARGENTINA", "ARMENIA",
    "AUSTRALIA", "AUSTRIA", "AZERBAIJAN", "BAHRAIN", "BANGLADESH", "BELARUS", "BELGIUM",
    "BENIN", "BHUTAN", "BOLIVIA", "BOSNIA-&-HERCEG", "BOTSWANA", "BRAZIL", "BRUNEI",
    "BULGARIA", "BURKINA-FASO", "CAMBODIA", "CAMEROON", "CANADA", "CHILE", "COLOMBIA",
    "COSTA-RICA", "COTE-IVOIRE", "CROATIA", "CUBA", "CYPRUS", "CZECH-REPUBLIC",
    "CZECHOSLOVAKIA", "DEM-REP-CONGO", "DENMARK", "DJIBOUTI", "ECUADOR", "EGYPT",
    "EL-SALVADOR", "ENGLAND", "ERITREA", "ESTONIA", "ETHIOPIA", "FIJI", "FINLAND",
    "FRANCE", "GEORGIA", "GERMANY", "GHANA", "GREECE", "GREENLAND", "GUATEMALA", "HAITI",
    "HONDURAS", "HUNGARY", "ICELAND", "INDIA", "INDONESIA", "IRAN", "IRAQ", "IRELAND",
    "ISRAEL", "ITALY", "JAMAICA", "JAPAN", "JORDAN", "KAZAKHSTAN", "KENYA", "KUWAIT",
    "KYRGYZSTAN", "LAOS", "LATVIA", "LEBANON", "LIBYA", "LITHUANIA", "LUXEMBOURG",
    "MACEDONIA", "MADAGASCAR", "MALAWI", "MALAYSIA", "MALI", "MALTA", "MAURITIUS", "MEXICO",
    "MOLDOVA", "MONACO", "MONGOLIA", "MOROCCO", "MOZAMBIQUE", "MYANMAR", "NAMIBIA", "NEPAL",
    "NETHERLANDS", "NEW-CALEDONIA", "NEW-ZEALAND", "NICARAGUA", "NIGER", "NIGERIA",
    "NORTH-IRELAND", "NORWAY", "OMAN", "PAKISTAN", "PANAMA", "PAPUA-N-GUINEA", "PARAGUAY",
    "PEOPLES-R-CHINA", "PERU", "PHILIPPINES", "POLAND", "PORTUGAL", "PUERTO-RICO", "QATAR",
    "ROMANIA", "RUSSIA", "RWANDA", "SAUDI-ARABIA", "SCOTLAND", "SENEGAL", "SERBIA",
    "SINGAPORE", "SLOVAKIA", "SLOVENIA", "SOUTH-AFRICA", "SOUTH-KOREA", "SPAIN",
    "SRI-LANKA", "SUDAN", "SWEDEN", "SWITZERLAND", "SYRIA", "TAIWAN", "TAJIKISTAN",
    "TANZANIA", "THAILAND", "TOGO", "TRINID-&-TOBAGO", "TUNISIA", "TURKEY", "TURKMENISTAN",
    "UGANDA", "UK", "UKRAINE", "UNITED-ARAB-EMIRATES", "URUGUAY", "USA", "USSR", "UZBEKISTAN",
    "VENEZUELA", "VIETNAM", "WALES", "YEMEN", "YUGOSLAVIA", "ZAMBIA", "ZIMBABWE",
};

const std::map<std::string, std::string, std::less<>>& aliases() {
  static const std::map<std::string, std::string, std::less<>> table = {
      {"PEOPLES-R-CHINA", "PEOPLES-R-CHINA"},
      {"PEOPLES-REP-CHINA", "PEOPLES-R-CHINA"},
      {"CHINA", "PEOPLES-R-CHINA"},
      {"PR-CHINA", "PEOPLES-R-CHINA"},
      {"FED-REP-GER", "GERMANY"},
      {"W-GERMANY", "GERMANY"},
      {"WEST-GERMANY", "GERMANY"},
      {"GER-DEM-REP", "GERMANY"},
      {"E-GERMANY", "GERMANY"},
      {"NETHERLAND", "NETHERLANDS"},
      {"THE-NETHERLANDS", "NETHERLANDS"},
      {"HOLLAND", "NETHERLANDS"},
      {"NORTHERN-IRELAND", "NORTH-IRELAND"},
      {"N-IRELAND", "NORTH-IRELAND"},
      {"U-K", "UK"},
      {"UNITED-KINGDOM", "UK"},
      {"GREAT-BRITAIN", "UK"},
      {"U-S-A", "USA"},
      {"UNITED-STATES", "USA"},
      {"UNITED-STATES-OF-AMERICA", "USA"},
      {"US", "USA"},
      {"KOREA", "SOUTH-KOREA"},
      {"REPUBLIC-OF-KOREA", "SOUTH-KOREA"},
      {"REP-OF-KOREA", "SOUTH-KOREA"},
      {"RUSSIAN-FEDERATION", "RUSSIA"},
      {"RUSSIA-FED", "RUSSIA"},
      {"CZECH-REPUBL", "CZECH-REPUBLIC"},
      {"CZECH-REP", "CZECH-REPUBLIC"},
      {"IVORY-COAST", "COTE-IVOIRE"},
      {"UAE", "UNITED-ARAB-EMIRATES"},
      {"U-ARAB-EMIRATES", "UNITED-ARAB-EMIRATES"},
      {"REPUBLIC-OF-CHINA", "TAIWAN"},
  };
  return table;
}

// Two-letter codes that may precede a ZIP code in a US address.
constexpr std::array kUsStates = {
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DC", "DE", "FL", "GA", "HI", "IA",
    "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO", "MS",
    "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK", "OR", "PA",
    "PR", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI", "WV", "WY",
};

bool is_digits(std::string_view s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool is_zip(std::string_view s) {
  if (s.size() == 5) return is_digits(s);
  return s.size() == 10 && s[5] == '-' && is_digits(s.substr(0, 5)) && is_digits(s.substr(6));
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    const auto start = i;
    while (i < s.size() && s[i] != ' ') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

// "CA 94305", "CA 94305 USA", "CA 94305-1234 USA".
bool is_state_zip(std::string_view segment) {
  const auto w = words(segment);
  if (w.size() < 2 || w.size() > 3) return false;
  if (w.size() == 3 && w[2] != "USA") return false;
  const bool state = std::find(kUsStates.begin(), kUsStates.end(), w[0]) != kUsStates.end();
  return state && is_zip(w[1]);
}

std::string canonical_segment(std::string_view segment) {
  std::string out;
  bool pending = false;
  for (char c : segment) {
    if (c == ' ' || c == '\t') {
      pending = !out.empty();
      continue;
    }
    if (pending) {
      out += '-';
      pending = false;
    }
    const auto uc = static_cast<unsigned char>(c);
    out += uc < 0x80 ? static_cast<char>(std::toupper(uc)) : c;
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ';' || out.back() == '-')) out.pop_back();
  std::replace(out.begin(), out.end(), '.', '-');
  // "U-S-A" style tokens produced by "U.S.A." collapse doubled separators.
  out.erase(std::unique(out.begin(), out.end(),
                        [](char a, char b) { return a == '-' && b == '-'; }),
            out.end());
  return out;
}

std::string upper_trimmed(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  std::string out(s.substr(first, last - first + 1));
  for (auto& c : out) {
    const auto uc = static_cast<unsigned char>(c);
    if (uc < 0x80) c = static_cast<char>(std::toupper(uc));
  }
  return out;
}

std::string apply_merge(std::string token, const CountryOptions& options) {
  if (options.merge_uk &&
      (token == "ENGLAND" || token == "SCOTLAND" || token == "WALES" || token == "NORTH-IRELAND")) {
    return "UK";
  }
  return token;
}

}  // namespace

const std::vector<std::string>& country_table() {
  static const std::vector<std::string> table = [] {
    std::vector<std::string> t(kCountries.begin(), kCountries.end());
    std::sort(t.begin(), t.end());
    return t;
  }();
  return table;
}

bool is_known_country(std::string_view token) {
  const auto& t = country_table();
  return std::binary_search(t.begin(), t.end(), token);
}

std::string extract_country(std::string_view address, const CountryOptions& options) {
  const auto comma = address.rfind(',');
  const std::string segment =
      upper_trimmed(comma == std::string_view::npos ? address : address.substr(comma + 1));
  if (segment.empty()) return std::string(kUnknownCountry);

  if (is_state_zip(segment)) return "USA";
  const auto w = words(segment);
  if (!w.empty() && (w.back() == "USA" || w.back() == "USA.")) return "USA";

  const std::string token = canonical_segment(segment);
  if (is_known_country(token)) return apply_merge(token, options);
  if (auto it = aliases().find(token); it != aliases().end()) {
    return apply_merge(it->second, options);
  }
  return std::string(kUnknownCountry);
}

}  // namespace fieldmap
