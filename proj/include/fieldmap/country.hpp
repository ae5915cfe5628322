#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fieldmap {

inline constexpr std::string_view kUnknownCountry = "UNKNOWN";

struct CountryOptions {
  // Fold ENGLAND, SCOTLAND, WALES and NORTH-IRELAND into UK.
  bool merge_uk = false;
};

// Canonical country token of an author address. Total: any string maps to a
// token from the shipped table or to UNKNOWN.
std::string extract_country(std::string_view address, const CountryOptions& options = {});

bool is_known_country(std::string_view token);

// All canonical tokens, sorted.
const std::vector<std::string>& country_table();

}  // namespace fieldmap
