#pragma once

#include <istream>
#include <ostream>
#include <string_view>
#include <vector>

#include "fieldmap/records.hpp"

namespace fieldmap {

inline constexpr std::string_view kRecordsSchema = "fieldmap.records/1";

// JSON lines: a schema header object, then one object per record.
void write_records_jsonl(std::ostream& out, const std::vector<BiblioRecord>& records);
std::vector<BiblioRecord> read_records_jsonl(std::istream& in);

}  // namespace fieldmap
