#include "fieldmap/records_io.hpp"

#include <json.hpp>
#include <string>

#include "fieldmap/error.hpp"

namespace fieldmap {

using json = nlohmann::ordered_json;

void write_records_jsonl(std::ostream& out, const std::vector<BiblioRecord>& records) {
  out << json{{"schema", kRecordsSchema}}.dump() << '\n';
  for (const auto& r : records) {
    json refs = json::array();
    for (const auto& c : r.cited_refs) {
      refs.push_back({{"journal", c.cited_journal},
                      {"year", c.cited_year ? json(*c.cited_year) : json(nullptr)}});
    }
    json j{{"id", r.record_id},   {"journal", r.journal},     {"year", r.pub_year},
           {"authors", r.authors}, {"addresses", r.addresses}, {"refs", std::move(refs)}};
    out << j.dump() << '\n';
  }
}

std::vector<BiblioRecord> read_records_jsonl(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorKind::Parse, "records line " + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) {
    throw Error(ErrorKind::Schema, "empty records file; expected " + std::string(kRecordsSchema));
  }
  ++line_no;
  try {
    const auto header = json::parse(line);
    if (!header.is_object() || header.value("schema", "") != kRecordsSchema) throw 0;
  } catch (...) {
    throw Error(ErrorKind::Schema, "records file must start with schema " + std::string(kRecordsSchema));
  }

  std::vector<BiblioRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      BiblioRecord r;
      r.record_id = j.at("id").get<std::string>();
      r.journal = j.at("journal").get<std::string>();
      r.pub_year = j.at("year").get<int>();
      r.authors = j.at("authors").get<std::vector<std::string>>();
      r.addresses = j.at("addresses").get<std::vector<std::string>>();
      for (const auto& c : j.at("refs")) {
        CitedRef ref;
        ref.cited_journal = c.at("journal").get<std::string>();
        if (!c.at("year").is_null()) ref.cited_year = c.at("year").get<int>();
        r.cited_refs.push_back(std::move(ref));
      }
      if (r.journal.empty() || r.pub_year < kMinYear || r.pub_year > kMaxYear) {
        throw fail("record violates journal/year invariants");
      }
      records.push_back(std::move(r));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw fail(e.what());
    }
  }
  return records;
}

}  // namespace fieldmap
