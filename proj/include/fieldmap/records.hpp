#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fieldmap {

struct CitedRef {
  std::string cited_journal;
  std::optional<int> cited_year;

  friend bool operator==(const CitedRef&, const CitedRef&) = default;
};

struct BiblioRecord {
  std::string record_id;
  std::string journal;
  int pub_year = 0;
  std::vector<std::string> authors;
  std::vector<std::string> addresses;
  std::vector<CitedRef> cited_refs;

  friend bool operator==(const BiblioRecord&, const BiblioRecord&) = default;
};

struct ParseWarning {
  std::size_t line = 0;
  std::string record_id;  // empty when the record never got an id
  std::string reason;

  friend bool operator==(const ParseWarning&, const ParseWarning&) = default;
};

struct ParseResult {
  std::vector<BiblioRecord> records;
  std::vector<ParseWarning> warnings;
};

inline constexpr int kMinYear = 1800;
inline constexpr int kMaxYear = 2100;

// Parses a field-tagged export (see docs/formats.md). Records start at a `PT`
// line and end at an `ER` line; anything outside a record is ignored.
// Malformed records are dropped and reported in `warnings`.
//
// Throws Error{Io} if the stream is unreadable and Error{EmptyCorpus} if no
// record survives.
ParseResult parse_corpus(std::istream& in);
ParseResult parse_corpus_text(std::string_view text);
ParseResult parse_corpus_file(const std::string& path);

// Uppercase, collapse runs of whitespace, strip trailing punctuation.
std::string normalize_journal(std::string_view name);

// "line,record_id,reason" with a header row.
void write_warnings_csv(std::ostream& out, const std::vector<ParseWarning>& warnings);

}  // namespace fieldmap
