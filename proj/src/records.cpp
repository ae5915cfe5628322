#include "fieldmap/records.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fieldmap/csv.hpp"
#include "fieldmap/error.hpp"

namespace fieldmap {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

bool is_tag_char(char c, bool first) {
  return (c >= 'A' && c <= 'Z') || (!first && c >= '0' && c <= '9');
}

// Two-character tag at the start of a field line, or empty when the line is
// not a field line.
std::string_view tag_of(std::string_view line) {
  if (line.size() < 2 || !is_tag_char(line[0], true) || !is_tag_char(line[1], false)) return {};
  if (line.size() > 2 && line[2] != ' ' && line[2] != '\t') return {};
  return line.substr(0, 2);
}

std::optional<int> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

bool looks_like_year(std::string_view s) {
  return s.size() == 4 && parse_int(s).has_value();
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

struct FieldValue {
  std::string text;
  std::size_t line = 0;
};

struct RawRecord {
  std::size_t start_line = 0;
  std::map<std::string, std::vector<FieldValue>, std::less<>> fields;
  std::string raw;  // exact text of the record, for content-derived ids
  std::string current_tag;
  std::optional<ParseWarning> defect;

  void fail(std::size_t line, std::string reason) {
    if (!defect) defect = ParseWarning{line, {}, std::move(reason)};
  }

  const std::vector<FieldValue>* get(std::string_view tag) const {
    auto it = fields.find(tag);
    return it == fields.end() ? nullptr : &it->second;
  }
};

std::string record_id_of(const RawRecord& raw) {
  if (const auto* ut = raw.get("UT"); ut && !ut->empty()) {
    const auto id = trim(ut->front().text);
    if (!id.empty()) return std::string(id);
  }
  // No UT: derive the id from the record's own bytes so that it does not
  // depend on the record's position in the file.
  std::ostringstream os;
  os << "H" << std::hex;
  os.width(16);
  os.fill('0');
  os << fnv1a(raw.raw);
  return os.str();
}

std::optional<CitedRef> parse_cited_ref(std::string_view value) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto comma = value.find(',', pos);
    parts.push_back(trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (parts.size() < 2) return std::nullopt;

  CitedRef ref;
  std::string_view source;
  if (looks_like_year(parts[0])) {  // anonymous: "1999, J GEOPHYS RES, V1"
    ref.cited_year = parse_int(parts[0]);
    source = parts[1];
  } else if (looks_like_year(parts[1])) {
    if (parts.size() < 3) return std::nullopt;
    ref.cited_year = parse_int(parts[1]);
    source = parts[2];
  } else {
    source = parts[1];
  }
  ref.cited_journal = normalize_journal(source);
  if (ref.cited_journal.empty()) return std::nullopt;
  return ref;
}

// Strips a leading "[Author A; Author B] " group some exports put in C1.
std::string_view strip_author_group(std::string_view address) {
  if (!address.empty() && address.front() == '[') {
    const auto close = address.find(']');
    if (close != std::string_view::npos) return trim(address.substr(close + 1));
  }
  return address;
}

class CorpusBuilder {
 public:
  void finish(RawRecord& raw, ParseResult& out) {
    const std::string id = record_id_of(raw);
    auto warn = [&](std::size_t line, std::string reason) {
      out.warnings.push_back({line, id, std::move(reason)});
    };
    if (raw.defect) {
      raw.defect->record_id = id;
      out.warnings.push_back(*raw.defect);
      return;
    }

    BiblioRecord rec;
    rec.record_id = id;

    const auto* so = raw.get("SO");
    if (so) {
      std::string joined;
      for (const auto& v : *so) {
        if (!joined.empty()) joined += ' ';
        joined += v.text;
      }
      rec.journal = normalize_journal(joined);
    }
    if (rec.journal.empty()) {
      warn(so ? so->front().line : raw.start_line, "missing journal");
      return;
    }

    const auto* py = raw.get("PY");
    if (!py || py->empty()) {
      warn(raw.start_line, "missing year");
      return;
    }
    const auto year = parse_int(trim(py->front().text));
    if (!year) {
      warn(py->front().line, "invalid year");
      return;
    }
    if (*year < kMinYear || *year > kMaxYear) {
      warn(py->front().line, "year out of range");
      return;
    }
    rec.pub_year = *year;

    if (const auto* au = raw.get("AU")) {
      for (const auto& v : *au) {
        const auto name = trim(v.text);
        if (!name.empty()) rec.authors.emplace_back(name);
      }
    }
    if (const auto* c1 = raw.get("C1")) {
      for (const auto& v : *c1) {
        const auto address = strip_author_group(trim(v.text));
        if (!address.empty()) rec.addresses.emplace_back(address);
      }
    }
    if (const auto* cr = raw.get("CR")) {
      for (const auto& v : *cr) {
        const auto text = trim(v.text);
        if (text.empty()) continue;
        if (auto ref = parse_cited_ref(text)) {
          rec.cited_refs.push_back(std::move(*ref));
        } else {
          warn(v.line, "unparseable cited reference");
        }
      }
    }

    if (!ids_.insert(id).second) {
      warn(raw.start_line, "duplicate record id");
      return;
    }
    out.records.push_back(std::move(rec));
  }

 private:
  std::set<std::string> ids_;
};

}  // namespace

std::string normalize_journal(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  bool pending_space = false;
  for (char c : name) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    const auto uc = static_cast<unsigned char>(c);
    out += uc < 0x80 ? static_cast<char>(std::toupper(uc)) : c;
  }
  while (!out.empty() && (out.back() == '.' || out.back() == ',' || out.back() == ';' ||
                          out.back() == ':' || out.back() == ' ')) {
    out.pop_back();
  }
  return out;
}

ParseResult parse_corpus(std::istream& in) {
  if (!in) throw Error(ErrorKind::Io, "input stream is not readable");

  ParseResult result;
  CorpusBuilder builder;
  std::optional<RawRecord> current;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);

    const std::string_view view = line;
    const auto tag = tag_of(view);

    if (!current) {
      if (tag == "PT") {
        current.emplace();
        current->start_line = line_no;
        current->raw = line + '\n';
        current->current_tag = "PT";
        current->fields["PT"].push_back({std::string(trim(view.substr(2))), line_no});
      }
      continue;
    }

    if (tag == "PT") {
      current->fail(line_no, "record not terminated before next PT");
      builder.finish(*current, result);
      current.emplace();
      current->start_line = line_no;
      current->raw = line + '\n';
      current->current_tag = "PT";
      current->fields["PT"].push_back({std::string(trim(view.substr(2))), line_no});
      continue;
    }
    current->raw += line;
    current->raw += '\n';
    if (tag == "ER") {
      builder.finish(*current, result);
      current.reset();
      continue;
    }
    if (trim(view).empty()) continue;
    if (view.front() == ' ' || view.front() == '\t') {
      if (current->current_tag.empty()) {
        current->fail(line_no, "continuation line without a field");
      } else {
        current->fields[current->current_tag].push_back({std::string(trim(view)), line_no});
      }
      continue;
    }
    if (tag.empty()) {
      current->fail(line_no, "malformed field line");
      current->current_tag.clear();
      continue;
    }
    current->current_tag = std::string(tag);
    current->fields[current->current_tag].push_back(
        {std::string(trim(view.substr(2))), line_no});
  }
  if (in.bad()) throw Error(ErrorKind::Io, "read error while parsing corpus");
  if (current) {
    current->fail(line_no, "unterminated record at end of input");
    builder.finish(*current, result);
  }
  if (result.records.empty()) {
    throw Error(ErrorKind::EmptyCorpus, "corpus contains no well-formed records");
  }
  return result;
}

ParseResult parse_corpus_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_corpus(in);
}

ParseResult parse_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open corpus file: " + path);
  return parse_corpus(in);
}

void write_warnings_csv(std::ostream& out, const std::vector<ParseWarning>& warnings) {
  out << "line,record_id,reason\n";
  for (const auto& w : warnings) {
    csv::write_row(out, {std::to_string(w.line), w.record_id, w.reason});
  }
}

}  // namespace fieldmap
