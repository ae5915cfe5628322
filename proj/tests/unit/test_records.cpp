#include <doctest.h>

#include <random>
#include <sstream>

#include "fieldmap/error.hpp"
#include "fieldmap/records.hpp"
#include "fieldmap/records_io.hpp"

using namespace fieldmap;

namespace {

const char* kMinimal =
    "PT J\n"
    "AU Smith, J\n"
    "AU Tanaka, K\n"
    "TI Site effects in\n"
    "   sedimentary basins\n"
    "SO BULL SEISMOL SOC AM\n"
    "PY 2000\n"
    "C1 Stanford Univ, Dept Geophys, Stanford, CA 94305 USA\n"
    "CR Aki K, 1980, J GEOPHYS RES, V85, P100\n"
    "   Boore DM, 1997, SEISMOL RES LETT, V68, P128\n"
    "UT WOS:0001\n"
    "ER\n";

std::string record(const std::string& ut, const std::string& so, const std::string& py,
                   const std::string& extra = "") {
  return "PT J\nAU Doe, A\nSO " + so + "\nPY " + py + "\n" + extra + "UT " + ut + "\nER\n";
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("minimal record maps fields directly") {
  auto r = parse_corpus_text(kMinimal);
  REQUIRE(r.records.size() == 1);
  CHECK(r.warnings.empty());
  const auto& rec = r.records[0];
  CHECK(rec.record_id == "WOS:0001");
  CHECK(rec.journal == "BULL SEISMOL SOC AM");
  CHECK(rec.pub_year == 2000);
  CHECK(rec.authors == std::vector<std::string>{"Smith, J", "Tanaka, K"});
  REQUIRE(rec.addresses.size() == 1);
  REQUIRE(rec.cited_refs.size() == 2);
  CHECK(rec.cited_refs[0] == CitedRef{"J GEOPHYS RES", 1980});
  CHECK(rec.cited_refs[1] == CitedRef{"SEISMOL RES LETT", 1997});
}

TEST_CASE("missing C1 is legal and silent") {
  auto r = parse_corpus_text(record("A1", "J SEISMOL", "1999"));
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].addresses.empty());
  CHECK(r.warnings.empty());
}

TEST_CASE("invalid year skips only that record") {
  const std::string text =
      record("A1", "J SEISMOL", "1999") + record("A2", "J SEISMOL", "20x0") +
      record("A3", "NAT HAZARDS", "2000");
  auto r = parse_corpus_text(text);
  REQUIRE(r.records.size() == 2);
  CHECK(r.records[0].record_id == "A1");
  CHECK(r.records[1].record_id == "A3");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].reason == "invalid year");
  CHECK(r.warnings[0].line == 10);  // PY line of the second record
  CHECK(r.warnings[0].record_id == "A2");
}

TEST_CASE("other malformed records are reported") {
  SUBCASE("missing journal") {
    auto r = parse_corpus_text("PT J\nPY 2000\nUT X\nER\n" + record("A", "J", "2000"));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].reason == "missing journal");
  }
  SUBCASE("year out of range") {
    auto r = parse_corpus_text(record("X", "J", "1700") + record("A", "J", "2000"));
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].reason == "year out of range");
  }
  SUBCASE("duplicate id keeps the first") {
    auto r = parse_corpus_text(record("A", "J ONE", "2000") + record("A", "J TWO", "2000"));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].journal == "J ONE");
    CHECK(r.warnings[0].reason == "duplicate record id");
  }
  SUBCASE("record without ER before next PT") {
    auto r = parse_corpus_text("PT J\nSO J\nPY 2000\n" + record("A", "J", "2000"));
    REQUIRE(r.records.size() == 1);
    CHECK(r.warnings[0].reason == "record not terminated before next PT");
    CHECK(r.warnings[0].line == 4);
  }
  SUBCASE("unterminated record at end") {
    auto r = parse_corpus_text(record("A", "J", "2000") + "PT J\nSO J\nPY 2000\n");
    REQUIRE(r.records.size() == 1);
    CHECK(r.warnings[0].reason == "unterminated record at end of input");
  }
  SUBCASE("bad cited reference drops only the reference") {
    auto r = parse_corpus_text(record("A", "J", "2000", "CR garbage\nCR Aki K, 1980, J GEOPHYS RES\n"));
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].cited_refs.size() == 1);
    CHECK(r.warnings[0].reason == "unparseable cited reference");
  }
}

TEST_CASE("cited reference forms") {
  auto r = parse_corpus_text(record("A", "J", "2000",
                                    "CR 1999, J GEOPHYS RES, V1\n"
                                    "CR Smith J, NATURE\n"
                                    "CR Jones B, 2001, geophys.  j.   int.\n"));
  const auto& refs = r.records.at(0).cited_refs;
  REQUIRE(refs.size() == 3);
  CHECK(refs[0] == CitedRef{"J GEOPHYS RES", 1999});
  CHECK(refs[1] == CitedRef{"NATURE", std::nullopt});
  CHECK(refs[2] == CitedRef{"GEOPHYS. J. INT", 2001});
}

TEST_CASE("CRLF, BOM, unknown tags and text outside records") {
  std::string text = "\xEF\xBB\xBF" "FN export\r\n" + record("A", "j seismol", "2000", "ZZ ignored\r\n");
  auto r = parse_corpus_text(text);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].journal == "J SEISMOL");
  CHECK(r.warnings.empty());
}

TEST_CASE("records without UT get a content hash id") {
  const std::string a = "PT J\nSO J\nPY 2000\nER\n";
  const std::string b = "PT J\nSO K\nPY 2000\nER\n";
  auto r1 = parse_corpus_text(a + b);
  auto r2 = parse_corpus_text(b);
  REQUIRE(r1.records.size() == 2);
  CHECK(r1.records[0].record_id.size() == 17);
  CHECK(r1.records[0].record_id.front() == 'H');
  CHECK(r1.records[0].record_id != r1.records[1].record_id);
  CHECK(r1.records[1].record_id == r2.records[0].record_id);
}

TEST_CASE("journal normalization") {
  CHECK(normalize_journal("  Bull  seismol\tsoc am. ") == "BULL SEISMOL SOC AM");
  CHECK(normalize_journal("J GEOPHYS RES-SOL EA;") == "J GEOPHYS RES-SOL EA");
  CHECK(normalize_journal("...").empty());
}

TEST_CASE("fatal errors") {
  CHECK(kind_of([] { parse_corpus_text(""); }) == ErrorKind::EmptyCorpus);
  CHECK(kind_of([] { parse_corpus_text("PT J\nPY 2000\nER\n"); }) == ErrorKind::EmptyCorpus);
  CHECK(kind_of([] { parse_corpus_file("/nonexistent/corpus.txt"); }) == ErrorKind::Io);
}

TEST_CASE("warnings CSV") {
  std::ostringstream os;
  write_warnings_csv(os, {{12, "A2", "invalid year"}, {3, "", "missing journal"}});
  CHECK(os.str() == "line,record_id,reason\n12,A2,invalid year\n3,,missing journal\n");
}

TEST_CASE("parsing is deterministic and robust to removing malformed records") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::string> chunks;
    std::vector<bool> bad;
    const int n = 3 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      const bool malformed = rng() % 3 == 0;
      const std::string id = "R" + std::to_string(i);
      if (!malformed) {
        chunks.push_back(record(id, "J" + std::to_string(rng() % 3), std::to_string(1990 + rng() % 10),
                                "CR Aki K, 1980, J GEOPHYS RES\n"));
      } else {
        switch (rng() % 3) {
          case 0: chunks.push_back(record(id, "J", "19x9")); break;
          case 1: chunks.push_back("PT J\nPY 2000\nUT " + id + "\nER\n"); break;
          default: chunks.push_back("PT J\nSO J\nUT " + id + "\nER\n"); break;
        }
      }
      bad.push_back(malformed);
    }
    chunks.push_back(record("TAIL", "J", "2000"));
    bad.push_back(false);

    std::string all;
    for (const auto& c : chunks) all += c;
    auto first = parse_corpus_text(all);
    auto second = parse_corpus_text(all);
    CHECK(first.records == second.records);
    CHECK(first.warnings == second.warnings);

    for (std::size_t drop = 0; drop < chunks.size(); ++drop) {
      if (!bad[drop]) continue;
      std::string reduced;
      for (std::size_t i = 0; i < chunks.size(); ++i)
        if (i != drop) reduced += chunks[i];
      CHECK(parse_corpus_text(reduced).records == first.records);
    }
  }
}

TEST_CASE("records JSONL round trip and schema check") {
  auto parsed = parse_corpus_text(std::string(kMinimal) + "PT J\nSO J SEISMOL\nPY 1999\nCR 1998, NATURE\nER\n");
  std::stringstream ss;
  write_records_jsonl(ss, parsed.records);
  const std::string text = ss.str();
  CHECK(text.starts_with("{\"schema\":\"fieldmap.records/1\"}\n"));
  CHECK(read_records_jsonl(ss) == parsed.records);

  std::istringstream wrong("{\"schema\":\"fieldmap.records/0\"}\n");
  CHECK(kind_of([&] { read_records_jsonl(wrong); }) == ErrorKind::Schema);
  std::istringstream garbage("{\"schema\":\"fieldmap.records/1\"}\n{not json\n");
  CHECK(kind_of([&] { read_records_jsonl(garbage); }) == ErrorKind::Parse);
}
