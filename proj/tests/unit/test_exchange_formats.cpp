#include <doctest.h>

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "fieldmap/error.hpp"
#include "fieldmap/exchange_formats.hpp"

using namespace fieldmap;

namespace {

std::string golden(const std::string& name) {
  std::ifstream in(std::string(FIELDMAP_SOURCE_DIR) + "/tests/golden/" + name, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CountryGraph graph(std::vector<std::string> countries) {
  CountryGraph g;
  g.weights = Matrix(countries.size(), countries.size());
  g.countries = std::move(countries);
  return g;
}

void link(CountryGraph& g, std::size_t a, std::size_t b, double w) { g.weights(a, b) = g.weights(b, a) = w; }

std::string parse_error(std::string_view text) {
  try {
    read_net(text);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    return e.what();
  }
  FAIL("no error thrown");
  return {};
}

CountryGraph random_graph(std::mt19937_64& rng) {
  const std::size_t n = 1 + rng() % 10;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("C" + std::to_string(rng() % 1000) + "-" + std::to_string(i));
  auto g = graph(names);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng() % 2) link(g, i, j, rng() % 2 ? static_cast<double>(1 + rng() % 9) : u(rng));
  return g;
}

}  // namespace

TEST_CASE("net writer matches goldens") {
  auto two = graph({"USA", "JAPAN"});
  link(two, 0, 1, 3);
  CHECK(write_net(two) == golden("two_nodes.net"));
  CHECK(write_net(two) == "*Vertices 2\n1 \"JAPAN\"\n2 \"USA\"\n*Edges\n1 2 3\n");

  CHECK(write_net(graph({"USA"})) == golden("single_node.net"));

  auto cos = graph({"USA", "JAPAN", "GERMANY", "FRANCE"});
  link(cos, 3, 2, 0.8);
  link(cos, 3, 0, 0.25);
  link(cos, 1, 0, 0.100001);
  CHECK(write_net(cos) == golden("cosine.net"));
}

TEST_CASE("net writer rejects unwritable labels") {
  for (const char* bad : {"US\"A", "US\nA"}) {
    try {
      write_net(graph({bad}));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Format);
    }
  }
  NetFile backwards{{"A", "B"}, {{2, 1, 1.0}}};
  CHECK_THROWS_AS(write_net(backwards), Error);
}

TEST_CASE("net reader") {
  const auto net = read_net(golden("cosine.net"));
  CHECK(net.labels == std::vector<std::string>{"FRANCE", "GERMANY", "JAPAN", "USA"});
  REQUIRE(net.edges.size() == 3);
  CHECK(net.edges[0] == NetEdge{1, 2, 0.8});
  CHECK(net.edges[2] == NetEdge{3, 4, 0.100001});
  CHECK(read_net("*Vertices 1\r\n1 \"USA\"\r\n*Edges\r\n").labels == std::vector<std::string>{"USA"});
}

TEST_CASE("net reader errors carry line numbers") {
  CHECK(parse_error("") == "line 1: missing *Vertices");
  CHECK(parse_error("*Vertices 2\n1 \"JAPAN\"\n2 \"USA\"\n*Edges\n1 99 1\n").starts_with("line 5:"));
  CHECK(parse_error("*Vertices 2\n1 \"JAPAN\"\n*Edges\n").starts_with("line 3:"));
  CHECK(parse_error("*Vertices 1\n1 USA\n*Edges\n").starts_with("line 2:"));
  CHECK(parse_error("*Vertices 2\n1 \"A\"\n2 \"B\"\n*Edges\n1 2 x\n").starts_with("line 5:"));
  CHECK(parse_error("*Vertices x\n").starts_with("line 1:"));
}

TEST_CASE("round trip and injectivity on random graphs") {
  std::mt19937_64 rng(12);
  std::set<std::string> seen;
  std::set<std::string> seen_graphs;
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = random_graph(rng);
    const auto text = write_net(g);
    const auto back = read_net(text);
    CHECK(back == to_net(g));
    CHECK(write_net(back) == text);
    // Distinct graphs give distinct bytes.
    std::ostringstream key;
    const auto net = to_net(g);
    for (const auto& l : net.labels) key << l << '|';
    for (const auto& e : net.edges) key << e.from << '-' << e.to << ':' << e.weight << '|';
    if (seen_graphs.insert(key.str()).second) CHECK(seen.insert(text).second);
  }
}

TEST_CASE("to_net drops non-positive weights") {
  auto g = graph({"B", "A", "C"});
  link(g, 0, 1, 2);
  link(g, 1, 2, 0);
  const auto net = to_net(g);
  CHECK(net.labels == std::vector<std::string>{"A", "B", "C"});
  REQUIRE(net.edges.size() == 1);
  CHECK(net.edges[0] == NetEdge{1, 2, 2.0});
}

TEST_CASE("dl writer matches goldens") {
  AffiliationMatrix two;
  two.countries = {"JAPAN", "USA"};
  two.articles = {"WOS:1"};
  two.incidence = DenseMatrix<std::uint8_t>(2, 1, 1);
  CHECK(write_dl(two) == golden("two_countries.dl"));

  AffiliationMatrix three;
  three.countries = {"FRANCE", "PEOPLES-R-CHINA", "USA"};
  three.articles = {"WOS:1", "H00ab, x", "A 3"};
  three.incidence = DenseMatrix<std::uint8_t>(3, 3);
  three.incidence(0, 0) = 1;
  three.incidence(1, 1) = 1;
  three.incidence(2, 1) = 1;
  three.incidence(2, 2) = 1;
  CHECK(write_dl(three) == golden("three_articles.dl"));
}
