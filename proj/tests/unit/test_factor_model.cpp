#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fieldmap/error.hpp"
#include "fieldmap/factor_model.hpp"
#include "oracles.hpp"

using namespace fieldmap;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Io;
}

Matrix from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

std::vector<std::string> names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("V" + std::to_string(i));
  return out;
}

// Environment whose members' citing rows are given directly.
CitationEnvironment env_with_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  CitationEnvironment env;
  env.seed = "J0";
  for (std::size_t i = 0; i < rows.size(); ++i) env.members.push_back("J" + std::to_string(i));
  for (std::size_t j = 0; j < rows[0].size(); ++j) env.profile_journals.push_back("P" + std::to_string(j));
  env.citing_profiles = CountMatrix(rows.size(), rows[0].size());
  env.cited_profiles = CountMatrix(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      env.citing_profiles(i, j) = rows[i][j];
      env.cited_profiles(i, j) = rows[(i + 1) % rows.size()][j];
    }
  return env;
}

// Largest |value| of each column made positive, columns by variance descending.
Matrix canonical(const Matrix& l) {
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < l.cols(); ++c) {
    auto col = l.column(c);
    std::size_t big = 0;
    for (std::size_t i = 1; i < col.size(); ++i)
      if (std::abs(col[i]) > std::abs(col[big])) big = i;
    if (col[big] < 0)
      for (double& v : col) v = -v;
    cols.push_back(col);
  }
  auto var = [](const std::vector<double>& c) {
    double s = 0;
    for (double v : c) s += v * v;
    return s;
  };
  std::stable_sort(cols.begin(), cols.end(), [&](auto& a, auto& b) { return var(a) > var(b); });
  Matrix out(l.rows(), l.cols());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t i = 0; i < l.rows(); ++i) out(i, c) = cols[c][i];
  return out;
}

const std::vector<std::string> kTable1Journals{
    "Earth, Plants and Space",
    "Journal of Geophysics Research",
    "Geophysics Research Letters",
    "Geophysics Journal International",
    "Physics of Earth and Planetary Interiors",
    "Pure and Applied Geophysics",
    "Tectonophysics",
    "Bulletin of the Seismological Society of America",
    "Soil Dynamics and Earthquake Engineering",
    "Journal of Seismology",
    "Natural Hazards",
    "Annali di Geofisica",
    "Engineering Geology",
    "Science",
    "Nature",
    "Current Science",
    "Geophysics",
    "Earthquake Engineering and Structural Dynamics",
};

const std::vector<std::vector<double>> kTable1Loadings{
    {.96755, .13346, .03939, .00451},   {.92073, .09846, .11211, -.04233},
    {.89984, .08973, .19592, -.05187},  {.86183, .25644, .00527, .16200},
    {.82490, .05293, .08132, .08248},   {.82072, .47634, .03008, .06451},
    {.74253, .15776, .04004, .09377},   {.29372, .92325, .04560, -.07577},
    {-.18017, .89607, -.07031, -.23901}, {.38826, .84096, -.03825, -.09281},
    {.60390, .71365, -.01758, -.02778}, {.59009, .60293, -.19081, .19119},
    {.11106, .53651, .01291, .06764},   {.08075, -.06509, .93182, .00392},
    {.03365, -.08399, .93085, .00752},  {.12658, .08081, .86149, -.02022},
    {-.01183, .06800, -.15294, .80088}, {-.16112, .24468, .18170, -.62480},
};

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

YearSnapshot snap(int year, std::vector<std::vector<std::string>> clusters,
                  std::vector<std::optional<std::string>> ctj = {}) {
  YearSnapshot s;
  s.year = year;
  s.clusters = std::move(clusters);
  s.ctj = ctj.empty() ? std::vector<std::optional<std::string>>(s.clusters.size()) : std::move(ctj);
  return s;
}

}  // namespace

TEST_CASE("pearson special cases") {
  const std::vector<double> a{1, 2, 3}, b{3, 2, 1};
  CHECK(pearson(a, a) == doctest::Approx(1.0));
  CHECK(pearson(a, b) == doctest::Approx(-1.0));
  std::vector<double> e1(10, 0.0), e2(10, 0.0);
  e1[0] = 1;
  e2[1] = 1;
  CHECK(std::abs(pearson(e1, e2) - oracle::pearson(e1, e2)) < 1e-15);
  CHECK(std::abs(pearson(e1, e2) + 1.0 / 9.0) < 1e-15);
}

TEST_CASE("correlation_matrix over citing profiles") {
  const auto env = env_with_rows({{1, 2, 3, 0}, {1, 2, 3, 0}, {3, 2, 1, 0}, {0, 5, 1, 1}});
  const auto r = correlation_matrix(env);
  CHECK(r(0, 0) == 1.0);
  CHECK(r(0, 1) == doctest::Approx(1.0));
  CHECK(r(1, 0) == r(0, 1));
  const std::vector<double> x{1, 2, 3, 0}, y{0, 5, 1, 1};
  CHECK(std::abs(r(0, 3) - oracle::pearson(x, y)) < 1e-14);
  const auto cited = correlation_matrix(env, PatternSide::Cited);
  CHECK(std::abs(cited(0, 1) - oracle::pearson({3, 2, 1, 0}, {1, 2, 3, 0})) < 1e-14);
}

TEST_CASE("correlation_matrix errors") {
  try {
    correlation_matrix(env_with_rows({{1, 2, 3}, {4, 4, 4}, {3, 2, 1}}));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateVariable);
    CHECK(std::string(e.what()).find("J1") != std::string::npos);
  }
  CHECK(kind_of([] { correlation_matrix(env_with_rows({{1, 2, 3}, {3, 2, 1}})); }) == ErrorKind::OutOfRange);
}

TEST_CASE("identity correlation keeps every variable as its own factor") {
  const auto model = fit(Matrix::identity(4), names(4));
  CHECK(model.n_factors == 4);
  for (double v : model.eigenvalues) CHECK(v == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 4; ++i) {
    int ones = 0;
    for (std::size_t j = 0; j < 4; ++j) {
      const double a = std::abs(model.loadings(i, j));
      CHECK((std::abs(a - 1.0) < 1e-12 || a < 1e-12));
      ones += a > 0.5;
    }
    CHECK(ones == 1);
  }
}

TEST_CASE("two blocks give two factors along the blocks") {
  Matrix c(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) c(i, j) = i == j ? 1.0 : (i / 3 == j / 3 ? 0.9 : 0.0);
  const auto model = fit(c, names(6));
  REQUIRE(model.n_factors == 2);
  const auto clusters = assign_clusters(model);
  for (std::size_t i = 0; i < 6; ++i) {
    REQUIRE(clusters.factor_of[i]);
    CHECK(*clusters.factor_of[i] == *clusters.factor_of[i / 3 * 3]);
  }
  CHECK(*clusters.factor_of[0] != *clusters.factor_of[3]);
  // Block loadings are sqrt((1 + 2r) / 3) with r = 0.9.
  CHECK(std::abs(model.loadings(0, *clusters.factor_of[0])) == doctest::Approx(std::sqrt(2.8 / 3.0)));
}

TEST_CASE("tiny symmetric perturbations move loadings continuously") {
  Matrix c(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      c(i, j) = i == j ? 1.0 : (i / 3 == j / 3 ? (i < 3 ? 0.9 : 0.7) : 0.1);
  const auto base = fit(c, names(6));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e-12, 1e-12);
  Matrix p = c;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) p(i, j) = p(j, i) = c(i, j) + u(rng);
  const auto moved = fit(p, names(6));
  REQUIRE(moved.n_factors == base.n_factors);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < base.n_factors; ++j)
      CHECK(std::abs(base.loadings(i, j) - moved.loadings(i, j)) < 1e-6);
}

TEST_CASE("factor count override and unrotated option") {
  Matrix c(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) c(i, j) = i == j ? 1.0 : (i / 3 == j / 3 ? 0.9 : 0.0);
  FitOptions three;
  three.n_factors = 3;
  CHECK(fit(c, names(6), three).n_factors == 3);
  FitOptions none;
  none.rotation = Rotation::None;
  const auto model = fit(c, names(6), none);
  CHECK(model.rotation == Matrix::identity(2));
  FitOptions bad;
  bad.n_factors = 7;
  CHECK(kind_of([&] { fit(c, names(6), bad); }) == ErrorKind::OutOfRange);
}

TEST_CASE("invalid correlation input") {
  auto c = Matrix::identity(3);
  c(0, 1) = 0.5;
  CHECK(kind_of([&] { fit(c, names(3)); }) == ErrorKind::InvalidCorrelation);
  auto diag = Matrix::identity(3);
  diag(1, 1) = 0.9;
  CHECK(kind_of([&] { fit(diag, names(3)); }) == ErrorKind::InvalidCorrelation);
  // r = -0.9 among three variables has eigenvalue 1 - 1.8 < 0.
  Matrix indefinite(3, 3, -0.9);
  for (std::size_t i = 0; i < 3; ++i) indefinite(i, i) = 1.0;
  CHECK(kind_of([&] { fit(indefinite, names(3)); }) == ErrorKind::InvalidCorrelation);
  CHECK(kind_of([&] { fit(Matrix(2, 3), names(2)); }) == ErrorKind::InvalidCorrelation);
}

TEST_CASE("varimax matches a frozen reference solution") {
  // Two factors: angle from a 50-digit root of the criterion's derivative.
  const auto two = canonical(varimax(from_rows({{.80, .30}, {.75, .35}, {.70, .25},
                                                {.35, -.70}, {.30, -.75}, {.25, -.65}})).loadings);
  const double ref2[6][2] = {{0.85394299722176623, 0.027952772597839966},
                             {0.82680440484140601, -0.037342685158520503},
                             {0.74243051439704542, 0.036012932290200055},
                             {0.056421117846520629, 0.78058737977304567},
                             {-0.0088743399098398395, 0.80772597215340589},
                             {-0.016934499602199929, 0.69621348932868508}};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(two(i, j) - ref2[i][j]) < 1e-8);

  // Three factors: an SVD-based varimax run to a relative tolerance of 1e-15.
  const auto three = canonical(varimax(from_rows({{.7, .4, .1}, {.6, .5, -.2}, {.5, -.3, .6},
                                                  {.4, -.5, .4}, {.6, .1, -.5}, {.3, .6, .3},
                                                  {.5, -.2, -.3}})).loadings);
  const double ref3[7][3] = {{0.7001264246594014, 0.19800470744159285, 0.3614099131521063},
                             {0.6394178818805664, -0.10591573094903371, 0.4795066529975391},
                             {0.18714677403047814, 0.8154316530150668, -0.00687780714336958},
                             {-0.08682561084174774, 0.7442502421558743, 0.09248183796227535},
                             {0.2206087384345473, -0.08108284494401906, 0.7515033977182687},
                             {0.7288312941633329, 0.01590020516741847, -0.09247771690431818},
                             {-0.010679986581387491, 0.16688034243079464, 0.5933269665174528}};
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(three(i, j) - ref3[i][j]) < 1e-8);
}

TEST_CASE("two-factor varimax finds the best planar angle") {
  // Brute force: scan the rotation angle and refine by golden section on the
  // Kaiser-normalized raw varimax criterion.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t p = 4 + rng() % 8;
    Matrix l(p, 2);
    for (std::size_t i = 0; i < p; ++i) {
      l(i, 0) = u(rng);
      l(i, 1) = u(rng);
    }
    auto criterion = [&](double t) {
      double s2[2] = {0, 0}, s4[2] = {0, 0};
      for (std::size_t i = 0; i < p; ++i) {
        const double h = std::hypot(l(i, 0), l(i, 1));
        const double a = (l(i, 0) * std::cos(t) - l(i, 1) * std::sin(t)) / h;
        const double b = (l(i, 0) * std::sin(t) + l(i, 1) * std::cos(t)) / h;
        s2[0] += a * a; s4[0] += a * a * a * a;
        s2[1] += b * b; s4[1] += b * b * b * b;
      }
      return p * (s4[0] + s4[1]) - s2[0] * s2[0] - s2[1] * s2[1];
    };
    const double pi = std::acos(-1.0);
    double best = 0.0;
    for (int s = 0; s < 4000; ++s) {
      const double t = -pi / 4 + pi / 2 * s / 4000.0;
      if (criterion(t) > criterion(best)) best = t;
    }
    double lo = best - pi / 4000, hi = best + pi / 4000;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 200; ++it) {
      const double m1 = hi - g * (hi - lo), m2 = lo + g * (hi - lo);
      if (criterion(m1) < criterion(m2)) lo = m1; else hi = m2;
    }
    const double t = (lo + hi) / 2;
    Matrix expected(p, 2);
    for (std::size_t i = 0; i < p; ++i) {
      expected(i, 0) = l(i, 0) * std::cos(t) - l(i, 1) * std::sin(t);
      expected(i, 1) = l(i, 0) * std::sin(t) + l(i, 1) * std::cos(t);
    }
    const Matrix got = canonical(varimax(l).loadings);
    const Matrix want = canonical(expected);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(got(i, j) - want(i, j)) < 1e-6);
  }
}

TEST_CASE("varimax preserves communalities and stays orthogonal") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 3 + rng() % 18;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(p, 6);
    Matrix l(p, k);
    for (std::size_t i = 0; i < p; ++i) {
      double norm = 0.0;
      for (std::size_t j = 0; j < k; ++j) norm += (l(i, j) = u(rng)) * l(i, j);
      const double scale = std::sqrt(0.95 / std::max(norm, 1e-6)) * std::abs(u(rng));
      for (std::size_t j = 0; j < k; ++j) l(i, j) *= scale;
    }
    const auto r = varimax(l);
    for (std::size_t i = 0; i < p; ++i) {
      double before = 0, after = 0;
      for (std::size_t j = 0; j < k; ++j) {
        before += l(i, j) * l(i, j);
        after += r.loadings(i, j) * r.loadings(i, j);
      }
      CHECK(std::abs(before - after) < 1e-9);
    }
    const Matrix rtr = multiply(r.rotation.transposed(), r.rotation);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) CHECK(std::abs(rtr(i, j) - (i == j ? 1.0 : 0.0)) < 1e-9);
  }
}

TEST_CASE("fitted models are canonical") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 4 + rng() % 10;
    Matrix x(n, 30);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < 30; ++j) x(i, j) = g(rng) + (i % 3 == j % 3 ? 2.0 : 0.0);
    Matrix c(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto a = x.row(i), b = x.row(j);
        c(i, j) = i == j ? 1.0 : oracle::pearson({a.begin(), a.end()}, {b.begin(), b.end()});
      }
    const auto m = fit(c, names(n));
    const auto ev = m.explained_variance();
    for (std::size_t f = 0; f < m.n_factors; ++f) {
      if (f) CHECK(ev[f - 1] >= ev[f] - 1e-12);
      const auto col = m.loadings.column(f);
      const auto big = std::max_element(col.begin(), col.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
      CHECK(*big > 0.0);
    }
    for (double h : m.communalities()) CHECK(h <= 1.0 + 1e-9);
  }
}

TEST_CASE("published loading table reproduces the boxed clusters") {
  const auto model = FactorModel::from_loadings(kTable1Journals, from_rows(kTable1Loadings));
  const auto clusters = assign_clusters(model, 0.5);
  CHECK(sorted(clusters.member_names(model, 0)) ==
        sorted({"Earth, Plants and Space", "Journal of Geophysics Research",
                "Geophysics Research Letters", "Geophysics Journal International",
                "Physics of Earth and Planetary Interiors", "Pure and Applied Geophysics",
                "Tectonophysics"}));
  CHECK(sorted(clusters.member_names(model, 1)) ==
        sorted({"Bulletin of the Seismological Society of America",
                "Soil Dynamics and Earthquake Engineering", "Journal of Seismology", "Natural Hazards",
                "Annali di Geofisica", "Engineering Geology"}));
  CHECK(sorted(clusters.member_names(model, 2)) == sorted({"Science", "Nature", "Current Science"}));
  CHECK(*clusters.factor_of[16] == 3);  // Geophysics
  CHECK(clusters.complex[10]);          // Natural Hazards
  CHECK(clusters.complex[11]);          // Annali di Geofisica
  CHECK(!clusters.complex[7]);
  CHECK(central_tendency_journal(model, clusters, 1) == "Bulletin of the Seismological Society of America");
  CHECK(central_tendency_journal(model, clusters, 0) == "Earth, Plants and Space");
  CHECK(central_tendency_journal(model, clusters, 2) == "Science");
}

TEST_CASE("assignment threshold and complexity") {
  const auto model = FactorModel::from_loadings(
      {"A", "B", "C", "D"}, from_rows({{.49, .1}, {.60, .55}, {.1, -.8}, {.5, .2}}));
  const auto c = assign_clusters(model);
  CHECK(!c.factor_of[0]);
  CHECK(*c.factor_of[1] == 0);
  CHECK(c.complex[1]);
  CHECK(*c.factor_of[2] == 1);
  CHECK(*c.factor_of[3] == 0);  // exactly at the threshold
  CHECK(c.members[0] == std::vector<std::size_t>{1, 3});
}

TEST_CASE("assignment ignores factor sign flips") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t p = 3 + rng() % 10, k = 1 + rng() % 4;
    Matrix l(p, k);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < k; ++j) l(i, j) = u(rng);
    Matrix flipped = l;
    const std::size_t f = rng() % k;
    for (std::size_t i = 0; i < p; ++i) flipped(i, f) = -flipped(i, f);
    const auto a = assign_clusters(FactorModel::from_loadings(names(p), l));
    const auto b = assign_clusters(FactorModel::from_loadings(names(p), flipped));
    CHECK(a.factor_of == b.factor_of);
    CHECK(a.complex == b.complex);
  }
}

TEST_CASE("central tendency journal rules") {
  const auto model = FactorModel::from_loadings({"B", "A", "C"}, from_rows({{.8, 0}, {.8, 0}, {0, .7}}));
  const auto c = assign_clusters(model);
  CHECK(central_tendency_journal(model, c, 0) == "A");
  CHECK(central_tendency_journal(model, c, 1) == "C");
  const auto empty = FactorModel::from_loadings({"A"}, from_rows({{.9, .1}}));
  CHECK(!central_tendency_journal(empty, assign_clusters(empty), 1));
  CHECK(kind_of([&] { central_tendency_journal(model, c, 2); }) == ErrorKind::OutOfRange);
}

TEST_CASE("jaccard") {
  const std::vector<std::string> a{"A", "B"}, b{"A", "B", "C", "D"}, none{};
  CHECK(jaccard(a, b) == 0.5);
  CHECK(jaccard(a, a) == 1.0);
  CHECK(jaccard(none, none) == 0.0);
}

TEST_CASE("timeline events") {
  SUBCASE("identical snapshots give no events") {
    auto s = snap(1998, {{"A", "B"}, {"C", "D"}}, {"A", std::nullopt});
    auto t = s;
    t.year = 1999;
    CHECK(compare_years({s, t}, "A").events.empty());
  }
  SUBCASE("seed loses the central position") {
    auto t = compare_years({snap(1998, {{"A", "B"}}, {"A"}), snap(1999, {{"A", "B"}}, {"B"})}, "A");
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0] == TimelineEvent{1999, TimelineEventKind::CtjLost, "A"});
  }
  SUBCASE("two clusters merge") {
    auto t = compare_years({snap(1998, {{"A", "B"}, {"C", "D"}}), snap(1999, {{"A", "B", "C", "D"}})}, "A");
    REQUIRE(t.events.size() == 1);
    CHECK(t.events[0].kind == TimelineEventKind::Merged);
    CHECK(t.events[0].detail == "{A;B} + {C;D} -> {A;B;C;D}");
  }
  SUBCASE("emerged and receded") {
    auto t = compare_years({snap(2000, {{"A", "B"}}), snap(1998, {{"X", "Y", "Z"}})}, "A");
    CHECK(t.years == std::vector<int>{1998, 2000});
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0] == TimelineEvent{2000, TimelineEventKind::Emerged, "{A;B}"});
    CHECK(t.events[1] == TimelineEvent{2000, TimelineEventKind::Receded, "{X;Y;Z}"});
  }
  SUBCASE("events only for adjacent years") {
    auto t = compare_years({snap(1996, {{"A"}}, {"A"}), snap(1997, {{"A"}}), snap(1998, {{"A"}}, {"A"})}, "A");
    REQUIRE(t.events.size() == 2);
    CHECK(t.events[0] == TimelineEvent{1997, TimelineEventKind::CtjLost, "A"});
    CHECK(t.events[1] == TimelineEvent{1998, TimelineEventKind::CtjGained, "A"});
  }
  CHECK(kind_of([] { compare_years({snap(2000, {})}, "A"); }) == ErrorKind::OutOfRange);
}

TEST_CASE("CSV outputs") {
  const auto model = FactorModel::from_loadings({"A", "B, C", "D"}, from_rows({{.9, .1}, {.2, -.7}, {.3, .3}}));
  const auto clusters = assign_clusters(model);

  std::ostringstream loadings;
  write_loadings_csv(loadings, model);
  CHECK(loadings.str() == "journal,factor1,factor2\nA,0.90000,0.10000\n\"B, C\",0.20000,-0.70000\nD,0.30000,0.30000\n");

  std::stringstream cl;
  write_clusters_csv(cl, model, clusters);
  CHECK(cl.str() ==
        "#schema fieldmap.clusters/1\njournal,factor,loading,complex,ctj\nA,1,0.90000,0,1\n"
        "\"B, C\",2,-0.70000,0,1\nD,,,0,0\n");
  const auto table = read_clusters_csv(cl);
  CHECK(table.members.at(1) == std::vector<std::string>{"A"});
  CHECK(table.ctj.at(2) == "B, C");

  Matrix r = Matrix::identity(2);
  r(0, 1) = r(1, 0) = 0.1 + 0.2;
  std::stringstream corr;
  const std::vector<std::string> n2{"A", "B"};
  write_correlation_csv(corr, n2, r);
  CHECK(corr.str() == "fieldmap.correlation/1,A,B\nA,1,0.30000000000000004\nB,0.30000000000000004,1\n");
  const auto back = read_correlation_csv(corr);
  CHECK(back.names == n2);
  CHECK(back.values == r);
  std::istringstream wrong("journal,A\nA,1\n");
  CHECK(kind_of([&] { read_correlation_csv(wrong); }) == ErrorKind::Schema);

  std::ostringstream tl;
  ClusterTimeline t;
  t.events = {{2000, TimelineEventKind::Emerged, "{A;B}"}, {2000, TimelineEventKind::CtjGained, "A"}};
  write_timeline_csv(tl, t);
  CHECK(tl.str() == "year,event,detail\n2000,EMERGED,{A;B}\n2000,CTJ_GAINED,A\n");
}
