#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fieldmap/country.hpp"
#include "fieldmap/country_network.hpp"
#include "fieldmap/error.hpp"
#include "fieldmap/exchange_formats.hpp"
#include "fieldmap/factor_model.hpp"
#include "fieldmap/journal_citation.hpp"
#include "fieldmap/records.hpp"
#include "fieldmap/stimulus_space.hpp"
#include "fieldmap/synthetic.hpp"

namespace py = pybind11;
using namespace fieldmap;

namespace {

template <class T>
py::array_t<T> to_numpy(const DenseMatrix<T>& m) {
  py::array_t<T> out({m.rows(), m.cols()});
  auto view = out.template mutable_unchecked<2>();
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  return out;
}

Matrix from_numpy(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
  Matrix m(a.shape(0), a.shape(1));
  auto view = a.unchecked<2>();
  for (py::ssize_t r = 0; r < a.shape(0); ++r)
    for (py::ssize_t c = 0; c < a.shape(1); ++c) m(r, c) = view(r, c);
  return m;
}

EnvironmentDirection direction_of(const std::string& s) {
  auto d = parse_direction(s);
  if (!d) throw py::value_error("direction must be citing, cited or union");
  return *d;
}

}  // namespace

PYBIND11_MODULE(_fieldmap, m) {
  m.doc() = "Journal citation clusters and country co-authorship networks";
  m.attr("__version__") = "0.1.0";

  static py::exception<Error> error_type(m, "FieldmapError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error_type, ("[" + std::string(to_string(e.kind())) + "] " + e.what()).c_str());
    }
  });

  py::class_<CitedRef>(m, "CitedRef")
      .def_readonly("cited_journal", &CitedRef::cited_journal)
      .def_readonly("cited_year", &CitedRef::cited_year);

  py::class_<BiblioRecord>(m, "BiblioRecord")
      .def_readonly("record_id", &BiblioRecord::record_id)
      .def_readonly("journal", &BiblioRecord::journal)
      .def_readonly("pub_year", &BiblioRecord::pub_year)
      .def_readonly("authors", &BiblioRecord::authors)
      .def_readonly("addresses", &BiblioRecord::addresses)
      .def_readonly("cited_refs", &BiblioRecord::cited_refs)
      .def("__repr__", [](const BiblioRecord& r) {
        return "<BiblioRecord " + r.record_id + " " + r.journal + " " + std::to_string(r.pub_year) + ">";
      });

  py::class_<ParseWarning>(m, "ParseWarning")
      .def_readonly("line", &ParseWarning::line)
      .def_readonly("record_id", &ParseWarning::record_id)
      .def_readonly("reason", &ParseWarning::reason);

  m.def("parse_corpus", [](const std::string& text) {
        auto r = parse_corpus_text(text);
        return py::make_tuple(r.records, r.warnings);
      }, py::arg("text"), "Parse field-tagged text; returns (records, warnings).");
  m.def("parse_corpus_file", [](const std::string& path) {
        auto r = parse_corpus_file(path);
        return py::make_tuple(r.records, r.warnings);
      }, py::arg("path"));
  m.def("normalize_journal", &normalize_journal);
  m.def("extract_country", [](const std::string& address, bool merge_uk) {
        return extract_country(address, CountryOptions{merge_uk});
      }, py::arg("address"), py::arg("merge_uk") = false);

  py::class_<JournalCitationMatrix>(m, "JournalCitationMatrix")
      .def_readonly("journals", &JournalCitationMatrix::journals)
      .def_readonly("year", &JournalCitationMatrix::year)
      .def_property_readonly("counts", [](const JournalCitationMatrix& x) { return to_numpy(x.counts); })
      .def("total", &JournalCitationMatrix::total);

  m.def("build_matrix", [](const std::vector<BiblioRecord>& records, int year, bool binary) {
        return build_matrix(records, year, binary ? CitationCounting::Binary : CitationCounting::Multiset);
      }, py::arg("records"), py::arg("year"), py::arg("binary") = false);
  m.def("find_seed_journals", [](const std::vector<std::string>& journals,
                                 const std::vector<std::string>& keywords) {
        return find_seed_journals(journals, keywords);
      }, py::arg("journals"), py::arg("keywords"));

  py::class_<CitationEnvironment>(m, "CitationEnvironment")
      .def_readonly("seed", &CitationEnvironment::seed)
      .def_readonly("year", &CitationEnvironment::year)
      .def_readonly("members", &CitationEnvironment::members)
      .def_property_readonly("submatrix", [](const CitationEnvironment& e) { return to_numpy(e.submatrix); });

  m.def("citation_environment", [](const JournalCitationMatrix& matrix, const std::string& seed,
                                   double threshold, const std::string& direction) {
        return citation_environment(matrix, seed, threshold, direction_of(direction));
      }, py::arg("matrix"), py::arg("seed"), py::arg("threshold") = kDefaultEnvironmentThreshold,
      py::arg("direction") = "citing");

  m.def("correlation_matrix", [](const CitationEnvironment& env, const std::string& side) {
        if (side != "citing" && side != "cited") throw py::value_error("side must be citing or cited");
        return to_numpy(correlation_matrix(env, side == "citing" ? PatternSide::Citing : PatternSide::Cited));
      }, py::arg("env"), py::arg("side") = "citing");

  py::class_<FactorModel>(m, "FactorModel")
      .def_readonly("variables", &FactorModel::variables)
      .def_readonly("eigenvalues", &FactorModel::eigenvalues)
      .def_readonly("n_factors", &FactorModel::n_factors)
      .def_property_readonly("loadings", [](const FactorModel& f) { return to_numpy(f.loadings); })
      .def_property_readonly("rotation", [](const FactorModel& f) { return to_numpy(f.rotation); })
      .def("communalities", &FactorModel::communalities)
      .def("explained_variance", &FactorModel::explained_variance);

  m.def("fit", [](py::array_t<double, py::array::c_style | py::array::forcecast> correlation,
                  std::vector<std::string> variables, std::optional<std::size_t> n_factors,
                  const std::string& rotation) {
        FitOptions options;
        options.n_factors = n_factors;
        if (rotation == "varimax") options.rotation = Rotation::Varimax;
        else if (rotation == "none") options.rotation = Rotation::None;
        else throw py::value_error("rotation must be varimax or none");
        return fit(from_numpy(correlation), std::move(variables), options);
      }, py::arg("correlation"), py::arg("variables"), py::arg("n_factors") = py::none(),
      py::arg("rotation") = "varimax");
  m.def("model_from_loadings", [](std::vector<std::string> variables,
                                  py::array_t<double, py::array::c_style | py::array::forcecast> loadings) {
        return FactorModel::from_loadings(std::move(variables), from_numpy(loadings));
      }, py::arg("variables"), py::arg("loadings"));

  py::class_<ClusterMap>(m, "ClusterMap")
      .def_readonly("threshold", &ClusterMap::threshold)
      .def_readonly("factor_of", &ClusterMap::factor_of)
      .def_readonly("complex", &ClusterMap::complex)
      .def_readonly("members", &ClusterMap::members)
      .def("member_names", &ClusterMap::member_names);

  m.def("assign_clusters", &assign_clusters, py::arg("model"),
        py::arg("threshold") = kDefaultLoadingThreshold);
  m.def("central_tendency_journal", &central_tendency_journal, py::arg("model"),
        py::arg("clusters"), py::arg("factor"));

  py::class_<StimulusMap>(m, "StimulusMap")
      .def_readonly("stress", &StimulusMap::stress)
      .def_readonly("one_dimensional", &StimulusMap::one_dimensional)
      .def_property_readonly("points", [](const StimulusMap& s) {
        py::list out;
        for (const auto& p : s.points) out.append(py::make_tuple(p.key, p.journal, p.x, p.y));
        return out;
      });
  m.def("embed", [](py::array_t<double, py::array::c_style | py::array::forcecast> correlation,
                    const std::vector<std::string>& labels, const std::string& dissimilarity) {
        if (dissimilarity != "linear" && dissimilarity != "euclidean") {
          throw py::value_error("dissimilarity must be linear or euclidean");
        }
        return embed(from_numpy(correlation), labels,
                     dissimilarity == "linear" ? Dissimilarity::Linear : Dissimilarity::Euclidean);
      }, py::arg("correlation"), py::arg("labels"), py::arg("dissimilarity") = "linear");

  py::class_<InternationalShare>(m, "InternationalShare")
      .def_readonly("total", &InternationalShare::total)
      .def_readonly("international", &InternationalShare::international)
      .def_property_readonly("percent", &InternationalShare::percent)
      .def_property_readonly("percent_text", &InternationalShare::percent_text);
  m.def("share_from_counts", &share_from_counts, py::arg("total"), py::arg("international"));
  m.def("international_share", [](const std::vector<BiblioRecord>& records, bool merge_uk) {
        return international_share(records, CountryOptions{merge_uk});
      }, py::arg("records"), py::arg("merge_uk") = false);

  py::class_<AffiliationMatrix>(m, "AffiliationMatrix")
      .def_readonly("countries", &AffiliationMatrix::countries)
      .def_readonly("articles", &AffiliationMatrix::articles)
      .def_readonly("excluded", &AffiliationMatrix::excluded)
      .def_property_readonly("incidence", [](const AffiliationMatrix& a) { return to_numpy(a.incidence); });
  m.def("build_affiliation", [](const std::vector<BiblioRecord>& records, bool merge_uk) {
        return build_affiliation(records, CountryOptions{merge_uk});
      }, py::arg("records"), py::arg("merge_uk") = false);

  py::class_<CountryGraph>(m, "CountryGraph")
      .def_readonly("countries", &CountryGraph::countries)
      .def_property_readonly("weights", [](const CountryGraph& g) { return to_numpy(g.weights); })
      .def("edge_count", &CountryGraph::edge_count);
  m.def("project", [](const AffiliationMatrix& aff, bool fractional) {
        return project(aff, fractional ? CoauthorCounting::Fractional : CoauthorCounting::Whole);
      }, py::arg("affiliation"), py::arg("fractional") = false);

  py::class_<CoreDecomposition>(m, "CoreDecomposition")
      .def_readonly("countries", &CoreDecomposition::countries)
      .def_readonly("coreness", &CoreDecomposition::coreness)
      .def_readonly("max_coreness", &CoreDecomposition::max_coreness)
      .def_readonly("max_core", &CoreDecomposition::max_core)
      .def_readonly("degenerate", &CoreDecomposition::degenerate);
  m.def("k_core", &k_core, py::arg("graph"));

  py::class_<CosineMatrix>(m, "CosineMatrix")
      .def_readonly("countries", &CosineMatrix::countries)
      .def_readonly("isolated", &CosineMatrix::isolated)
      .def_property_readonly("values", [](const CosineMatrix& c) { return to_numpy(c.values); });
  m.def("cosine_normalize", &cosine_normalize, py::arg("graph"));

  py::class_<ThresholdedNetwork>(m, "ThresholdedNetwork")
      .def_readonly("graph", &ThresholdedNetwork::graph)
      .def_readonly("isolated", &ThresholdedNetwork::isolated)
      .def_readonly("degenerate", &ThresholdedNetwork::degenerate);
  m.def("threshold_network", &threshold_network, py::arg("cosine"),
        py::arg("cutoff") = kDefaultCosineCutoff);

  py::class_<NetFile>(m, "NetFile")
      .def_readonly("labels", &NetFile::labels)
      .def_property_readonly("edges", [](const NetFile& n) {
        py::list out;
        for (const auto& e : n.edges) out.append(py::make_tuple(e.from, e.to, e.weight));
        return out;
      })
      .def("__eq__", [](const NetFile& a, const NetFile& b) { return a == b; });
  m.def("write_net", py::overload_cast<const CountryGraph&>(&write_net), py::arg("graph"));
  m.def("write_net_file", py::overload_cast<const NetFile&>(&write_net), py::arg("net"));
  m.def("read_net", &read_net, py::arg("text"));
  m.def("write_dl", &write_dl, py::arg("affiliation"));

  m.def("planted_corpus", [](int year, std::vector<std::vector<std::string>> blocks,
                             std::uint64_t seed, std::size_t records_per_journal) {
        synthetic::PlantedCorpusSpec spec;
        spec.year = year;
        spec.blocks = std::move(blocks);
        spec.records_per_journal = records_per_journal;
        return synthetic::planted_corpus(spec, seed);
      }, py::arg("year"), py::arg("blocks"), py::arg("seed"), py::arg("records_per_journal") = 8,
      "Synthetic field-tagged corpus with planted citing blocks.");
}
