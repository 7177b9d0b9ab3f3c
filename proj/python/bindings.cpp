#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "coword/corpus.hpp"
#include "coword/export.hpp"
#include "coword/factors.hpp"
#include "coword/layout.hpp"
#include "coword/pipeline.hpp"
#include "coword/termstats.hpp"
#include "coword/vectorspace.hpp"

namespace py = pybind11;
using namespace coword;

namespace {

Orientation parse_orientation(const std::string& s) {
  if (s == "columns") return Orientation::Columns;
  if (s == "rows") return Orientation::Rows;
  throw UsageError("orientation must be 'columns' or 'rows'");
}

std::vector<std::string> default_labels(std::string_view prefix, Eigen::Index n) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i + 1));
  return out;
}

LabeledMatrix labeled(const RealMatrix& values, std::optional<std::vector<std::string>> rows,
                      std::optional<std::vector<std::string>> cols) {
  return {values, rows ? *rows : default_labels("d", values.rows()),
          cols ? *cols : default_labels("v", values.cols())};
}

Graph make_graph(const std::vector<std::string>& labels,
                 const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
  Graph g;
  for (const auto& l : labels) g.add_node({l, std::nullopt, 1.0});
  for (const auto& [a, b, w] : edges) g.add_edge(a, b, w);
  return g;
}

RealMatrix positions_array(const Layout& layout) {
  RealMatrix out(static_cast<Eigen::Index>(layout.positions.size()), 2);
  for (std::size_t i = 0; i < layout.positions.size(); ++i) {
    out(static_cast<Eigen::Index>(i), 0) = layout.positions[i].x;
    out(static_cast<Eigen::Index>(i), 1) = layout.positions[i].y;
  }
  return out;
}

PipelineConfig config_from_dict(const py::dict& options) {
  PipelineConfig cfg;
  if (options.contains("config")) cfg = load_config(py::str(options["config"]).cast<std::string>());
  for (const auto& [k, v] : options) {
    const auto key = py::str(k).cast<std::string>();
    if (key == "config") continue;
    std::string value;
    if (py::isinstance<py::bool_>(v)) {
      value = v.cast<bool>() ? "true" : "false";
    } else {
      value = py::str(v).cast<std::string>();
    }
    cfg.set(key, value);
  }
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Word-document matrices, term statistics, factor analysis and semantic maps";

  static py::exception<Error> base_error(m, "CowordError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const UsageError& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const IoError& e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const Error& e) {
      base_error(e.what());
    }
  });

  m.def(
      "tokenize",
      [](const std::string& text, bool lowercase, std::size_t min_token_length,
         std::optional<std::set<std::string>> stopwords,
         std::map<std::string, std::string> synonyms) {
        TokenizerConfig cfg;
        cfg.lowercase = lowercase;
        cfg.min_token_length = min_token_length;
        cfg.stopwords = stopwords ? *stopwords : default_stopwords();
        cfg.synonyms = std::move(synonyms);
        cfg.validate();
        return tokenize(text, cfg);
      },
      py::arg("text"), py::arg("lowercase") = true, py::arg("min_token_length") = 2,
      py::arg("stopwords") = py::none(),
      py::arg("synonyms") = std::map<std::string, std::string>{},
      "Split text into terms: letter/digit runs, lowercased, stopwords removed.");

  py::class_<WordDocMatrix>(m, "WordDocMatrix")
      .def(py::init([](const CountMatrix& counts, std::vector<std::string> rows,
                       std::vector<std::string> cols) {
             return WordDocMatrix::from_counts(counts, std::move(rows), std::move(cols));
           }),
           py::arg("counts"), py::arg("row_labels"), py::arg("col_labels"))
      .def_property_readonly("counts", &WordDocMatrix::counts)
      .def_property_readonly("row_margins", &WordDocMatrix::row_margins)
      .def_property_readonly("col_margins", &WordDocMatrix::col_margins)
      .def_property_readonly("total", &WordDocMatrix::total)
      .def_property_readonly("row_labels", &WordDocMatrix::row_labels)
      .def_property_readonly("col_labels", &WordDocMatrix::col_labels)
      .def_property_readonly("pruned_rows", [](const WordDocMatrix& w) { return w.pruning().rows; })
      .def_property_readonly("pruned_cols", [](const WordDocMatrix& w) { return w.pruning().cols; })
      .def("doc_freqs", &WordDocMatrix::doc_freqs)
      .def("select_columns", &WordDocMatrix::select_columns)
      .def("binarized", &WordDocMatrix::binarized);

  m.def(
      "word_doc_matrix",
      [](const std::vector<std::string>& texts, bool lowercase, std::size_t min_token_length,
         std::optional<std::set<std::string>> stopwords, bool binary) {
        Corpus corpus;
        for (std::size_t i = 0; i < texts.size(); ++i)
          corpus.push_back({std::to_string(i + 1), "d" + std::to_string(i + 1), texts[i]});
        if (corpus.empty()) throw DataError("empty corpus");
        TokenizerConfig cfg;
        cfg.lowercase = lowercase;
        cfg.min_token_length = min_token_length;
        cfg.stopwords = stopwords ? *stopwords : default_stopwords();
        const auto tokens = tokenize_corpus(corpus, cfg);
        auto wdm = build_word_doc_matrix(corpus, tokens, build_vocabulary(tokens));
        return binary ? wdm.binarized() : wdm;
      },
      py::arg("texts"), py::arg("lowercase") = true, py::arg("min_token_length") = 2,
      py::arg("stopwords") = py::none(), py::arg("binary") = false,
      "Build the documents x terms count matrix from raw texts.");

  m.def("expected_matrix", [](const WordDocMatrix& w) { return expected_matrix(w).values; });
  m.def("tfidf_matrix", &tfidf_matrix);
  m.def("tfidf_per_term", &tfidf_per_term);
  m.def(
      "chi_square",
      [](const WordDocMatrix& w, bool yates) {
        const auto rep = chi_square(w, yates ? YatesRule::ObservedBelow5 : YatesRule::Off);
        py::dict d;
        d["total"] = rep.total;
        d["degrees_of_freedom"] = rep.degrees_of_freedom;
        d["per_cell"] = rep.per_cell;
        d["per_term"] = chi_square_per_term(rep);
        d["yates_applied"] = rep.yates_applied;
        return d;
      },
      py::arg("m"), py::arg("yates") = false);
  m.def("obs_exp", [](const WordDocMatrix& w) {
    auto oe = obs_exp(w);
    return py::make_tuple(oe.values, oe.column_sums);
  });
  m.def(
      "select_terms",
      [](const WordDocMatrix& w, const std::string& criterion, std::optional<std::size_t> top,
         std::optional<double> threshold, bool yates) {
        return select_terms(term_scores(w, yates ? YatesRule::ObservedBelow5 : YatesRule::Off),
                            parse_criterion(criterion), Selection{top, threshold});
      },
      py::arg("m"), py::arg("criterion") = "freq", py::arg("top") = py::none(),
      py::arg("threshold") = py::none(), py::arg("yates") = true);

  m.def(
      "cosine_matrix",
      [](const RealMatrix& values, const std::string& orientation) {
        return cosine_matrix(labeled(values, std::nullopt, std::nullopt),
                             parse_orientation(orientation))
            .values;
      },
      py::arg("values"), py::arg("orientation") = "columns");
  m.def(
      "pearson_matrix",
      [](const RealMatrix& values, const std::string& orientation) {
        auto s = pearson_matrix(labeled(values, std::nullopt, std::nullopt),
                                parse_orientation(orientation));
        return py::make_tuple(s.values, s.labels, s.dropped);
      },
      py::arg("values"), py::arg("orientation") = "columns");
  m.def(
      "cooccurrence",
      [](const WordDocMatrix& w, const std::string& mode) {
        if (mode != "words" && mode != "documents")
          throw UsageError("mode must be 'words' or 'documents'");
        return cooccurrence(w, mode == "words" ? CoocMode::Words : CoocMode::Documents).values;
      },
      py::arg("m"), py::arg("mode") = "words");

  py::class_<FactorSolution>(m, "FactorSolution")
      .def_readonly("loadings", &FactorSolution::loadings)
      .def_readonly("eigenvalues", &FactorSolution::eigenvalues)
      .def_readonly("explained_variance_pct", &FactorSolution::explained_variance_pct)
      .def_readonly("rotated", &FactorSolution::rotated)
      .def_readonly("variable_labels", &FactorSolution::variable_labels)
      .def_readonly("warnings", &FactorSolution::warnings)
      .def("communalities", &FactorSolution::communalities);

  m.def(
      "factor_analyze",
      [](const RealMatrix& values, std::optional<int> factors, const std::string& mode,
         std::optional<std::vector<std::string>> row_labels,
         std::optional<std::vector<std::string>> col_labels) {
        if (mode != "R" && mode != "Q") throw UsageError("mode must be 'R' or 'Q'");
        return factor_analyze(labeled(values, row_labels, col_labels), CellMode::Counts,
                              mode == "R" ? FactorMode::R : FactorMode::Q,
                              factors ? FactorCount::exactly(*factors) : FactorCount::kaiser());
      },
      py::arg("values"), py::arg("factors") = py::none(), py::arg("mode") = "R",
      py::arg("row_labels") = py::none(), py::arg("col_labels") = py::none(),
      "Principal components of the Pearson correlations; factors=None applies Kaiser's rule.");
  m.def(
      "varimax",
      [](const FactorSolution& sol, bool kaiser_normalize, double tol, int max_iter) {
        VarimaxReport rep;
        auto out = varimax(sol, VarimaxOptions{kaiser_normalize, tol, max_iter}, &rep);
        return py::make_tuple(out, rep.rotation, rep.criterion);
      },
      py::arg("solution"), py::arg("kaiser_normalize") = true, py::arg("tol") = 1e-10,
      py::arg("max_iter") = 500);
  m.def(
      "assign_factors",
      [](const FactorSolution& sol, double suppression) {
        std::vector<std::optional<std::pair<std::size_t, bool>>> out;
        for (const auto& a : assign_factors(sol, suppression)) {
          if (a) out.emplace_back(std::make_pair(a->factor, a->positive));
          else out.emplace_back(std::nullopt);
        }
        return out;
      },
      py::arg("solution"), py::arg("suppression") = kDefaultSuppression);
  m.def(
      "truncated_svd",
      [](const RealMatrix& a, std::size_t k) {
        auto r = truncated_svd(a, k);
        return py::make_tuple(r.u, r.singular_values, r.v);
      },
      py::arg("a"), py::arg("k"));

  m.def(
      "fruchterman_reingold",
      [](const std::vector<std::string>& labels,
         const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges, int iterations,
         std::uint64_t seed, bool use_weights) {
        return positions_array(
            fruchterman_reingold(make_graph(labels, edges), FrOptions{iterations, seed, use_weights}));
      },
      py::arg("labels"), py::arg("edges"), py::arg("iterations") = 500,
      py::arg("seed") = kDefaultSeed, py::arg("use_weights") = false);
  m.def(
      "kamada_kawai",
      [](const std::vector<std::string>& labels,
         const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
         std::uint64_t seed) {
        KkOptions o;
        o.seed = seed;
        return positions_array(kamada_kawai(make_graph(labels, edges), o));
      },
      py::arg("labels"), py::arg("edges"), py::arg("seed") = kDefaultSeed);
  m.def(
      "format_pajek_net",
      [](const std::vector<std::string>& labels,
         const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges) {
        return format_pajek_net(make_graph(labels, edges));
      },
      py::arg("labels"), py::arg("edges"));
  m.def("parse_pajek_net", [](const std::string& text) {
    const auto net = parse_pajek_net(text);
    std::vector<std::string> labels;
    for (const auto& n : net.graph.nodes()) labels.push_back(n.label);
    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (const auto& e : net.graph.edges()) edges.emplace_back(e.a, e.b, e.weight);
    return py::make_tuple(labels, edges);
  });

  m.def(
      "run_pipeline",
      [](const py::dict& options) {
        const auto cfg = config_from_dict(options);
        py::gil_scoped_release release;
        return run_pipeline(cfg).warnings;
      },
      py::arg("options"),
      "Run every stage with the given config keys (\"config\" names a file to start from); returns the run warnings.");
  m.def(
      "run_stage",
      [](const std::string& stage, const py::dict& options) {
        const auto cfg = config_from_dict(options);
        const auto s = parse_stage(stage);
        py::gil_scoped_release release;
        return run_stage(cfg, s).cache_hit;
      },
      py::arg("stage"), py::arg("options"),
      "Run one stage; returns True on a cache hit.");
  m.attr("ARTIFACTS") = artifact_names();

#ifdef COWORD_VERSION
  m.attr("__version__") = COWORD_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
