// Copyright 2026 The factdag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "factdag/clique.h"
#include "factdag/corpus.h"
#include "factdag/dag_codec.h"
#include "factdag/error.h"
#include "factdag/metrics.h"
#include "factdag/scorer.h"

namespace py = pybind11;

namespace factdag {
namespace {

py::dict PrfDict(const Prf &prf) {
  py::dict d;
  d["precision"] = prf.precision;
  d["recall"] = prf.recall;
  d["f1"] = prf.f1;
  return d;
}

py::dict SummaryDict(const EvalSummary &summary) {
  py::dict d;
  d["sentences"] = summary.sentences;
  for (Metric metric : kAllMetrics) {
    const MetricReport &report = summary[metric];
    py::dict m = PrfDict(report.at_threshold);
    m["auc"] = report.curve.auc;
    m["optimal_f1"] = report.curve.optimal_f1;
    d[MetricName(metric)] = m;
  }
  return d;
}

std::string Repr(const Fact &fact) {
  std::ostringstream out;
  out << "Fact(" << FactKey(fact, Schema::Default()) << ")";
  return out.str();
}

}  // namespace
}  // namespace factdag

PYBIND11_MODULE(_core, m) {
  using namespace factdag;
  m.doc() = "Fact extraction as DAG edge prediction: codec, baseline, scorer and metrics.";

  // Library errors surface as factdag.Error (a ValueError) carrying `.code`;
  // I/O failures surface as OSError.
  static py::handle error_type =
      py::exception<Error>(m, "Error", PyExc_ValueError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const IoError &e) {
      PyErr_SetString(PyExc_OSError, e.what());
    } catch (const Error &e) {
      py::object instance = error_type(e.what());
      instance.attr("code") = e.code();
      PyErr_SetObject(error_type.ptr(), instance.ptr());
    }
  });

  py::class_<Schema>(m, "Schema")
      .def(py::init<std::vector<std::string>, std::vector<std::string>>(), py::arg("roles"),
           py::arg("virtual_predicates") = std::vector<std::string>{})
      .def_static("default", &Schema::Default)
      .def_readwrite("roles", &Schema::roles)
      .def_readwrite("virtual_predicates", &Schema::virtual_predicates)
      .def("check", &Schema::Check);

  py::class_<Span>(m, "Span")
      .def(py::init<int, int>(), py::arg("begin"), py::arg("end"))
      .def_readwrite("begin", &Span::begin)
      .def_readwrite("end", &Span::end)
      .def("__eq__", [](const Span &a, const Span &b) { return a == b; })
      .def("__repr__", [](const Span &s) {
        return "Span(" + std::to_string(s.begin) + ", " + std::to_string(s.end) + ")";
      });

  py::class_<Element>(m, "Element")
      .def(py::init([](std::string role, std::vector<std::pair<int, int>> spans,
                       std::optional<std::string> virtual_predicate) {
             Element e{std::move(role), {}, std::move(virtual_predicate)};
             for (auto [b, end] : spans) e.spans.push_back({b, end});
             return e;
           }),
           py::arg("role"), py::arg("spans") = std::vector<std::pair<int, int>>{},
           py::arg("virtual") = std::nullopt)
      .def_readwrite("role", &Element::role)
      .def_readwrite("spans", &Element::spans)
      .def_readwrite("virtual", &Element::virtual_predicate);

  py::class_<Fact>(m, "Fact")
      .def(py::init<std::vector<Element>, std::optional<double>>(), py::arg("elements"),
           py::arg("confidence") = std::nullopt)
      .def_readwrite("elements", &Fact::elements)
      .def_readwrite("confidence", &Fact::confidence)
      .def("key", [](const Fact &f, const Schema &s) { return FactKey(f, s); },
           py::arg("schema") = Schema::Default())
      .def("__repr__", &Repr);

  py::class_<Sentence>(m, "Sentence")
      .def(py::init<std::string, std::vector<std::string>>(), py::arg("id"),
           py::arg("tokens"))
      .def_readwrite("id", &Sentence::id)
      .def_readwrite("tokens", &Sentence::tokens);

  py::class_<AnnotatedSentence>(m, "AnnotatedSentence")
      .def(py::init<Sentence, std::optional<std::string>, std::vector<Fact>>(),
           py::arg("sentence"), py::arg("domain") = std::nullopt,
           py::arg("facts") = std::vector<Fact>{})
      .def_readwrite("sentence", &AnnotatedSentence::sentence)
      .def_readwrite("domain", &AnnotatedSentence::domain)
      .def_readwrite("facts", &AnnotatedSentence::facts);

  py::class_<CodecVariant>(m, "CodecVariant")
      .def(py::init<bool, bool, bool>(), py::arg("use_ee") = true, py::arg("use_be") = true,
           py::arg("role_pair_labels") = false)
      .def_readwrite("use_ee", &CodecVariant::use_ee)
      .def_readwrite("use_be", &CodecVariant::use_be)
      .def_readwrite("role_pair_labels", &CodecVariant::role_pair_labels)
      .def("name", &CodecVariant::Name);

  py::class_<EdgeTypeSpace>(m, "EdgeTypeSpace")
      .def(py::init([](const Schema &s, const CodecVariant &v) { return MakeEdgeTypeSpace(s, v); }),
           py::arg("schema") = Schema::Default(), py::arg("variant") = CodecVariant{})
      .def("__len__", &EdgeTypeSpace::size)
      .def("name", &EdgeTypeSpace::name)
      .def("names", [](const EdgeTypeSpace &space) {
        std::vector<std::string> names;
        for (int k = 0; k < space.size(); ++k) names.push_back(space.name(k));
        return names;
      });

  py::class_<EdgeMatrix>(m, "EdgeMatrix")
      .def(py::init<int, int>(), py::arg("n"), py::arg("channels"))
      .def("add", &EdgeMatrix::Add, py::arg("i"), py::arg("j"), py::arg("channel"),
           py::arg("probability") = 1.0)
      .def("has", &EdgeMatrix::Has)
      .def("__len__", &EdgeMatrix::edge_count)
      .def("edges", [](const EdgeMatrix &matrix) {
        std::vector<std::tuple<int, int, int, double>> out;
        for (const Edge &e : matrix.Edges()) out.emplace_back(e.i, e.j, e.channel, e.probability);
        return out;
      })
      .def_property("has_probabilities", &EdgeMatrix::has_probabilities,
                    &EdgeMatrix::set_has_probabilities);

  m.def("validate_fact",
        [](const Fact &fact, const Sentence &sentence, const Schema &schema) {
          std::vector<std::string> codes;
          for (const Violation &v : ValidateFact(fact, sentence, schema)) codes.push_back(v.code);
          return codes;
        },
        py::arg("fact"), py::arg("sentence"), py::arg("schema") = Schema::Default());
  m.def("fact_to_string", &FactToString, py::arg("fact"), py::arg("sentence"),
        py::arg("schema") = Schema::Default());
  m.def("classify_sentence", [](const AnnotatedSentence &annotated) {
    const ComplicationFlags flags = ClassifySentence(annotated);
    py::dict d;
    d["overlapping"] = flags.overlapping;
    d["discontinuous"] = flags.discontinuous;
    d["nested"] = flags.nested;
    return d;
  });

  m.def("encode",
        [](const AnnotatedSentence &annotated, const EdgeTypeSpace &space) {
          EncodeResult result = Encode(annotated, space);
          return py::make_tuple(result.matrix, result.report.facts_uncoverable);
        },
        py::arg("annotated"), py::arg("space"),
        "Edge matrix and the number of facts that could not be encoded.");
  m.def("decode",
        [](const EdgeMatrix &matrix, const Sentence &sentence, const EdgeTypeSpace &space) {
          return Decode(matrix, sentence, space);
        },
        py::arg("matrix"), py::arg("sentence"), py::arg("space"));
  m.def("roundtrip_check",
        [](const std::vector<AnnotatedSentence> &corpus, const EdgeTypeSpace &space) {
          const RoundtripReport report = RoundtripCheck(corpus, space);
          py::dict d;
          d["gold"] = report.gold_facts;
          d["encodable"] = report.encodable_facts;
          d["uncoverable"] = report.uncoverable_facts;
          d["recovered"] = report.recovered_facts;
          d["spurious"] = report.spurious_facts;
          d["coverage"] = report.coverage();
          d["recall"] = report.recall();
          return d;
        },
        py::arg("corpus"), py::arg("space"));

  m.def("clique_edge_type_count",
        [](const Schema &schema) { return CliqueEdgeTypeSpace(schema).size(); },
        py::arg("schema") = Schema::Default());
  m.def("clique_roundtrip",
        [](const AnnotatedSentence &annotated, const Schema &schema) {
          const CliqueEdgeTypeSpace space(schema);
          return CliqueDecode(CliqueEncode(annotated, space), annotated.sentence, space).facts;
        },
        py::arg("annotated"), py::arg("schema") = Schema::Default());
  m.def("bron_kerbosch", &BronKerbosch, py::arg("adjacency"));
  m.def("compare_representations",
        [](const std::vector<AnnotatedSentence> &corpus, const Schema &schema, int repeats) {
          const RepresentationComparison c = CompareRepresentations(corpus, schema, repeats);
          py::dict d;
          d["facts"] = c.facts;
          d["dag_edges_per_fact"] = c.dag_edges_per_fact;
          d["clique_edges_per_fact"] = c.clique_edges_per_fact;
          d["dag_types"] = c.dag_types;
          d["clique_types"] = c.clique_types;
          d["dag_decode_ms"] = c.dag_decode_ms;
          d["clique_decode_ms"] = c.clique_decode_ms;
          return d;
        },
        py::arg("corpus"), py::arg("schema") = Schema::Default(), py::arg("repeats") = 3);

  m.def("gestalt_similarity", &GestaltSimilarity, py::arg("a"), py::arg("b"));
  m.def("gestalt_score",
        [](const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
           const Sentence &sentence, double tau) {
          return PrfDict(GestaltScore(gold, predicted, sentence, Schema::Default(), {tau}));
        },
        py::arg("gold"), py::arg("predicted"), py::arg("sentence"), py::arg("tau") = 0.85);
  m.def("carb_single",
        [](const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
           const Sentence &sentence) {
          return PrfDict(CarbSingle(gold, predicted, sentence, Schema::Default()));
        },
        py::arg("gold"), py::arg("predicted"), py::arg("sentence"));
  m.def("carb_multi",
        [](const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
           const Sentence &sentence) {
          return PrfDict(CarbMulti(gold, predicted, sentence, Schema::Default()));
        },
        py::arg("gold"), py::arg("predicted"), py::arg("sentence"));
  m.def("evaluate",
        [](const std::vector<AnnotatedSentence> &gold,
           const std::vector<std::pair<std::string, std::vector<Fact>>> &predictions,
           double tau) {
          std::vector<PredictionRecord> records;
          for (const auto &[id, facts] : predictions) records.push_back({id, facts});
          return SummaryDict(Evaluate(gold, records, Schema::Default(), {tau}).overall);
        },
        py::arg("gold"), py::arg("predictions"), py::arg("tau") = 0.85,
        "Predictions are (sentence id, facts) pairs.");

  m.def("generate_synthetic",
        [](int sentences, double overlap, double nesting, double discontinuity,
           double virtual_rate, uint64_t seed, bool saoke_like) {
          GenConfig config = saoke_like ? GenConfig::SaokeLike(sentences, seed) : GenConfig{};
          if (!saoke_like) {
            config.sentences = sentences;
            config.overlap_rate = overlap;
            config.nesting_rate = nesting;
            config.discontinuity_rate = discontinuity;
            config.virtual_rate = virtual_rate;
            config.seed = seed;
          }
          return GenerateSynthetic(config, Schema::Default());
        },
        py::arg("sentences") = 100, py::arg("overlap") = 0.0, py::arg("nesting") = 0.0,
        py::arg("discontinuity") = 0.0, py::arg("virtual") = 0.0, py::arg("seed") = 1,
        py::arg("saoke_like") = false);
  m.def("corpus_stats", [](const std::vector<AnnotatedSentence> &corpus) {
    const CorpusStats stats = ComputeCorpusStats(corpus);
    py::dict d;
    d["sentences"] = stats.sentences;
    d["facts"] = stats.facts;
    d["overlapping"] = stats.overlapping;
    d["discontinuous"] = stats.discontinuous;
    d["nested"] = stats.nested;
    d["complicated"] = stats.complicated;
    d["fact_count_bins"] = stats.fact_count_bins;
    d["domains"] = stats.domains;
    return d;
  });
  m.def("read_corpus", [](const std::string &path) { return ReadCorpusFile(path); });
  m.def("write_corpus", &WriteCorpusFile, py::arg("path"), py::arg("corpus"));

  py::class_<ScorerParams>(m, "ScorerParams")
      .def("save", [](const ScorerParams &p) {
        std::ostringstream out;
        SaveParams(out, p);
        return out.str();
      })
      .def_static("load", [](const std::string &text, const EdgeTypeSpace &space) {
        std::istringstream in(text);
        return LoadParams(in, space);
      });

  m.def("train",
        [](const std::vector<AnnotatedSentence> &corpus, const EdgeTypeSpace &space, int epochs,
           int dim, double learning_rate, uint64_t seed) {
          TrainConfig config;
          config.epochs = epochs;
          config.dim = dim;
          config.learning_rate = learning_rate;
          config.seed = seed;
          TrainResult result = Train(corpus, {}, space, config);
          std::vector<std::tuple<int, double, double>> history;
          for (const EpochRecord &r : result.history) history.emplace_back(r.epoch, r.loss, r.dev_f1);
          return py::make_tuple(result.params, history);
        },
        py::arg("corpus"), py::arg("space"), py::arg("epochs") = 30, py::arg("dim") = 32,
        py::arg("learning_rate") = 1e-2, py::arg("seed") = 1,
        "Trained parameters and the (epoch, loss, train F1) history.");
  m.def("predict_facts", &PredictFacts, py::arg("params"), py::arg("sentence"), py::arg("space"),
        py::arg("delta") = 0.3);
}
