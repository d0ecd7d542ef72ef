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

#include "factdag/cli.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "factdag/clique.h"
#include "factdag/corpus.h"
#include "factdag/dag_codec.h"
#include "factdag/error.h"
#include "factdag/metrics.h"
#include "factdag/scorer.h"

namespace factdag {
namespace {

struct Options {
  std::string schema_path;
  bool no_ee = false;
  bool no_be = false;
  bool role_pair = false;
  uint64_t seed = 1;
  double delta = 0.3;
  std::string out_path;

  // gen
  int sentences = 100;
  std::string preset = "simple";
  double overlap = 0, nesting = 0, discontinuity = 0, virtual_rate = 0;
  int vocab = 5000;

  std::string input;
  std::string second_input;
  std::string dev_path;
  std::string model_path;
  std::string history_path;
  std::string curve_path;
  std::string curve_metric = "gestalt";
  std::string name = "corpus";
  double tau = 0.85;
  bool tune = false;
  int repeats = 3;
  TrainConfig train;
};

class Output {
 public:
  Output(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw IoError("cannot open '" + path + "' for writing");
      stream_ = file_.get();
    }
  }
  ~Output() = default;

  std::ostream &stream() { return *stream_; }
  void Finish(const std::string &path) {
    stream_->flush();
    if (!*stream_) throw IoError("failed writing '" + path + "'");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream *stream_;
};

Schema LoadSchema(const Options &options) {
  return options.schema_path.empty() ? Schema::Default()
                                     : ReadSchemaFile(options.schema_path);
}

CodecVariant Variant(const Options &options) {
  return {!options.no_ee, !options.no_be, options.role_pair};
}

void RunGen(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  GenConfig config;
  if (options.preset == "saoke-like") {
    config = GenConfig::SaokeLike(options.sentences, options.seed);
  } else if (options.preset == "simple") {
    config.sentences = options.sentences;
    config.seed = options.seed;
    config.overlap_rate = options.overlap;
    config.nesting_rate = options.nesting;
    config.discontinuity_rate = options.discontinuity;
    config.virtual_rate = options.virtual_rate;
  } else {
    throw Error("invalid-config", "unknown preset '" + options.preset + "'");
  }
  config.vocab_size = options.vocab;
  auto records = GenerateSynthetic(config, schema);
  Output output(options.out_path, out);
  WriteCorpus(output.stream(), records);
  output.Finish(options.out_path);
}

void RunStats(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  auto records = ReadCorpusFile(options.input, &schema);
  EdgeStats edges = ComputeEdgeStats(records, MakeEdgeTypeSpace(schema, Variant(options)));
  Output output(options.out_path, out);
  std::ostream &o = output.stream();
  WriteCorpusStats(o, ComputeCorpusStats(records));
  o << std::fixed << std::setprecision(4);
  o << "edges_per_fact " << edges.mean_edges_per_fact << '\n';
  o << "edge_types_used " << edges.distinct_types_used << '\n';
  o << "edge_density " << edges.density << '\n';
  output.Finish(options.out_path);
}

void RunEncode(const Options &options, std::ostream &out, std::ostream &err) {
  Schema schema = LoadSchema(options);
  EdgeTypeSpace space = MakeEdgeTypeSpace(schema, Variant(options));
  auto records = ReadCorpusFile(options.input, &schema);
  std::vector<SentenceEdges> items;
  EncodeReport report;
  for (const CorpusRecord &record : records) {
    EncodeResult result = Encode(record, space);
    for (const auto &[fact, reason] : result.report.reasons) {
      err << "uncoverable: " << record.sentence.id << " fact " << fact << " ("
          << reason << ")\n";
    }
    report.Merge(result.report);
    items.push_back({record.sentence.id, std::move(result.matrix)});
  }
  Output output(options.out_path, out);
  WriteEdgeFile(output.stream(), items, space);
  output.Finish(options.out_path);
  err << "encoded " << report.facts_encoded << " of " << report.facts_total
      << " facts\n";
}

void RunDecode(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  EdgeTypeSpace space = MakeEdgeTypeSpace(schema, Variant(options));
  std::ifstream in(options.input);
  if (!in) throw IoError("cannot open '" + options.input + "' for reading");
  std::vector<PredictionRecord> predictions;
  for (const SentenceEdges &item : ReadEdgeFile(in, space)) {
    Sentence sentence{item.id, std::vector<std::string>(item.matrix.size(), "_")};
    predictions.push_back({item.id, Decode(item.matrix, sentence, space)});
  }
  Output output(options.out_path, out);
  WritePredictions(output.stream(), predictions);
  output.Finish(options.out_path);
}

void RunRoundtrip(const Options &options, std::ostream &out, std::ostream &err) {
  Schema schema = LoadSchema(options);
  EdgeTypeSpace space = MakeEdgeTypeSpace(schema, Variant(options));
  auto records = ReadCorpusFile(options.input, &schema);
  RoundtripReport report = RoundtripCheck(records, space);
  Output output(options.out_path, out);
  std::ostream &o = output.stream();
  o << std::fixed << std::setprecision(4);
  o << "variant " << space.variant().Name() << '\n';
  o << "facts " << report.gold_facts << '\n';
  o << "encodable " << report.encodable_facts << '\n';
  o << "uncoverable " << report.uncoverable_facts << '\n';
  o << "recovered " << report.recovered_facts << '\n';
  o << "spurious " << report.spurious_facts << '\n';
  o << "coverage " << report.coverage() << '\n';
  o << "recall " << report.recall() << '\n';
  output.Finish(options.out_path);
  constexpr size_t kShown = 20;
  for (size_t k = 0; k < std::min(kShown, report.mismatches.size()); ++k) {
    const RoundtripMismatch &m = report.mismatches[k];
    err << m.kind << ": " << m.id << ": " << m.fact << '\n';
  }
  if (report.mismatches.size() > kShown) {
    err << "... " << report.mismatches.size() - kShown << " more mismatches\n";
  }
}

void RunTrain(const Options &options, std::ostream &out, std::ostream &err) {
  Schema schema = LoadSchema(options);
  EdgeTypeSpace space = MakeEdgeTypeSpace(schema, Variant(options));
  auto train = ReadCorpusFile(options.input, &schema);
  std::vector<CorpusRecord> dev;
  if (!options.dev_path.empty()) dev = ReadCorpusFile(options.dev_path, &schema);
  TrainConfig config = options.train;
  config.seed = options.seed;
  config.delta = options.delta;
  TrainResult result = Train(train, dev, space, config);
  double delta = options.delta;
  if (options.tune) delta = TuneThreshold(result.params, dev.empty() ? train : dev, space);
  {
    Output checkpoint(options.model_path, out);
    SaveParams(checkpoint.stream(), result.params);
    checkpoint.Finish(options.model_path);
  }
  Output history(options.history_path.empty() ? options.out_path
                                              : options.history_path,
                 out);
  WriteHistoryCsv(history.stream(), result.history);
  history.Finish(options.history_path);
  err << std::fixed << std::setprecision(4) << "best epoch " << result.best_epoch
      << ", dev gestalt f1 " << result.history[result.best_epoch - 1].dev_f1
      << ", delta " << delta << '\n';
}

void RunPredict(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  EdgeTypeSpace space = MakeEdgeTypeSpace(schema, Variant(options));
  std::ifstream in(options.model_path);
  if (!in) throw IoError("cannot open '" + options.model_path + "' for reading");
  ScorerParams params = LoadParams(in, space);
  auto records = ReadCorpusFile(options.input, &schema);
  std::vector<PredictionRecord> predictions;
  for (const CorpusRecord &record : records) {
    predictions.push_back({record.sentence.id,
                           PredictFacts(params, record.sentence, space, options.delta)});
  }
  Output output(options.out_path, out);
  WritePredictions(output.stream(), predictions);
  output.Finish(options.out_path);
}

void RunEval(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  auto gold = ReadCorpusFile(options.input, &schema);
  auto predictions = ReadPredictionsFile(options.second_input);
  auto metric = MetricByName(options.curve_metric);
  if (!metric) {
    throw Error("invalid-config", "unknown metric '" + options.curve_metric + "'");
  }
  MatchConfig config;
  config.gestalt_threshold = options.tau;
  EvalReport report = Evaluate(gold, predictions, schema, config);
  Output output(options.out_path, out);
  WriteEvalReport(output.stream(), report);
  output.Finish(options.out_path);
  if (!options.curve_path.empty()) {
    Output curve(options.curve_path, out);
    WritePrCurveCsv(curve.stream(), report.overall[*metric].curve);
    curve.Finish(options.curve_path);
  }
}

void RunBench(const Options &options, std::ostream &out) {
  Schema schema = LoadSchema(options);
  std::vector<CorpusRecord> records;
  if (options.input.empty()) {
    records = GenerateSynthetic(GenConfig::SaokeLike(options.sentences, options.seed),
                                schema);
  } else {
    records = ReadCorpusFile(options.input, &schema);
  }
  RepresentationComparison comparison =
      CompareRepresentations(records, schema, options.repeats);
  Output output(options.out_path, out);
  WriteBenchmarkCsvHeader(output.stream());
  WriteBenchmarkCsv(output.stream(), options.name, comparison);
  output.Finish(options.out_path);
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  Options o;
  CLI::App app{"factdag: DAG expression of open facts"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--schema", o.schema_path, "Schema JSON file");
  app.add_flag("--no-ee", o.no_ee, "Drop the EE inter-span edges");
  app.add_flag("--no-be", o.no_be, "Replace BE-X with first-span ROOT-X labels");
  app.add_flag("--role-pair", o.role_pair, "Label EB edges with both span roles");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--delta", o.delta, "Edge probability threshold")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--out", o.out_path, "Output path (default stdout)");

  auto *gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  gen->add_option("--sentences", o.sentences)->check(CLI::NonNegativeNumber);
  gen->add_option("--preset", o.preset, "simple or saoke-like");
  gen->add_option("--overlap", o.overlap)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--nesting", o.nesting)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--discontinuity", o.discontinuity)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--virtual", o.virtual_rate)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--vocab", o.vocab)->check(CLI::PositiveNumber);

  auto *stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("corpus", o.input)->required();

  auto *encode = app.add_subcommand("encode", "Corpus to edge file");
  encode->add_option("corpus", o.input)->required();

  auto *decode = app.add_subcommand("decode", "Edge file to predictions");
  decode->add_option("edges", o.input)->required();

  auto *roundtrip = app.add_subcommand("roundtrip", "Encode, decode and compare");
  roundtrip->add_option("corpus", o.input)->required();

  auto *train = app.add_subcommand("train", "Train the edge scorer");
  train->add_option("corpus", o.input)->required();
  train->add_option("--dev", o.dev_path, "Dev corpus for model selection");
  train->add_option("--model", o.model_path, "Checkpoint output path")->required();
  train->add_option("--history", o.history_path, "History CSV path");
  train->add_option("--epochs", o.train.epochs)->check(CLI::PositiveNumber);
  train->add_option("--lr", o.train.learning_rate)->check(CLI::PositiveNumber);
  train->add_option("--momentum", o.train.momentum)->check(CLI::Range(0.0, 1.0));
  train->add_option("--clip", o.train.clip_norm)->check(CLI::NonNegativeNumber);
  train->add_option("--dim", o.train.dim)->check(CLI::PositiveNumber);
  train->add_option("--window", o.train.window)->check(CLI::NonNegativeNumber);
  train->add_option("--batch", o.train.batch_size)->check(CLI::PositiveNumber);
  train->add_option("--max-length", o.train.max_sequence_length)
      ->check(CLI::PositiveNumber);
  train->add_flag("--tune", o.tune, "Tune delta on the dev grid");

  auto *predict = app.add_subcommand("predict", "Predict facts with confidences");
  predict->add_option("corpus", o.input)->required();
  predict->add_option("--model", o.model_path)->required();

  auto *eval = app.add_subcommand("eval", "Score predictions against gold");
  eval->add_option("gold", o.input)->required();
  eval->add_option("predictions", o.second_input)->required();
  eval->add_option("--curve", o.curve_path, "P-R curve CSV path");
  eval->add_option("--curve-metric", o.curve_metric);
  eval->add_option("--tau", o.tau, "Gestalt match threshold")
      ->check(CLI::Range(0.0, 1.0));

  auto *bench = app.add_subcommand("bench", "DAG versus clique comparison");
  bench->add_option("corpus", o.input, "Corpus (default: generated preset)");
  bench->add_option("--sentences", o.sentences)->check(CLI::PositiveNumber);
  bench->add_option("--name", o.name, "Corpus label in the CSV");
  bench->add_option("--repeats", o.repeats)->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*gen) RunGen(o, out);
    else if (*stats) RunStats(o, out);
    else if (*encode) RunEncode(o, out, err);
    else if (*decode) RunDecode(o, out);
    else if (*roundtrip) RunRoundtrip(o, out, err);
    else if (*train) RunTrain(o, out, err);
    else if (*predict) RunPredict(o, out);
    else if (*eval) RunEval(o, out);
    else if (*bench) RunBench(o, out);
  } catch (const IoError &e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace factdag
