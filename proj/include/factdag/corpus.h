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

#ifndef FACTDAG_CORPUS_H_
#define FACTDAG_CORPUS_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "factdag/fact.h"
#include "factdag/metrics.h"

namespace factdag {

// JSON Lines, one record per line:
// {"id", "domain", "tokens", "facts": [{"elements": [{"role", "spans",
// "virtual"}]}]}. Blank lines are skipped. Malformed JSON raises
// Error("parse-error") with line number and byte offset; a bad span raises
// Error("invalid-record") naming the record. With a schema every fact is also
// validated against it.
std::vector<CorpusRecord> ParseCorpus(std::istream &in,
                                      const Schema *schema = nullptr);
void WriteCorpus(std::ostream &out, const std::vector<CorpusRecord> &records);

// File variants; unreadable or unwritable paths raise IoError.
std::vector<CorpusRecord> ReadCorpusFile(const std::string &path,
                                         const Schema *schema = nullptr);
void WriteCorpusFile(const std::string &path,
                     const std::vector<CorpusRecord> &records);

// {"id", "facts": [{"confidence", "elements": [...]}]} per line.
std::vector<PredictionRecord> ParsePredictions(std::istream &in);
void WritePredictions(std::ostream &out,
                      const std::vector<PredictionRecord> &records);
std::vector<PredictionRecord> ReadPredictionsFile(const std::string &path);
void WritePredictionsFile(const std::string &path,
                          const std::vector<PredictionRecord> &records);

// {"roles": [...], "virtual_predicates": [...]}; checked before return.
Schema ParseSchema(std::istream &in);
Schema ReadSchemaFile(const std::string &path);

struct GenConfig {
  int sentences = 100;
  int vocab_size = 5000;
  // Concrete spans per fact (solo facts) or target size (clustered facts),
  // as value -> weight.
  std::map<int, double> span_counts = {{2, 0.2}, {3, 0.4}, {4, 0.3}, {5, 0.1}};
  // Inclusive fact-count ranges per sentence with weights; a count is drawn
  // uniformly inside the chosen range.
  std::vector<std::pair<std::pair<int, int>, double>> fact_counts = {
      {{1, 3}, 1.0}};
  double overlap_rate = 0;
  double nesting_rate = 0;
  double discontinuity_rate = 0;
  double virtual_rate = 0;  // per standalone fact
  std::vector<std::pair<std::string, double>> domains;  // empty: no domain tag
  int max_tokens = 200;
  uint64_t seed = 1;

  // Proportions of the multi-domain benchmark statistics: overlap 0.833,
  // discontinuity 0.831, nesting 0.629, fact-count bins, six domains.
  static GenConfig SaokeLike(int sentences, uint64_t seed);
};

// Deterministic for a seed. Every sentence realizes exactly its drawn
// overlap/nesting/discontinuity flags. Raises Error("invalid-config") for
// out-of-range settings and Error("infeasible-config") when a sentence cannot
// be built within max_tokens.
std::vector<CorpusRecord> GenerateSynthetic(const GenConfig &config,
                                            const Schema &schema);

inline constexpr std::array<std::pair<int, int>, 5> kFactCountBins = {
    {{0, 3}, {4, 6}, {7, 9}, {10, 12}, {13, -1}}};  // -1: unbounded

struct CorpusStats {
  int sentences = 0;
  int facts = 0;
  std::map<std::string, int> domains;
  int overlapping = 0;
  int discontinuous = 0;
  int nested = 0;
  int complicated = 0;
  std::array<int, 5> fact_count_bins{};

  // Share of sentences in percent; 0 for an empty corpus.
  double Percent(int count) const;
};

CorpusStats ComputeCorpusStats(const std::vector<CorpusRecord> &records);
int FactCountBin(int facts);

void WriteCorpusStats(std::ostream &out, const CorpusStats &stats);

}  // namespace factdag

#endif  // FACTDAG_CORPUS_H_
