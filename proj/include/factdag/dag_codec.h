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

#ifndef FACTDAG_DAG_CODEC_H_
#define FACTDAG_DAG_CODEC_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "factdag/edge_matrix.h"
#include "factdag/fact.h"

namespace factdag {

// Edge-type space for a schema and variant:
//   full            2r + 2 + v
//   no-ee           2r + 1 + v
//   no-be           2r + 2 + v   (ROOT-X replaces BE-X)
//   role-pair       r^2 + r + 2 + v
EdgeTypeSpace MakeEdgeTypeSpace(const Schema &schema,
                                const CodecVariant &variant = {});

struct EncodeReport {
  int facts_total = 0;
  int facts_encoded = 0;
  int facts_uncoverable = 0;
  // (fact index within the sentence, reason code)
  std::vector<std::pair<int, std::string>> reasons;

  void Merge(const EncodeReport &other);
};

struct EncodeResult {
  EdgeMatrix matrix;
  EncodeReport report;
};

// Labelled edges of a single fact before any cross-fact union, or nullopt
// with a reason code when the fact cannot be represented: "backward-edge"
// when consecutive spans are not strictly left to right,
// "virtual-without-object" when a virtual predicate has no object span to
// carry it, "duplicate-span", "empty-fact".
std::optional<std::vector<Edge>> FactEdges(const Fact &fact,
                                           const EdgeTypeSpace &space,
                                           std::string *reason = nullptr);

// Union of FactEdges over all facts of a sentence. Uncoverable facts are
// skipped and listed in the report. Throws Error("unknown-role").
EncodeResult Encode(const AnnotatedSentence &annotated,
                    const EdgeTypeSpace &space);

enum class ConfidenceAggregation { kMin, kMean };

struct DecodeOptions {
  ConfidenceAggregation aggregation = ConfidenceAggregation::kMin;
  // Upper bound on search steps per sentence; protects against dense noisy
  // predictions. Gold matrices stay far below it.
  long max_steps = 2'000'000;
};

// Recovers facts from an edge matrix. Every BE-X edge delimits candidate
// facts whose spans are chained by I, EB-Y and EE edges; with BE ablated,
// every maximal path from a ROOT-X span is a fact. Same-role spans are
// spliced. Paths that do not form a fact (no subject or no predicate, when
// the schema defines those roles) are dropped. When the matrix carries
// probabilities each fact gets the min (or mean) of its edge probabilities.
std::vector<Fact> Decode(const EdgeMatrix &matrix, const Sentence &sentence,
                         const EdgeTypeSpace &space,
                         const DecodeOptions &options = {});

struct RoundtripMismatch {
  std::string id;
  std::string kind;  // "missing", "spurious" or "uncoverable"
  std::string fact;  // canonical text of the fact
};

struct RoundtripReport {
  int gold_facts = 0;
  int encodable_facts = 0;
  int uncoverable_facts = 0;
  int recovered_facts = 0;
  int spurious_facts = 0;
  std::vector<RoundtripMismatch> mismatches;

  // Exactly recovered facts over all facts in play (encodable gold facts plus
  // spurious decodes). 1 when nothing is in play.
  double coverage() const;
  // Recovered over encodable gold facts.
  double recall() const;
};

// decode(encode(x)) against the encodable facts of x, compared as sets of
// structural fact keys.
RoundtripReport RoundtripCheck(const std::vector<AnnotatedSentence> &corpus,
                               const EdgeTypeSpace &space);

struct EdgeStats {
  int facts = 0;                  // encodable facts
  double mean_edges_per_fact = 0;
  std::map<int, int> edges_per_fact_histogram;
  int distinct_types_used = 0;
  std::vector<long> type_counts;  // per channel, before union
  double density = 0;             // union edges / labelled cells
};

EdgeStats ComputeEdgeStats(const std::vector<AnnotatedSentence> &corpus,
                           const EdgeTypeSpace &space);

}  // namespace factdag

#endif  // FACTDAG_DAG_CODEC_H_
