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

#ifndef FACTDAG_METRICS_H_
#define FACTDAG_METRICS_H_

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factdag/fact.h"

namespace factdag {

enum class Metric { kCarbSingle = 0, kCarbMulti = 1, kGestalt = 2 };

inline constexpr std::array<Metric, 3> kAllMetrics = {
    Metric::kCarbSingle, Metric::kCarbMulti, Metric::kGestalt};

// "carb-single", "carb-multi", "gestalt".
const char *MetricName(Metric metric);
std::optional<Metric> MetricByName(std::string_view name);

struct MatchConfig {
  double gestalt_threshold = 0.85;
};

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

double F1(double precision, double recall);

// Sufficient statistics for micro-averaging: matched precision and recall
// mass over prediction and gold counts.
struct MatchCounts {
  double precision_mass = 0;
  double recall_mass = 0;
  int predicted = 0;
  int gold = 0;

  MatchCounts &operator+=(const MatchCounts &other);
  // Both empty gives P = R = 1; no predictions against gold gives P = 0.
  Prf ToPrf() const;
};

// Ratcliff/Obershelp: 2M/(|a|+|b|), M from recursive longest-common-block
// matching (earliest block in a, then in b). Empty versus empty is 1.
double GestaltSimilarity(std::string_view a, std::string_view b);

MatchCounts GestaltMatch(const std::vector<Fact> &gold,
                         const std::vector<Fact> &predicted,
                         const Sentence &sentence, const Schema &schema,
                         const MatchConfig &config = {});
Prf GestaltScore(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
                 const Sentence &sentence, const Schema &schema,
                 const MatchConfig &config = {});

struct PairScore {
  double precision = 0;
  double recall = 0;
};

// Common-word counts per role after same-role splicing. Roles present on one
// side only add to that side's denominator.
PairScore CarbPair(const Fact &gold, const Fact &predicted,
                   const Sentence &sentence, const Schema &schema);

MatchCounts CarbSingleMatch(const std::vector<Fact> &gold,
                            const std::vector<Fact> &predicted,
                            const Sentence &sentence, const Schema &schema);
MatchCounts CarbMultiMatch(const std::vector<Fact> &gold,
                           const std::vector<Fact> &predicted,
                           const Sentence &sentence, const Schema &schema);
Prf CarbSingle(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
               const Sentence &sentence, const Schema &schema);
Prf CarbMulti(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
              const Sentence &sentence, const Schema &schema);

MatchCounts MatchSentence(Metric metric, const std::vector<Fact> &gold,
                          const std::vector<Fact> &predicted,
                          const Sentence &sentence, const Schema &schema,
                          const MatchConfig &config = {});

struct PredictionRecord {
  std::string id;
  std::vector<Fact> facts;
};

struct CurvePoint {
  double cutoff = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct PrCurve {
  std::vector<CurvePoint> points;  // cutoffs in descending order
  double auc = 0;
  double optimal_f1 = 0;
};

// Trapezoid area under precision over recall. Points are sorted by recall and
// anchored at (precision of the lowest-recall point, recall 0).
double CurveArea(std::vector<CurvePoint> points);

// Sweeps the distinct prediction confidences. `predictions[s]` belongs to
// `gold[s]`. Throws Error("missing-confidence").
PrCurve ComputePrCurve(const std::vector<AnnotatedSentence> &gold,
                       const std::vector<std::vector<Fact>> &predictions,
                       Metric metric, const Schema &schema,
                       const MatchConfig &config = {});

struct MetricReport {
  Prf at_threshold;
  PrCurve curve;
};

struct EvalSummary {
  int sentences = 0;
  std::array<MetricReport, 3> metrics;  // indexed by Metric

  const MetricReport &operator[](Metric metric) const {
    return metrics[static_cast<int>(metric)];
  }
};

struct EvalReport {
  EvalSummary overall;
  std::map<std::string, EvalSummary> by_domain;
};

// Micro-averaged over the corpus. Predictions without a confidence count as
// 1 on the curve. Throws Error("alignment-error") when the id sets differ.
EvalReport Evaluate(const std::vector<AnnotatedSentence> &gold,
                    const std::vector<PredictionRecord> &predictions,
                    const Schema &schema, const MatchConfig &config = {});

// "<metric> <f1|auc|opt_f1> <value>" lines with four decimals, then the same
// per domain prefixed by "[domain]".
void WriteEvalReport(std::ostream &out, const EvalReport &report);
void WritePrCurveCsv(std::ostream &out, const PrCurve &curve);

}  // namespace factdag

#endif  // FACTDAG_METRICS_H_
