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

#include <algorithm>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "factdag/error.h"
#include "factdag/metrics.h"
#include "gtest/gtest.h"
#include "oracles.h"
#include "test_util.h"

namespace factdag {
namespace {

using testing::AllStrings;
using testing::BruteGestalt;
using testing::E;
using testing::F;
using testing::V;

Sentence SevenWords() {
  return {"s", {"Biden", "ended", "the", "leadership", "of", "America", "today"}};
}

Fact RandomFact(std::mt19937 *rng, int n) {
  std::uniform_int_distribution<int> pos(0, n - 1);
  auto span = [&]() {
    int a = pos(*rng), b = pos(*rng);
    return Span{std::min(a, b), std::max(a, b)};
  };
  return F({E("subject", {span()}), E("predicate", {span()}), E("object", {span()})});
}

// Best one-to-one assignment by total pair F1 over all partial injections.
void BestAssignment(const std::vector<std::vector<PairScore>> &table, size_t g,
                    std::vector<char> *used, double f1_sum, double recall_sum,
                    double *best_f1, double *best_recall) {
  if (g == table.size()) {
    if (f1_sum > *best_f1 + 1e-12) {
      *best_f1 = f1_sum;
      *best_recall = recall_sum;
    }
    return;
  }
  BestAssignment(table, g + 1, used, f1_sum, recall_sum, best_f1, best_recall);
  for (size_t p = 0; p < table[g].size(); ++p) {
    if ((*used)[p]) continue;
    (*used)[p] = 1;
    BestAssignment(table, g + 1, used,
                   f1_sum + F1(table[g][p].precision, table[g][p].recall),
                   recall_sum + table[g][p].recall, best_f1, best_recall);
    (*used)[p] = 0;
  }
}

TEST(GestaltSimilarityTest, ExamplesTest) {
  EXPECT_EQ(1.0, GestaltSimilarity("leadership", "leadership"));
  EXPECT_EQ(0.0, GestaltSimilarity("abc", "xyz"));
  EXPECT_EQ(0.75, GestaltSimilarity("abcd", "bcde"));
  EXPECT_EQ(1.0, GestaltSimilarity("", ""));
  EXPECT_EQ(0.0, GestaltSimilarity("", "a"));
}

TEST(GestaltSimilarityTest, MatchesBruteForceTest) {
  const std::vector<std::string> strings = AllStrings(4, "abc");
  ASSERT_EQ(121, strings.size());
  for (const std::string &a : strings) {
    for (const std::string &b : strings) {
      ASSERT_EQ(BruteGestalt(a, b), GestaltSimilarity(a, b)) << a << " / " << b;
    }
  }
}

TEST(GestaltSimilarityTest, SymmetricOnRandomStringsTest) {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> length(0, 30), letter(0, 3);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string a(length(rng), 'a'), b(length(rng), 'a');
    for (char &c : a) c = static_cast<char>('a' + letter(rng));
    for (char &c : b) c = static_cast<char>('a' + letter(rng));
    EXPECT_EQ(BruteGestalt(a, b), GestaltSimilarity(a, b));
    const double s = GestaltSimilarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
  }
}

TEST(GestaltScoreTest, ExamplesTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const Fact gold = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                       E("object", {{2, 5}})});
  const Prf exact = GestaltScore({gold}, {gold}, sentence, schema);
  EXPECT_EQ(1.0, exact.precision);
  EXPECT_EQ(1.0, exact.recall);
  EXPECT_EQ(1.0, exact.f1);

  const Prf empty = GestaltScore({gold}, {}, sentence, schema);
  EXPECT_EQ(0.0, empty.precision);
  EXPECT_EQ(0.0, empty.recall);

  const Fact junk = F({E("subject", {{6, 6}}), E("predicate", {{4, 4}})});
  const Prf half = GestaltScore({gold}, {gold, junk}, sentence, schema);
  EXPECT_EQ(0.5, half.precision);
  EXPECT_EQ(1.0, half.recall);

  const Prf nothing = GestaltScore({}, {}, sentence, schema);
  EXPECT_EQ(1.0, nothing.precision);
  EXPECT_EQ(1.0, nothing.recall);
}

TEST(GestaltScoreTest, ThresholdTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const Fact gold = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                       E("object", {{2, 6}})});
  const Fact near = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                       E("object", {{2, 5}})});
  const double similarity = GestaltSimilarity(FactToString(gold, sentence, schema),
                                              FactToString(near, sentence, schema));
  MatchConfig loose{similarity};
  MatchConfig strict{similarity + 1e-9};
  EXPECT_EQ(1.0, GestaltScore({gold}, {near}, sentence, schema, loose).f1);
  EXPECT_EQ(0.0, GestaltScore({gold}, {near}, sentence, schema, strict).f1);
}

TEST(CarbPairTest, ExamplesTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const Fact gold = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                       E("object", {{2, 3}})});
  const PairScore same = CarbPair(gold, gold, sentence, schema);
  EXPECT_EQ(1.0, same.precision);
  EXPECT_EQ(1.0, same.recall);

  const Fact longer = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                         E("object", {{2, 4}})});
  const PairScore extra = CarbPair(gold, longer, sentence, schema);
  EXPECT_DOUBLE_EQ(4.0 / 5.0, extra.precision);
  EXPECT_EQ(1.0, extra.recall);

  const Fact other = F({E("subject", {{5, 5}}), E("predicate", {{6, 6}})});
  const PairScore disjoint = CarbPair(gold, other, sentence, schema);
  EXPECT_EQ(0.0, disjoint.precision);
  EXPECT_EQ(0.0, disjoint.recall);
}

TEST(CarbPairTest, VirtualPredicateCountsAsWordTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const Fact gold = F({E("subject", {{0, 0}}), V("ISA"), E("object", {{5, 5}})});
  const Fact textual = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                          E("object", {{5, 5}})});
  EXPECT_EQ(1.0, CarbPair(gold, gold, sentence, schema).recall);
  EXPECT_DOUBLE_EQ(2.0 / 3.0, CarbPair(gold, textual, sentence, schema).recall);
}

TEST(CarbTest, IdentityTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const std::vector<Fact> gold = {
      F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{2, 3}})}),
      F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{5, 5}})})};
  for (const Prf &prf : {CarbSingle(gold, gold, sentence, schema),
                         CarbMulti(gold, gold, sentence, schema)}) {
    EXPECT_EQ(1.0, prf.precision);
    EXPECT_EQ(1.0, prf.recall);
  }
}

TEST(CarbTest, OnePredictionTwoGoldTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const std::vector<Fact> gold = {
      F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{2, 3}})}),
      F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{5, 6}})})};
  const std::vector<Fact> predicted = {
      F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{3, 5}})})};
  std::vector<std::vector<PairScore>> table;
  for (const Fact &g : gold) {
    table.push_back({CarbPair(g, predicted[0], sentence, schema)});
  }
  std::vector<char> used(predicted.size(), 0);
  double best_f1 = -1, best_recall = 0;
  BestAssignment(table, 0, &used, 0, 0, &best_f1, &best_recall);
  const Prf single = CarbSingle(gold, predicted, sentence, schema);
  EXPECT_DOUBLE_EQ(best_recall / gold.size(), single.recall);
  double multi_recall = 0;
  for (const auto &row : table) multi_recall += row[0].recall;
  const Prf multi = CarbMulti(gold, predicted, sentence, schema);
  EXPECT_DOUBLE_EQ(multi_recall / gold.size(), multi.recall);
  EXPECT_GT(multi.recall, single.recall);
  EXPECT_EQ(single.precision, multi.precision);
}

TEST(CarbTest, RandomPropertiesTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence{"s", {"a", "b", "a", "c", "b", "d", "a", "e", "c", "f"}};
  std::mt19937 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Fact> gold, predicted;
    for (int k = 0, m = 1 + trial % 4; k < m; ++k) gold.push_back(RandomFact(&rng, 10));
    for (int k = 0, m = trial % 5; k < m; ++k) predicted.push_back(RandomFact(&rng, 10));
    const Prf single = CarbSingle(gold, predicted, sentence, schema);
    const Prf multi = CarbMulti(gold, predicted, sentence, schema);
    EXPECT_GE(multi.recall + 1e-12, single.recall);
    EXPECT_DOUBLE_EQ(single.precision, multi.precision);
    std::vector<Fact> shuffled = predicted;
    std::reverse(shuffled.begin(), shuffled.end());
    const Prf reordered = CarbSingle(gold, shuffled, sentence, schema);
    EXPECT_DOUBLE_EQ(single.recall, reordered.recall);
    EXPECT_DOUBLE_EQ(single.precision, reordered.precision);
  }
}

TEST(MatchCountsTest, MicroAverageTest) {
  MatchCounts total;
  total += {1.0, 1.0, 1, 1};
  total += {0.0, 0.0, 3, 1};
  const Prf prf = total.ToPrf();
  EXPECT_DOUBLE_EQ(0.25, prf.precision);
  EXPECT_DOUBLE_EQ(0.5, prf.recall);
  EXPECT_DOUBLE_EQ(F1(0.25, 0.5), prf.f1);
  EXPECT_EQ(0.0, F1(0, 0));
}

TEST(CurveAreaTest, TwoPointExampleTest) {
  EXPECT_EQ(0.875, CurveArea({{0.9, 1.0, 0.5, 0}, {0.5, 0.5, 1.0, 0}}));
  EXPECT_EQ(0.875, CurveArea({{0.5, 0.5, 1.0, 0}, {0.9, 1.0, 0.5, 0}}));
  EXPECT_EQ(1.0, CurveArea({{0.5, 1.0, 1.0, 0}}));
  EXPECT_EQ(0.0, CurveArea({}));
}

TEST(PrCurveTest, TwoCutoffsTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence = SevenWords();
  const Fact g1 = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{2, 3}})});
  const Fact g2 = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{5, 5}})});
  auto scored = [](Fact fact, double confidence) {
    fact.confidence = confidence;
    return fact;
  };
  const std::vector<Fact> predicted = {
      scored(g1, 0.9), scored(g2, 0.5),
      scored(F({E("subject", {{6, 6}}), E("predicate", {{4, 4}})}), 0.5),
      scored(F({E("subject", {{4, 4}}), E("predicate", {{6, 6}})}), 0.5)};
  const PrCurve curve = ComputePrCurve({{sentence, std::nullopt, {g1, g2}}}, {predicted},
                                       Metric::kGestalt, schema);
  ASSERT_EQ(2, curve.points.size());
  EXPECT_EQ(0.9, curve.points[0].cutoff);
  EXPECT_EQ(1.0, curve.points[0].precision);
  EXPECT_EQ(0.5, curve.points[0].recall);
  EXPECT_EQ(0.5, curve.points[1].precision);
  EXPECT_EQ(1.0, curve.points[1].recall);
  EXPECT_EQ(0.875, curve.auc);
  EXPECT_DOUBLE_EQ(F1(1.0, 0.5), curve.optimal_f1);
}

TEST(PrCurveTest, PerfectPredictionsTest) {
  const Schema schema = Schema::Default();
  Fact g = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}})});
  Fact p = g;
  p.confidence = 0.7;
  for (Metric metric : kAllMetrics) {
    const PrCurve curve =
        ComputePrCurve({{SevenWords(), std::nullopt, {g}}}, {{p}}, metric, schema);
    ASSERT_EQ(1, curve.points.size());
    EXPECT_EQ(1.0, curve.auc);
    EXPECT_EQ(1.0, curve.optimal_f1);
  }
}

TEST(PrCurveTest, MissingConfidenceTest) {
  const Schema schema = Schema::Default();
  const Fact g = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}})});
  try {
    ComputePrCurve({{SevenWords(), std::nullopt, {g}}}, {{g}}, Metric::kGestalt, schema);
    FAIL() << "missing confidence accepted";
  } catch (const Error &e) {
    EXPECT_EQ("missing-confidence", e.code());
  }
}

TEST(PrCurveTest, RandomPropertiesTest) {
  const Schema schema = Schema::Default();
  const Sentence sentence{"s", {"a", "b", "a", "c", "b", "d", "a", "e", "c", "f"}};
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> level(1, 9);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<AnnotatedSentence> gold;
    std::vector<std::vector<Fact>> predicted;
    for (int s = 0; s < 3; ++s) {
      gold.push_back({sentence, std::nullopt, {RandomFact(&rng, 10), RandomFact(&rng, 10)}});
      std::vector<Fact> facts = {gold.back().facts[0], RandomFact(&rng, 10),
                                 RandomFact(&rng, 10)};
      for (Fact &f : facts) f.confidence = level(rng) / 10.0;
      predicted.push_back(facts);
    }
    for (Metric metric : kAllMetrics) {
      const PrCurve curve = ComputePrCurve(gold, predicted, metric, schema);
      double max_precision = 0;
      for (size_t k = 0; k < curve.points.size(); ++k) {
        max_precision = std::max(max_precision, curve.points[k].precision);
        if (k > 0) EXPECT_GT(curve.points[k - 1].cutoff, curve.points[k].cutoff);
      }
      EXPECT_LE(curve.auc, max_precision + 1e-12);
      // Duplicating the corpus leaves every point unchanged.
      std::vector<AnnotatedSentence> gold2 = gold;
      std::vector<std::vector<Fact>> predicted2 = predicted;
      gold2.insert(gold2.end(), gold.begin(), gold.end());
      predicted2.insert(predicted2.end(), predicted.begin(), predicted.end());
      const PrCurve doubled = ComputePrCurve(gold2, predicted2, metric, schema);
      EXPECT_NEAR(curve.auc, doubled.auc, 1e-12);
      EXPECT_NEAR(curve.optimal_f1, doubled.optimal_f1, 1e-12);
    }
  }
}

TEST(EvaluateTest, IdentityTest) {
  const Schema schema = Schema::Default();
  std::vector<AnnotatedSentence> gold;
  std::vector<PredictionRecord> predictions;
  for (int k = 0; k < 3; ++k) {
    Sentence sentence = SevenWords();
    sentence.id = "s" + std::to_string(k);
    gold.push_back({sentence, k == 0 ? std::optional<std::string>("news") : std::nullopt,
                    {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                        E("object", {{2, 2 + k}})})}});
    predictions.push_back({sentence.id, gold.back().facts});
  }
  const EvalReport report = Evaluate(gold, predictions, schema);
  EXPECT_EQ(3, report.overall.sentences);
  for (Metric metric : kAllMetrics) {
    EXPECT_EQ(1.0, report.overall[metric].at_threshold.f1);
    EXPECT_EQ(1.0, report.overall[metric].curve.auc);
    EXPECT_EQ(1.0, report.overall[metric].curve.optimal_f1);
  }
  ASSERT_EQ(1, report.by_domain.size());
  EXPECT_EQ(1, report.by_domain.at("news").sentences);
  std::ostringstream out;
  WriteEvalReport(out, report);
  EXPECT_NE(std::string::npos, out.str().find("gestalt f1 1.0000\n"));
  EXPECT_NE(std::string::npos, out.str().find("carb-multi opt_f1 1.0000\n"));
  EXPECT_NE(std::string::npos, out.str().find("[news] carb-single auc 1.0000\n"));
}

TEST(EvaluateTest, EmptyPredictionsTest) {
  const Schema schema = Schema::Default();
  const AnnotatedSentence gold{SevenWords(), std::nullopt,
                               {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}})})}};
  const EvalReport report = Evaluate({gold}, {{"s", {}}}, schema);
  for (Metric metric : kAllMetrics) {
    EXPECT_EQ(0.0, report.overall[metric].at_threshold.recall) << MetricName(metric);
  }
}

TEST(EvaluateTest, AlignmentErrorTest) {
  const Schema schema = Schema::Default();
  const AnnotatedSentence gold{SevenWords(), std::nullopt, {}};
  for (const std::vector<PredictionRecord> &predictions :
       std::vector<std::vector<PredictionRecord>>{{{"other", {}}}, {{"s", {}}, {"s", {}}}, {}}) {
    try {
      Evaluate({gold}, predictions, schema);
      FAIL() << "misaligned predictions accepted";
    } catch (const Error &e) {
      EXPECT_EQ("alignment-error", e.code());
    }
  }
}

TEST(MetricNameTest, RoundtripTest) {
  for (Metric metric : kAllMetrics) EXPECT_EQ(metric, MetricByName(MetricName(metric)));
  EXPECT_FALSE(MetricByName("bleu").has_value());
}

}  // namespace
}  // namespace factdag
