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

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "factdag/corpus.h"
#include "factdag/dag_codec.h"
#include "factdag/edge_matrix.h"
#include "factdag/error.h"
#include "factdag/fact.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace factdag {
namespace {

using testing::E;
using testing::F;
using testing::Keys;
using testing::V;
using testing::Words;

std::set<std::string> EdgeNames(const EdgeMatrix &matrix, const EdgeTypeSpace &space) {
  std::set<std::string> names;
  for (const Edge &e : matrix.Edges()) {
    names.insert(space.name(e.channel) + "(" + std::to_string(e.i) + "," +
                 std::to_string(e.j) + ")");
  }
  return names;
}

// Fact whose m spans are single tokens at 0, 2, 4, ... with cycling roles.
Fact SpreadFact(int m) {
  static const char *kRoles[] = {"subject", "predicate", "object", "time"};
  Fact fact;
  for (int k = 0; k < m; ++k) {
    const std::string role = k < 4 ? kRoles[k] : "object";
    bool merged = false;
    for (Element &e : fact.elements) {
      if (e.role == role) {
        e.spans.push_back({2 * k, 2 * k});
        merged = true;
      }
    }
    if (!merged) fact.elements.push_back(E(role, {{2 * k, 2 * k}}));
  }
  return fact;
}

GenConfig ComplicatedConfig(int sentences, uint64_t seed) {
  GenConfig config;
  config.sentences = sentences;
  config.overlap_rate = 0.8;
  config.nesting_rate = 0.6;
  config.discontinuity_rate = 0.8;
  config.virtual_rate = 0.1;
  config.seed = seed;
  return config;
}

TEST(EdgeTypeSpaceTest, CountsTest) {
  const Schema schema = Schema::Default();
  EXPECT_EQ(21, MakeEdgeTypeSpace(schema).size());
  EXPECT_EQ(4, MakeEdgeTypeSpace(Schema{{"x"}, {}}).size());
  EXPECT_EQ(51, MakeEdgeTypeSpace(schema, CodecVariant::RolePair()).size());
  EXPECT_EQ(20, MakeEdgeTypeSpace(schema, CodecVariant::NoEe()).size());
  EXPECT_EQ(21, MakeEdgeTypeSpace(schema, CodecVariant::NoBe()).size());
}

TEST(EdgeTypeSpaceTest, FormulaPropertyTest) {
  for (int r = 1; r <= 8; ++r) {
    for (int v = 0; v <= 8; ++v) {
      Schema schema;
      for (int k = 0; k < r; ++k) schema.roles.push_back("r" + std::to_string(k));
      for (int k = 0; k < v; ++k) schema.virtual_predicates.push_back("v" + std::to_string(k));
      EXPECT_EQ(2 * r + 2 + v, MakeEdgeTypeSpace(schema).size());
      EXPECT_EQ(2 * r + 1 + v, MakeEdgeTypeSpace(schema, CodecVariant::NoEe()).size());
      EXPECT_EQ(r * r + r + 2 + v,
                MakeEdgeTypeSpace(schema, CodecVariant::RolePair()).size());
    }
  }
}

TEST(EdgeTypeSpaceTest, ChannelOrderTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  EXPECT_EQ("BE-subject", space.name(0));
  EXPECT_EQ("BE-qualifier", space.name(5));
  EXPECT_EQ("object->=", space.name(6));
  EXPECT_EQ("object->IN", space.name(12));
  EXPECT_EQ("EE", space.name(13));
  EXPECT_EQ("I", space.name(14));
  EXPECT_EQ("EB-subject", space.name(15));
  EXPECT_EQ("EB-qualifier", space.name(20));
  EXPECT_EQ(14, space.ChannelByName("I"));
  EXPECT_EQ(-1, space.ChannelByName("ROOT-subject"));
  EXPECT_FALSE(space.AllowsDiagonal(space.EndEndChannel()));
  EXPECT_FALSE(space.AllowsDiagonal(space.EndBeginChannel(0)));
  EXPECT_TRUE(space.AllowsDiagonal(space.IntraChannel()));

  const EdgeTypeSpace no_be = MakeEdgeTypeSpace(Schema::Default(), CodecVariant::NoBe());
  EXPECT_EQ("ROOT-subject", no_be.name(0));
  EXPECT_EQ(-1, no_be.BoundaryChannel(0));
  const EdgeTypeSpace pairs = MakeEdgeTypeSpace(Schema::Default(), CodecVariant::RolePair());
  EXPECT_GE(pairs.ChannelByName("EB-subject->predicate"), 0);
}

TEST(EdgeTypeSpaceTest, EmptySchemaTest) {
  try {
    MakeEdgeTypeSpace(Schema{{}, {"="}});
    FAIL() << "empty schema accepted";
  } catch (const Error &e) {
    EXPECT_EQ("empty-schema", e.code());
  }
}

TEST(EncodeTest, TwoTokenExampleTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  const AnnotatedSentence annotated{Sentence{"s", {"A", "B"}}, std::nullopt,
                                    {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}})})}};
  const EncodeResult result = Encode(annotated, space);
  EXPECT_EQ(5, result.matrix.edge_count());
  EXPECT_EQ((std::set<std::string>{"I(0,0)", "I(1,1)", "EB-predicate(0,1)", "EE(0,1)",
                                   "BE-subject(0,1)"}),
            EdgeNames(result.matrix, space));
  EXPECT_EQ(1, result.report.facts_encoded);
}

TEST(EncodeTest, ThreeMMinusOneTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  for (int m = 1; m <= 8; ++m) {
    auto edges = FactEdges(SpreadFact(m), space);
    ASSERT_TRUE(edges.has_value());
    EXPECT_EQ(3 * m - 1, edges->size()) << "m=" << m;
  }
  Fact with_virtual = F({E("subject", {{0, 0}}), V("ISA"), E("object", {{2, 3}})});
  auto edges = FactEdges(with_virtual, space);
  ASSERT_TRUE(edges.has_value());
  EXPECT_EQ(3 * 2 - 1 + 1, edges->size());
}

TEST(EncodeTest, EmptyFactListTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  const EncodeResult result = Encode(AnnotatedSentence{Words(4), std::nullopt, {}}, space);
  EXPECT_TRUE(result.matrix.empty());
  EXPECT_EQ(0, result.report.facts_total);
  EXPECT_EQ(0, result.report.facts_encoded);
  EXPECT_EQ(0, result.report.facts_uncoverable);
}

TEST(EncodeTest, BackwardEdgeIsReportedTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  // The object lies inside the subject: the chain would have to step back.
  const AnnotatedSentence annotated{
      Words(6), std::nullopt,
      {F({E("subject", {{0, 3}}), E("predicate", {{4, 4}}), E("object", {{1, 1}})}),
       F({E("subject", {{0, 0}}), E("predicate", {{4, 4}}), E("object", {{5, 5}})})}};
  const EncodeResult result = Encode(annotated, space);
  EXPECT_EQ(2, result.report.facts_total);
  EXPECT_EQ(1, result.report.facts_encoded);
  EXPECT_EQ(1, result.report.facts_uncoverable);
  ASSERT_EQ(1, result.report.reasons.size());
  EXPECT_EQ(0, result.report.reasons[0].first);
  EXPECT_EQ("backward-edge", result.report.reasons[0].second);
  // Only the coverable fact contributes edges.
  EXPECT_EQ(8, result.matrix.edge_count());
}

TEST(EncodeTest, UnknownRoleTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  try {
    Encode(AnnotatedSentence{Words(3), std::nullopt,
                             {F({E("agent", {{0, 0}}), E("predicate", {{1, 1}})})}},
           space);
    FAIL() << "unknown role accepted";
  } catch (const Error &e) {
    EXPECT_EQ("unknown-role", e.code());
  }
}

TEST(EncodeTest, AcyclicTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  for (const AnnotatedSentence &annotated :
       GenerateSynthetic(ComplicatedConfig(200, 3), schema)) {
    const EncodeResult result = Encode(annotated, space);
    EXPECT_NO_THROW(CheckEdges(result.matrix, space));
    for (const Edge &e : result.matrix.Edges()) {
      EXPECT_LE(e.i, e.j);
      if (e.i == e.j) EXPECT_TRUE(space.AllowsDiagonal(e.channel));
    }
  }
}

TEST(DecodeTest, TwoTokenExampleTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  const Fact fact = F({E("subject", {{0, 0}}), E("predicate", {{1, 1}})});
  const AnnotatedSentence annotated{Sentence{"s", {"A", "B"}}, std::nullopt, {fact}};
  const std::vector<Fact> decoded =
      Decode(Encode(annotated, space).matrix, annotated.sentence, space);
  ASSERT_EQ(1, decoded.size());
  EXPECT_EQ(FactKey(fact, schema), FactKey(decoded[0], schema));
}

TEST(DecodeTest, EmptyMatrixTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  EXPECT_TRUE(Decode(EdgeMatrix(5, space.size()), Words(5), space).empty());
}

TEST(DecodeTest, SharedSubjectTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  const AnnotatedSentence annotated{
      Words(7), std::nullopt,
      {F({E("subject", {{0, 1}}), E("predicate", {{2, 2}}), E("object", {{3, 3}})}),
       F({E("subject", {{0, 1}}), E("predicate", {{4, 4}}), E("object", {{5, 6}})})}};
  const std::vector<Fact> decoded =
      Decode(Encode(annotated, space).matrix, annotated.sentence, space);
  EXPECT_EQ(Keys(annotated.facts, schema), Keys(decoded, schema));
}

TEST(DecodeTest, VirtualPredicateTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  const AnnotatedSentence annotated{
      Words(5), std::nullopt,
      {F({E("subject", {{0, 1}}), V("ISA"), E("object", {{3, 4}})})}};
  const std::vector<Fact> decoded =
      Decode(Encode(annotated, space).matrix, annotated.sentence, space);
  EXPECT_EQ(Keys(annotated.facts, schema), Keys(decoded, schema));
}

TEST(DecodeTest, ConfidenceAggregationTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  EdgeMatrix matrix(2, space.size());
  matrix.Add(0, 0, space.IntraChannel(), 0.9);
  matrix.Add(1, 1, space.IntraChannel(), 0.8);
  matrix.Add(0, 1, space.EndBeginChannel(1), 0.7);
  matrix.Add(0, 1, space.EndEndChannel(), 0.6);
  matrix.Add(0, 1, space.BoundaryChannel(0), 0.5);
  matrix.set_has_probabilities(true);
  const Sentence sentence = Words(2);
  const std::vector<Fact> by_min = Decode(matrix, sentence, space);
  ASSERT_EQ(1, by_min.size());
  ASSERT_TRUE(by_min[0].confidence.has_value());
  EXPECT_DOUBLE_EQ(0.5, *by_min[0].confidence);
  DecodeOptions mean;
  mean.aggregation = ConfidenceAggregation::kMean;
  const std::vector<Fact> by_mean = Decode(matrix, sentence, space, mean);
  ASSERT_EQ(1, by_mean.size());
  EXPECT_NEAR(0.7, *by_mean[0].confidence, 1e-12);
}

TEST(DecodeTest, DropsPathsWithoutPredicateTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  EdgeMatrix matrix(3, space.size());
  matrix.Add(0, 2, space.IntraChannel());
  matrix.Add(0, 2, space.BoundaryChannel(0));
  EXPECT_TRUE(Decode(matrix, Words(3), space).empty());
}

TEST(RoundtripTest, SimpleCorpusTest) {
  const Schema schema = Schema::Default();
  std::vector<AnnotatedSentence> corpus;
  for (int k = 0; k < 20; ++k) {
    corpus.push_back({Words(3 + k % 4, "s" + std::to_string(k)), std::nullopt,
                      {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}),
                          E("object", {{2, 2 + k % 4}})})}});
  }
  const RoundtripReport report = RoundtripCheck(corpus, MakeEdgeTypeSpace(schema));
  EXPECT_EQ(1.0, report.coverage());
  EXPECT_EQ(20, report.recovered_facts);
  EXPECT_TRUE(report.mismatches.empty());
}

TEST(RoundtripTest, ComplicatedCorpusIsExactTest) {
  const Schema schema = Schema::Default();
  const std::vector<AnnotatedSentence> corpus =
      GenerateSynthetic(ComplicatedConfig(500, 9), schema);
  for (CodecVariant variant : {CodecVariant::Full(), CodecVariant::RolePair()}) {
    const RoundtripReport report = RoundtripCheck(corpus, MakeEdgeTypeSpace(schema, variant));
    EXPECT_EQ(1.0, report.coverage()) << variant.Name();
    EXPECT_EQ(report.encodable_facts, report.recovered_facts);
    EXPECT_EQ(0, report.spurious_facts);
  }
}

TEST(RoundtripTest, PerSentenceSetEqualityTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  for (const AnnotatedSentence &annotated :
       GenerateSynthetic(ComplicatedConfig(200, 21), schema)) {
    const EncodeResult encoded = Encode(annotated, space);
    ASSERT_EQ(0, encoded.report.facts_uncoverable);
    EXPECT_EQ(Keys(annotated.facts, schema),
              Keys(Decode(encoded.matrix, annotated.sentence, space), schema))
        << annotated.sentence.id;
  }
}

// Fact A has object X = [2,4]; fact B lives inside X and shares both its
// first and last word. Without EE the chain from A's predicate can enter B's
// object span [2,2] and continue along B.
AnnotatedSentence SharedEndingNest() {
  return {Words(6), std::nullopt,
          {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{2, 4}})}),
           F({E("subject", {{2, 2}}), E("predicate", {{3, 3}}), E("object", {{4, 4}})})}};
}

TEST(AblationTest, NoEeSharedEndingNestTest) {
  const Schema schema = Schema::Default();
  const AnnotatedSentence annotated = SharedEndingNest();
  const EdgeTypeSpace full = MakeEdgeTypeSpace(schema);
  EXPECT_EQ(Keys(annotated.facts, schema),
            Keys(Decode(Encode(annotated, full).matrix, annotated.sentence, full), schema));

  const EdgeTypeSpace no_ee = MakeEdgeTypeSpace(schema, CodecVariant::NoEe());
  const std::vector<Fact> decoded =
      Decode(Encode(annotated, no_ee).matrix, annotated.sentence, no_ee);
  // Hand-enumerated paths: A, B, and the chimera A-prefix + B-suffix.
  std::set<std::string> expected = Keys(annotated.facts, schema);
  expected.insert(FactKey(Canonicalize(F({E("subject", {{0, 0}}),
                                          E("predicate", {{1, 1}, {3, 3}}),
                                          E("object", {{2, 2}, {4, 4}})}),
                                       schema),
                          schema));
  EXPECT_EQ(expected, Keys(decoded, schema));

  const RoundtripReport report_full = RoundtripCheck({annotated}, full);
  const RoundtripReport report_no_ee = RoundtripCheck({annotated}, no_ee);
  EXPECT_EQ(1.0, report_full.coverage());
  EXPECT_LT(report_no_ee.coverage(), report_full.coverage());
}

TEST(AblationTest, NoBeOverlapTest) {
  const Schema schema = Schema::Default();
  // Two subjects share a predicate; each pairs with its own object.
  const AnnotatedSentence annotated{
      Words(5), std::nullopt,
      {F({E("subject", {{0, 0}}), E("predicate", {{2, 2}}), E("object", {{3, 3}})}),
       F({E("subject", {{1, 1}}), E("predicate", {{2, 2}}), E("object", {{4, 4}})})}};
  const EdgeTypeSpace full = MakeEdgeTypeSpace(schema);
  const EdgeTypeSpace no_be = MakeEdgeTypeSpace(schema, CodecVariant::NoBe());
  EXPECT_EQ(Keys(annotated.facts, schema),
            Keys(Decode(Encode(annotated, full).matrix, annotated.sentence, full), schema));
  const std::vector<Fact> decoded =
      Decode(Encode(annotated, no_be).matrix, annotated.sentence, no_be);
  EXPECT_EQ(4, Keys(decoded, schema).size());
  EXPECT_LT(RoundtripCheck({annotated}, no_be).coverage(),
            RoundtripCheck({annotated}, full).coverage());
}

TEST(AblationTest, NoBeIsExactWithoutOverlapTest) {
  const Schema schema = Schema::Default();
  GenConfig config;
  config.sentences = 200;
  config.discontinuity_rate = 0.5;
  config.seed = 4;
  const RoundtripReport report = RoundtripCheck(
      GenerateSynthetic(config, schema), MakeEdgeTypeSpace(schema, CodecVariant::NoBe()));
  EXPECT_EQ(1.0, report.coverage());
}

TEST(AblationTest, VariantsNeverBeatFullTest) {
  const Schema schema = Schema::Default();
  const std::vector<AnnotatedSentence> corpus =
      GenerateSynthetic(ComplicatedConfig(300, 17), schema);
  const double full = RoundtripCheck(corpus, MakeEdgeTypeSpace(schema)).coverage();
  for (CodecVariant variant : {CodecVariant::NoEe(), CodecVariant::NoBe()}) {
    const RoundtripReport report = RoundtripCheck(corpus, MakeEdgeTypeSpace(schema, variant));
    EXPECT_LT(report.coverage(), full) << variant.Name();
    EXPECT_LE(report.recovered_facts, report.encodable_facts);
  }
}

TEST(RoundtripTest, SameRoleElementsAreSplicedTest) {
  const Schema schema = Schema::Default();
  // Two separate object elements come back as one spliced element, which is
  // structurally a different fact.
  const AnnotatedSentence annotated{
      Words(5), std::nullopt,
      {F({E("subject", {{0, 0}}), E("predicate", {{1, 1}}), E("object", {{2, 2}}),
          E("object", {{4, 4}})})}};
  const RoundtripReport report = RoundtripCheck({annotated}, MakeEdgeTypeSpace(schema));
  EXPECT_LT(report.coverage(), 1.0);
}

TEST(EdgeStatsTest, ExamplesTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  std::vector<AnnotatedSentence> three;
  std::vector<AnnotatedSentence> one;
  for (int k = 0; k < 5; ++k) {
    three.push_back({Words(6), std::nullopt, {SpreadFact(3)}});
    one.push_back({Words(3), std::nullopt, {F({E("subject", {{0, 2}})})}});
  }
  const EdgeStats three_stats = ComputeEdgeStats(three, space);
  EXPECT_EQ(5, three_stats.facts);
  EXPECT_DOUBLE_EQ(8.0, three_stats.mean_edges_per_fact);
  EXPECT_EQ((std::map<int, int>{{8, 5}}), three_stats.edges_per_fact_histogram);
  EXPECT_DOUBLE_EQ(2.0, ComputeEdgeStats(one, space).mean_edges_per_fact);
  EXPECT_EQ(2, ComputeEdgeStats(one, space).distinct_types_used);
}

TEST(EdgeFileTest, RoundtripTest) {
  const Schema schema = Schema::Default();
  const EdgeTypeSpace space = MakeEdgeTypeSpace(schema);
  std::vector<SentenceEdges> items;
  for (const AnnotatedSentence &annotated :
       GenerateSynthetic(ComplicatedConfig(20, 2), schema)) {
    items.push_back({annotated.sentence.id, Encode(annotated, space).matrix});
  }
  items[0].matrix.Add(0, 0, space.IntraChannel(), 0.25);
  items[0].matrix.set_has_probabilities(true);
  std::stringstream buffer;
  WriteEdgeFile(buffer, items, space);
  const std::vector<SentenceEdges> read = ReadEdgeFile(buffer, space);
  ASSERT_EQ(items.size(), read.size());
  for (size_t k = 0; k < items.size(); ++k) {
    EXPECT_EQ(items[k].id, read[k].id);
    EXPECT_EQ(items[k].matrix.Edges(), read[k].matrix.Edges());
  }
}

TEST(EdgeFileTest, RejectsDiagonalEndBeginTest) {
  const EdgeTypeSpace space = MakeEdgeTypeSpace(Schema::Default());
  std::istringstream in("1\t1\tEB-object\t1\n");
  try {
    ReadEdges(in, 3, space);
    FAIL() << "diagonal EB accepted";
  } catch (const Error &e) {
    EXPECT_EQ("invalid-edge", e.code());
  }
}

TEST(EdgeMatrixTest, RejectsInvalidEntriesTest) {
  EdgeMatrix matrix(3, 2);
  EXPECT_THROW(matrix.Add(2, 1, 0), Error);
  EXPECT_THROW(matrix.Add(0, 3, 0), Error);
  EXPECT_THROW(matrix.Add(0, 1, 2), Error);
  matrix.Add(0, 1, 1, 0.4);
  matrix.Add(0, 1, 1, 0.6);
  EXPECT_EQ(1, matrix.edge_count());
  EXPECT_DOUBLE_EQ(0.6, *matrix.Probability(0, 1, 1));
}

}  // namespace
}  // namespace factdag
