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

#include "factdag/metrics.h"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <set>
#include <tuple>

#include "factdag/error.h"

namespace factdag {
namespace {

struct Block {
  size_t a = 0;
  size_t b = 0;
  size_t size = 0;
};

// Longest common block inside a[alo,ahi) x b[blo,bhi); earliest in a, then b.
Block LongestBlock(std::string_view a, size_t alo, size_t ahi, std::string_view b,
                   size_t blo, size_t bhi) {
  Block best{alo, blo, 0};
  std::vector<size_t> previous(bhi - blo + 1, 0), current(bhi - blo + 1, 0);
  for (size_t i = alo; i < ahi; ++i) {
    for (size_t j = blo; j < bhi; ++j) {
      size_t k = a[i] == b[j] ? previous[j - blo] + 1 : 0;
      current[j - blo + 1] = k;
      if (k > best.size) best = {i + 1 - k, j + 1 - k, k};
    }
    std::swap(previous, current);
  }
  return best;
}

size_t MatchedCharacters(std::string_view a, size_t alo, size_t ahi,
                         std::string_view b, size_t blo, size_t bhi) {
  if (alo >= ahi || blo >= bhi) return 0;
  Block block = LongestBlock(a, alo, ahi, b, blo, bhi);
  if (block.size == 0) return 0;
  return block.size + MatchedCharacters(a, alo, block.a, b, blo, block.b) +
         MatchedCharacters(a, block.a + block.size, ahi, b, block.b + block.size,
                           bhi);
}

struct Candidate {
  double score;
  const std::string *gold_text;
  const std::string *predicted_text;
  size_t gold;
  size_t predicted;
};

// Descending score; ties by lexicographic fact strings, then by position.
void SortCandidates(std::vector<Candidate> &candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate &x, const Candidate &y) {
              return std::forward_as_tuple(y.score, *x.gold_text,
                                           *x.predicted_text, x.gold,
                                           x.predicted) <
                     std::forward_as_tuple(x.score, *y.gold_text,
                                           *y.predicted_text, y.gold,
                                           y.predicted);
            });
}

std::vector<std::string> Render(const std::vector<Fact> &facts,
                                const Sentence &sentence, const Schema &schema) {
  std::vector<std::string> texts;
  texts.reserve(facts.size());
  for (const Fact &fact : facts) texts.push_back(FactToString(fact, sentence, schema));
  return texts;
}

std::map<std::string, std::multiset<std::string>> WordsByRole(
    const Fact &fact, const Sentence &sentence, const Schema &schema) {
  std::map<std::string, std::multiset<std::string>> words;
  for (const Element &element : SpliceSameRole(fact, schema).elements) {
    auto &bag = words[element.role];
    if (element.is_virtual()) {
      bag.insert(*element.virtual_predicate);
      continue;
    }
    for (const Span &span : element.spans) {
      for (int t = span.begin; t <= span.end && t < sentence.size(); ++t) {
        bag.insert(sentence.tokens[t]);
      }
    }
  }
  return words;
}

size_t CommonWords(const std::multiset<std::string> &x,
                   const std::multiset<std::string> &y) {
  std::vector<std::string> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(),
                        std::back_inserter(common));
  return common.size();
}

struct PairTable {
  std::vector<std::string> gold_text;
  std::vector<std::string> predicted_text;
  std::vector<std::vector<PairScore>> scores;  // [gold][predicted]
};

PairTable CarbTable(const std::vector<Fact> &gold,
                    const std::vector<Fact> &predicted, const Sentence &sentence,
                    const Schema &schema) {
  PairTable table{Render(gold, sentence, schema),
                  Render(predicted, sentence, schema),
                  {}};
  table.scores.assign(gold.size(), std::vector<PairScore>(predicted.size()));
  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t p = 0; p < predicted.size(); ++p) {
      table.scores[g][p] = CarbPair(gold[g], predicted[p], sentence, schema);
    }
  }
  return table;
}

// One-to-one greedy matching by descending pair F1.
std::vector<std::pair<size_t, size_t>> GreedyCarb(const PairTable &table) {
  std::vector<Candidate> candidates;
  for (size_t g = 0; g < table.scores.size(); ++g) {
    for (size_t p = 0; p < table.scores[g].size(); ++p) {
      const PairScore &s = table.scores[g][p];
      double f1 = F1(s.precision, s.recall);
      if (f1 > 0) {
        candidates.push_back(
            {f1, &table.gold_text[g], &table.predicted_text[p], g, p});
      }
    }
  }
  SortCandidates(candidates);
  std::vector<char> gold_used(table.gold_text.size(), 0);
  std::vector<char> predicted_used(table.predicted_text.size(), 0);
  std::vector<std::pair<size_t, size_t>> matches;
  for (const Candidate &c : candidates) {
    if (gold_used[c.gold] || predicted_used[c.predicted]) continue;
    gold_used[c.gold] = predicted_used[c.predicted] = 1;
    matches.emplace_back(c.gold, c.predicted);
  }
  return matches;
}

double FactConfidence(const Fact &fact) { return fact.confidence.value_or(1.0); }

}  // namespace

const char *MetricName(Metric metric) {
  switch (metric) {
    case Metric::kCarbSingle:
      return "carb-single";
    case Metric::kCarbMulti:
      return "carb-multi";
    case Metric::kGestalt:
      return "gestalt";
  }
  return "?";
}

std::optional<Metric> MetricByName(std::string_view name) {
  for (Metric metric : kAllMetrics) {
    if (name == MetricName(metric)) return metric;
  }
  return std::nullopt;
}

double F1(double precision, double recall) {
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall)
                                : 0.0;
}

MatchCounts &MatchCounts::operator+=(const MatchCounts &other) {
  precision_mass += other.precision_mass;
  recall_mass += other.recall_mass;
  predicted += other.predicted;
  gold += other.gold;
  return *this;
}

Prf MatchCounts::ToPrf() const {
  Prf out;
  if (predicted == 0 && gold == 0) return {1, 1, 1};
  out.precision = predicted > 0 ? precision_mass / predicted : 0.0;
  out.recall = gold > 0 ? recall_mass / gold : 1.0;
  out.f1 = F1(out.precision, out.recall);
  return out;
}

double GestaltSimilarity(std::string_view a, std::string_view b) {
  if (a.empty() && b.empty()) return 1.0;
  size_t matched = MatchedCharacters(a, 0, a.size(), b, 0, b.size());
  return 2.0 * static_cast<double>(matched) /
         static_cast<double>(a.size() + b.size());
}

MatchCounts GestaltMatch(const std::vector<Fact> &gold,
                         const std::vector<Fact> &predicted,
                         const Sentence &sentence, const Schema &schema,
                         const MatchConfig &config) {
  std::vector<std::string> gold_text = Render(gold, sentence, schema);
  std::vector<std::string> predicted_text = Render(predicted, sentence, schema);
  std::vector<Candidate> candidates;
  for (size_t g = 0; g < gold.size(); ++g) {
    for (size_t p = 0; p < predicted.size(); ++p) {
      double similarity = GestaltSimilarity(gold_text[g], predicted_text[p]);
      if (similarity >= config.gestalt_threshold) {
        candidates.push_back(
            {similarity, &gold_text[g], &predicted_text[p], g, p});
      }
    }
  }
  SortCandidates(candidates);
  std::vector<char> gold_used(gold.size(), 0), predicted_used(predicted.size(), 0);
  int hits = 0;
  for (const Candidate &c : candidates) {
    if (gold_used[c.gold] || predicted_used[c.predicted]) continue;
    gold_used[c.gold] = predicted_used[c.predicted] = 1;
    ++hits;
  }
  return {static_cast<double>(hits), static_cast<double>(hits),
          static_cast<int>(predicted.size()), static_cast<int>(gold.size())};
}

Prf GestaltScore(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
                 const Sentence &sentence, const Schema &schema,
                 const MatchConfig &config) {
  return GestaltMatch(gold, predicted, sentence, schema, config).ToPrf();
}

PairScore CarbPair(const Fact &gold, const Fact &predicted,
                   const Sentence &sentence, const Schema &schema) {
  auto gold_words = WordsByRole(gold, sentence, schema);
  auto predicted_words = WordsByRole(predicted, sentence, schema);
  size_t common = 0, gold_total = 0, predicted_total = 0;
  for (const auto &[role, bag] : gold_words) {
    gold_total += bag.size();
    auto it = predicted_words.find(role);
    if (it != predicted_words.end()) common += CommonWords(bag, it->second);
  }
  for (const auto &[role, bag] : predicted_words) predicted_total += bag.size();
  PairScore score;
  if (predicted_total > 0) score.precision = double(common) / predicted_total;
  if (gold_total > 0) score.recall = double(common) / gold_total;
  return score;
}

MatchCounts CarbSingleMatch(const std::vector<Fact> &gold,
                            const std::vector<Fact> &predicted,
                            const Sentence &sentence, const Schema &schema) {
  PairTable table = CarbTable(gold, predicted, sentence, schema);
  MatchCounts counts{0, 0, static_cast<int>(predicted.size()),
                     static_cast<int>(gold.size())};
  for (const auto &[g, p] : GreedyCarb(table)) {
    counts.precision_mass += table.scores[g][p].precision;
    counts.recall_mass += table.scores[g][p].recall;
  }
  return counts;
}

MatchCounts CarbMultiMatch(const std::vector<Fact> &gold,
                           const std::vector<Fact> &predicted,
                           const Sentence &sentence, const Schema &schema) {
  PairTable table = CarbTable(gold, predicted, sentence, schema);
  MatchCounts counts{0, 0, static_cast<int>(predicted.size()),
                     static_cast<int>(gold.size())};
  for (const auto &[g, p] : GreedyCarb(table)) {
    counts.precision_mass += table.scores[g][p].precision;
  }
  for (const auto &row : table.scores) {
    double best = 0;
    for (const PairScore &s : row) best = std::max(best, s.recall);
    counts.recall_mass += best;
  }
  return counts;
}

Prf CarbSingle(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
               const Sentence &sentence, const Schema &schema) {
  return CarbSingleMatch(gold, predicted, sentence, schema).ToPrf();
}

Prf CarbMulti(const std::vector<Fact> &gold, const std::vector<Fact> &predicted,
              const Sentence &sentence, const Schema &schema) {
  return CarbMultiMatch(gold, predicted, sentence, schema).ToPrf();
}

MatchCounts MatchSentence(Metric metric, const std::vector<Fact> &gold,
                          const std::vector<Fact> &predicted,
                          const Sentence &sentence, const Schema &schema,
                          const MatchConfig &config) {
  switch (metric) {
    case Metric::kCarbSingle:
      return CarbSingleMatch(gold, predicted, sentence, schema);
    case Metric::kCarbMulti:
      return CarbMultiMatch(gold, predicted, sentence, schema);
    case Metric::kGestalt:
      return GestaltMatch(gold, predicted, sentence, schema, config);
  }
  return {};
}

double CurveArea(std::vector<CurvePoint> points) {
  if (points.empty()) return 0.0;
  std::sort(points.begin(), points.end(),
            [](const CurvePoint &x, const CurvePoint &y) {
              if (x.recall != y.recall) return x.recall < y.recall;
              return x.precision > y.precision;
            });
  double area = 0;
  double recall = 0, precision = points.front().precision;
  for (const CurvePoint &point : points) {
    area += (point.recall - recall) * (point.precision + precision) / 2;
    recall = point.recall;
    precision = point.precision;
  }
  return area;
}

PrCurve ComputePrCurve(const std::vector<AnnotatedSentence> &gold,
                       const std::vector<std::vector<Fact>> &predictions,
                       Metric metric, const Schema &schema,
                       const MatchConfig &config) {
  if (gold.size() != predictions.size()) {
    throw Error("alignment-error", "gold and prediction counts differ");
  }
  // Sentences are re-scored only when a cutoff admits one of their facts.
  std::map<double, std::vector<size_t>, std::greater<>> sentences_at;
  for (size_t s = 0; s < predictions.size(); ++s) {
    for (const Fact &fact : predictions[s]) {
      if (!fact.confidence) {
        throw Error("missing-confidence",
                    "prediction for '" + gold[s].sentence.id +
                        "' has no confidence");
      }
      sentences_at[*fact.confidence].push_back(s);
    }
  }
  std::vector<MatchCounts> current(gold.size());
  MatchCounts total;
  for (size_t s = 0; s < gold.size(); ++s) {
    current[s] = MatchSentence(metric, gold[s].facts, {}, gold[s].sentence,
                               schema, config);
    total += current[s];
  }
  PrCurve curve;
  for (auto &[cutoff, touched] : sentences_at) {
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (size_t s : touched) {
      std::vector<Fact> kept;
      for (const Fact &fact : predictions[s]) {
        if (*fact.confidence >= cutoff) kept.push_back(fact);
      }
      MatchCounts updated =
          MatchSentence(metric, gold[s].facts, kept, gold[s].sentence, schema,
                        config);
      total.precision_mass += updated.precision_mass - current[s].precision_mass;
      total.recall_mass += updated.recall_mass - current[s].recall_mass;
      total.predicted += updated.predicted - current[s].predicted;
      total.gold += updated.gold - current[s].gold;
      current[s] = updated;
    }
    Prf prf = total.ToPrf();
    curve.points.push_back({cutoff, prf.precision, prf.recall, prf.f1});
    curve.optimal_f1 = std::max(curve.optimal_f1, prf.f1);
  }
  curve.auc = CurveArea(curve.points);
  return curve;
}

namespace {

EvalSummary Summarize(const std::vector<AnnotatedSentence> &gold,
                      const std::vector<std::vector<Fact>> &predictions,
                      const Schema &schema, const MatchConfig &config) {
  EvalSummary summary;
  summary.sentences = static_cast<int>(gold.size());
  std::vector<std::vector<Fact>> scored = predictions;
  for (auto &facts : scored) {
    for (Fact &fact : facts) fact.confidence = FactConfidence(fact);
  }
  for (Metric metric : kAllMetrics) {
    MatchCounts total;
    for (size_t s = 0; s < gold.size(); ++s) {
      total += MatchSentence(metric, gold[s].facts, predictions[s],
                             gold[s].sentence, schema, config);
    }
    MetricReport &report = summary.metrics[static_cast<int>(metric)];
    report.at_threshold = total.ToPrf();
    report.curve = ComputePrCurve(gold, scored, metric, schema, config);
  }
  return summary;
}

void WriteSummary(std::ostream &out, const EvalSummary &summary,
                  const std::string &prefix) {
  for (Metric metric : kAllMetrics) {
    const MetricReport &report = summary[metric];
    out << prefix << MetricName(metric) << " f1 " << report.at_threshold.f1 << '\n';
    out << prefix << MetricName(metric) << " auc " << report.curve.auc << '\n';
    out << prefix << MetricName(metric) << " opt_f1 " << report.curve.optimal_f1
        << '\n';
  }
}

}  // namespace

EvalReport Evaluate(const std::vector<AnnotatedSentence> &gold,
                    const std::vector<PredictionRecord> &predictions,
                    const Schema &schema, const MatchConfig &config) {
  std::map<std::string, const PredictionRecord *> by_id;
  for (const PredictionRecord &record : predictions) {
    if (!by_id.emplace(record.id, &record).second) {
      throw Error("alignment-error", "duplicate prediction id '" + record.id + "'");
    }
  }
  if (by_id.size() != gold.size()) {
    throw Error("alignment-error",
                std::to_string(gold.size()) + " gold sentences but " +
                    std::to_string(by_id.size()) + " prediction records");
  }
  std::vector<std::vector<Fact>> aligned;
  std::map<std::string, std::pair<std::vector<AnnotatedSentence>,
                                  std::vector<std::vector<Fact>>>>
      domains;
  for (const AnnotatedSentence &sentence : gold) {
    auto it = by_id.find(sentence.sentence.id);
    if (it == by_id.end()) {
      throw Error("alignment-error",
                  "no prediction for sentence '" + sentence.sentence.id + "'");
    }
    aligned.push_back(it->second->facts);
    if (sentence.domain) {
      auto &[domain_gold, domain_predictions] = domains[*sentence.domain];
      domain_gold.push_back(sentence);
      domain_predictions.push_back(it->second->facts);
    }
  }
  EvalReport report;
  report.overall = Summarize(gold, aligned, schema, config);
  for (const auto &[domain, data] : domains) {
    report.by_domain[domain] = Summarize(data.first, data.second, schema, config);
  }
  return report;
}

void WriteEvalReport(std::ostream &out, const EvalReport &report) {
  auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  WriteSummary(out, report.overall, "");
  for (const auto &[domain, summary] : report.by_domain) {
    WriteSummary(out, summary, "[" + domain + "] ");
  }
  out.flags(flags);
}

void WritePrCurveCsv(std::ostream &out, const PrCurve &curve) {
  auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << "cutoff,precision,recall,f1\n";
  for (const CurvePoint &point : curve.points) {
    out << point.cutoff << ',' << point.precision << ',' << point.recall << ','
        << point.f1 << '\n';
  }
  out.flags(flags);
}

}  // namespace factdag
