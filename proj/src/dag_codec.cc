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

#include "factdag/dag_codec.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "factdag/error.h"

namespace factdag {

EdgeTypeSpace MakeEdgeTypeSpace(const Schema &schema,
                                const CodecVariant &variant) {
  return EdgeTypeSpace(schema, variant);
}

void EncodeReport::Merge(const EncodeReport &other) {
  facts_total += other.facts_total;
  facts_encoded += other.facts_encoded;
  facts_uncoverable += other.facts_uncoverable;
  reasons.insert(reasons.end(), other.reasons.begin(), other.reasons.end());
}

std::optional<std::vector<Edge>> FactEdges(const Fact &fact,
                                           const EdgeTypeSpace &space,
                                           std::string *reason) {
  auto fail = [reason](const char *code) {
    if (reason != nullptr) *reason = code;
    return std::nullopt;
  };
  const Schema &schema = space.schema();
  const CodecVariant &variant = space.variant();

  std::vector<RoleSpan> spans;
  try {
    spans = OrderedFactSpans(fact, schema);
  } catch (const Error &e) {
    if (e.code() == "duplicate-span") return fail("duplicate-span");
    throw;
  }
  if (spans.empty()) return fail("empty-fact");
  for (size_t k = 0; k + 1 < spans.size(); ++k) {
    if (spans[k + 1].span.begin <= spans[k].span.end) {
      return fail("backward-edge");
    }
  }

  int virtual_index = -1;
  for (const Element &element : fact.elements) {
    if (!element.is_virtual()) continue;
    virtual_index = schema.VirtualIndex(*element.virtual_predicate);
    if (virtual_index < 0) {
      throw Error("unknown-virtual", "virtual predicate '" +
                                         *element.virtual_predicate +
                                         "' not in schema");
    }
    break;
  }

  std::vector<Edge> edges;
  const int intra = space.IntraChannel();
  for (const RoleSpan &s : spans) {
    edges.push_back({s.span.begin, s.span.end, intra});
  }
  for (size_t k = 0; k + 1 < spans.size(); ++k) {
    const RoleSpan &cur = spans[k];
    const RoleSpan &next = spans[k + 1];
    int eb = variant.role_pair_labels
                 ? space.EndBeginPairChannel(cur.role_index, next.role_index)
                 : space.EndBeginChannel(next.role_index);
    edges.push_back({cur.span.end, next.span.begin, eb});
    if (variant.use_ee) {
      edges.push_back({cur.span.end, next.span.end, space.EndEndChannel()});
    }
  }
  const RoleSpan &first = spans.front();
  if (variant.use_be) {
    edges.push_back({first.span.begin, spans.back().span.end,
                     space.BoundaryChannel(first.role_index)});
  } else {
    edges.push_back(
        {first.span.begin, first.span.end, space.RootChannel(first.role_index)});
  }
  if (virtual_index >= 0) {
    auto object = std::find_if(spans.begin(), spans.end(), [](const RoleSpan &s) {
      return s.role == kObject;
    });
    if (object == spans.end()) return fail("virtual-without-object");
    edges.push_back({object->span.begin, object->span.end,
                     space.VirtualChannel(virtual_index)});
  }
  return edges;
}

EncodeResult Encode(const AnnotatedSentence &annotated,
                    const EdgeTypeSpace &space) {
  EncodeResult result{EdgeMatrix(annotated.sentence.size(), space.size()), {}};
  for (size_t f = 0; f < annotated.facts.size(); ++f) {
    ++result.report.facts_total;
    std::string reason;
    auto edges = FactEdges(annotated.facts[f], space, &reason);
    if (!edges) {
      ++result.report.facts_uncoverable;
      result.report.reasons.push_back({static_cast<int>(f), reason});
      continue;
    }
    for (const Edge &edge : *edges) {
      if (edge.j >= annotated.sentence.size() || edge.i < 0) {
        throw Error("span-out-of-range",
                    "fact " + std::to_string(f) + " of sentence '" +
                        annotated.sentence.id + "' leaves the sentence");
      }
      result.matrix.Add(edge.i, edge.j, edge.channel, 1.0);
    }
    ++result.report.facts_encoded;
  }
  return result;
}

namespace {

struct PathSpan {
  Span span;
  int role = -1;
};

struct EndBeginEdge {
  int target = 0;
  int role = -1;
  int previous_role = -1;  // only for role-pair labels
  double probability = 1.0;
};

struct StartEdge {
  int begin = 0;
  int end = 0;  // fact end for BE, first-span end for ROOT
  int role = -1;
  double probability = 1.0;
};

// Adjacency built once per decode.
struct DecodeIndex {
  explicit DecodeIndex(const EdgeMatrix &matrix, const EdgeTypeSpace &space)
      : n(matrix.size()), intra(n), end_begin(n) {
    for (const Edge &edge : matrix.Edges()) {
      const EdgeType &type = space.type(edge.channel);
      switch (type.kind) {
        case EdgeKind::kIntra:
          intra[edge.i].push_back({edge.j, edge.probability});
          break;
        case EdgeKind::kEndBegin:
          if (edge.i < edge.j) {
            end_begin[edge.i].push_back({edge.j, type.index, -1, edge.probability});
          }
          break;
        case EdgeKind::kEndBeginPair:
          if (edge.i < edge.j) {
            end_begin[edge.i].push_back(
                {edge.j, type.next_index, type.index, edge.probability});
          }
          break;
        case EdgeKind::kEndEnd:
          if (edge.i < edge.j) end_end[Cell(edge.i, edge.j)] = edge.probability;
          break;
        case EdgeKind::kBoundary:
        case EdgeKind::kRoot:
          starts.push_back({edge.i, edge.j, type.index, edge.probability});
          break;
        case EdgeKind::kVirtual:
          virtuals[Cell(edge.i, edge.j)].push_back({type.index, edge.probability});
          break;
      }
    }
  }

  int64_t Cell(int i, int j) const { return static_cast<int64_t>(i) * n + j; }

  int n;
  std::vector<std::vector<std::pair<int, double>>> intra;
  std::vector<std::vector<EndBeginEdge>> end_begin;
  std::unordered_map<int64_t, double> end_end;
  std::unordered_map<int64_t, std::vector<std::pair<int, double>>> virtuals;
  std::vector<StartEdge> starts;
};

class PathDecoder {
 public:
  PathDecoder(const EdgeMatrix &matrix, const EdgeTypeSpace &space,
              const DecodeOptions &options)
      : index_(matrix, space),
        schema_(space.schema()),
        options_(options),
        with_confidence_(matrix.has_probabilities()),
        bounded_(space.variant().use_be),
        use_ee_(space.variant().use_ee),
        role_pairs_(space.variant().role_pair_labels),
        subject_(schema_.RoleIndex(kSubject)),
        predicate_(schema_.RoleIndex(kPredicate)),
        object_(schema_.RoleIndex(kObject)) {}

  std::vector<Fact> Run() {
    for (const StartEdge &start : index_.starts) {
      limit_ = start.end;
      for (const auto &[first_end, intra_p] : index_.intra[start.begin]) {
        if (bounded_ && first_end > limit_) continue;
        if (!bounded_ && first_end != start.end) continue;
        path_.push_back({{start.begin, first_end}, start.role});
        probabilities_.push_back(start.probability);
        probabilities_.push_back(intra_p);
        if (bounded_ && first_end == limit_) {
          Emit();
        } else {
          Extend();
        }
        probabilities_.resize(probabilities_.size() - 2);
        path_.pop_back();
      }
    }
    std::vector<Fact> facts;
    facts.reserve(found_.size());
    for (auto &[key, fact] : found_) facts.push_back(std::move(fact));
    return facts;
  }

 private:
  void Extend() {
    if (++steps_ > options_.max_steps) return;
    const PathSpan &current = path_.back();
    const int end = current.span.end;
    const int role = current.role;
    bool extended = false;
    for (const EndBeginEdge &eb : index_.end_begin[end]) {
      if (role_pairs_ && eb.previous_role != role) continue;
      if (bounded_ && eb.target > limit_) continue;
      for (const auto &[next_end, intra_p] : index_.intra[eb.target]) {
        if (bounded_ && next_end > limit_) continue;
        double ee_p = 1.0;
        if (use_ee_) {
          auto it = index_.end_end.find(index_.Cell(end, next_end));
          if (it == index_.end_end.end()) continue;
          ee_p = it->second;
        }
        extended = true;
        path_.push_back({{eb.target, next_end}, eb.role});
        probabilities_.push_back(eb.probability);
        probabilities_.push_back(intra_p);
        if (use_ee_) probabilities_.push_back(ee_p);
        if (bounded_ && next_end == limit_) {
          Emit();
        } else {
          Extend();
        }
        probabilities_.resize(probabilities_.size() - (use_ee_ ? 3 : 2));
        path_.pop_back();
      }
    }
    if (!bounded_ && !extended) Emit();
  }

  void Emit() {
    Fact fact;
    std::vector<int> element_of_role(schema_.roles.size(), -1);
    bool has_predicate_span = false;
    const PathSpan *first_object = nullptr;
    for (const PathSpan &p : path_) {
      if (p.role == predicate_) has_predicate_span = true;
      if (p.role == object_ && first_object == nullptr) first_object = &p;
      int &slot = element_of_role[p.role];
      if (slot < 0) {
        slot = static_cast<int>(fact.elements.size());
        fact.elements.push_back({schema_.roles[p.role], {}, std::nullopt});
      }
      fact.elements[slot].spans.push_back(p.span);
    }

    std::vector<std::pair<int, double>> virtual_labels;
    if (!has_predicate_span && first_object != nullptr) {
      auto it = index_.virtuals.find(
          index_.Cell(first_object->span.begin, first_object->span.end));
      if (it != index_.virtuals.end()) virtual_labels = it->second;
    }
    if (virtual_labels.empty()) {
      Record(std::move(fact), probabilities_);
      return;
    }
    for (const auto &[label, probability] : virtual_labels) {
      Fact with_virtual = fact;
      with_virtual.elements.push_back(
          {std::string(kPredicate), {}, schema_.virtual_predicates[label]});
      std::vector<double> probabilities = probabilities_;
      probabilities.push_back(probability);
      Record(std::move(with_virtual), probabilities);
    }
  }

  void Record(Fact fact, const std::vector<double> &probabilities) {
    if (subject_ >= 0 && predicate_ >= 0) {
      bool has_subject = false, has_predicate = false;
      for (const Element &element : fact.elements) {
        has_subject |= element.role == kSubject;
        has_predicate |= element.role == kPredicate;
      }
      if (!has_subject || !has_predicate) return;
    }
    if (with_confidence_) {
      double confidence = 0;
      if (options_.aggregation == ConfidenceAggregation::kMin) {
        confidence = *std::min_element(probabilities.begin(), probabilities.end());
      } else {
        for (double p : probabilities) confidence += p;
        confidence /= static_cast<double>(probabilities.size());
      }
      fact.confidence = confidence;
    }
    fact = Canonicalize(fact, schema_);
    std::string key = FactKey(fact, schema_);
    auto [it, inserted] = found_.emplace(key, fact);
    if (!inserted && fact.confidence.value_or(0) > it->second.confidence.value_or(0)) {
      it->second = std::move(fact);
    }
  }

  DecodeIndex index_;
  const Schema &schema_;
  const DecodeOptions &options_;
  const bool with_confidence_;
  const bool bounded_;
  const bool use_ee_;
  const bool role_pairs_;
  const int subject_;
  const int predicate_;
  const int object_;

  int limit_ = 0;
  long steps_ = 0;
  std::vector<PathSpan> path_;
  std::vector<double> probabilities_;
  std::map<std::string, Fact> found_;
};

}  // namespace

std::vector<Fact> Decode(const EdgeMatrix &matrix, const Sentence &sentence,
                         const EdgeTypeSpace &space,
                         const DecodeOptions &options) {
  if (matrix.size() != sentence.size()) {
    throw Error("shape-mismatch",
                "matrix is " + std::to_string(matrix.size()) +
                    " words wide, sentence '" + sentence.id + "' has " +
                    std::to_string(sentence.size()));
  }
  if (matrix.channels() != space.size()) {
    throw Error("shape-mismatch", "matrix channels differ from edge types");
  }
  return PathDecoder(matrix, space, options).Run();
}

double RoundtripReport::coverage() const {
  int in_play = encodable_facts + spurious_facts;
  return in_play == 0 ? 1.0 : static_cast<double>(recovered_facts) / in_play;
}

double RoundtripReport::recall() const {
  return encodable_facts == 0
             ? 1.0
             : static_cast<double>(recovered_facts) / encodable_facts;
}

RoundtripReport RoundtripCheck(const std::vector<AnnotatedSentence> &corpus,
                               const EdgeTypeSpace &space) {
  const Schema &schema = space.schema();
  RoundtripReport report;
  for (const AnnotatedSentence &annotated : corpus) {
    const Sentence &sentence = annotated.sentence;
    EncodeResult encoded = Encode(annotated, space);
    report.gold_facts += encoded.report.facts_total;
    report.uncoverable_facts += encoded.report.facts_uncoverable;

    std::set<int> skipped;
    for (const auto &[index, reason] : encoded.report.reasons) {
      skipped.insert(index);
      report.mismatches.push_back(
          {sentence.id, "uncoverable",
           FactToString(annotated.facts[index], sentence, schema) + " (" +
               reason + ")"});
    }
    std::map<std::string, const Fact *> gold;
    for (size_t f = 0; f < annotated.facts.size(); ++f) {
      if (skipped.count(static_cast<int>(f))) continue;
      gold.emplace(FactKey(annotated.facts[f], schema), &annotated.facts[f]);
    }
    report.encodable_facts += static_cast<int>(gold.size());

    std::set<std::string> decoded;
    for (const Fact &fact : Decode(encoded.matrix, sentence, space)) {
      std::string key = FactKey(fact, schema);
      decoded.insert(key);
      if (gold.count(key)) {
        ++report.recovered_facts;
      } else {
        ++report.spurious_facts;
        report.mismatches.push_back(
            {sentence.id, "spurious", FactToString(fact, sentence, schema)});
      }
    }
    for (const auto &[key, fact] : gold) {
      if (!decoded.count(key)) {
        report.mismatches.push_back(
            {sentence.id, "missing", FactToString(*fact, sentence, schema)});
      }
    }
  }
  return report;
}

EdgeStats ComputeEdgeStats(const std::vector<AnnotatedSentence> &corpus,
                           const EdgeTypeSpace &space) {
  EdgeStats stats;
  stats.type_counts.assign(space.size(), 0);
  long total_edges = 0;
  double union_edges = 0, cells = 0;
  for (const AnnotatedSentence &annotated : corpus) {
    for (const Fact &fact : annotated.facts) {
      auto edges = FactEdges(fact, space);
      if (!edges) continue;
      ++stats.facts;
      total_edges += static_cast<long>(edges->size());
      ++stats.edges_per_fact_histogram[static_cast<int>(edges->size())];
      for (const Edge &edge : *edges) ++stats.type_counts[edge.channel];
    }
    const double n = annotated.sentence.size();
    union_edges += static_cast<double>(Encode(annotated, space).matrix.edge_count());
    cells += n * (n + 1) / 2 * space.size();
  }
  if (stats.facts > 0) {
    stats.mean_edges_per_fact = static_cast<double>(total_edges) / stats.facts;
  }
  stats.distinct_types_used = static_cast<int>(
      std::count_if(stats.type_counts.begin(), stats.type_counts.end(),
                    [](long count) { return count > 0; }));
  stats.density = cells > 0 ? union_edges / cells : 0.0;
  return stats;
}

}  // namespace factdag
