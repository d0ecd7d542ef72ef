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

#include "factdag/clique.h"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "factdag/error.h"

namespace factdag {
namespace {

constexpr PositionTag kTags[] = {PositionTag::kB2B, PositionTag::kB2E,
                                 PositionTag::kE2B, PositionTag::kE2E};
constexpr const char *kTagNames[] = {"B2B", "B2E", "E2B", "E2E"};

LabeledEdge Undirected(int a, int b, int label) {
  return a < b ? LabeledEdge{a, b, label} : LabeledEdge{b, a, label};
}

// Four boundary links between two spans, first span before second.
void LinkSpans(const Span &first, const Span &second,
               const std::function<int(PositionTag)> &label,
               std::vector<LabeledEdge> &out) {
  out.push_back(Undirected(first.begin, second.begin, label(PositionTag::kB2B)));
  out.push_back(Undirected(first.begin, second.end, label(PositionTag::kB2E)));
  out.push_back(Undirected(first.end, second.begin, label(PositionTag::kE2B)));
  out.push_back(Undirected(first.end, second.end, label(PositionTag::kE2E)));
}

void Expand(const std::vector<std::vector<char>> &adjacent, std::vector<int> &clique,
            std::vector<int> candidates, std::vector<int> excluded,
            std::vector<std::vector<int>> &out) {
  if (candidates.empty()) {
    if (excluded.empty()) {
      std::vector<int> sorted = clique;
      std::sort(sorted.begin(), sorted.end());
      out.push_back(std::move(sorted));
    }
    return;
  }
  // Tomita pivot: the vertex of P u X with most neighbours in P.
  int pivot = -1;
  long best = -1;
  for (const auto *group : {&candidates, &excluded}) {
    for (int u : *group) {
      long count = std::count_if(candidates.begin(), candidates.end(),
                                 [&](int w) { return adjacent[u][w] != 0; });
      if (count > best) {
        best = count;
        pivot = u;
      }
    }
  }
  std::vector<int> branch;
  for (int v : candidates) {
    if (!adjacent[pivot][v]) branch.push_back(v);
  }
  for (int v : branch) {
    std::vector<int> next_candidates, next_excluded;
    for (int w : candidates) {
      if (adjacent[v][w]) next_candidates.push_back(w);
    }
    for (int w : excluded) {
      if (adjacent[v][w]) next_excluded.push_back(w);
    }
    clique.push_back(v);
    Expand(adjacent, clique, std::move(next_candidates), std::move(next_excluded),
           out);
    clique.pop_back();
    candidates.erase(std::find(candidates.begin(), candidates.end(), v));
    excluded.push_back(v);
  }
}

double Median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return values.empty() ? 0.0 : values[values.size() / 2];
}

}  // namespace

CliqueEdgeTypeSpace::CliqueEdgeTypeSpace(const Schema &schema) : schema_(schema) {
  schema_.Check();
  const int r = static_cast<int>(schema_.roles.size());
  for (int a = 0; a < r; ++a) {
    for (int b = 0; b < r; ++b) {
      for (int t = 0; t < 4; ++t) {
        types_.push_back({CliqueEdgeKind::kRolePair, a, b, kTags[t]});
        names_.push_back("ROLE-PAIR->" + schema_.roles[a] + "->" +
                         schema_.roles[b] + "-" + kTagNames[t]);
      }
    }
  }
  next_base_ = size();
  for (int t = 0; t < 4; ++t) {
    types_.push_back({CliqueEdgeKind::kNext, -1, -1, kTags[t]});
    names_.push_back(std::string("NEXT-") + kTagNames[t]);
  }
  virtual_base_ = size();
  for (size_t p = 0; p < schema_.virtual_predicates.size(); ++p) {
    for (int t = 0; t < 4; ++t) {
      types_.push_back({CliqueEdgeKind::kVirtual, static_cast<int>(p), -1, kTags[t]});
      names_.push_back("PREDEFINED-CLI->" + schema_.virtual_predicates[p] + "-" +
                       kTagNames[t]);
    }
  }
}

int CliqueEdgeTypeSpace::RolePairLabel(int first, int second,
                                       PositionTag tag) const {
  const int r = static_cast<int>(schema_.roles.size());
  return (first * r + second) * 4 + static_cast<int>(tag);
}

int CliqueEdgeTypeSpace::NextLabel(PositionTag tag) const {
  return next_base_ + static_cast<int>(tag);
}

int CliqueEdgeTypeSpace::VirtualLabel(int predicate, PositionTag tag) const {
  return virtual_base_ + predicate * 4 + static_cast<int>(tag);
}

bool UndirectedLabeledGraph::Has(int u, int v, int label) const {
  LabeledEdge edge = Undirected(u, v, label);
  return std::binary_search(edges.begin(), edges.end(), edge);
}

std::optional<std::vector<LabeledEdge>> CliqueFactEdges(
    const Fact &fact, int token_count, const CliqueEdgeTypeSpace &space,
    std::string *reason) {
  auto fail = [reason](const char *code) {
    if (reason != nullptr) *reason = code;
    return std::nullopt;
  };
  const Schema &schema = space.schema();
  std::vector<RoleSpan> spans;
  try {
    spans = OrderedFactSpans(fact, schema);
  } catch (const Error &e) {
    if (e.code() == "duplicate-span") return fail("duplicate-span");
    throw;
  }
  if (spans.empty()) return fail("empty-fact");
  for (size_t k = 0; k + 1 < spans.size(); ++k) {
    if (spans[k + 1].span.begin <= spans[k].span.end) return fail("backward-edge");
  }

  std::vector<LabeledEdge> edges;
  for (size_t a = 0; a < spans.size(); ++a) {
    for (size_t b = a + 1; b < spans.size(); ++b) {
      LinkSpans(spans[a].span, spans[b].span,
                [&](PositionTag tag) {
                  return space.RolePairLabel(spans[a].role_index,
                                             spans[b].role_index, tag);
                },
                edges);
    }
  }
  // NEXT between text-adjacent spans of the same element role.
  std::map<int, const RoleSpan *> last_of_role;
  for (const RoleSpan &s : spans) {
    auto it = last_of_role.find(s.role_index);
    if (it != last_of_role.end()) {
      LinkSpans(it->second->span, s.span,
                [&](PositionTag tag) { return space.NextLabel(tag); }, edges);
    }
    last_of_role[s.role_index] = &s;
  }
  for (const Element &element : fact.elements) {
    if (!element.is_virtual()) continue;
    int predicate = schema.VirtualIndex(*element.virtual_predicate);
    if (predicate < 0) {
      throw Error("unknown-virtual", "virtual predicate '" +
                                         *element.virtual_predicate +
                                         "' not in schema");
    }
    const int node = token_count + predicate;
    for (const RoleSpan &s : spans) {
      edges.push_back(Undirected(node, s.span.begin,
                                 space.VirtualLabel(predicate, PositionTag::kB2B)));
      edges.push_back(Undirected(node, s.span.end,
                                 space.VirtualLabel(predicate, PositionTag::kB2E)));
      edges.push_back(Undirected(node, s.span.begin,
                                 space.VirtualLabel(predicate, PositionTag::kE2B)));
      edges.push_back(Undirected(node, s.span.end,
                                 space.VirtualLabel(predicate, PositionTag::kE2E)));
    }
    break;
  }
  return edges;
}

UndirectedLabeledGraph CliqueEncode(const AnnotatedSentence &annotated,
                                    const CliqueEdgeTypeSpace &space,
                                    EncodeReport *report) {
  UndirectedLabeledGraph graph;
  graph.token_count = annotated.sentence.size();
  graph.vertex_count =
      graph.token_count + static_cast<int>(space.schema().virtual_predicates.size());
  EncodeReport local;
  for (size_t f = 0; f < annotated.facts.size(); ++f) {
    ++local.facts_total;
    std::string reason;
    auto edges = CliqueFactEdges(annotated.facts[f], graph.token_count, space,
                                 &reason);
    if (!edges) {
      ++local.facts_uncoverable;
      local.reasons.push_back({static_cast<int>(f), reason});
      continue;
    }
    ++local.facts_encoded;
    graph.edges.insert(graph.edges.end(), edges->begin(), edges->end());
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()),
                    graph.edges.end());
  if (report != nullptr) report->Merge(local);
  return graph;
}

std::vector<std::vector<int>> BronKerbosch(
    const std::vector<std::vector<int>> &adjacency) {
  const int n = static_cast<int>(adjacency.size());
  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (int u = 0; u < n; ++u) {
    for (int v : adjacency[u]) {
      if (v == u || v < 0 || v >= n) continue;
      adjacent[u][v] = adjacent[v][u] = 1;
    }
  }
  std::vector<int> all(n);
  for (int u = 0; u < n; ++u) all[u] = u;
  std::vector<std::vector<int>> cliques;
  std::vector<int> clique;
  if (n > 0) Expand(adjacent, clique, all, {}, cliques);
  std::sort(cliques.begin(), cliques.end());
  return cliques;
}

CliqueDecodeResult CliqueDecode(const UndirectedLabeledGraph &graph,
                                const Sentence &sentence,
                                const CliqueEdgeTypeSpace &space) {
  if (graph.token_count != sentence.size()) {
    throw Error("shape-mismatch", "graph and sentence lengths differ");
  }
  const Schema &schema = space.schema();
  const int r = static_cast<int>(schema.roles.size());
  const int vertices = graph.vertex_count;

  // Role-pair edges indexed for quad completion, keyed by (vertex, pair).
  auto slot = [&](int vertex, int pair) {
    return static_cast<int64_t>(vertex) * r * r + pair;
  };
  std::vector<std::tuple<int, int, int>> begin_begin;  // (u, v, pair)
  std::unordered_map<int64_t, std::vector<int>> end_begin_by_target;
  std::unordered_map<int64_t, std::vector<int>> begin_end_by_source;
  std::unordered_set<int64_t> end_end;
  auto cell = [&](int u, int v, int pair) {
    return (static_cast<int64_t>(u) * vertices + v) * r * r + pair;
  };
  for (const LabeledEdge &edge : graph.edges) {
    const CliqueEdgeType &type = space.type(edge.label);
    if (type.kind != CliqueEdgeKind::kRolePair) continue;
    const int pair = type.first * r + type.second;
    switch (type.tag) {
      case PositionTag::kB2B:
        begin_begin.emplace_back(edge.u, edge.v, pair);
        break;
      case PositionTag::kE2B:
        end_begin_by_target[slot(edge.v, pair)].push_back(edge.u);
        break;
      case PositionTag::kB2E:
        begin_end_by_source[slot(edge.u, pair)].push_back(edge.v);
        break;
      case PositionTag::kE2E:
        end_end.insert(cell(edge.u, edge.v, pair));
        break;
    }
  }

  // Span nodes: (begin, end, role); virtual nodes appended later.
  std::map<std::tuple<int, int, int>, int> node_of;
  std::vector<std::tuple<int, int, int>> nodes;
  auto node = [&](int b, int e, int role) {
    auto [it, inserted] = node_of.emplace(std::make_tuple(b, e, role),
                                          static_cast<int>(nodes.size()));
    if (inserted) nodes.emplace_back(b, e, role);
    return it->second;
  };
  std::set<std::pair<int, int>> links;
  for (const auto &[first_begin, second_begin, pair] : begin_begin) {
    auto ends = end_begin_by_target.find(slot(second_begin, pair));
    auto second_ends = begin_end_by_source.find(slot(first_begin, pair));
    if (ends == end_begin_by_target.end() ||
        second_ends == begin_end_by_source.end()) {
      continue;
    }
    for (int first_end : ends->second) {
      if (first_end < first_begin || first_end >= second_begin) continue;
      for (int second_end : second_ends->second) {
        if (second_end < second_begin) continue;
        if (!end_end.count(cell(first_end, second_end, pair))) continue;
        // A NEXT-B2E link between the span's own boundaries means the
        // candidate is two pieces of one discontinuous element read as one.
        if (graph.Has(first_begin, first_end, space.NextLabel(PositionTag::kB2E)) ||
            graph.Has(second_begin, second_end, space.NextLabel(PositionTag::kB2E))) {
          continue;
        }
        int a = node(first_begin, first_end, pair / r);
        int b = node(second_begin, second_end, pair % r);
        if (a != b) links.insert(std::minmax(a, b));
      }
    }
  }

  const int span_nodes = static_cast<int>(nodes.size());
  const int predicates = static_cast<int>(schema.virtual_predicates.size());
  std::vector<std::vector<int>> adjacency(span_nodes + predicates);
  for (const auto &[a, b] : links) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }
  for (int p = 0; p < predicates; ++p) {
    const int vertex = graph.token_count + p;
    for (int k = 0; k < span_nodes; ++k) {
      const auto &[b, e, role] = nodes[k];
      if (graph.Has(vertex, b, space.VirtualLabel(p, PositionTag::kB2B)) &&
          graph.Has(vertex, e, space.VirtualLabel(p, PositionTag::kB2E)) &&
          graph.Has(vertex, b, space.VirtualLabel(p, PositionTag::kE2B)) &&
          graph.Has(vertex, e, space.VirtualLabel(p, PositionTag::kE2E))) {
        adjacency[k].push_back(span_nodes + p);
        adjacency[span_nodes + p].push_back(k);
      }
    }
  }

  CliqueDecodeResult result;
  std::map<std::string, Fact> found;
  const bool needs_shape = schema.HasRole(kSubject) && schema.HasRole(kPredicate);
  for (const std::vector<int> &clique : BronKerbosch(adjacency)) {
    if (clique.size() < 2) continue;
    std::vector<int> virtual_nodes;
    std::map<int, std::vector<Span>> spans_of_role;
    for (int k : clique) {
      if (k >= span_nodes) {
        virtual_nodes.push_back(k - span_nodes);
        continue;
      }
      const auto &[b, e, role] = nodes[k];
      spans_of_role[role].push_back({b, e});
    }
    std::string problem;
    const int predicate_role = schema.RoleIndex(kPredicate);
    if (virtual_nodes.size() > 1) {
      problem = "several virtual predicates";
    } else if (!virtual_nodes.empty() && spans_of_role.count(predicate_role)) {
      problem = "virtual and textual predicate";
    }
    for (auto &[role, spans] : spans_of_role) {
      std::sort(spans.begin(), spans.end());
      for (size_t k = 1; k < spans.size() && problem.empty(); ++k) {
        if (spans[k].begin <= spans[k - 1].end) {
          problem = "overlapping " + schema.roles[role] + " spans";
        } else if (!graph.Has(spans[k - 1].begin, spans[k].begin,
                              space.NextLabel(PositionTag::kB2B)) ||
                   !graph.Has(spans[k - 1].begin, spans[k].end,
                              space.NextLabel(PositionTag::kB2E)) ||
                   !graph.Has(spans[k - 1].end, spans[k].begin,
                              space.NextLabel(PositionTag::kE2B)) ||
                   !graph.Has(spans[k - 1].end, spans[k].end,
                              space.NextLabel(PositionTag::kE2E))) {
          problem = "missing NEXT between " + schema.roles[role] + " spans";
        }
      }
    }
    if (!problem.empty()) {
      result.diagnostics.push_back("sentence '" + sentence.id + "': clique of " +
                                   std::to_string(clique.size()) +
                                   " nodes skipped (" + problem + ")");
      continue;
    }
    Fact fact;
    for (auto &[role, spans] : spans_of_role) {
      fact.elements.push_back({schema.roles[role], spans, std::nullopt});
    }
    for (int p : virtual_nodes) {
      fact.elements.push_back(
          {std::string(kPredicate), {}, schema.virtual_predicates[p]});
    }
    if (needs_shape) {
      bool has_subject = false, has_predicate = false;
      for (const Element &element : fact.elements) {
        has_subject |= element.role == kSubject;
        has_predicate |= element.role == kPredicate;
      }
      if (!has_subject || !has_predicate) continue;
    }
    fact = Canonicalize(fact, schema);
    found.emplace(FactKey(fact, schema), std::move(fact));
  }
  for (auto &[key, fact] : found) result.facts.push_back(std::move(fact));
  return result;
}

RepresentationComparison CompareRepresentations(
    const std::vector<AnnotatedSentence> &corpus, const Schema &schema,
    int repeats) {
  using Clock = std::chrono::steady_clock;
  const EdgeTypeSpace dag_space(schema, CodecVariant::Full());
  const CliqueEdgeTypeSpace clique_space(schema);

  RepresentationComparison out;
  out.dag_types = dag_space.size();
  out.clique_types = clique_space.size();

  long dag_edges = 0, clique_edges = 0;
  std::vector<EdgeMatrix> matrices;
  std::vector<UndirectedLabeledGraph> graphs;
  matrices.reserve(corpus.size());
  graphs.reserve(corpus.size());
  for (const AnnotatedSentence &annotated : corpus) {
    for (const Fact &fact : annotated.facts) {
      auto dag = FactEdges(fact, dag_space);
      auto clique = CliqueFactEdges(fact, annotated.sentence.size(), clique_space);
      if (!dag || !clique) continue;
      ++out.facts;
      dag_edges += static_cast<long>(dag->size());
      clique_edges += static_cast<long>(clique->size());
    }
    matrices.push_back(Encode(annotated, dag_space).matrix);
    graphs.push_back(CliqueEncode(annotated, clique_space));
  }
  if (out.facts > 0) {
    out.dag_edges_per_fact = static_cast<double>(dag_edges) / out.facts;
    out.clique_edges_per_fact = static_cast<double>(clique_edges) / out.facts;
  }

  std::vector<double> dag_ms, clique_ms;
  size_t sink = 0;
  for (int pass = 0; pass < std::max(1, repeats); ++pass) {
    auto start = Clock::now();
    for (size_t s = 0; s < corpus.size(); ++s) {
      sink += Decode(matrices[s], corpus[s].sentence, dag_space).size();
    }
    auto middle = Clock::now();
    for (size_t s = 0; s < corpus.size(); ++s) {
      sink += CliqueDecode(graphs[s], corpus[s].sentence, clique_space).facts.size();
    }
    auto end = Clock::now();
    dag_ms.push_back(
        std::chrono::duration<double, std::milli>(middle - start).count());
    clique_ms.push_back(
        std::chrono::duration<double, std::milli>(end - middle).count());
  }
  // Keeps the decode loops observable.
  if (sink == static_cast<size_t>(-1)) out.facts = -1;
  out.dag_decode_ms = Median(dag_ms);
  out.clique_decode_ms = Median(clique_ms);
  return out;
}

void WriteBenchmarkCsvHeader(std::ostream &out) {
  out << "corpus,representation,edges_per_fact,types,decode_ms\n";
}

void WriteBenchmarkCsv(std::ostream &out, std::string_view corpus_name,
                       const RepresentationComparison &comparison) {
  auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << corpus_name << ",dag," << comparison.dag_edges_per_fact << ','
      << comparison.dag_types << ',' << comparison.dag_decode_ms << '\n';
  out << corpus_name << ",clique," << comparison.clique_edges_per_fact << ','
      << comparison.clique_types << ',' << comparison.clique_decode_ms << '\n';
  out.flags(flags);
}

}  // namespace factdag
