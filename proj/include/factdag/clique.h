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

#ifndef FACTDAG_CLIQUE_H_
#define FACTDAG_CLIQUE_H_

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "factdag/dag_codec.h"
#include "factdag/fact.h"

namespace factdag {

// Maximal-clique representation of facts used as the comparison baseline:
// every pair of spans in a fact is linked boundary to boundary, labelled with
// the ordered role pair and one of four position tags.

enum class PositionTag { kB2B = 0, kB2E = 1, kE2B = 2, kE2E = 3 };

enum class CliqueEdgeKind { kRolePair, kNext, kVirtual };

struct CliqueEdgeType {
  CliqueEdgeKind kind = CliqueEdgeKind::kRolePair;
  int first = -1;   // first role, or virtual predicate
  int second = -1;  // second role
  PositionTag tag = PositionTag::kB2B;
};

// (r*r role pairs + NEXT) x 4 tags + v virtual predicates x 4 tags.
class CliqueEdgeTypeSpace {
 public:
  // Throws Error("empty-schema").
  explicit CliqueEdgeTypeSpace(const Schema &schema);

  int size() const { return static_cast<int>(types_.size()); }
  const Schema &schema() const { return schema_; }
  const CliqueEdgeType &type(int label) const { return types_[label]; }
  const std::string &name(int label) const { return names_[label]; }

  int RolePairLabel(int first, int second, PositionTag tag) const;
  int NextLabel(PositionTag tag) const;
  int VirtualLabel(int predicate, PositionTag tag) const;

 private:
  Schema schema_;
  std::vector<CliqueEdgeType> types_;
  std::vector<std::string> names_;
  int next_base_ = 0;
  int virtual_base_ = 0;
};

struct LabeledEdge {
  int u = 0;  // u < v
  int v = 0;
  int label = 0;

  auto operator<=>(const LabeledEdge &) const = default;
};

// Vertices 0..n-1 are word positions; n..n+v-1 are the virtual-predicate
// nodes.
struct UndirectedLabeledGraph {
  int token_count = 0;
  int vertex_count = 0;
  std::vector<LabeledEdge> edges;  // sorted, unique

  bool Has(int u, int v, int label) const;
};

// Edges of one fact before union, or nullopt when its spans are not strictly
// left to right (same condition as the DAG codec).
std::optional<std::vector<LabeledEdge>> CliqueFactEdges(
    const Fact &fact, int token_count, const CliqueEdgeTypeSpace &space,
    std::string *reason = nullptr);

UndirectedLabeledGraph CliqueEncode(const AnnotatedSentence &annotated,
                                    const CliqueEdgeTypeSpace &space,
                                    EncodeReport *report = nullptr);

// All maximal cliques of a simple undirected graph given as adjacency lists,
// by Bron-Kerbosch with Tomita pivoting. Each clique is sorted; the list is
// sorted lexicographically.
std::vector<std::vector<int>> BronKerbosch(
    const std::vector<std::vector<int>> &adjacency);

struct CliqueDecodeResult {
  std::vector<Fact> facts;
  std::vector<std::string> diagnostics;  // label-inconsistent cliques
};

// Reconstructs role-tagged spans from complete four-edge boundary quads,
// links spans into a span graph, and reads one fact per maximal clique.
CliqueDecodeResult CliqueDecode(const UndirectedLabeledGraph &graph,
                                const Sentence &sentence,
                                const CliqueEdgeTypeSpace &space);

struct RepresentationComparison {
  int facts = 0;  // facts encodable by both representations
  double dag_edges_per_fact = 0;
  double clique_edges_per_fact = 0;
  int dag_types = 0;
  int clique_types = 0;
  double dag_decode_ms = 0;     // one decode pass over the corpus
  double clique_decode_ms = 0;
};

// Measures both representations on the same corpus. Decode times are the
// median of `repeats` passes.
RepresentationComparison CompareRepresentations(
    const std::vector<AnnotatedSentence> &corpus, const Schema &schema,
    int repeats = 3);

// "corpus,representation,edges_per_fact,types,decode_ms" rows.
void WriteBenchmarkCsvHeader(std::ostream &out);
void WriteBenchmarkCsv(std::ostream &out, std::string_view corpus_name,
                       const RepresentationComparison &comparison);

}  // namespace factdag

#endif  // FACTDAG_CLIQUE_H_
