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

#ifndef FACTDAG_EDGE_MATRIX_H_
#define FACTDAG_EDGE_MATRIX_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "factdag/schema.h"

namespace factdag {

// Ablation switches of the DAG codec. The default is the full codec.
struct CodecVariant {
  bool use_ee = true;            // inter-span EE edges
  bool use_be = true;            // intra-fact BE-X edges; ROOT-X when false
  bool role_pair_labels = false; // EB labelled with (previous, next) roles

  static CodecVariant Full() { return {}; }
  static CodecVariant NoEe() { return {false, true, false}; }
  static CodecVariant NoBe() { return {true, false, false}; }
  static CodecVariant RolePair() { return {true, true, true}; }

  std::string Name() const;
  bool operator==(const CodecVariant &) const = default;
};

enum class EdgeKind {
  kBoundary,     // BE-X: first span begin -> last span end, X = first role
  kRoot,         // ROOT-X: on the first span's (begin, end) when BE is ablated
  kVirtual,      // object->V: virtual predicate on the first object span
  kEndEnd,       // EE: end of a span -> end of the next span
  kIntra,        // I: begin of a span -> end of the same span
  kEndBegin,     // EB-X: end of a span -> begin of the next span, X its role
  kEndBeginPair  // EB-X->Y: as EB with both roles
};

struct EdgeType {
  EdgeKind kind = EdgeKind::kIntra;
  int index = -1;       // role or virtual predicate; previous role for pairs
  int next_index = -1;  // next role for kEndBeginPair

  bool operator==(const EdgeType &) const = default;
};

// The ordered label channels of the DAG representation for one schema and
// variant. Order: BE (or ROOT) per role, virtual predicates, EE, I, EB per
// role (or per role pair).
class EdgeTypeSpace {
 public:
  // Throws Error("empty-schema") when the schema has no roles.
  EdgeTypeSpace(const Schema &schema, const CodecVariant &variant);

  int size() const { return static_cast<int>(types_.size()); }
  const Schema &schema() const { return schema_; }
  const CodecVariant &variant() const { return variant_; }

  const EdgeType &type(int channel) const { return types_[channel]; }
  const std::string &name(int channel) const { return names_[channel]; }

  // Channel of a name as produced by name(), -1 when absent.
  int ChannelByName(std::string_view name) const;

  // Channel lookups; -1 when the variant has no such channel.
  int BoundaryChannel(int role) const;
  int RootChannel(int role) const;
  int VirtualChannel(int predicate) const;
  int EndEndChannel() const { return ee_; }
  int IntraChannel() const { return intra_; }
  int EndBeginChannel(int role) const;
  int EndBeginPairChannel(int previous_role, int next_role) const;

  // EB and EE labels connect two different words; all other channels may sit
  // on the diagonal (single-word spans).
  bool AllowsDiagonal(int channel) const;

 private:
  int Add(EdgeType type, std::string name);

  Schema schema_;
  CodecVariant variant_;
  std::vector<EdgeType> types_;
  std::vector<std::string> names_;
  std::map<std::string, int, std::less<>> by_name_;
  int first_boundary_ = -1;
  int first_root_ = -1;
  int first_virtual_ = -1;
  int ee_ = -1;
  int intra_ = -1;
  int first_eb_ = -1;
  int first_eb_pair_ = -1;
};

struct Edge {
  int i = 0;
  int j = 0;
  int channel = 0;
  double probability = 1.0;

  bool operator==(const Edge &) const = default;
};

// Multi-label adjacency over word pairs (i, j) with i <= j and c channels.
// Entries carry a probability; gold matrices use 1.
class EdgeMatrix {
 public:
  EdgeMatrix() = default;
  EdgeMatrix(int n, int channels);

  int size() const { return n_; }
  int channels() const { return channels_; }
  size_t edge_count() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // Adds an entry. A repeated (i, j, channel) keeps the larger probability.
  // Throws Error("invalid-edge") for i > j or indices out of range.
  void Add(int i, int j, int channel, double probability = 1.0);

  bool Has(int i, int j, int channel) const;
  std::optional<double> Probability(int i, int j, int channel) const;

  // Entries sorted by (i, j, channel).
  std::vector<Edge> Edges() const;

  // True when any entry has probability other than exactly 1.
  bool has_probabilities() const { return has_probabilities_; }
  void set_has_probabilities(bool value) { has_probabilities_ = value; }

  bool operator==(const EdgeMatrix &) const = default;

 private:
  int64_t Key(int i, int j, int channel) const {
    return (static_cast<int64_t>(i) * n_ + j) * channels_ + channel;
  }

  int n_ = 0;
  int channels_ = 0;
  bool has_probabilities_ = false;
  std::map<int64_t, double> entries_;
};

// Rejects entries that the representation cannot hold: EB/EE on the
// diagonal. Throws Error("invalid-edge").
void CheckEdges(const EdgeMatrix &matrix, const EdgeTypeSpace &space);

// Debug text form: one edge per line "i\tj\tedge-type-name\tprobability",
// sorted by (i, j, channel).
void WriteEdges(std::ostream &out, const EdgeMatrix &matrix,
                const EdgeTypeSpace &space);
EdgeMatrix ReadEdges(std::istream &in, int n, const EdgeTypeSpace &space);

// Corpus-level edge file: each sentence is introduced by a header line
// "# <id>\t<n>" followed by its edge lines.
struct SentenceEdges {
  std::string id;
  EdgeMatrix matrix;
};
void WriteEdgeFile(std::ostream &out, const std::vector<SentenceEdges> &items,
                   const EdgeTypeSpace &space);
std::vector<SentenceEdges> ReadEdgeFile(std::istream &in,
                                        const EdgeTypeSpace &space);

}  // namespace factdag

#endif  // FACTDAG_EDGE_MATRIX_H_
