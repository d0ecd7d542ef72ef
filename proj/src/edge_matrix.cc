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

#include "factdag/edge_matrix.h"

#include <charconv>
#include <istream>
#include <ostream>

#include "factdag/error.h"

namespace factdag {
namespace {

std::string FormatProbability(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

int ParseInt(const std::string &text, int line_number) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("parse-error", "line " + std::to_string(line_number) +
                                   ": bad integer '" + text + "'");
  }
  return value;
}

double ParseDouble(const std::string &text, int line_number) {
  double value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error("parse-error", "line " + std::to_string(line_number) +
                                   ": bad probability '" + text + "'");
  }
  return value;
}

void ParseEdgeLine(const std::string &line, int line_number,
                   const EdgeTypeSpace &space, EdgeMatrix &matrix) {
  auto fields = SplitTabs(line);
  if (fields.size() != 4) {
    throw Error("parse-error", "line " + std::to_string(line_number) +
                                   ": expected 4 tab-separated fields");
  }
  int channel = space.ChannelByName(fields[2]);
  if (channel < 0) {
    throw Error("parse-error", "line " + std::to_string(line_number) +
                                   ": unknown edge type '" + fields[2] + "'");
  }
  double probability = ParseDouble(fields[3], line_number);
  matrix.Add(ParseInt(fields[0], line_number), ParseInt(fields[1], line_number),
             channel, probability);
}

}  // namespace

std::string CodecVariant::Name() const {
  if (*this == Full()) return "full";
  if (*this == NoEe()) return "no-ee";
  if (*this == NoBe()) return "no-be";
  if (*this == RolePair()) return "role-pair";
  std::string name;
  if (!use_ee) name += "no-ee,";
  if (!use_be) name += "no-be,";
  if (role_pair_labels) name += "role-pair,";
  if (!name.empty()) name.pop_back();
  return name;
}

EdgeTypeSpace::EdgeTypeSpace(const Schema &schema, const CodecVariant &variant)
    : schema_(schema), variant_(variant) {
  schema_.Check();
  const int r = static_cast<int>(schema_.roles.size());
  const int v = static_cast<int>(schema_.virtual_predicates.size());
  for (int role = 0; role < r; ++role) {
    if (variant_.use_be) {
      int channel = Add({EdgeKind::kBoundary, role}, "BE-" + schema_.roles[role]);
      if (role == 0) first_boundary_ = channel;
    } else {
      int channel = Add({EdgeKind::kRoot, role}, "ROOT-" + schema_.roles[role]);
      if (role == 0) first_root_ = channel;
    }
  }
  for (int p = 0; p < v; ++p) {
    int channel = Add({EdgeKind::kVirtual, p},
                      std::string(kObject) + "->" + schema_.virtual_predicates[p]);
    if (p == 0) first_virtual_ = channel;
  }
  if (variant_.use_ee) ee_ = Add({EdgeKind::kEndEnd}, "EE");
  intra_ = Add({EdgeKind::kIntra}, "I");
  if (variant_.role_pair_labels) {
    for (int prev = 0; prev < r; ++prev) {
      for (int next = 0; next < r; ++next) {
        int channel = Add({EdgeKind::kEndBeginPair, prev, next},
                          "EB-" + schema_.roles[prev] + "->" + schema_.roles[next]);
        if (prev == 0 && next == 0) first_eb_pair_ = channel;
      }
    }
  } else {
    for (int role = 0; role < r; ++role) {
      int channel = Add({EdgeKind::kEndBegin, role}, "EB-" + schema_.roles[role]);
      if (role == 0) first_eb_ = channel;
    }
  }
}

int EdgeTypeSpace::Add(EdgeType type, std::string name) {
  int channel = size();
  types_.push_back(type);
  by_name_[name] = channel;
  names_.push_back(std::move(name));
  return channel;
}

int EdgeTypeSpace::ChannelByName(std::string_view name) const {
  auto it = by_name_.find(name);
  return it == by_name_.end() ? -1 : it->second;
}

int EdgeTypeSpace::BoundaryChannel(int role) const {
  return first_boundary_ < 0 ? -1 : first_boundary_ + role;
}

int EdgeTypeSpace::RootChannel(int role) const {
  return first_root_ < 0 ? -1 : first_root_ + role;
}

int EdgeTypeSpace::VirtualChannel(int predicate) const {
  return first_virtual_ < 0 ? -1 : first_virtual_ + predicate;
}

int EdgeTypeSpace::EndBeginChannel(int role) const {
  return first_eb_ < 0 ? -1 : first_eb_ + role;
}

int EdgeTypeSpace::EndBeginPairChannel(int previous_role, int next_role) const {
  if (first_eb_pair_ < 0) return -1;
  return first_eb_pair_ +
         previous_role * static_cast<int>(schema_.roles.size()) + next_role;
}

bool EdgeTypeSpace::AllowsDiagonal(int channel) const {
  EdgeKind kind = types_[channel].kind;
  return kind != EdgeKind::kEndEnd && kind != EdgeKind::kEndBegin &&
         kind != EdgeKind::kEndBeginPair;
}

EdgeMatrix::EdgeMatrix(int n, int channels) : n_(n), channels_(channels) {
  if (n < 0 || channels < 0) {
    throw Error("invalid-edge", "negative matrix dimensions");
  }
}

void EdgeMatrix::Add(int i, int j, int channel, double probability) {
  if (i < 0 || j >= n_ || i > j || channel < 0 || channel >= channels_) {
    throw Error("invalid-edge", "edge (" + std::to_string(i) + "," +
                                    std::to_string(j) + "," +
                                    std::to_string(channel) +
                                    ") outside the upper triangle of a " +
                                    std::to_string(n_) + "x" +
                                    std::to_string(n_) + " matrix");
  }
  if (!(probability >= 0.0 && probability <= 1.0)) {
    throw Error("invalid-edge", "probability outside [0,1]");
  }
  if (probability != 1.0) has_probabilities_ = true;
  auto [it, inserted] = entries_.emplace(Key(i, j, channel), probability);
  if (!inserted && probability > it->second) it->second = probability;
}

bool EdgeMatrix::Has(int i, int j, int channel) const {
  if (i < 0 || j >= n_ || i > j || channel < 0 || channel >= channels_) {
    return false;
  }
  return entries_.count(Key(i, j, channel)) > 0;
}

std::optional<double> EdgeMatrix::Probability(int i, int j, int channel) const {
  if (!Has(i, j, channel)) return std::nullopt;
  return entries_.at(Key(i, j, channel));
}

std::vector<Edge> EdgeMatrix::Edges() const {
  std::vector<Edge> edges;
  edges.reserve(entries_.size());
  for (const auto &[key, probability] : entries_) {
    int64_t cell = key / channels_;
    edges.push_back({static_cast<int>(cell / n_), static_cast<int>(cell % n_),
                     static_cast<int>(key % channels_), probability});
  }
  return edges;
}

void CheckEdges(const EdgeMatrix &matrix, const EdgeTypeSpace &space) {
  if (matrix.channels() != space.size()) {
    throw Error("shape-mismatch",
                "matrix has " + std::to_string(matrix.channels()) +
                    " channels, edge-type space has " +
                    std::to_string(space.size()));
  }
  for (const Edge &edge : matrix.Edges()) {
    if (edge.i == edge.j && !space.AllowsDiagonal(edge.channel)) {
      throw Error("invalid-edge", space.name(edge.channel) +
                                      " on the diagonal at " +
                                      std::to_string(edge.i));
    }
  }
}

void WriteEdges(std::ostream &out, const EdgeMatrix &matrix,
                const EdgeTypeSpace &space) {
  for (const Edge &edge : matrix.Edges()) {
    out << edge.i << '\t' << edge.j << '\t' << space.name(edge.channel) << '\t'
        << FormatProbability(edge.probability) << '\n';
  }
}

EdgeMatrix ReadEdges(std::istream &in, int n, const EdgeTypeSpace &space) {
  EdgeMatrix matrix(n, space.size());
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    ParseEdgeLine(line, line_number, space, matrix);
  }
  CheckEdges(matrix, space);
  return matrix;
}

void WriteEdgeFile(std::ostream &out, const std::vector<SentenceEdges> &items,
                   const EdgeTypeSpace &space) {
  for (const SentenceEdges &item : items) {
    out << "# " << item.id << '\t' << item.matrix.size() << '\n';
    WriteEdges(out, item.matrix, space);
  }
}

std::vector<SentenceEdges> ReadEdgeFile(std::istream &in,
                                        const EdgeTypeSpace &space) {
  std::vector<SentenceEdges> items;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      auto fields = SplitTabs(line.substr(2));
      if (fields.size() != 2) {
        throw Error("parse-error", "line " + std::to_string(line_number) +
                                       ": expected '# <id>\\t<n>'");
      }
      items.push_back({fields[0],
                       EdgeMatrix(ParseInt(fields[1], line_number), space.size())});
      continue;
    }
    if (items.empty()) {
      throw Error("parse-error", "line " + std::to_string(line_number) +
                                     ": edge before any sentence header");
    }
    ParseEdgeLine(line, line_number, space, items.back().matrix);
  }
  for (const SentenceEdges &item : items) CheckEdges(item.matrix, space);
  return items;
}

}  // namespace factdag
