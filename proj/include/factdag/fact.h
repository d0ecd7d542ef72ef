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

#ifndef FACTDAG_FACT_H_
#define FACTDAG_FACT_H_

#include <optional>
#include <string>
#include <vector>

#include "factdag/schema.h"

namespace factdag {

struct Sentence {
  std::string id;
  std::vector<std::string> tokens;

  int size() const { return static_cast<int>(tokens.size()); }
};

// Inclusive token range [begin, end], 0-based.
struct Span {
  int begin = 0;
  int end = 0;

  int length() const { return end - begin + 1; }
  bool Intersects(const Span &other) const {
    return begin <= other.end && other.begin <= end;
  }

  auto operator<=>(const Span &) const = default;
};

// One role-tagged constituent of a fact: either one or more text spans or a
// virtual predicate that does not occur in the text.
struct Element {
  std::string role;
  std::vector<Span> spans;
  std::optional<std::string> virtual_predicate;

  bool is_virtual() const { return virtual_predicate.has_value(); }

  bool operator==(const Element &) const = default;
};

struct Fact {
  std::vector<Element> elements;
  std::optional<double> confidence;

  bool operator==(const Fact &) const = default;
};

struct AnnotatedSentence {
  Sentence sentence;
  std::optional<std::string> domain;
  std::vector<Fact> facts;
};

// A corpus line is exactly an annotated sentence.
using CorpusRecord = AnnotatedSentence;

struct Violation {
  std::string code;
  std::string detail;
};

// Every invariant violation of a fact with respect to a sentence and schema.
// Codes: unknown-role, span-out-of-range, inverted-span, empty-element,
// virtual-on-non-predicate, virtual-with-spans, unknown-virtual,
// overlapping-spans, missing-subject, missing-predicate, duplicate-role,
// bad-confidence.
std::vector<Violation> ValidateFact(const Fact &fact, const Sentence &sentence,
                                    const Schema &schema);

struct RoleSpan {
  Span span;
  std::string role;
  int role_index = -1;

  bool operator==(const RoleSpan &) const = default;
};

// Concrete spans of all elements merged in text order (begin, then end, then
// schema role order). Virtual elements contribute nothing. Throws
// Error("duplicate-span") when one (begin, end, role) triple occurs twice and
// Error("unknown-role") for roles outside the schema.
std::vector<RoleSpan> OrderedFactSpans(const Fact &fact, const Schema &schema);

struct ComplicationFlags {
  bool overlapping = false;
  bool discontinuous = false;
  bool nested = false;

  bool complicated() const { return overlapping || discontinuous || nested; }
  bool operator==(const ComplicationFlags &) const = default;
};

// Sentence-level complication classes:
//  discontinuous: some element has two or more spans;
//  overlapping:   two facts contain an identical concrete element, where
//                 identity is (role, span multiset);
//  nested:        two non-identical concrete elements share a token.
ComplicationFlags ClassifySentence(const AnnotatedSentence &annotated);

// Canonical rendering used by the Gestalt metric: elements in schema role
// order, spans in text order, tokens joined by ' ', elements by " | ".
std::string FactToString(const Fact &fact, const Sentence &sentence,
                         const Schema &schema);

// Merges same-role elements and sorts every element's spans, yielding the
// form a decoder can reproduce. Element order follows the schema.
Fact SpliceSameRole(const Fact &fact, const Schema &schema);

// Structural identity of a fact: roles and exact spans, element order and
// span order normalized. Two facts with equal keys are the same fact.
std::string FactKey(const Fact &fact, const Schema &schema);

// Sorts spans inside every element and orders elements by (schema role, first
// span). Content is unchanged.
Fact Canonicalize(const Fact &fact, const Schema &schema);

}  // namespace factdag

#endif  // FACTDAG_FACT_H_
