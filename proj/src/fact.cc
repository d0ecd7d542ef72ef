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

#include "factdag/fact.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "factdag/error.h"

namespace factdag {
namespace {

// Position of a role in schema order; unknown roles sort after all known ones.
int RoleRank(const Schema &schema, const std::string &role) {
  int index = schema.RoleIndex(role);
  return index < 0 ? static_cast<int>(schema.roles.size()) : index;
}

std::vector<Span> SortedSpans(std::vector<Span> spans) {
  std::sort(spans.begin(), spans.end());
  return spans;
}

// Concrete element normalized for identity comparison.
struct ElementKey {
  std::string role;
  std::vector<Span> spans;
  bool operator==(const ElementKey &) const = default;
};

bool ShareToken(const std::vector<Span> &a, const std::vector<Span> &b) {
  for (const Span &x : a) {
    for (const Span &y : b) {
      if (x.Intersects(y)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Violation> ValidateFact(const Fact &fact, const Sentence &sentence,
                                    const Schema &schema) {
  std::vector<Violation> out;
  auto add = [&out](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  std::map<std::string, int> role_counts;
  for (size_t e = 0; e < fact.elements.size(); ++e) {
    const Element &element = fact.elements[e];
    const std::string where = "element " + std::to_string(e);
    if (!schema.HasRole(element.role)) {
      add("unknown-role", where + " has role '" + element.role + "'");
    }
    ++role_counts[element.role];

    if (element.is_virtual()) {
      if (element.role != kPredicate) {
        add("virtual-on-non-predicate",
            where + " is virtual with role '" + element.role + "'");
      }
      if (!element.spans.empty()) {
        add("virtual-with-spans", where + " is virtual and has spans");
      }
      if (schema.VirtualIndex(*element.virtual_predicate) < 0) {
        add("unknown-virtual",
            where + " uses '" + *element.virtual_predicate + "'");
      }
      continue;
    }
    if (element.spans.empty()) {
      add("empty-element", where + " has neither spans nor a virtual name");
      continue;
    }
    for (const Span &span : element.spans) {
      if (span.begin > span.end) {
        add("inverted-span", where + " has span [" +
                                 std::to_string(span.begin) + "," +
                                 std::to_string(span.end) + "]");
      } else if (span.begin < 0 || span.end >= sentence.size()) {
        add("span-out-of-range",
            where + " has span [" + std::to_string(span.begin) + "," +
                std::to_string(span.end) + "] in a sentence of " +
                std::to_string(sentence.size()) + " tokens");
      }
    }
    auto sorted = SortedSpans(element.spans);
    for (size_t k = 1; k < sorted.size(); ++k) {
      if (sorted[k].begin <= sorted[k - 1].end) {
        add("overlapping-spans", where + " has overlapping spans");
        break;
      }
    }
  }

  if (role_counts[std::string(kSubject)] == 0) {
    add("missing-subject", "fact has no subject element");
  }
  if (role_counts[std::string(kPredicate)] == 0) {
    add("missing-predicate", "fact has no predicate element");
  }
  for (const auto &[role, count] : role_counts) {
    if (count > 1 && role != kObject) {
      add("duplicate-role", "role '" + role + "' appears " +
                                std::to_string(count) + " times");
    }
  }
  if (fact.confidence &&
      !(*fact.confidence >= 0.0 && *fact.confidence <= 1.0)) {
    add("bad-confidence", "confidence outside [0,1]");
  }
  return out;
}

std::vector<RoleSpan> OrderedFactSpans(const Fact &fact, const Schema &schema) {
  std::vector<RoleSpan> spans;
  for (const Element &element : fact.elements) {
    if (element.is_virtual()) continue;
    int role_index = schema.RoleIndex(element.role);
    if (role_index < 0) {
      throw Error("unknown-role", "role '" + element.role + "' not in schema");
    }
    for (const Span &span : element.spans) {
      spans.push_back({span, element.role, role_index});
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const RoleSpan &a, const RoleSpan &b) {
              return std::tie(a.span, a.role_index) <
                     std::tie(b.span, b.role_index);
            });
  for (size_t k = 1; k < spans.size(); ++k) {
    if (spans[k].span == spans[k - 1].span &&
        spans[k].role_index == spans[k - 1].role_index) {
      throw Error("duplicate-span",
                  "span [" + std::to_string(spans[k].span.begin) + "," +
                      std::to_string(spans[k].span.end) + "] with role '" +
                      spans[k].role + "' occurs twice");
    }
  }
  return spans;
}

ComplicationFlags ClassifySentence(const AnnotatedSentence &annotated) {
  ComplicationFlags flags;
  // (fact index, element key) for every concrete element.
  std::vector<std::pair<size_t, ElementKey>> elements;
  for (size_t f = 0; f < annotated.facts.size(); ++f) {
    for (const Element &element : annotated.facts[f].elements) {
      if (element.is_virtual() || element.spans.empty()) continue;
      if (element.spans.size() >= 2) flags.discontinuous = true;
      elements.push_back({f, {element.role, SortedSpans(element.spans)}});
    }
  }
  for (size_t a = 0; a < elements.size(); ++a) {
    for (size_t b = a + 1; b < elements.size(); ++b) {
      const auto &[fa, ka] = elements[a];
      const auto &[fb, kb] = elements[b];
      if (ka == kb) {
        if (fa != fb) flags.overlapping = true;
      } else if (ShareToken(ka.spans, kb.spans)) {
        flags.nested = true;
      }
    }
  }
  return flags;
}

Fact Canonicalize(const Fact &fact, const Schema &schema) {
  Fact out = fact;
  for (Element &element : out.elements) {
    std::sort(element.spans.begin(), element.spans.end());
  }
  std::stable_sort(out.elements.begin(), out.elements.end(),
                   [&schema](const Element &a, const Element &b) {
                     int ra = RoleRank(schema, a.role);
                     int rb = RoleRank(schema, b.role);
                     if (ra != rb) return ra < rb;
                     if (ra == static_cast<int>(schema.roles.size()) &&
                         a.role != b.role) {
                       return a.role < b.role;
                     }
                     if (a.spans.empty() || b.spans.empty()) {
                       return a.spans.size() < b.spans.size();
                     }
                     return a.spans.front() < b.spans.front();
                   });
  return out;
}

Fact SpliceSameRole(const Fact &fact, const Schema &schema) {
  Fact out;
  out.confidence = fact.confidence;
  for (const Element &element : Canonicalize(fact, schema).elements) {
    Element *target = nullptr;
    for (Element &existing : out.elements) {
      if (existing.role == element.role &&
          existing.is_virtual() == element.is_virtual()) {
        target = &existing;
      }
    }
    if (target == nullptr || element.is_virtual()) {
      out.elements.push_back(element);
      continue;
    }
    target->spans.insert(target->spans.end(), element.spans.begin(),
                         element.spans.end());
    std::sort(target->spans.begin(), target->spans.end());
  }
  return Canonicalize(out, schema);
}

std::string FactKey(const Fact &fact, const Schema &schema) {
  std::string key;
  for (const Element &element : Canonicalize(fact, schema).elements) {
    key += element.role;
    if (element.is_virtual()) key += "=>" + *element.virtual_predicate;
    for (const Span &span : element.spans) {
      key += '[' + std::to_string(span.begin) + ',' +
             std::to_string(span.end) + ']';
    }
    key += ';';
  }
  return key;
}

std::string FactToString(const Fact &fact, const Sentence &sentence,
                         const Schema &schema) {
  std::string text;
  bool first_element = true;
  for (const Element &element : Canonicalize(fact, schema).elements) {
    if (!first_element) text += " | ";
    first_element = false;
    if (element.is_virtual()) {
      text += *element.virtual_predicate;
      continue;
    }
    bool first_token = true;
    for (const Span &span : element.spans) {
      for (int t = span.begin; t <= span.end; ++t) {
        if (!first_token) text += ' ';
        first_token = false;
        if (t >= 0 && t < sentence.size()) text += sentence.tokens[t];
      }
    }
  }
  return text;
}

}  // namespace factdag
