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

#ifndef FACTDAG_SCHEMA_H_
#define FACTDAG_SCHEMA_H_

#include <string>
#include <string_view>
#include <vector>

namespace factdag {

// Role vocabulary and virtual-predicate vocabulary. Together they fix the
// number of edge-type channels of both graph representations.
struct Schema {
  std::vector<std::string> roles;
  std::vector<std::string> virtual_predicates;

  // Six roles and seven virtual predicates of the SAOKE annotation scheme.
  static Schema Default();

  // Index of a role or virtual predicate, -1 when absent.
  int RoleIndex(std::string_view role) const;
  int VirtualIndex(std::string_view name) const;

  bool HasRole(std::string_view role) const { return RoleIndex(role) >= 0; }

  // Invariant violations: empty or duplicate role names, duplicate virtual
  // predicates. Empty when the schema is usable.
  std::vector<std::string> Problems() const;

  // Throws Error("empty-schema") for an empty role list and
  // Error("invalid-schema") for any other problem.
  void Check() const;

  bool operator==(const Schema &other) const = default;
};

// Role names with fixed meaning in facts.
inline constexpr std::string_view kSubject = "subject";
inline constexpr std::string_view kPredicate = "predicate";
inline constexpr std::string_view kObject = "object";

}  // namespace factdag

#endif  // FACTDAG_SCHEMA_H_
