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

#include "factdag/schema.h"

#include <set>

#include "factdag/error.h"

namespace factdag {

Schema Schema::Default() {
  return Schema{
      {"subject", "predicate", "object", "time", "place", "qualifier"},
      {"=", "BIRTH", "DEATH", "NOT", "DESC", "ISA", "IN"}};
}

int Schema::RoleIndex(std::string_view role) const {
  for (size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] == role) return static_cast<int>(i);
  }
  return -1;
}

int Schema::VirtualIndex(std::string_view name) const {
  for (size_t i = 0; i < virtual_predicates.size(); ++i) {
    if (virtual_predicates[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<std::string> Schema::Problems() const {
  std::vector<std::string> problems;
  if (roles.empty()) problems.push_back("empty role list");
  std::set<std::string> seen;
  for (const auto &role : roles) {
    if (role.empty()) problems.push_back("empty role name");
    if (!seen.insert(role).second) problems.push_back("duplicate role " + role);
  }
  seen.clear();
  for (const auto &name : virtual_predicates) {
    if (name.empty()) problems.push_back("empty virtual predicate name");
    if (!seen.insert(name).second) {
      problems.push_back("duplicate virtual predicate " + name);
    }
  }
  return problems;
}

void Schema::Check() const {
  if (roles.empty()) throw Error("empty-schema", "schema has no roles");
  auto problems = Problems();
  if (!problems.empty()) throw Error("invalid-schema", problems.front());
}

}  // namespace factdag
