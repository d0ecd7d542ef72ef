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

#ifndef FACTDAG_ERROR_H_
#define FACTDAG_ERROR_H_

#include <stdexcept>
#include <string>

namespace factdag {

// Error raised by library operations. The code is a stable machine-readable
// identifier such as "empty-schema" or "shape-mismatch".
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

 private:
  std::string code_;
};

// I/O failures (missing files, unwritable paths) are distinguished from
// validation failures so the command-line tool can map them to exit codes.
class IoError : public Error {
 public:
  explicit IoError(const std::string &message) : Error("io-error", message) {}
};

}  // namespace factdag

#endif  // FACTDAG_ERROR_H_
