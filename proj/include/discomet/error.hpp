// Copyright 2026 The discomet Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace discomet {

// Broad failure classes. The CLI maps them onto process exit codes.
enum class ErrorKind {
  kUsage,      // bad flags, missing/unreadable config or input paths
  kData,       // an input record violates a data-model invariant
  kInternal,   // broken internal contract
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error UsageError(const std::string &message) {
  return Error(ErrorKind::kUsage, message);
}

inline Error DataError(const std::string &message) {
  return Error(ErrorKind::kData, message);
}

// Data error located in a line-oriented input file.
inline Error DataError(const std::string &path, size_t line,
                       const std::string &field, const std::string &message) {
  std::string where = path + ":" + std::to_string(line);
  if (!field.empty()) where += " [" + field + "]";
  return Error(ErrorKind::kData, where + ": " + message);
}

}  // namespace discomet
