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

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace discomet {

// One structured warning. Serialized as a JSON Lines record
// {"op": ..., "doc_id": ..., "reason": ...}.
struct Warning {
  std::string op;
  std::string doc_id;
  std::string reason;

  bool operator==(const Warning &) const = default;
};

// Collects warnings emitted by filters and analyses. Operations take an
// optional pointer; a null sink drops warnings.
class Diagnostics {
 public:
  void Warn(std::string op, std::string doc_id, std::string reason) {
    warnings_.push_back({std::move(op), std::move(doc_id), std::move(reason)});
  }

  const std::vector<Warning> &warnings() const { return warnings_; }
  bool empty() const { return warnings_.empty(); }
  size_t size() const { return warnings_.size(); }

  size_t Count(const std::string &op) const {
    size_t n = 0;
    for (const auto &w : warnings_) n += (w.op == op);
    return n;
  }

  void WriteJsonLines(std::ostream &out) const {
    for (const auto &w : warnings_) {
      nlohmann::ordered_json j;
      j["op"] = w.op;
      j["doc_id"] = w.doc_id;
      j["reason"] = w.reason;
      out << j.dump() << '\n';
    }
  }

 private:
  std::vector<Warning> warnings_;
};

inline void Warn(Diagnostics *sink, std::string op, std::string doc_id,
                 std::string reason) {
  if (sink != nullptr) sink->Warn(std::move(op), std::move(doc_id), std::move(reason));
}

}  // namespace discomet
