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

// Plain key/value run configuration.
//
//   # comment
//   key = value
//   keywords = climate, warming        # lists are comma separated
//
// Keys are case-sensitive and may contain dots (corpus1.documents). A
// repeated key is an error. Relative paths resolve against the directory of
// the config file.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "discomet/error.hpp"
#include "discomet/text.hpp"

namespace discomet {

class Config {
 public:
  Config() = default;

  static Config Parse(std::istream &in, const std::string &source,
                      std::filesystem::path base_dir = {}) {
    Config c;
    c.base_dir_ = std::move(base_dir);
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::string_view body = text::Trim(line);
      if (body.empty()) continue;
      auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw UsageError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
      }
      std::string key(text::Trim(body.substr(0, eq)));
      std::string value(text::Trim(body.substr(eq + 1)));
      if (key.empty()) throw UsageError(source + ":" + std::to_string(lineno) + ": empty key");
      if (!c.values_.emplace(key, value).second) {
        throw UsageError(source + ":" + std::to_string(lineno) + ": repeated key '" + key + "'");
      }
    }
    return c;
  }

  static Config Load(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    return Parse(in, path, std::filesystem::path(path).parent_path());
  }

  // Later values (command-line flags) override file values.
  void Set(const std::string &key, std::string value) { values_[key] = std::move(value); }

  bool Has(const std::string &key) const { return values_.count(key) > 0; }

  std::optional<std::string> Find(const std::string &key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }

  std::string Get(const std::string &key) const {
    auto v = Find(key);
    if (!v) throw UsageError("missing config key '" + key + "'");
    return *v;
  }

  std::string GetOr(const std::string &key, const std::string &fallback) const {
    return Find(key).value_or(fallback);
  }

  std::vector<std::string> GetList(const std::string &key) const {
    auto v = Find(key);
    return v ? text::SplitList(*v, ',') : std::vector<std::string>{};
  }

  double GetDouble(const std::string &key, double fallback) const {
    auto v = Find(key);
    if (!v) return fallback;
    try {
      size_t used = 0;
      double d = std::stod(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return d;
    } catch (const std::exception &) {
      throw UsageError("config key '" + key + "': not a number: " + *v);
    }
  }

  uint64_t GetUint(const std::string &key, uint64_t fallback) const {
    auto v = Find(key);
    if (!v) return fallback;
    try {
      if (v->empty() || (*v)[0] == '-') throw std::invalid_argument("negative");
      size_t used = 0;
      uint64_t n = std::stoull(*v, &used);
      if (used != v->size()) throw std::invalid_argument("trailing");
      return n;
    } catch (const std::exception &) {
      throw UsageError("config key '" + key + "': not a non-negative integer: " + *v);
    }
  }

  bool GetBool(const std::string &key, bool fallback) const {
    auto v = Find(key);
    if (!v) return fallback;
    std::string s = text::Lower(*v);
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw UsageError("config key '" + key + "': not a boolean: " + *v);
  }

  // Value of `key` as a path, resolved against the config directory.
  std::optional<std::string> FindPath(const std::string &key) const {
    auto v = Find(key);
    if (!v || v->empty()) return std::nullopt;
    std::filesystem::path p(*v);
    if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
    return p.lexically_normal().string();
  }

  std::string GetPath(const std::string &key) const {
    auto p = FindPath(key);
    if (!p) throw UsageError("missing config key '" + key + "'");
    return *p;
  }

  std::vector<std::string> GetPathList(const std::string &key) const {
    std::vector<std::string> out;
    for (const auto &item : GetList(key)) {
      std::filesystem::path p(item);
      if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
      out.push_back(p.lexically_normal().string());
    }
    return out;
  }

  const std::map<std::string, std::string> &values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
  std::filesystem::path base_dir_;
};

}  // namespace discomet
