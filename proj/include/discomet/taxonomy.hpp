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

#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "discomet/error.hpp"
#include "discomet/text.hpp"

namespace discomet {

enum class TaxonomyKind { kSemanticFrame, kSourceDomain };

inline const char *TaxonomyKindName(TaxonomyKind kind) {
  return kind == TaxonomyKind::kSemanticFrame ? "frame" : "domain";
}

// Ordered set of label strings. Labels are exact-match and case-sensitive;
// underscores and spacing are preserved as loaded.
class LabelTaxonomy {
 public:
  LabelTaxonomy() = default;

  // Throws DataError on an empty list, an empty label or a duplicate.
  LabelTaxonomy(TaxonomyKind kind, std::vector<std::string> labels,
                std::string version = "")
      : kind_(kind), labels_(std::move(labels)), version_(std::move(version)) {
    if (labels_.empty()) {
      throw DataError(std::string("empty ") + TaxonomyKindName(kind_) +
                      " taxonomy");
    }
    for (size_t i = 0; i < labels_.size(); ++i) {
      if (labels_[i].empty()) throw DataError("empty taxonomy label");
      if (!index_.emplace(labels_[i], i).second) {
        throw DataError("duplicate taxonomy label: " + labels_[i]);
      }
    }
  }

  TaxonomyKind kind() const { return kind_; }
  const std::vector<std::string> &labels() const { return labels_; }
  const std::string &version() const { return version_; }
  size_t size() const { return labels_.size(); }

  bool Contains(const std::string &label) const {
    return index_.count(label) > 0;
  }

  // Position in file order, or -1.
  long IndexOf(const std::string &label) const {
    auto it = index_.find(label);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
  }

 private:
  TaxonomyKind kind_ = TaxonomyKind::kSourceDomain;
  std::vector<std::string> labels_;
  std::string version_;
  std::unordered_map<std::string, size_t> index_;
};

// Both taxonomies an annotated corpus is validated against.
struct Taxonomies {
  LabelTaxonomy frames;
  LabelTaxonomy domains;
};

// Parses a newline-delimited label list. Blank lines and trailing carriage
// returns are ignored; surrounding whitespace is trimmed.
inline LabelTaxonomy ParseTaxonomy(std::istream &in, TaxonomyKind kind,
                                   const std::string &source,
                                   std::string version = "") {
  std::vector<std::string> labels;
  std::unordered_map<std::string, size_t> first_line;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string label(text::Trim(line));
    if (label.empty()) continue;
    auto [it, inserted] = first_line.emplace(label, lineno);
    if (!inserted) {
      throw DataError(source, lineno, "label",
                      "duplicate label '" + label + "' (first seen on line " +
                          std::to_string(it->second) + ")");
    }
    labels.push_back(std::move(label));
  }
  if (labels.empty()) {
    throw DataError(source + ": empty " + TaxonomyKindName(kind) +
                    " taxonomy file");
  }
  return LabelTaxonomy(kind, std::move(labels), std::move(version));
}

inline LabelTaxonomy LoadTaxonomy(const std::string &path, TaxonomyKind kind) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open taxonomy file: " + path);
  return ParseTaxonomy(in, kind, path, path);
}

}  // namespace discomet
