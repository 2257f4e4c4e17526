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

// Multi-label human annotation batches.
//
// File format (JSON Lines, one sample per line):
//
//   {"batch": "1", "sample_id": "s17",
//    "sentence": "...", "span": [12, 17],
//    "options": ["WAR", "BATTLE", "ANIMAL", "WATER", "LIGHT",
//                "OTHER_DOMAIN", "NO_METAPHOR"],
//    "selections": {"ann1": ["WAR", "BATTLE"], "ann2": ["WAR"], ...},
//    "other_text": {"ann3": "free text typed for OTHER_DOMAIN"}}
//
// "span", "options" and "other_text" are optional. Lines sharing a batch id
// form one batch; a file may hold several batches.

#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "discomet/corpus.hpp"
#include "discomet/error.hpp"
#include "discomet/text.hpp"

namespace discomet {

inline constexpr const char *kNoMetaphor = "NO_METAPHOR";
inline constexpr const char *kOtherDomain = "OTHER_DOMAIN";

inline bool IsSentinelLabel(const std::string &label) {
  return label == kNoMetaphor || label == kOtherDomain;
}

inline constexpr size_t kMaxSelections = 3;

struct BatchSample {
  std::string id;
  std::string sentence;
  std::optional<Span> span;
  std::vector<std::string> options;
  // Annotator id -> chosen labels, in the order chosen.
  std::map<std::string, std::vector<std::string>> selections;
  std::map<std::string, std::string> other_text;
};

struct AnnotatorBatch {
  std::string id;
  // Sorted union of the annotators seen on any sample.
  std::vector<std::string> annotators;
  std::vector<BatchSample> samples;
};

// First violated sample invariant, if any.
inline std::optional<std::string> CheckSample(const BatchSample &s) {
  if (s.id.empty()) return "empty sample_id";
  if (s.selections.empty()) return "sample has no annotator selections";
  std::set<std::string> offered(s.options.begin(), s.options.end());
  for (const auto &[annotator, labels] : s.selections) {
    if (annotator.empty()) return "empty annotator id";
    if (labels.empty() || labels.size() > kMaxSelections) {
      return "annotator '" + annotator + "' chose " + std::to_string(labels.size()) +
             " labels (expected 1-3)";
    }
    std::set<std::string> unique;
    for (const auto &l : labels) {
      if (l.empty()) return "annotator '" + annotator + "' chose an empty label";
      if (!unique.insert(l).second) {
        return "annotator '" + annotator + "' chose '" + l + "' twice";
      }
      if (!offered.empty() && !offered.count(l)) {
        return "annotator '" + annotator + "' chose '" + l + "' which was not offered";
      }
    }
    if (unique.count(kNoMetaphor) && unique.size() > 1) {
      return "annotator '" + annotator + "' combined NO_METAPHOR with other labels";
    }
  }
  return std::nullopt;
}

inline AnnotatorBatch MakeBatch(std::string id, std::vector<BatchSample> samples) {
  AnnotatorBatch batch;
  batch.id = std::move(id);
  std::set<std::string> annotators;
  std::set<std::string> ids;
  for (const auto &s : samples) {
    if (auto v = CheckSample(s)) {
      throw DataError("batch '" + batch.id + "' sample '" + s.id + "': " + *v);
    }
    if (!ids.insert(s.id).second) {
      throw DataError("batch '" + batch.id + "': duplicate sample_id '" + s.id + "'");
    }
    for (const auto &[a, labels] : s.selections) annotators.insert(a);
  }
  batch.annotators.assign(annotators.begin(), annotators.end());
  batch.samples = std::move(samples);
  return batch;
}

// Parses one or more batches; `default_batch` names lines without "batch".
inline std::vector<AnnotatorBatch> ParseBatches(std::istream &in, const std::string &source,
                                                const std::string &default_batch) {
  using Json = nlohmann::ordered_json;
  std::vector<std::string> order;
  std::map<std::string, std::vector<BatchSample>> grouped;
  std::map<std::string, std::set<std::string>> ids;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DataError(source, lineno, "", std::string("malformed JSON: ") + e.what());
    }
    BatchSample s;
    std::string batch_id = default_batch;
    std::string field;
    try {
      if (!j.is_object()) throw DataError(source, lineno, "", "expected a JSON object");
      field = "batch";
      if (j.contains("batch")) {
        batch_id = j["batch"].is_string() ? j["batch"].get<std::string>()
                                          : j["batch"].dump();
      }
      field = "sample_id";
      s.id = j.at("sample_id").is_string() ? j.at("sample_id").get<std::string>()
                                           : j.at("sample_id").dump();
      field = "sentence";
      s.sentence = j.value("sentence", "");
      field = "span";
      if (j.contains("span") && !j["span"].is_null()) {
        s.span = Span{j["span"].at(0).get<size_t>(), j["span"].at(1).get<size_t>()};
      }
      field = "options";
      if (j.contains("options")) s.options = j["options"].get<std::vector<std::string>>();
      field = "selections";
      s.selections = j.at("selections").get<std::map<std::string, std::vector<std::string>>>();
      field = "other_text";
      if (j.contains("other_text")) {
        s.other_text = j["other_text"].get<std::map<std::string, std::string>>();
      }
    } catch (const nlohmann::json::exception &e) {
      throw DataError(source, lineno, field, std::string("missing or malformed: ") + e.what());
    }
    if (auto v = CheckSample(s)) throw DataError(source, lineno, "selections", *v);
    if (!ids[batch_id].insert(s.id).second) {
      throw DataError(source, lineno, "sample_id", "duplicate sample_id '" + s.id + "'");
    }
    if (!grouped.count(batch_id)) order.push_back(batch_id);
    grouped[batch_id].push_back(std::move(s));
  }
  std::vector<AnnotatorBatch> batches;
  for (const auto &id : order) batches.push_back(MakeBatch(id, std::move(grouped[id])));
  return batches;
}

inline std::vector<AnnotatorBatch> LoadBatches(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open batch file: " + path);
  std::string stem = path;
  if (auto slash = stem.find_last_of('/'); slash != std::string::npos) stem = stem.substr(slash + 1);
  if (auto dot = stem.find_last_of('.'); dot != std::string::npos) stem = stem.substr(0, dot);
  return ParseBatches(in, path, stem);
}

inline nlohmann::ordered_json SampleToJson(const std::string &batch_id, const BatchSample &s) {
  nlohmann::ordered_json j;
  j["batch"] = batch_id;
  j["sample_id"] = s.id;
  j["sentence"] = s.sentence;
  if (s.span) j["span"] = {s.span->start, s.span->end};
  if (!s.options.empty()) j["options"] = s.options;
  j["selections"] = s.selections;
  if (!s.other_text.empty()) j["other_text"] = s.other_text;
  return j;
}

}  // namespace discomet
