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

// JSON Lines interchange format. One Document per line in the documents file
// and one MetaphorAnnotation per line in the annotations file; field names
// are the struct member names verbatim. Spans are [start, end] arrays of
// code-point offsets.

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "discomet/corpus.hpp"
#include "discomet/error.hpp"
#include "discomet/taxonomy.hpp"

namespace discomet {

namespace interchange_internal {

using Json = nlohmann::ordered_json;

struct FieldError {
  std::string field;
  std::string message;
};

template <typename T>
T Required(const Json &j, const char *field) {
  if (!j.contains(field) || j.at(field).is_null()) {
    throw FieldError{field, "missing required field"};
  }
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw FieldError{field, "wrong type"};
  }
}

template <typename T>
std::optional<T> Optional(const Json &j, const char *field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  try {
    return j.at(field).get<T>();
  } catch (const nlohmann::json::exception &) {
    throw FieldError{field, "wrong type"};
  }
}

inline Span SpanFrom(const Json &j, const char *field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned()) {
    throw FieldError{field, "expected [start, end] of non-negative integers"};
  }
  return {j[0].get<size_t>(), j[1].get<size_t>()};
}

inline Json SpanTo(const Span &s) { return Json::array({s.start, s.end}); }

}  // namespace interchange_internal

inline nlohmann::ordered_json DocumentToJson(const Document &d) {
  using interchange_internal::Json;
  Json j;
  j["id"] = d.id;
  j["text"] = d.text;
  if (d.year) j["year"] = *d.year;
  j["partition"] = d.partition;
  if (!d.sentences.empty()) {
    Json s = Json::array();
    for (const auto &span : d.sentences) s.push_back(interchange_internal::SpanTo(span));
    j["sentences"] = std::move(s);
  }
  return j;
}

inline nlohmann::ordered_json AnnotationToJson(const MetaphorAnnotation &a) {
  using interchange_internal::Json;
  Json j;
  j["doc_id"] = a.doc_id;
  j["span"] = interchange_internal::SpanTo(a.span);
  j["surface"] = a.surface;
  j["lemma"] = a.lemma;
  j["is_metaphor"] = a.is_metaphor;
  if (a.metaphor_prob) j["metaphor_prob"] = *a.metaphor_prob;
  j["frame"] = a.frame;
  if (!a.frame_dist.empty()) {
    Json dist = Json::object();
    for (const auto &[label, p] : a.frame_dist) dist[label] = p;
    j["frame_dist"] = std::move(dist);
  }
  j["domain"] = a.domain;
  j["domain_confidence"] = a.domain_confidence;
  if (a.target_referent) j["target_referent"] = *a.target_referent;
  return j;
}

// Throws interchange_internal::FieldError on schema problems.
inline Document DocumentFromJson(const nlohmann::ordered_json &j) {
  using namespace interchange_internal;
  if (!j.is_object()) throw FieldError{"", "expected a JSON object"};
  Document d;
  d.id = Required<std::string>(j, "id");
  d.text = Required<std::string>(j, "text");
  d.year = Optional<int>(j, "year");
  d.partition = Required<std::string>(j, "partition");
  if (j.contains("sentences") && !j.at("sentences").is_null()) {
    if (!j.at("sentences").is_array()) throw FieldError{"sentences", "expected array"};
    for (const auto &s : j.at("sentences")) d.sentences.push_back(SpanFrom(s, "sentences"));
  }
  return d;
}

inline MetaphorAnnotation AnnotationFromJson(const nlohmann::ordered_json &j) {
  using namespace interchange_internal;
  if (!j.is_object()) throw FieldError{"", "expected a JSON object"};
  MetaphorAnnotation a;
  a.doc_id = Required<std::string>(j, "doc_id");
  if (!j.contains("span")) throw FieldError{"span", "missing required field"};
  a.span = SpanFrom(j.at("span"), "span");
  a.surface = Required<std::string>(j, "surface");
  a.lemma = Optional<std::string>(j, "lemma").value_or("");
  a.is_metaphor = Optional<bool>(j, "is_metaphor").value_or(true);
  a.metaphor_prob = Optional<double>(j, "metaphor_prob");
  a.frame = Required<std::string>(j, "frame");
  if (j.contains("frame_dist") && !j.at("frame_dist").is_null()) {
    const auto &dist = j.at("frame_dist");
    if (!dist.is_object()) throw FieldError{"frame_dist", "expected object"};
    for (const auto &[label, p] : dist.items()) {
      if (!p.is_number()) throw FieldError{"frame_dist", "non-numeric probability"};
      a.frame_dist[label] = p.get<double>();
    }
  }
  a.domain = Required<std::string>(j, "domain");
  a.domain_confidence = Required<double>(j, "domain_confidence");
  a.target_referent = Optional<std::string>(j, "target_referent");
  return a;
}

inline void WriteDocuments(std::ostream &out, const std::vector<Document> &docs) {
  for (const auto &d : docs) out << DocumentToJson(d).dump() << '\n';
}

inline void WriteAnnotations(std::ostream &out,
                             const std::vector<MetaphorAnnotation> &anns) {
  for (const auto &a : anns) out << AnnotationToJson(a).dump() << '\n';
}

namespace interchange_internal {

template <typename Record, typename Parse>
std::vector<Record> ReadLines(std::istream &in, const std::string &source,
                              Parse parse) {
  std::vector<Record> out;
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
    try {
      out.push_back(parse(j));
    } catch (const FieldError &e) {
      throw DataError(source, lineno, e.field, e.message);
    }
  }
  return out;
}

}  // namespace interchange_internal

inline std::vector<Document> ReadDocuments(std::istream &in,
                                           const std::string &source = "<documents>") {
  return interchange_internal::ReadLines<Document>(in, source, DocumentFromJson);
}

inline std::vector<MetaphorAnnotation> ReadAnnotations(
    std::istream &in, const std::string &source = "<annotations>") {
  return interchange_internal::ReadLines<MetaphorAnnotation>(in, source,
                                                             AnnotationFromJson);
}

// Reads both streams and validates every record, reporting the first
// violation with its line number and field.
inline AnnotatedCorpus ParseCorpus(std::istream &docs_in, const std::string &docs_source,
                                   std::istream &anns_in, const std::string &anns_source,
                                   const Taxonomies *taxonomies = nullptr,
                                   std::vector<std::string> partitions = {}) {
  std::vector<Document> docs = ReadDocuments(docs_in, docs_source);
  std::unordered_map<std::string, size_t> index;
  for (size_t i = 0; i < docs.size(); ++i) {
    if (auto v = CheckDocument(docs[i])) {
      throw DataError(docs_source, i + 1, v->field, v->message);
    }
    if (!index.emplace(docs[i].id, i).second) {
      throw DataError(docs_source, i + 1, "id", "duplicate document id '" + docs[i].id + "'");
    }
  }

  // Re-read line by line so violations carry the annotation line number.
  std::vector<MetaphorAnnotation> anns;
  std::unordered_map<std::string, std::vector<size_t>> offsets;
  std::string line;
  size_t lineno = 0;
  while (std::getline(anns_in, line)) {
    ++lineno;
    if (text::Trim(line).empty()) continue;
    interchange_internal::Json j;
    try {
      j = interchange_internal::Json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw DataError(anns_source, lineno, "", std::string("malformed JSON: ") + e.what());
    }
    MetaphorAnnotation a;
    try {
      a = AnnotationFromJson(j);
    } catch (const interchange_internal::FieldError &e) {
      throw DataError(anns_source, lineno, e.field, e.message);
    }
    auto it = index.find(a.doc_id);
    if (it == index.end()) {
      throw DataError(anns_source, lineno, "doc_id",
                      "dangling reference to unknown document '" + a.doc_id + "'");
    }
    const Document &doc = docs[it->second];
    auto [off, fresh] = offsets.try_emplace(doc.id);
    if (fresh) off->second = text::CodePointOffsets(doc.text);
    if (auto v = CheckAnnotation(a, doc, off->second, taxonomies)) {
      throw DataError(anns_source, lineno, v->field, v->message);
    }
    anns.push_back(std::move(a));
  }
  return AnnotatedCorpus(std::move(docs), std::move(anns), std::move(partitions),
                         taxonomies);
}

inline AnnotatedCorpus LoadCorpus(const std::string &docs_path,
                                  const std::string &annotations_path,
                                  const Taxonomies *taxonomies = nullptr,
                                  std::vector<std::string> partitions = {}) {
  std::ifstream docs(docs_path);
  if (!docs) throw UsageError("cannot open documents file: " + docs_path);
  std::ifstream anns(annotations_path);
  if (!anns) throw UsageError("cannot open annotations file: " + annotations_path);
  return ParseCorpus(docs, docs_path, anns, annotations_path, taxonomies,
                     std::move(partitions));
}

inline void SaveCorpus(const AnnotatedCorpus &corpus, const std::string &docs_path,
                       const std::string &annotations_path) {
  std::ofstream docs(docs_path);
  if (!docs) throw UsageError("cannot write documents file: " + docs_path);
  WriteDocuments(docs, corpus.documents());
  std::ofstream anns(annotations_path);
  if (!anns) throw UsageError("cannot write annotations file: " + annotations_path);
  WriteAnnotations(anns, corpus.annotations());
}

}  // namespace discomet
