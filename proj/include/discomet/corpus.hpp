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

// Shared data model: documents, metaphor annotations and the immutable
// annotated corpus every analysis runs over.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "discomet/error.hpp"
#include "discomet/taxonomy.hpp"
#include "discomet/text.hpp"

namespace discomet {

// Half-open [start, end) range in code points.
struct Span {
  size_t start = 0;
  size_t end = 0;

  size_t length() const { return end - start; }
  bool Contains(const Span &other) const {
    return start <= other.start && other.end <= end;
  }
  auto operator<=>(const Span &) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::optional<int> year;
  std::string partition;
  // Optional sentence boundaries. When absent the whole document is treated
  // as one sentence.
  std::vector<Span> sentences;

  bool operator==(const Document &) const = default;
};

// Key of the renormalized tail bucket in a sparse frame distribution.
inline constexpr const char *kFrameTailBucket = "__tail__";

struct MetaphorAnnotation {
  std::string doc_id;
  Span span;
  std::string surface;
  std::string lemma;
  bool is_metaphor = true;
  std::optional<double> metaphor_prob;
  std::string frame;
  // Sparse: top-k labels plus an optional tail bucket. Empty when absent.
  std::map<std::string, double> frame_dist;
  std::string domain;
  double domain_confidence = 0.0;
  std::optional<std::string> target_referent;

  bool operator==(const MetaphorAnnotation &) const = default;
};

// Stable reference to an annotation, used for report examples.
struct AnnotationRef {
  std::string doc_id;
  Span span;
  std::string surface;

  auto operator<=>(const AnnotationRef &) const = default;
};

inline AnnotationRef RefOf(const MetaphorAnnotation &a) {
  return {a.doc_id, a.span, a.surface};
}

// Field name and message of the first violated invariant, if any.
struct Violation {
  std::string field;
  std::string message;
};

inline std::optional<Violation> CheckDocument(const Document &doc) {
  if (doc.id.empty()) return Violation{"id", "empty document id"};
  if (doc.partition.empty()) return Violation{"partition", "empty partition tag"};
  size_t length = text::CodePointLength(doc.text);
  for (const auto &s : doc.sentences) {
    if (s.start >= s.end || s.end > length) {
      return Violation{"sentences", "sentence span [" + std::to_string(s.start) +
                                        ", " + std::to_string(s.end) +
                                        ") out of range"};
    }
  }
  return std::nullopt;
}

inline bool InUnitInterval(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

// Validates an annotation against its document (code-point offsets supplied
// by the caller) and, when given, the label taxonomies.
inline std::optional<Violation> CheckAnnotation(
    const MetaphorAnnotation &a, const Document &doc,
    const std::vector<size_t> &offsets, const Taxonomies *taxonomies) {
  size_t length = offsets.size() - 1;
  if (a.span.start >= a.span.end || a.span.end > length) {
    return Violation{"span", "span [" + std::to_string(a.span.start) + ", " +
                                 std::to_string(a.span.end) +
                                 ") invalid for document of length " +
                                 std::to_string(length)};
  }
  if (text::Slice(doc.text, offsets, a.span.start, a.span.end) != a.surface) {
    return Violation{"surface", "surface '" + a.surface +
                                    "' does not match document text '" +
                                    std::string(text::Slice(doc.text, offsets,
                                                            a.span.start,
                                                            a.span.end)) +
                                    "'"};
  }
  if (a.frame.empty()) return Violation{"frame", "empty frame label"};
  if (a.domain.empty()) return Violation{"domain", "empty domain label"};
  if (taxonomies != nullptr) {
    if (!taxonomies->frames.Contains(a.frame)) {
      return Violation{"frame", "unknown frame label '" + a.frame + "'"};
    }
    if (!taxonomies->domains.Contains(a.domain)) {
      return Violation{"domain", "unknown domain label '" + a.domain + "'"};
    }
  }
  if (!InUnitInterval(a.domain_confidence)) {
    return Violation{"domain_confidence", "outside [0, 1]"};
  }
  if (a.metaphor_prob && !InUnitInterval(*a.metaphor_prob)) {
    return Violation{"metaphor_prob", "outside [0, 1]"};
  }
  if (!a.frame_dist.empty()) {
    double sum = 0.0;
    double best = -1.0;
    for (const auto &[label, p] : a.frame_dist) {
      if (!InUnitInterval(p)) {
        return Violation{"frame_dist", "probability for '" + label + "' outside [0, 1]"};
      }
      if (label != kFrameTailBucket) {
        if (taxonomies != nullptr && !taxonomies->frames.Contains(label)) {
          return Violation{"frame_dist", "unknown frame label '" + label + "'"};
        }
        best = std::max(best, p);
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) {
      return Violation{"frame_dist", "sums to " + std::to_string(sum)};
    }
    auto it = a.frame_dist.find(a.frame);
    if (it == a.frame_dist.end() || it->second < best) {
      return Violation{"frame_dist", "frame '" + a.frame + "' is not the argmax"};
    }
  }
  return std::nullopt;
}

// Documents, annotations and the declared partition tags. Immutable after
// construction; every constructor validates all invariants.
class AnnotatedCorpus {
 public:
  AnnotatedCorpus() = default;

  // `partitions` empty means "declare every tag the documents use".
  AnnotatedCorpus(std::vector<Document> documents,
                  std::vector<MetaphorAnnotation> annotations,
                  std::vector<std::string> partitions = {},
                  const Taxonomies *taxonomies = nullptr)
      : documents_(std::move(documents)),
        annotations_(std::move(annotations)),
        partitions_(std::move(partitions)) {
    if (partitions_.empty()) {
      std::set<std::string> seen;
      for (const auto &d : documents_) {
        if (seen.insert(d.partition).second) partitions_.push_back(d.partition);
      }
    }
    std::set<std::string> declared(partitions_.begin(), partitions_.end());
    if (declared.size() != partitions_.size()) {
      throw DataError("duplicate partition tag in declaration");
    }
    for (size_t i = 0; i < documents_.size(); ++i) {
      const auto &d = documents_[i];
      if (auto v = CheckDocument(d)) {
        throw DataError("document '" + d.id + "' [" + v->field + "]: " + v->message);
      }
      if (!declared.count(d.partition)) {
        throw DataError("document '" + d.id + "' [partition]: undeclared tag '" +
                        d.partition + "'");
      }
      if (!index_.emplace(d.id, i).second) {
        throw DataError("duplicate document id '" + d.id + "'");
      }
    }
    std::unordered_map<std::string, std::vector<size_t>> offsets;
    for (size_t i = 0; i < annotations_.size(); ++i) {
      const auto &a = annotations_[i];
      auto it = index_.find(a.doc_id);
      if (it == index_.end()) {
        throw DataError("annotation #" + std::to_string(i) +
                        " [doc_id]: dangling reference '" + a.doc_id + "'");
      }
      const Document &doc = documents_[it->second];
      auto [off, fresh] = offsets.try_emplace(doc.id);
      if (fresh) off->second = text::CodePointOffsets(doc.text);
      if (auto v = CheckAnnotation(a, doc, off->second, taxonomies)) {
        throw DataError("annotation #" + std::to_string(i) + " on '" + a.doc_id +
                        "' [" + v->field + "]: " + v->message);
      }
    }
  }

  const std::vector<Document> &documents() const { return documents_; }
  const std::vector<MetaphorAnnotation> &annotations() const { return annotations_; }
  const std::vector<std::string> &partitions() const { return partitions_; }

  size_t document_count() const { return documents_.size(); }
  size_t annotation_count() const { return annotations_.size(); }
  bool empty() const { return annotations_.empty(); }

  const Document *FindDocument(const std::string &id) const {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &documents_[it->second];
  }

  const Document &DocumentOf(const MetaphorAnnotation &a) const {
    return documents_[index_.at(a.doc_id)];
  }

  bool HasPartition(const std::string &tag) const {
    return std::find(partitions_.begin(), partitions_.end(), tag) != partitions_.end();
  }

  size_t DocumentCount(const std::string &partition) const {
    return std::count_if(documents_.begin(), documents_.end(),
                         [&](const Document &d) { return d.partition == partition; });
  }

  size_t AnnotationCount(const std::string &partition) const {
    return std::count_if(annotations_.begin(), annotations_.end(),
                         [&](const MetaphorAnnotation &a) {
                           return DocumentOf(a).partition == partition;
                         });
  }

  // Documents flagged by a filter (e.g. no surviving annotations).
  const std::set<std::string> &flagged_documents() const { return flagged_; }

  // Same documents, annotations restricted to those satisfying `keep`.
  // Flags carry over.
  AnnotatedCorpus FilterAnnotations(
      const std::function<bool(const MetaphorAnnotation &)> &keep) const {
    AnnotatedCorpus out = *this;
    out.annotations_.clear();
    for (const auto &a : annotations_) {
      if (keep(a)) out.annotations_.push_back(a);
    }
    return out;
  }

  // Documents satisfying `keep` together with their annotations.
  AnnotatedCorpus FilterDocuments(
      const std::function<bool(const Document &)> &keep) const {
    std::vector<Document> docs;
    std::set<std::string> kept;
    for (const auto &d : documents_) {
      if (keep(d)) {
        docs.push_back(d);
        kept.insert(d.id);
      }
    }
    std::vector<MetaphorAnnotation> anns;
    for (const auto &a : annotations_) {
      if (kept.count(a.doc_id)) anns.push_back(a);
    }
    AnnotatedCorpus out = WithContents(std::move(docs), std::move(anns));
    for (const auto &id : flagged_) {
      if (kept.count(id)) out.flagged_.insert(id);
    }
    return out;
  }

  AnnotatedCorpus WithFlags(std::set<std::string> flags) const {
    AnnotatedCorpus out = *this;
    out.flagged_ = std::move(flags);
    return out;
  }

  // Subset of documents in one partition; the declared tag set is kept.
  AnnotatedCorpus Partition(const std::string &tag) const {
    return FilterDocuments([&](const Document &d) { return d.partition == tag; });
  }

 private:
  // Builds a corpus from already-validated contents of this corpus.
  AnnotatedCorpus WithContents(std::vector<Document> docs,
                               std::vector<MetaphorAnnotation> anns) const {
    AnnotatedCorpus out;
    out.documents_ = std::move(docs);
    out.annotations_ = std::move(anns);
    out.partitions_ = partitions_;
    for (size_t i = 0; i < out.documents_.size(); ++i) {
      out.index_.emplace(out.documents_[i].id, i);
    }
    return out;
  }

  std::vector<Document> documents_;
  std::vector<MetaphorAnnotation> annotations_;
  std::vector<std::string> partitions_;
  std::unordered_map<std::string, size_t> index_;
  std::set<std::string> flagged_;
};

// Code-point range of the sentence containing `span`, or the whole document
// when no sentence bounds are present (or none contains the span).
inline Span ContainingSentence(const Document &doc, const Span &span,
                               size_t doc_length) {
  for (const auto &s : doc.sentences) {
    if (s.Contains(span)) return s;
  }
  return Span{0, doc_length};
}

}  // namespace discomet
