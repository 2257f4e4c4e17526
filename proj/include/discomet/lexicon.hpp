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

// Deterministic lexicon annotator. It marks every token matching a lexicon
// entry as a metaphor with the entry's frame and domain, so the analysis
// pipeline runs end to end without a neural model. It has no notion of
// context: literal uses of a listed word are annotated too.
//
// Lexicon file: CSV with header
//
//   lemma,frame,domain,prior,triggers,provenance
//
// `lemma` lists the canonical lemma followed by its inflected forms,
// separated by '|' (flood|floods|flooded|flooding). `triggers` is an
// optional '|'-separated list of keywords that must all occur in the
// token's sentence.

#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "discomet/corpus.hpp"
#include "discomet/csv.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"
#include "discomet/taxonomy.hpp"
#include "discomet/text.hpp"

namespace discomet {

struct LexiconEntry {
  std::string lemma;
  // Lowercased forms matched in Lemma mode; always includes the lemma.
  std::vector<std::string> forms;
  std::string frame;
  std::string domain;
  double metaphoricity_prior = 0.0;
  std::vector<std::string> triggers;
  std::string provenance;
};

enum class MatchMode {
  kLemma,    // token matches any listed form
  kSurface,  // lowercased token equals the lemma itself
};

class Lexicon {
 public:
  Lexicon() = default;

  // Throws DataError on duplicate (lemma, frame, domain) triples, priors
  // outside [0, 1] or labels missing from the taxonomies.
  explicit Lexicon(std::vector<LexiconEntry> entries, const Taxonomies *taxonomies = nullptr)
      : entries_(std::move(entries)) {
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    for (size_t i = 0; i < entries_.size(); ++i) {
      auto &e = entries_[i];
      if (e.lemma.empty()) throw DataError("lexicon entry #" + std::to_string(i) + ": empty lemma");
      if (!seen.emplace(e.lemma, e.frame, e.domain).second) {
        throw DataError("lexicon: duplicate entry (" + e.lemma + ", " + e.frame + ", " +
                        e.domain + ")");
      }
      if (!InUnitInterval(e.metaphoricity_prior)) {
        throw DataError("lexicon entry '" + e.lemma + "': prior outside [0, 1]");
      }
      if (taxonomies != nullptr) {
        if (!taxonomies->frames.Contains(e.frame)) {
          throw DataError("lexicon entry '" + e.lemma + "': unknown frame label '" + e.frame + "'");
        }
        if (!taxonomies->domains.Contains(e.domain)) {
          throw DataError("lexicon entry '" + e.lemma + "': unknown domain label '" + e.domain +
                          "'");
        }
      }
      std::string lemma = text::Lower(e.lemma);
      for (auto &f : e.forms) f = text::Lower(f);
      if (std::find(e.forms.begin(), e.forms.end(), lemma) == e.forms.end()) {
        e.forms.insert(e.forms.begin(), lemma);
      }
      std::sort(e.forms.begin() + 1, e.forms.end());
      e.forms.erase(std::unique(e.forms.begin(), e.forms.end()), e.forms.end());
      for (const auto &f : e.forms) by_form_[f].push_back(i);
      by_lemma_[lemma].push_back(i);
    }
  }

  const std::vector<LexiconEntry> &entries() const { return entries_; }
  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const std::vector<size_t> &Candidates(const std::string &lowered, MatchMode mode) const {
    static const std::vector<size_t> kNone;
    const auto &index = mode == MatchMode::kLemma ? by_form_ : by_lemma_;
    auto it = index.find(lowered);
    return it == index.end() ? kNone : it->second;
  }

 private:
  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::vector<size_t>> by_form_;
  std::unordered_map<std::string, std::vector<size_t>> by_lemma_;
};

inline Lexicon ParseLexicon(std::istream &in, const std::string &source,
                            const Taxonomies *taxonomies = nullptr) {
  std::vector<LexiconEntry> entries;
  std::string line;
  size_t lineno = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty() || line[0] == '#') continue;
    auto fields = csv::ParseRecord(line);
    if (!fields) throw DataError(source, lineno, "", "unterminated quote");
    if (header) {
      header = false;
      if (!fields->empty() && text::Trim((*fields)[0]) == "lemma") continue;
    }
    if (fields->size() < 4 || fields->size() > 6) {
      throw DataError(source, lineno, "", "expected lemma,frame,domain,prior[,triggers[,provenance]]");
    }
    LexiconEntry e;
    auto forms = text::SplitList((*fields)[0], '|');
    if (forms.empty()) throw DataError(source, lineno, "lemma", "empty lemma");
    e.lemma = forms.front();
    for (const auto &f : forms) e.forms.push_back(text::Lower(f));
    e.frame = std::string(text::Trim((*fields)[1]));
    e.domain = std::string(text::Trim((*fields)[2]));
    try {
      size_t used = 0;
      std::string prior(text::Trim((*fields)[3]));
      e.metaphoricity_prior = std::stod(prior, &used);
      if (used != prior.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw DataError(source, lineno, "prior", "not a number: " + (*fields)[3]);
    }
    if (fields->size() > 4) e.triggers = text::SplitList((*fields)[4], '|');
    if (fields->size() > 5) e.provenance = std::string(text::Trim((*fields)[5]));
    if (taxonomies != nullptr) {
      if (!taxonomies->frames.Contains(e.frame)) {
        throw DataError(source, lineno, "frame", "unknown frame label '" + e.frame + "'");
      }
      if (!taxonomies->domains.Contains(e.domain)) {
        throw DataError(source, lineno, "domain", "unknown domain label '" + e.domain + "'");
      }
    }
    entries.push_back(std::move(e));
  }
  try {
    return Lexicon(std::move(entries), taxonomies);
  } catch (const Error &e) {
    throw DataError(source + ": " + e.what());
  }
}

inline Lexicon LoadLexicon(const std::string &path, const Taxonomies *taxonomies = nullptr) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open lexicon file: " + path);
  return ParseLexicon(in, path, taxonomies);
}

// Annotates every matching token. Among several matching entries the
// highest prior wins, ties going to the smallest (frame, domain).
inline AnnotatedCorpus Annotate(const std::vector<Document> &documents, const Lexicon &lexicon,
                                MatchMode mode = MatchMode::kLemma,
                                std::vector<std::string> partitions = {}) {
  std::vector<MetaphorAnnotation> annotations;
  for (const auto &doc : documents) {
    if (lexicon.empty()) break;
    auto offsets = text::CodePointOffsets(doc.text);
    const size_t length = offsets.size() - 1;
    for (const auto &token : text::Tokenize(doc.text, offsets, 0, length)) {
      const auto &candidates = lexicon.Candidates(text::Lower(token.surface), mode);
      if (candidates.empty()) continue;
      Span span{token.start, token.end};
      Span sentence = ContainingSentence(doc, span, length);
      std::string_view context = text::Slice(doc.text, offsets, sentence.start, sentence.end);
      const LexiconEntry *best = nullptr;
      for (size_t idx : candidates) {
        const auto &e = lexicon.entries()[idx];
        bool triggered = std::all_of(e.triggers.begin(), e.triggers.end(), [&](const auto &t) {
          return text::ContainsIgnoreCase(context, t);
        });
        if (!triggered) continue;
        if (best == nullptr || e.metaphoricity_prior > best->metaphoricity_prior ||
            (e.metaphoricity_prior == best->metaphoricity_prior &&
             std::tie(e.frame, e.domain) < std::tie(best->frame, best->domain))) {
          best = &e;
        }
      }
      if (best == nullptr) continue;
      MetaphorAnnotation a;
      a.doc_id = doc.id;
      a.span = span;
      a.surface = token.surface;
      a.lemma = best->lemma;
      a.is_metaphor = true;
      a.frame = best->frame;
      a.domain = best->domain;
      a.domain_confidence = best->metaphoricity_prior;
      annotations.push_back(std::move(a));
    }
  }
  return AnnotatedCorpus(documents, std::move(annotations), std::move(partitions));
}

}  // namespace discomet
