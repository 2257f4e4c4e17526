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

// Candidate selection and filtering over annotated corpora, plus
// year-stratified background sampling. Every filter is monotone: output
// annotations are a subset of the input and the document set never grows.

#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "discomet/corpus.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"
#include "discomet/text.hpp"

namespace discomet {

enum class KeywordMatch { kSubstring, kWordBoundary };

inline bool MatchesAnyKeyword(std::string_view text,
                              const std::vector<std::string> &keywords,
                              KeywordMatch mode) {
  for (const auto &k : keywords) {
    bool hit = mode == KeywordMatch::kSubstring
                   ? text::ContainsIgnoreCase(text, k)
                   : text::ContainsWordIgnoreCase(text, k);
    if (hit) return true;
  }
  return false;
}

// Document-level relevance hook. The default is a keyword predicate; any
// external relevance classifier can be plugged in instead.
using RelevancePredicate = std::function<bool(const Document &)>;

inline RelevancePredicate KeywordRelevance(std::vector<std::string> keywords,
                                           KeywordMatch mode = KeywordMatch::kSubstring) {
  return [keywords = std::move(keywords), mode](const Document &d) {
    return MatchesAnyKeyword(d.text, keywords, mode);
  };
}

inline AnnotatedCorpus FilterByRelevance(const AnnotatedCorpus &corpus,
                                         const RelevancePredicate &relevant) {
  return corpus.FilterDocuments(relevant);
}

// Keeps annotations whose containing sentence (whole document when sentence
// bounds are absent) contains at least one keyword. Documents left without
// annotations stay in the corpus and are flagged.
inline AnnotatedCorpus FilterByKeywords(const AnnotatedCorpus &corpus,
                                        const std::vector<std::string> &keywords,
                                        KeywordMatch mode = KeywordMatch::kSubstring,
                                        Diagnostics *diagnostics = nullptr) {
  if (keywords.empty()) throw UsageError("filter_by_keywords: empty keyword list");
  std::unordered_map<std::string, std::vector<size_t>> offsets;
  auto keep = [&](const MetaphorAnnotation &a) {
    const Document &doc = corpus.DocumentOf(a);
    auto [it, fresh] = offsets.try_emplace(doc.id);
    if (fresh) it->second = text::CodePointOffsets(doc.text);
    Span sentence = ContainingSentence(doc, a.span, it->second.size() - 1);
    return MatchesAnyKeyword(text::Slice(doc.text, it->second, sentence.start, sentence.end),
                             keywords, mode);
  };
  AnnotatedCorpus out = corpus.FilterAnnotations(keep);

  std::set<std::string> had;
  std::set<std::string> has;
  for (const auto &a : corpus.annotations()) had.insert(a.doc_id);
  for (const auto &a : out.annotations()) has.insert(a.doc_id);
  std::set<std::string> flags = out.flagged_documents();
  for (const auto &d : out.documents()) {
    if (!has.count(d.id)) {
      flags.insert(d.id);
      if (had.count(d.id)) {
        Warn(diagnostics, "filter_by_keywords", d.id, "no annotation in a keyword sentence");
      }
    }
  }
  return out.WithFlags(std::move(flags));
}

// Per-domain cutoffs: the mean metaphoricity score of items human judges
// accepted as belonging to that domain. Domains without positives are absent.
struct CutoffTable {
  std::map<std::string, double> cutoffs;
  std::map<std::string, size_t> positives;

  std::optional<double> Find(const std::string &domain) const {
    auto it = cutoffs.find(domain);
    if (it == cutoffs.end()) return std::nullopt;
    return it->second;
  }
};

struct JudgedItem {
  std::string domain;
  double score = 0.0;
  bool positive = false;
};

inline CutoffTable ComputeCutoffs(const std::vector<JudgedItem> &judged,
                                  Diagnostics *diagnostics = nullptr) {
  std::map<std::string, std::pair<double, size_t>> sums;
  std::set<std::string> seen;
  for (const auto &item : judged) {
    if (!InUnitInterval(item.score)) {
      throw DataError("compute_cutoffs: score for domain '" + item.domain +
                      "' outside [0, 1]");
    }
    seen.insert(item.domain);
    if (!item.positive) continue;
    auto &[sum, n] = sums[item.domain];
    sum += item.score;
    ++n;
  }
  CutoffTable table;
  for (const auto &domain : seen) {
    auto it = sums.find(domain);
    if (it == sums.end()) {
      Warn(diagnostics, "compute_cutoffs", "", "domain '" + domain + "' has no judged positives; omitted");
      continue;
    }
    table.cutoffs[domain] = it->second.first / static_cast<double>(it->second.second);
    table.positives[domain] = it->second.second;
  }
  return table;
}

// Keeps annotations whose domain confidence strictly exceeds the cutoff for
// their domain. Annotations of domains without a cutoff are dropped.
inline AnnotatedCorpus FilterCandidates(const AnnotatedCorpus &corpus,
                                        const CutoffTable &cutoffs,
                                        Diagnostics *diagnostics = nullptr) {
  return corpus.FilterAnnotations([&](const MetaphorAnnotation &a) {
    auto cutoff = cutoffs.Find(a.domain);
    if (!cutoff) {
      Warn(diagnostics, "filter_candidates", a.doc_id,
           "no cutoff for domain '" + a.domain + "'; annotation dropped");
      return false;
    }
    return a.domain_confidence > *cutoff;
  });
}

// Keeps annotations whose target referent contains at least one substring.
inline AnnotatedCorpus FilterByTarget(const AnnotatedCorpus &corpus,
                                      const std::vector<std::string> &substrings,
                                      bool case_sensitive = false,
                                      Diagnostics *diagnostics = nullptr) {
  return corpus.FilterAnnotations([&](const MetaphorAnnotation &a) {
    if (!a.target_referent) {
      Warn(diagnostics, "filter_by_target", a.doc_id,
           "annotation without target_referent dropped");
      return false;
    }
    for (const auto &s : substrings) {
      bool hit = case_sensitive ? a.target_referent->find(s) != std::string::npos
                                : text::ContainsIgnoreCase(*a.target_referent, s);
      if (hit) return true;
    }
    return false;
  });
}

// Judged-score file: CSV with header `domain,score,verdict`; verdict is one
// of 1/0, true/false, yes/no, positive/negative.
inline std::vector<JudgedItem> ParseJudgedItems(std::istream &in,
                                                const std::string &source) {
  std::vector<JudgedItem> items;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty() || line[0] == '#') continue;
    auto fields = text::SplitList(line, ',');
    if (lineno == 1 && !fields.empty() && fields[0] == "domain") continue;
    if (fields.size() != 3) throw DataError(source, lineno, "", "expected 3 columns");
    JudgedItem item;
    item.domain = fields[0];
    try {
      size_t used = 0;
      item.score = std::stod(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw DataError(source, lineno, "score", "not a number: " + fields[1]);
    }
    std::string verdict = text::Lower(fields[2]);
    if (verdict == "1" || verdict == "true" || verdict == "yes" || verdict == "positive") {
      item.positive = true;
    } else if (verdict == "0" || verdict == "false" || verdict == "no" ||
               verdict == "negative") {
      item.positive = false;
    } else {
      throw DataError(source, lineno, "verdict", "unrecognized verdict: " + fields[2]);
    }
    items.push_back(std::move(item));
  }
  return items;
}

// Cutoff file: CSV with header `domain,cutoff`.
inline CutoffTable ParseCutoffTable(std::istream &in, const std::string &source) {
  CutoffTable table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::Trim(line).empty() || line[0] == '#') continue;
    auto fields = text::SplitList(line, ',');
    if (lineno == 1 && !fields.empty() && fields[0] == "domain") continue;
    if (fields.size() < 2) throw DataError(source, lineno, "", "expected domain,cutoff");
    double value = 0.0;
    try {
      value = std::stod(fields[1]);
    } catch (const std::exception &) {
      throw DataError(source, lineno, "cutoff", "not a number: " + fields[1]);
    }
    if (!InUnitInterval(value)) throw DataError(source, lineno, "cutoff", "outside [0, 1]");
    if (!table.cutoffs.emplace(fields[0], value).second) {
      throw DataError(source, lineno, "domain", "duplicate domain " + fields[0]);
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Year-stratified background sampling.

// Documents without a year are grouped under this key.
using YearKey = std::optional<int>;

inline std::string YearName(const YearKey &year) {
  return year ? std::to_string(*year) : "unknown";
}

struct StratifiedSample {
  AnnotatedCorpus corpus;
  std::map<YearKey, size_t> requested;
  std::map<YearKey, size_t> drawn;
  // Years where the pool held fewer documents than requested.
  std::map<YearKey, size_t> shortfall;
};

namespace sampling_internal {

// Unbiased draw from [0, n) on top of the (fully specified) mt19937_64
// stream, so samples are identical across standard libraries.
inline uint64_t Bounded(std::mt19937_64 &rng, uint64_t n) {
  const uint64_t max = std::numeric_limits<uint64_t>::max();
  const uint64_t limit = max - max % n;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace sampling_internal

// For every year in `templ`, draws the same number of documents from the
// pool's documents of that year (all of them when the pool is short).
// The pool must be disjoint from the template and free of `excluded`
// keywords; violations are data errors.
inline StratifiedSample StratifiedBackgroundSample(
    const AnnotatedCorpus &pool, const AnnotatedCorpus &templ, uint64_t seed,
    const std::vector<std::string> &excluded = {},
    KeywordMatch mode = KeywordMatch::kSubstring, Diagnostics *diagnostics = nullptr) {
  std::map<YearKey, std::vector<const Document *>> by_year;
  for (const auto &d : pool.documents()) {
    if (templ.FindDocument(d.id) != nullptr) {
      throw DataError("sample_background: pool document '" + d.id +
                      "' also appears in the template corpus");
    }
    if (!excluded.empty() && MatchesAnyKeyword(d.text, excluded, mode)) {
      throw DataError("sample_background: pool document '" + d.id +
                      "' contains an excluded keyword");
    }
    by_year[d.year].push_back(&d);
  }

  StratifiedSample result;
  for (const auto &d : templ.documents()) ++result.requested[d.year];

  std::mt19937_64 rng(seed);
  std::set<std::string> chosen;
  for (const auto &[year, want] : result.requested) {
    auto &candidates = by_year[year];
    std::sort(candidates.begin(), candidates.end(),
              [](const Document *a, const Document *b) { return a->id < b->id; });
    size_t take = std::min(want, candidates.size());
    for (size_t i = 0; i < take; ++i) {
      size_t j = i + sampling_internal::Bounded(rng, candidates.size() - i);
      std::swap(candidates[i], candidates[j]);
      chosen.insert(candidates[i]->id);
    }
    result.drawn[year] = take;
    if (take < want) {
      result.shortfall[year] = want - take;
      Warn(diagnostics, "sample_background", "",
           "year " + YearName(year) + ": requested " + std::to_string(want) +
               ", pool holds " + std::to_string(take));
    }
  }
  result.corpus = pool.FilterDocuments(
      [&](const Document &d) { return chosen.count(d.id) > 0; });
  return result;
}

}  // namespace discomet
