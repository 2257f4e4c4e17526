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

// Log-likelihood ratio (G2) keyness of labels between two corpora.
//
// For a label observed O1 times in corpus 1 (total N1) and O2 times in
// corpus 2 (total N2), the expected counts under the hypothesis that the
// label is equally frequent in both corpora are
//
//   Ei = Ni * (O1 + O2) / (N1 + N2)
//
// and the saliency statistic is
//
//   G2 = -2 ln(lambda) = 2 * sum_i Oi * ln(Oi / Ei),   with 0 * ln(0) = 0.
//
// G2 is asymptotically chi-squared with one degree of freedom, so a label is
// significant at level p when G2 reaches the chi-squared(1) upper quantile.
// The corpus with the larger relative frequency Oi / Ni is the one the label
// is associated with.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "discomet/corpus.hpp"
#include "discomet/diagnostics.hpp"
#include "discomet/error.hpp"
#include "discomet/text.hpp"

namespace discomet {

enum class Dimension { kDomain, kFrame };

inline const char *DimensionName(Dimension d) {
  return d == Dimension::kDomain ? "domain" : "frame";
}

inline const std::string &LabelOf(const MetaphorAnnotation &a, Dimension d) {
  return d == Dimension::kDomain ? a.domain : a.frame;
}

// How the corpus totals Ni are obtained.
enum class TotalsPolicy {
  kAnnotations,  // number of metaphor annotations in the corpus
  kTokens,       // number of whitespace/punctuation tokens in its documents
};

enum class Direction { kCorpus1, kCorpus2, kNeutral };

struct ContingencyCell {
  std::string label;
  uint64_t o1 = 0;
  uint64_t o2 = 0;
  uint64_t n1 = 0;
  uint64_t n2 = 0;
  double e1 = 0.0;
  double e2 = 0.0;

  // Validates counts and derives the expected frequencies.
  static ContingencyCell Make(std::string label, uint64_t o1, uint64_t n1,
                              uint64_t o2, uint64_t n2) {
    if (n1 == 0 || n2 == 0) {
      throw DataError("contingency cell '" + label + "': corpus totals must be positive (N1=" +
                      std::to_string(n1) + ", N2=" + std::to_string(n2) + ")");
    }
    if (o1 + o2 == 0) {
      throw DataError("contingency cell '" + label + "': label absent from both corpora");
    }
    if (o1 > n1 || o2 > n2) {
      throw DataError("contingency cell '" + label + "': observed count exceeds corpus total");
    }
    ContingencyCell c{std::move(label), o1, o2, n1, n2, 0.0, 0.0};
    const double observed = static_cast<double>(o1 + o2);
    const double total = static_cast<double>(n1 + n2);
    c.e1 = static_cast<double>(n1) * observed / total;
    c.e2 = static_cast<double>(n2) * observed / total;
    return c;
  }

  double rel_freq1() const { return static_cast<double>(o1) / static_cast<double>(n1); }
  double rel_freq2() const { return static_cast<double>(o2) / static_cast<double>(n2); }

  // Exact comparison of O1/N1 against O2/N2 in integer arithmetic.
  Direction direction() const {
    auto lhs = static_cast<unsigned __int128>(o1) * n2;
    auto rhs = static_cast<unsigned __int128>(o2) * n1;
    if (lhs > rhs) return Direction::kCorpus1;
    if (lhs < rhs) return Direction::kCorpus2;
    return Direction::kNeutral;
  }

  ContingencyCell Swapped() const { return {label, o2, o1, n2, n1, e2, e1}; }
};

namespace saliency_internal {

inline double Term(uint64_t observed, double expected) {
  if (observed == 0) return 0.0;
  const double o = static_cast<double>(observed);
  return o * std::log(o / expected);
}

}  // namespace saliency_internal

// 2 * sum Oi ln(Oi / Ei); zero-count terms contribute 0 and tiny negative
// round-off is clamped, so the result is always finite and non-negative.
inline double LogLikelihoodRatio(const ContingencyCell &cell) {
  if ((cell.o1 > 0 && !(cell.e1 > 0.0)) || (cell.o2 > 0 && !(cell.e2 > 0.0))) {
    throw Error(ErrorKind::kInternal,
                "log_likelihood_ratio: positive observation with zero expectation");
  }
  double g2 = 2.0 * (saliency_internal::Term(cell.o1, cell.e1) +
                     saliency_internal::Term(cell.o2, cell.e2));
  return g2 < 0.0 ? 0.0 : g2;
}

// Upper chi-squared(1) quantile: the G2 value whose tail probability is p.
// Conventional levels come from the fixed table; any other level is solved
// from P(X > x) = erfc(sqrt(x / 2)) by bisection.
inline double ChiSquareCritical(double p) {
  if (!(p > 0.0 && p < 1.0)) throw UsageError("p-threshold must lie in (0, 1)");
  struct Entry {
    double p;
    double critical;
  };
  static constexpr Entry kTable[] = {{0.05, 3.841}, {0.01, 6.635}, {0.001, 10.828}};
  for (const auto &e : kTable) {
    if (p == e.p) return e.critical;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (std::erfc(std::sqrt(hi / 2.0)) > p) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    double mid = 0.5 * (lo + hi);
    if (std::erfc(std::sqrt(mid / 2.0)) > p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct SaliencyOptions {
  double p_threshold = 0.05;
  uint64_t min_count = 5;
  size_t max_examples = 3;
  TotalsPolicy totals = TotalsPolicy::kAnnotations;
  bool bonferroni = false;
};

struct SaliencyRecord {
  std::string label;
  ContingencyCell cell;
  double g2 = 0.0;
  bool significant = false;
  Direction direction = Direction::kNeutral;
  double rel_freq1 = 0.0;
  double rel_freq2 = 0.0;
  std::vector<AnnotationRef> examples1;
  std::vector<AnnotationRef> examples2;
};

struct SaliencyTable {
  Dimension dimension = Dimension::kDomain;
  // Set for frame tables nested inside one source domain.
  std::optional<std::string> domain;
  std::string corpus1_name = "corpus1";
  std::string corpus2_name = "corpus2";
  SaliencyOptions options;
  // p after any multiple-comparison correction, and its gate value.
  double effective_p = 0.05;
  double critical_value = 3.841;
  size_t tests = 0;
  uint64_t n1 = 0;
  uint64_t n2 = 0;
  std::vector<SaliencyRecord> records;
  std::vector<std::string> notes;

  size_t SignificantCount() const {
    return std::count_if(records.begin(), records.end(),
                         [](const SaliencyRecord &r) { return r.significant; });
  }
};

inline uint64_t TokenCount(const AnnotatedCorpus &corpus) {
  uint64_t n = 0;
  for (const auto &d : corpus.documents()) {
    auto offsets = text::CodePointOffsets(d.text);
    n += text::Tokenize(d.text, offsets, 0, offsets.size() - 1).size();
  }
  return n;
}

inline uint64_t CorpusTotal(const AnnotatedCorpus &corpus, TotalsPolicy policy) {
  return policy == TotalsPolicy::kAnnotations ? corpus.annotation_count()
                                              : TokenCount(corpus);
}

// Cell for one label; nullopt when the label is absent from both corpora.
inline std::optional<ContingencyCell> BuildContingency(
    const std::string &label, const AnnotatedCorpus &corpus1,
    const AnnotatedCorpus &corpus2, Dimension dimension,
    TotalsPolicy totals = TotalsPolicy::kAnnotations) {
  const uint64_t n1 = CorpusTotal(corpus1, totals);
  const uint64_t n2 = CorpusTotal(corpus2, totals);
  if (n1 + n2 == 0) throw DataError("build_contingency: both corpora are empty");
  auto count = [&](const AnnotatedCorpus &c) {
    return static_cast<uint64_t>(std::count_if(
        c.annotations().begin(), c.annotations().end(),
        [&](const MetaphorAnnotation &a) { return LabelOf(a, dimension) == label; }));
  };
  const uint64_t o1 = count(corpus1);
  const uint64_t o2 = count(corpus2);
  if (o1 + o2 == 0) return std::nullopt;
  return ContingencyCell::Make(label, o1, n1, o2, n2);
}

namespace saliency_internal {

struct LabelStats {
  uint64_t count = 0;
  std::vector<AnnotationRef> refs;
};

inline std::map<std::string, LabelStats> CountLabels(const AnnotatedCorpus &corpus,
                                                     Dimension dimension) {
  std::map<std::string, LabelStats> stats;
  for (const auto &a : corpus.annotations()) {
    auto &s = stats[LabelOf(a, dimension)];
    ++s.count;
    s.refs.push_back(RefOf(a));
  }
  return stats;
}

// Lowest doc_id first, then span start.
inline std::vector<AnnotationRef> PickExamples(std::vector<AnnotationRef> refs, size_t k) {
  std::sort(refs.begin(), refs.end());
  if (refs.size() > k) refs.resize(k);
  return refs;
}

inline SaliencyTable Tabulate(const AnnotatedCorpus &corpus1, const AnnotatedCorpus &corpus2,
                              Dimension dimension, uint64_t n1, uint64_t n2,
                              const SaliencyOptions &options) {
  SaliencyTable table;
  table.dimension = dimension;
  table.options = options;
  table.n1 = n1;
  table.n2 = n2;

  auto stats1 = CountLabels(corpus1, dimension);
  auto stats2 = CountLabels(corpus2, dimension);
  std::set<std::string> labels;
  for (const auto &[l, s] : stats1) labels.insert(l);
  for (const auto &[l, s] : stats2) labels.insert(l);

  static const LabelStats kNone;
  for (const auto &label : labels) {
    auto it1 = stats1.find(label);
    auto it2 = stats2.find(label);
    const LabelStats &s1 = it1 == stats1.end() ? kNone : it1->second;
    const LabelStats &s2 = it2 == stats2.end() ? kNone : it2->second;
    if (s1.count + s2.count < options.min_count) continue;
    SaliencyRecord r;
    r.label = label;
    r.cell = ContingencyCell::Make(label, s1.count, n1, s2.count, n2);
    r.g2 = LogLikelihoodRatio(r.cell);
    r.direction = r.cell.direction();
    r.rel_freq1 = r.cell.rel_freq1();
    r.rel_freq2 = r.cell.rel_freq2();
    r.examples1 = PickExamples(s1.refs, options.max_examples);
    r.examples2 = PickExamples(s2.refs, options.max_examples);
    table.records.push_back(std::move(r));
  }

  table.tests = table.records.size();
  table.effective_p = options.p_threshold;
  if (options.bonferroni && table.tests > 1) {
    table.effective_p = options.p_threshold / static_cast<double>(table.tests);
  }
  table.critical_value = ChiSquareCritical(table.effective_p);
  for (auto &r : table.records) {
    r.significant = r.g2 >= table.critical_value;
    if (r.direction == Direction::kNeutral) {
      table.notes.push_back("label '" + r.label + "': equal relative frequencies, direction neutral");
    }
  }
  std::sort(table.records.begin(), table.records.end(),
            [](const SaliencyRecord &a, const SaliencyRecord &b) {
              if (a.g2 != b.g2) return a.g2 > b.g2;
              return a.label < b.label;
            });
  return table;
}

}  // namespace saliency_internal

// One record per label with O1 + O2 >= min_count, sorted by G2 descending
// and then by label.
inline SaliencyTable ComputeSaliencyTable(const AnnotatedCorpus &corpus1,
                                          const AnnotatedCorpus &corpus2, Dimension dimension,
                                          const SaliencyOptions &options = {}) {
  const uint64_t n1 = CorpusTotal(corpus1, options.totals);
  const uint64_t n2 = CorpusTotal(corpus2, options.totals);
  if (n1 == 0 || n2 == 0) {
    throw DataError(std::string("saliency_table: corpus ") + (n1 == 0 ? "1" : "2") +
                    " is empty under the selected totals policy");
  }
  return saliency_internal::Tabulate(corpus1, corpus2, dimension, n1, n2, options);
}

// Frame saliency restricted to annotations of one source domain; the totals
// are that domain's annotation counts in each corpus.
inline SaliencyTable NestedFrameSaliency(const std::string &domain,
                                         const AnnotatedCorpus &corpus1,
                                         const AnnotatedCorpus &corpus2,
                                         const SaliencyOptions &options = {},
                                         Diagnostics *diagnostics = nullptr) {
  auto in_domain = [&](const MetaphorAnnotation &a) { return a.domain == domain; };
  AnnotatedCorpus r1 = corpus1.FilterAnnotations(in_domain);
  AnnotatedCorpus r2 = corpus2.FilterAnnotations(in_domain);
  if (r1.empty() || r2.empty()) {
    SaliencyTable empty;
    empty.dimension = Dimension::kFrame;
    empty.domain = domain;
    empty.options = options;
    empty.effective_p = options.p_threshold;
    empty.critical_value = ChiSquareCritical(options.p_threshold);
    empty.n1 = r1.annotation_count();
    empty.n2 = r2.annotation_count();
    std::string note = "domain '" + domain + "' has no annotations in corpus " +
                       (r1.empty() ? (r2.empty() ? "1 or 2" : "1") : "2");
    empty.notes.push_back(note);
    Warn(diagnostics, "nested_frame_saliency", "", note);
    return empty;
  }
  SaliencyTable table = saliency_internal::Tabulate(
      r1, r2, Dimension::kFrame, r1.annotation_count(), r2.annotation_count(), options);
  table.domain = domain;
  return table;
}

// Splits one corpus by partition tag and contrasts the two halves. With a
// domain, frames are contrasted within that domain; otherwise the whole
// partition is contrasted on `dimension`.
inline SaliencyTable PartitionContrast(const AnnotatedCorpus &corpus,
                                       const std::string &partition_a,
                                       const std::string &partition_b, Dimension dimension,
                                       const std::optional<std::string> &domain = std::nullopt,
                                       const SaliencyOptions &options = {},
                                       Diagnostics *diagnostics = nullptr) {
  for (const auto *tag : {&partition_a, &partition_b}) {
    if (!corpus.HasPartition(*tag)) {
      throw UsageError("partition_contrast: unknown partition tag '" + *tag + "'");
    }
  }
  AnnotatedCorpus a = corpus.Partition(partition_a);
  AnnotatedCorpus b = corpus.Partition(partition_b);

  SaliencyTable table;
  if (domain) {
    table = NestedFrameSaliency(*domain, a, b, options, diagnostics);
  } else if (a.empty() || b.empty()) {
    table.dimension = dimension;
    table.options = options;
    table.effective_p = options.p_threshold;
    table.critical_value = ChiSquareCritical(options.p_threshold);
    table.n1 = a.annotation_count();
    table.n2 = b.annotation_count();
    std::string note = "partition '" + (a.empty() ? partition_a : partition_b) +
                       "' has no annotations";
    table.notes.push_back(note);
    Warn(diagnostics, "partition_contrast", "", note);
  } else {
    table = ComputeSaliencyTable(a, b, dimension, options);
  }
  table.corpus1_name = partition_a;
  table.corpus2_name = partition_b;
  return table;
}

}  // namespace discomet
